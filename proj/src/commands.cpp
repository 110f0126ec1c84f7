#include "hblab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <variant>

#include "hblab/csv.hpp"
#include "hblab/recurrence.hpp"

namespace hblab {

namespace {

SecondOrderRecurrence recurrence_from(const PeakConfig& cfg) {
  if (cfg.rho) {
    const double rho = *cfg.rho;
    return {2.0 * rho, -rho * rho, cfg.x0, cfg.x1};
  }
  return {*cfg.a1, *cfg.a2, cfg.x0, cfg.x1};
}

void describe_roots(std::ostream& out, const RootClassification& roots) {
  if (const auto* e = std::get_if<EqualRoots>(&roots)) {
    out << "roots: double root rho=" << format_double17(e->rho) << '\n';
  } else if (const auto* r = std::get_if<RealDistinctRoots>(&roots)) {
    out << "roots: real " << format_double17(r->lambda1) << ", "
        << format_double17(r->lambda2) << '\n';
  } else {
    const auto& c = std::get<ComplexPairRoots>(roots);
    out << "roots: complex modulus=" << format_double17(c.modulus)
        << " angle=" << format_double17(c.angle) << '\n';
  }
}

int status_exit_code(const Trajectory& traj, bool tol_requested) {
  switch (traj.status) {
    case RunStatus::Diverged: return kExitDiverged;
    case RunStatus::MaxIterations: return tol_requested ? kExitBudget : kExitOk;
    default: return kExitOk;
  }
}

}  // namespace

int cmd_peak(const PeakConfig& cfg, CommandIo io) {
  const SecondOrderRecurrence rec = recurrence_from(cfg);
  const auto xs = iterate(rec, cfg.K);
  write_recurrence_csv(io.csv, xs);

  const auto roots = characteristic_roots(rec);
  const bool stable = is_stable(rec);

  // Observed discrete peak over k >= 2 (transient growth past the data).
  int k_obs = 2;
  double peak_obs = std::abs(xs[2]);
  for (std::size_t k = 3; k < xs.size(); ++k) {
    if (std::abs(xs[k]) > peak_obs) {
      peak_obs = std::abs(xs[k]);
      k_obs = static_cast<int>(k);
    }
  }

  if (!io.quiet) {
    describe_roots(io.diag, roots);
    io.diag << "stable: " << (stable ? "yes" : "no") << '\n';
    io.diag << "observed |x| peak: " << format_double17(peak_obs)
            << " at k=" << k_obs << '\n';
    const auto* e = std::get_if<EqualRoots>(&roots);
    if (e && e->rho > 0.0 && e->rho < 1.0) {
      const PeakReport report = peak_time(e->rho);
      io.diag << "envelope peak: " << format_double17(report.peak)
              << " at k_star=" << report.k_star
              << " (k_continuous=" << format_double17(report.k_continuous)
              << ")\n";
      io.diag << "eta_asymptotic: " << format_double17(report.eta_asymptotic)
              << '\n';
    }
  }
  if (!stable) {
    if (!io.quiet) io.diag << "unstable recurrence: solutions do not decay\n";
    return kExitUnstable;
  }
  return kExitOk;
}

int cmd_run(const ExperimentConfig& cfg, CommandIo io) {
  BuiltProblem problem = build_objective(cfg.problem, cfg.seed);
  const Objective& obj = *problem.objective;
  const HBParams params = build_params(cfg.method, problem.mu, problem.L);
  auto [x0, x1] = build_init(cfg.init, cfg.problem, obj.dim());

  RunOptions opts;
  opts.grad_tol = cfg.run.grad_tol;
  opts.L_estimate = problem.L;
  const bool wants_V =
      std::find(cfg.outputs.fields.begin(), cfg.outputs.fields.end(), "V") !=
      cfg.outputs.fields.end();
  if (wants_V) {
    if (!(params.alpha < 1.0 / problem.L))
      throw ConfigError(
          "outputs.fields: V needs alpha < 1/L; chosen parameters violate it");
    opts.lyapunov = LyapunovConfig(params.alpha, params.beta, problem.L,
                                   problem.mu, *obj.f_star());
  }

  const Trajectory traj =
      run(obj, std::move(x0), std::move(x1), params, cfg.run.max_iters, opts);
  write_trajectory_csv(io.csv, traj, cfg.outputs.fields);
  if (!io.quiet)
    io.diag << "status: " << to_string(traj.status)
            << " records: " << traj.records.size()
            << " final_f: " << format_double17(traj.records.back().f) << '\n';
  return status_exit_code(traj, cfg.run.grad_tol.has_value());
}

int cmd_adaptive(const ExperimentConfig& cfg, CommandIo io) {
  if (!cfg.L0) throw ConfigError("L0: required for the adaptive command");
  BuiltProblem problem = build_objective(cfg.problem, cfg.seed);
  const Objective& obj = *problem.objective;
  auto [x0, x1] = build_init(cfg.init, cfg.problem, obj.dim());

  AdaptiveOptions opts;
  if (cfg.run.grad_tol) opts.grad_tol = *cfg.run.grad_tol;
  if (x1 != x0) opts.x1_override = x1;

  const Trajectory traj =
      adaptive_run(obj, x0, *cfg.L0, cfg.eps, cfg.run.max_iters, opts);
  write_trajectory_csv(io.csv, traj, cfg.outputs.fields);
  if (!io.quiet)
    io.diag << "status: " << to_string(traj.status)
            << " doublings: " << traj.doublings
            << " iterations: " << traj.records.back().k << " final_L: "
            << format_double17(*traj.params_history.back().L_estimate) << '\n';
  return status_exit_code(traj, true);
}

int cmd_compare(const ExperimentConfig& cfg, CommandIo io) {
  if (cfg.policies.empty())
    throw ConfigError("policies: required for the compare command");
  BuiltProblem problem = build_objective(cfg.problem, cfg.seed);
  const Objective& obj = *problem.objective;
  auto [x0, x1] = build_init(cfg.init, cfg.problem, obj.dim());
  if (x1 != x0)
    throw ConfigError("init: compare uses the standard pair; give one point");

  std::variant<HBParams, double> method;
  if (cfg.L0) method = *cfg.L0;
  else method = build_params(cfg.method, problem.mu, problem.L);

  const auto rows =
      compare_policies(obj, x0, method, cfg.policies, cfg.run.max_iters);
  write_policy_csv(io.csv, rows);
  bool diverged = false;
  for (const auto& r : rows) diverged = diverged || r.diverged;
  if (!io.quiet)
    io.diag << "policies: " << rows.size()
            << (diverged ? " (divergence encountered)" : "") << '\n';
  return diverged ? kExitDiverged : kExitOk;
}

}  // namespace hblab
