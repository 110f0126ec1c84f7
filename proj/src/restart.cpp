#include "hblab/restart.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hblab {

std::string policy_name(const RestartPolicy& policy) {
  struct Visitor {
    std::string operator()(const NoRestart&) const { return "none"; }
    std::string operator()(const FixedInterval& f) const {
      return "fixed-" + std::to_string(f.period);
    }
    std::string operator()(const FunctionScheme&) const { return "function"; }
    std::string operator()(const GradientScheme&) const { return "gradient"; }
    std::string operator()(const LyapunovScheme&) const { return "lyapunov"; }
  };
  return std::visit(Visitor{}, policy);
}

bool should_restart(const RestartPolicy& policy, const Objective& obj,
                    const Vec& x_k, const Vec& x_prev,
                    std::optional<double> V_k, std::optional<double> V_prev,
                    int k) {
  if (std::holds_alternative<NoRestart>(policy)) return false;
  if (const auto* fixed = std::get_if<FixedInterval>(&policy)) {
    if (fixed->period < 2)
      throw std::invalid_argument("should_restart: period must be >= 2");
    return k > 0 && k % fixed->period == 0;
  }
  if (std::holds_alternative<FunctionScheme>(policy))
    return obj.eval(x_k) > obj.eval(x_prev);
  if (std::holds_alternative<GradientScheme>(policy)) {
    const Vec g_prev = obj.grad(x_prev);
    double inner = 0.0;
    for (std::size_t i = 0; i < x_k.size(); ++i)
      inner += g_prev[i] * (x_k[i] - x_prev[i]);
    return inner > 0.0;
  }
  // Lyapunov scheme
  if (!V_k || !V_prev)
    throw std::invalid_argument(
        "should_restart: Lyapunov scheme needs both V values");
  return *V_k > *V_prev;
}

std::pair<Vec, Vec> apply_restart(const Vec& x_curr, const Vec& /*x_prev*/) {
  return {x_curr, x_curr};
}

bool descent_check_eps(const Objective& obj, const Vec& x_k, const Vec& x_prev,
                       double L, double eps) {
  if (!(eps > 0.0))
    throw std::invalid_argument("descent_check_eps: eps must be > 0");
  if (x_k.size() != x_prev.size())
    throw std::invalid_argument("descent_check_eps: dimension mismatch");
  const auto [f_prev, g_prev] = obj.eval_and_grad(x_prev);
  double inner = 0.0;
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x_k.size(); ++i) {
    const double d = x_k[i] - x_prev[i];
    inner += g_prev[i] * d;
    dist2 += d * d;
  }
  return obj.eval(x_k) <= f_prev + inner + 0.5 * L * dist2 + 0.5 * eps;
}

HBParams params_from_estimate(double L_estimate) {
  if (!(L_estimate > 0.0))
    throw std::invalid_argument("params_from_estimate: estimate must be > 0");
  const double alpha = 1.0 / (2.0 * L_estimate);
  // Mid-interval step size, momentum at 0.9 of the monotone-region ceiling.
  const double beta = 0.9 * std::sqrt(1.0 - alpha * L_estimate);
  return {alpha, beta};
}

namespace {

LyapunovConfig config_for(const Objective& obj, const HBParams& p, double L) {
  // mu is rate metadata the doubling loop never consults; a low estimate L
  // may sit below the true mu, so it is not forwarded.
  const auto fs = obj.f_star();
  return LyapunovConfig(p.alpha, p.beta, L, std::nullopt, fs.value_or(0.0),
                        !fs.has_value());
}

}  // namespace

Trajectory adaptive_run(const Objective& obj, const Vec& x0, double L0,
                        double eps, int max_iters, const AdaptiveOptions& opts) {
  if (!(L0 > 0.0)) throw std::invalid_argument("adaptive_run: L0 must be > 0");
  if (!(eps > 0.0)) throw std::invalid_argument("adaptive_run: eps must be > 0");
  if (max_iters < 1)
    throw std::invalid_argument("adaptive_run: max_iters must be >= 1");
  if (static_cast<int>(x0.size()) != obj.dim())
    throw std::invalid_argument("adaptive_run: dimension mismatch");

  double L_est = L0;
  HBParams params = params_from_estimate(L_est);
  LyapunovConfig cfg = config_for(obj, params, L_est);

  Vec x_prev = x0;
  Vec x_curr = opts.x1_override.value_or(x0);
  if (x_curr.size() != x0.size())
    throw std::invalid_argument("adaptive_run: x1 dimension mismatch");

  Trajectory traj;
  traj.params_history.push_back({0, params, L_est});

  auto push = [&](int k, const Vec& x, double f, const Vec& g, double V,
                  Event ev) {
    TrajectoryRecord rec;
    rec.k = k;
    rec.x = x;
    rec.f = f;
    rec.x_norm = norm(x);
    rec.grad_norm = norm(g);
    rec.V = V;
    rec.event = ev;
    traj.records.push_back(std::move(rec));
  };

  {
    const auto [f0, g0] = obj.eval_and_grad(x_prev);
    TrajectoryRecord rec0;
    rec0.k = 0;
    rec0.x = x_prev;
    rec0.f = f0;
    rec0.x_norm = norm(x_prev);
    rec0.grad_norm = norm(g0);
    traj.records.push_back(std::move(rec0));
  }

  auto [f_curr, g_curr] = obj.eval_and_grad(x_curr);
  double V_curr = lyapunov_value(obj, x_curr, x_prev, cfg);
  push(1, x_curr, f_curr, g_curr, V_curr, Event::None);

  traj.status = RunStatus::MaxIterations;
  for (int k = 1; k < max_iters; ++k) {
    if (norm(g_curr) <= opts.grad_tol) {
      traj.status = RunStatus::GradToleranceReached;
      break;
    }
    Vec cand(x_curr.size());
    double V_cand = 0.0;
    double f_cand = 0.0;
    bool doubled = false;
    for (;;) {
      for (std::size_t i = 0; i < cand.size(); ++i)
        cand[i] = x_curr[i] - params.alpha * g_curr[i] +
                  params.beta * (x_curr[i] - x_prev[i]);
      if (!all_finite(cand) || norm(cand) > opts.divergence_norm) {
        traj.status = RunStatus::Diverged;
        traj.last_finite_k = k;
        return traj;
      }
      V_cand = lyapunov_value(obj, cand, x_curr, cfg);
      f_cand = obj.eval(cand);
      const bool v_ok = V_cand <= V_curr;
      const bool descent_ok = descent_check_eps(obj, cand, x_curr, L_est, eps);
      if (v_ok && descent_ok) break;
      // The failed test certifies the estimate is too small: double it,
      // re-derive the parameters, re-base V, and retry from the same pair.
      if (traj.doublings >= opts.max_doublings)
        throw std::runtime_error("adaptive_run: smoothness estimate overflow");
      L_est *= 2.0;
      ++traj.doublings;
      doubled = true;
      params = params_from_estimate(L_est);
      cfg = config_for(obj, params, L_est);
      traj.params_history.push_back({k + 1, params, L_est});
      V_curr = lyapunov_value(obj, x_curr, x_prev, cfg);
    }
    Vec g_cand = obj.grad(cand);
    push(k + 1, cand, f_cand, g_cand, V_cand,
         doubled ? Event::LDoubled : Event::None);
    x_prev = std::move(x_curr);
    x_curr = std::move(cand);
    f_curr = f_cand;
    g_curr = std::move(g_cand);
    V_curr = V_cand;
  }
  traj.last_finite_k = traj.records.back().k;
  return traj;
}

std::vector<PolicySummary> compare_policies(
    const Objective& obj, const Vec& x0,
    const std::variant<HBParams, double>& params_or_L0,
    const std::vector<RestartPolicy>& policies, int max_iters, double f_tol) {
  if (policies.empty())
    throw std::invalid_argument("compare_policies: no policies given");
  if (max_iters < 1)
    throw std::invalid_argument("compare_policies: max_iters must be >= 1");
  const auto fs = obj.f_star();
  if (!fs)
    throw std::invalid_argument("compare_policies: objective lacks f_star");

  HBParams params{};
  std::optional<double> L_for_V;
  if (const auto* p = std::get_if<HBParams>(&params_or_L0)) {
    params = *p;
    L_for_V = obj.L_hint();
  } else {
    const double L0 = std::get<double>(params_or_L0);
    params = params_from_estimate(L0);
    L_for_V = L0;
  }

  std::vector<PolicySummary> rows;
  for (const auto& policy : policies) {
    const bool needs_V = std::holds_alternative<LyapunovScheme>(policy);
    std::optional<LyapunovConfig> cfg;
    if (needs_V) {
      if (!L_for_V || !(params.alpha < 1.0 / *L_for_V))
        throw std::invalid_argument(
            "compare_policies: Lyapunov scheme needs alpha < 1/L");
      cfg = LyapunovConfig(params.alpha, params.beta, *L_for_V, obj.mu_hint(),
                           *fs);
    }

    PolicySummary row;
    row.policy = policy_name(policy);

    Vec x_prev = x0;
    Vec x_curr = x0;
    double f_curr = obj.eval(x_curr);
    std::optional<double> V_curr;
    if (cfg) V_curr = lyapunov_value(obj, x_curr, x_prev, *cfg);

    if (f_curr - *fs <= f_tol) {
      row.iterations_to_tol = 0;
      row.reached = true;
      row.final_f = f_curr;
      rows.push_back(std::move(row));
      continue;
    }

    for (int k = 1; k <= max_iters; ++k) {
      Vec next = hb_step(obj, x_curr, x_prev, params);
      if (!all_finite(next) || norm(next) > 1e12) {
        row.diverged = true;
        row.final_f = f_curr;
        break;
      }
      const double f_next = obj.eval(next);
      std::optional<double> V_next;
      if (cfg) V_next = lyapunov_value(obj, next, x_curr, *cfg);
      if (should_restart(policy, obj, next, x_curr, V_next, V_curr, k)) {
        ++row.restarts;
        auto [c, p] = apply_restart(next, x_curr);
        x_curr = std::move(c);
        x_prev = std::move(p);
        if (cfg) V_curr = lyapunov_value(obj, x_curr, x_prev, *cfg);
      } else {
        x_prev = std::move(x_curr);
        x_curr = std::move(next);
        V_curr = V_next;
      }
      f_curr = f_next;
      row.final_f = f_curr;
      if (f_curr - *fs <= f_tol) {
        row.iterations_to_tol = k;
        row.reached = true;
        break;
      }
    }
    rows.push_back(std::move(row));
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const PolicySummary& a, const PolicySummary& b) {
                     return a.policy < b.policy;
                   });
  return rows;
}

}  // namespace hblab
