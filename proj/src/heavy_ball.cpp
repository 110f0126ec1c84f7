#include "hblab/heavy_ball.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hblab {

namespace {

void validate_params(const HBParams& p) {
  if (!(p.alpha > 0.0))
    throw std::invalid_argument("HBParams: alpha must be > 0");
  if (!(p.beta >= 0.0))
    throw std::invalid_argument("HBParams: beta must be >= 0");
}

}  // namespace

HBParams optimal_params(double mu, double L) {
  if (!(mu > 0.0) || !(L > 0.0))
    throw std::invalid_argument("optimal_params: mu, L must be > 0");
  if (mu > L) throw std::invalid_argument("optimal_params: mu must be <= L");
  const double s = std::sqrt(L) + std::sqrt(mu);
  const double q = (std::sqrt(L) - std::sqrt(mu)) / s;
  return {4.0 / (s * s), q * q};
}

double optimal_rate(double mu, double L) {
  if (!(mu > 0.0) || !(L > 0.0) || mu > L)
    throw std::invalid_argument("optimal_rate: need 0 < mu <= L");
  return (std::sqrt(L) - std::sqrt(mu)) / (std::sqrt(L) + std::sqrt(mu));
}

bool in_convergence_region(const HBParams& params, double L) {
  if (!(L > 0.0)) return false;
  return params.beta >= 0.0 && params.beta < 1.0 && params.alpha > 0.0 &&
         params.alpha < 2.0 * (1.0 + params.beta) / L;
}

Vec hb_step(const Objective& obj, const Vec& x_k, const Vec& x_prev,
            const HBParams& params) {
  validate_params(params);
  if (x_k.size() != x_prev.size() ||
      static_cast<int>(x_k.size()) != obj.dim())
    throw std::invalid_argument("hb_step: dimension mismatch");
  const Vec g = obj.grad(x_k);
  Vec next(x_k.size());
  for (std::size_t i = 0; i < x_k.size(); ++i)
    next[i] = x_k[i] - params.alpha * g[i] + params.beta * (x_k[i] - x_prev[i]);
  return next;
}

const char* to_string(Event e) {
  switch (e) {
    case Event::None: return "";
    case Event::Restart: return "restart";
    case Event::LDoubled: return "L-doubled";
  }
  return "";
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::GradToleranceReached: return "grad-tolerance";
    case RunStatus::MaxIterations: return "max-iterations";
    case RunStatus::Diverged: return "diverged";
  }
  return "";
}

const ParamsEntry& Trajectory::params_at(int k) const {
  if (params_history.empty())
    throw std::logic_error("Trajectory: empty params history");
  const ParamsEntry* best = &params_history.front();
  for (const auto& entry : params_history) {
    if (entry.k <= k) best = &entry;
  }
  return *best;
}

double Trajectory::max_x_norm() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, r.x_norm);
  return m;
}

namespace {

TrajectoryRecord make_record(const Objective& obj, int k, Vec x,
                             const Vec* x_prev,
                             const std::optional<LyapunovConfig>& cfg,
                             Event event) {
  TrajectoryRecord rec;
  rec.k = k;
  rec.f = obj.eval(x);
  rec.grad_norm = norm(obj.grad(x));
  rec.x_norm = norm(x);
  if (cfg && x_prev) rec.V = lyapunov_value(obj, x, *x_prev, *cfg);
  rec.event = event;
  rec.x = std::move(x);
  return rec;
}

}  // namespace

Trajectory run(const Objective& obj, Vec x0, Vec x1, const HBParams& params,
               int max_iters, const RunOptions& opts) {
  validate_params(params);
  if (max_iters < 1) throw std::invalid_argument("run: max_iters must be >= 1");
  if (static_cast<int>(x0.size()) != obj.dim() || x0.size() != x1.size())
    throw std::invalid_argument("run: dimension mismatch");

  Trajectory traj;
  traj.params_history.push_back({0, params, opts.L_estimate});
  traj.records.push_back(make_record(obj, 0, std::move(x0), nullptr,
                                     opts.lyapunov, Event::None));
  traj.records.push_back(make_record(obj, 1, std::move(x1),
                                     &traj.records[0].x, opts.lyapunov,
                                     Event::None));

  traj.status = opts.grad_tol ? RunStatus::MaxIterations : RunStatus::Completed;
  for (int k = 1; k <= max_iters; ++k) {
    const TrajectoryRecord& curr = traj.records.back();
    if (opts.grad_tol && curr.grad_norm <= *opts.grad_tol) {
      traj.status = RunStatus::GradToleranceReached;
      break;
    }
    if (k == max_iters) break;
    const TrajectoryRecord& prev = traj.records[traj.records.size() - 2];
    Vec next(curr.x.size());
    const Vec g = obj.grad(curr.x);
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = curr.x[i] - params.alpha * g[i] +
                params.beta * (curr.x[i] - prev.x[i]);
    if (!all_finite(next) || norm(next) > opts.divergence_norm) {
      traj.status = RunStatus::Diverged;
      traj.last_finite_k = curr.k;
      return traj;
    }
    traj.records.push_back(make_record(obj, k + 1, std::move(next), &curr.x,
                                       opts.lyapunov, Event::None));
  }
  traj.last_finite_k = traj.records.back().k;
  return traj;
}

Trajectory run_standard(const Objective& obj, const Vec& x0,
                        const HBParams& params, int max_iters,
                        const RunOptions& opts) {
  return run(obj, x0, x0, params, max_iters, opts);
}

Trajectory run_to_tolerance(const Objective& obj, const Vec& x0,
                            const HBParams& params, int max_iters,
                            double grad_tol) {
  RunOptions opts;
  opts.grad_tol = grad_tol;
  return run(obj, x0, x0, params, max_iters, opts);
}

RootClassification modal_roots(double lambda, double mu, double L) {
  if (!(mu > 0.0) || mu > L)
    throw std::invalid_argument("modal_roots: need 0 < mu <= L");
  if (lambda < mu || lambda > L)
    throw std::invalid_argument("modal_roots: lambda must lie in [mu, L]");
  const HBParams p = optimal_params(mu, L);
  return characteristic_roots({1.0 - p.alpha * lambda + p.beta, -p.beta, 0.0, 0.0});
}

double modal_closed_form(double lambda, double mu, double L, double xi0,
                         double xi1, int k) {
  if (!(mu > 0.0) || mu > L)
    throw std::invalid_argument("modal_closed_form: need 0 < mu <= L");
  if (lambda < mu || lambda > L)
    throw std::invalid_argument("modal_closed_form: lambda must lie in [mu, L]");
  if (k < 0) throw std::invalid_argument("modal_closed_form: k < 0");

  const double q = optimal_rate(mu, L);
  const double span = L - mu;
  const double edge = 1e-8 * span;
  // The trigonometric parametrization divides by sqrt(lambda-mu)*sqrt(L-lambda);
  // near either end the double-root form with rho = +-q takes over.
  if (span == 0.0 || lambda - mu <= edge)
    return detail::equal_roots_solution(q, xi0, xi1, k);
  if (L - lambda <= edge)
    return detail::equal_roots_solution(-q, xi0, xi1, k);

  const double sin_w = 2.0 * std::sqrt(lambda - mu) * std::sqrt(L - lambda) / span;
  const double cos_w = (L + mu - 2.0 * lambda) / span;
  const double w = std::atan2(sin_w, cos_w);
  const double s = std::sqrt(L) + std::sqrt(mu);
  const double c1 = xi0;
  const double c2 = (xi1 * s * s - xi0 * (L + mu - 2.0 * lambda)) /
                    (2.0 * std::sqrt(lambda - mu) * std::sqrt(L - lambda));
  const double kd = static_cast<double>(k);
  return (c1 * std::cos(w * kd) + c2 * std::sin(w * kd)) *
         detail::pow_int(q, k);
}

double peak_lower_bound(double kappa) {
  if (!(kappa >= 1.0))
    throw std::invalid_argument("peak_lower_bound: kappa must be >= 1");
  return std::sqrt(kappa) / (2.0 * std::numbers::e);
}

}  // namespace hblab
