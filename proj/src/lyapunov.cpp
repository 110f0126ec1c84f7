#include "hblab/lyapunov.hpp"

#include <cmath>
#include <stdexcept>

namespace hblab {

LyapunovConfig::LyapunovConfig(double alpha, double beta, double L,
                               std::optional<double> mu, double f_star,
                               bool shifted)
    : alpha_(alpha), beta_(beta), L_(L), mu_(mu), f_star_(f_star),
      shifted_(shifted) {
  if (!(L > 0.0)) throw std::invalid_argument("LyapunovConfig: L must be > 0");
  if (!(alpha > 0.0 && alpha < 1.0 / L))
    throw std::invalid_argument("LyapunovConfig: alpha must be in (0, 1/L)");
  if (!(beta >= 0.0))
    throw std::invalid_argument("LyapunovConfig: beta must be >= 0");
  if (mu && !(*mu > 0.0 && *mu <= L))
    throw std::invalid_argument("LyapunovConfig: mu must be in (0, L]");
}

double lyapunov_value(const Objective& obj, const Vec& x_k, const Vec& x_prev,
                      const LyapunovConfig& cfg) {
  if (x_k.size() != x_prev.size())
    throw std::invalid_argument("lyapunov_value: dimension mismatch");
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x_k.size(); ++i) {
    const double d = x_k[i] - x_prev[i];
    dist2 += d * d;
  }
  return obj.eval(x_k) - cfg.f_star() + cfg.gamma() * dist2;
}

bool monotone_region(double alpha, double beta, double L) {
  if (!(L > 0.0)) return false;
  return alpha > 0.0 && alpha < 1.0 / L && beta >= 0.0 &&
         beta <= std::sqrt(1.0 - alpha * L);
}

bool pl_rate_region(double alpha, double beta, double L, double mu) {
  if (!(mu > 0.0 && mu <= L))
    throw std::invalid_argument("pl_rate_region: need 0 < mu <= L");
  return alpha > 0.0 && alpha < 1.0 / L && beta >= 0.0 &&
         beta <= std::sqrt((1.0 - alpha * L) * (1.0 - alpha * mu));
}

double linear_rate_bound(double V0, double alpha, double mu, int k) {
  if (V0 < 0.0) throw std::invalid_argument("linear_rate_bound: V0 < 0");
  if (k < 0) throw std::invalid_argument("linear_rate_bound: k < 0");
  const double q = 1.0 - alpha * mu;
  if (!(alpha * mu > 0.0 && alpha * mu < 1.0))
    throw std::invalid_argument("linear_rate_bound: need 0 < alpha*mu < 1");
  double b = V0;
  for (int i = 0; i < k && i < 64; ++i) b *= q;
  if (k > 64) b = V0 * std::pow(q, static_cast<double>(k));
  return b;
}

double continuous_energy(const Objective& obj, const ContinuousState& s) {
  if (!(s.b > 0.0))
    throw std::invalid_argument("continuous_energy: b must be > 0");
  if (s.x.size() != s.y.size())
    throw std::invalid_argument("continuous_energy: dimension mismatch");
  return obj.eval(s.x) + dot(s.y, s.y) / (2.0 * s.b);
}

double continuous_dt_max(double a, double b, double L) {
  if (!(a > 0.0 && b > 0.0 && L > 0.0))
    throw std::invalid_argument("continuous_dt_max: parameters must be > 0");
  return std::min(0.1 / a, 0.5 / std::sqrt(b * L));
}

namespace {

struct Derivative {
  Vec dx;
  Vec dy;
};

Derivative flow(const Objective& obj, const Vec& x, const Vec& y, double a,
                double b) {
  Vec g = obj.grad(x);
  Vec dy(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) dy[i] = -a * y[i] - b * g[i];
  return {y, std::move(dy)};
}

}  // namespace

ContinuousTrajectory simulate_continuous(const Objective& obj,
                                         const ContinuousState& initial,
                                         double dt, double total_time) {
  if (initial.x.size() != initial.y.size())
    throw std::invalid_argument("simulate_continuous: dimension mismatch");
  if (!(initial.a > 0.0 && initial.b > 0.0))
    throw std::invalid_argument("simulate_continuous: a, b must be > 0");
  if (!(dt > 0.0) || !(total_time > 0.0))
    throw std::invalid_argument("simulate_continuous: dt, T must be > 0");
  const auto L = obj.L_hint();
  if (!L)
    throw std::invalid_argument(
        "simulate_continuous: objective must declare L_hint");
  const double dt_max = continuous_dt_max(initial.a, initial.b, *L);
  if (dt > dt_max * (1.0 + 1e-12))
    throw std::invalid_argument("simulate_continuous: dt exceeds stability bound");

  const double a = initial.a;
  const double b = initial.b;
  const auto n = initial.x.size();
  const int steps = static_cast<int>(std::ceil(total_time / dt - 1e-9));

  ContinuousTrajectory traj;
  traj.a = a;
  traj.b = b;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);

  Vec x = initial.x;
  Vec y = initial.y;
  traj.samples.push_back({0.0, x, y, continuous_energy(obj, {x, y, a, b})});

  Vec xt(n), yt(n);
  for (int s = 1; s <= steps; ++s) {
    const Derivative k1 = flow(obj, x, y, a, b);
    for (std::size_t i = 0; i < n; ++i) {
      xt[i] = x[i] + 0.5 * dt * k1.dx[i];
      yt[i] = y[i] + 0.5 * dt * k1.dy[i];
    }
    const Derivative k2 = flow(obj, xt, yt, a, b);
    for (std::size_t i = 0; i < n; ++i) {
      xt[i] = x[i] + 0.5 * dt * k2.dx[i];
      yt[i] = y[i] + 0.5 * dt * k2.dy[i];
    }
    const Derivative k3 = flow(obj, xt, yt, a, b);
    for (std::size_t i = 0; i < n; ++i) {
      xt[i] = x[i] + dt * k3.dx[i];
      yt[i] = y[i] + dt * k3.dy[i];
    }
    const Derivative k4 = flow(obj, xt, yt, a, b);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += dt / 6.0 * (k1.dx[i] + 2.0 * k2.dx[i] + 2.0 * k3.dx[i] + k4.dx[i]);
      y[i] += dt / 6.0 * (k1.dy[i] + 2.0 * k2.dy[i] + 2.0 * k3.dy[i] + k4.dy[i]);
    }
    if (!all_finite(x) || !all_finite(y)) {
      traj.diverged = true;
      break;
    }
    traj.samples.push_back(
        {dt * static_cast<double>(s), x, y, continuous_energy(obj, {x, y, a, b})});
  }
  return traj;
}

}  // namespace hblab
