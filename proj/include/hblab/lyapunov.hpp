#pragma once

#include <optional>
#include <vector>

#include "hblab/objective.hpp"

namespace hblab {

/// Parameters of the discrete merit function
///   V_k = f(x_k) - f* + (1 - alpha*L)/(2*alpha) * ||x_k - x_{k-1}||^2.
/// The constructor enforces alpha < 1/L strictly so the distance
/// coefficient is positive. When the objective's optimal value is unknown,
/// construct with f_star = 0 and shifted = true: monotonicity statements
/// survive the constant shift, rate bounds do not.
class LyapunovConfig {
 public:
  LyapunovConfig(double alpha, double beta, double L,
                 std::optional<double> mu = std::nullopt, double f_star = 0.0,
                 bool shifted = false);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double L() const { return L_; }
  std::optional<double> mu() const { return mu_; }
  double f_star() const { return f_star_; }
  bool shifted() const { return shifted_; }

  /// Distance-term coefficient (1 - alpha*L) / (2*alpha), > 0.
  double gamma() const { return (1.0 - alpha_ * L_) / (2.0 * alpha_); }

 private:
  double alpha_;
  double beta_;
  double L_;
  std::optional<double> mu_;
  double f_star_;
  bool shifted_;
};

double lyapunov_value(const Objective& obj, const Vec& x_k, const Vec& x_prev,
                      const LyapunovConfig& cfg);

/// Region where V is non-increasing along the momentum iteration for any
/// L-smooth objective: 0 < alpha < 1/L and 0 <= beta <= sqrt(1 - alpha*L).
bool monotone_region(double alpha, double beta, double L);

/// Sub-region where V additionally contracts linearly for mu-gradient-
/// dominated objectives: beta <= sqrt((1 - alpha*L) * (1 - alpha*mu)).
bool pl_rate_region(double alpha, double beta, double L, double mu);

/// V0 * (1 - alpha*mu)^k, the linear-rate bound. Requires 0 < alpha*mu < 1.
double linear_rate_bound(double V0, double alpha, double mu, int k);

/// State of the damped second-order flow x'' + a x' + b grad f(x) = 0,
/// rewritten as x' = y, y' = -a*y - b*grad f(x).
struct ContinuousState {
  Vec x;
  Vec y;
  double a = 1.0;  // friction, > 0
  double b = 1.0;  // gradient gain, > 0
};

/// Total energy f(x) + ||y||^2 / (2b); non-increasing along the exact flow.
double continuous_energy(const Objective& obj, const ContinuousState& s);

/// Step-size ceiling for the fixed-step integrator: min(0.1/a, 0.5/sqrt(b*L)).
double continuous_dt_max(double a, double b, double L);

struct ContinuousSample {
  double t = 0.0;
  Vec x;
  Vec y;
  double energy = 0.0;
};

struct ContinuousTrajectory {
  double a = 0.0;
  double b = 0.0;
  std::vector<ContinuousSample> samples;
  bool diverged = false;
};

/// Classical fourth-order fixed-step integration of the damped flow up to
/// total_time, sampling the energy each step. dt must respect
/// continuous_dt_max (requires the objective to declare L_hint).
ContinuousTrajectory simulate_continuous(const Objective& obj,
                                         const ContinuousState& initial,
                                         double dt, double total_time);

}  // namespace hblab
