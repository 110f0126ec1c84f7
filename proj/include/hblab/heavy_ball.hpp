#pragma once

#include <optional>
#include <vector>

#include "hblab/lyapunov.hpp"
#include "hblab/objective.hpp"
#include "hblab/recurrence.hpp"
#include "hblab/vec.hpp"

namespace hblab {

/// Step size and momentum of the iteration
///   x_{k+1} = x_k - alpha * grad f(x_k) + beta * (x_k - x_{k-1}).
struct HBParams {
  double alpha = 0.0;  // > 0
  double beta = 0.0;   // >= 0
};

/// Rate-optimal parameters on a quadratic with extreme eigenvalues mu, L:
/// alpha = 4/(sqrt(L)+sqrt(mu))^2, beta = ((sqrt(L)-sqrt(mu))/(sqrt(L)+sqrt(mu)))^2.
HBParams optimal_params(double mu, double L);

/// Asymptotic contraction factor (sqrt(L)-sqrt(mu))/(sqrt(L)+sqrt(mu)).
double optimal_rate(double mu, double L);

/// Classical convergence region on L-smooth quadratics:
/// 0 <= beta < 1 and 0 < alpha < 2*(1+beta)/L.
bool in_convergence_region(const HBParams& params, double L);

/// One momentum step from (x_k, x_{k-1}).
Vec hb_step(const Objective& obj, const Vec& x_k, const Vec& x_prev,
            const HBParams& params);

enum class Event { None, Restart, LDoubled };

enum class RunStatus { Completed, GradToleranceReached, MaxIterations, Diverged };

const char* to_string(Event e);
const char* to_string(RunStatus s);

struct TrajectoryRecord {
  int k = 0;
  Vec x;
  double f = 0.0;
  double x_norm = 0.0;
  double grad_norm = 0.0;
  std::optional<double> V;  // present when a Lyapunov config applies (k >= 1)
  Event event = Event::None;
};

/// Parameters in force from record k onward.
struct ParamsEntry {
  int k = 0;
  HBParams params;
  std::optional<double> L_estimate;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  std::vector<ParamsEntry> params_history;
  RunStatus status = RunStatus::Completed;
  int last_finite_k = 0;
  int restarts = 0;
  int doublings = 0;

  const ParamsEntry& params_at(int k) const;
  double max_x_norm() const;
};

struct RunOptions {
  std::optional<double> grad_tol;             // stop when ||grad|| <= tol
  std::optional<LyapunovConfig> lyapunov;     // record V along the way
  std::optional<double> L_estimate;           // logged into params_history
  double divergence_norm = 1e12;
};

/// Runs the iteration from the explicit pair (x0, x1) for at most max_iters
/// steps past x1 (records 0..max_iters). Non-finite or exploding iterates
/// stop the run with Diverged and last_finite_k set.
Trajectory run(const Objective& obj, Vec x0, Vec x1, const HBParams& params,
               int max_iters, const RunOptions& opts = {});

/// Standard initialization x1 = x0, so the first step is a gradient step.
Trajectory run_standard(const Objective& obj, const Vec& x0,
                        const HBParams& params, int max_iters,
                        const RunOptions& opts = {});

/// Standard initialization with a gradient-norm stop.
Trajectory run_to_tolerance(const Objective& obj, const Vec& x0,
                            const HBParams& params, int max_iters,
                            double grad_tol = 1e-9);

/// On a diagonal quadratic the iteration decouples per eigenvalue into the
/// scalar recurrence xi_{k+1} = (1 - alpha*lambda + beta) xi_k - beta xi_{k-1}.
/// Classifies its characteristic roots under the rate-optimal parameters for
/// (mu, L): a double root +q at lambda = mu, a double root -q at lambda = L,
/// and a complex pair of modulus q in between.
RootClassification modal_roots(double lambda, double mu, double L);

/// Closed-form k-th value of the modal coordinate with initial scalar pair
/// (xi0, xi1). Interior lambda uses the trigonometric form
///   xi_k = [C1*cos(w*k) + C2*sin(w*k)] * q^k,
///   sin w = 2*sqrt(lambda-mu)*sqrt(L-lambda)/(L-mu),
///   cos w = (L + mu - 2*lambda)/(L-mu);
/// lambda within 1e-8*(L-mu) of an endpoint routes to the double-root form
/// with rho = +-q, where the trigonometric parametrization is singular.
double modal_closed_form(double lambda, double mu, double L, double xi0,
                         double xi1, int k);

/// Worst-case transient lower bound sqrt(kappa) / (2e) on max_k ||x_k|| under
/// rate-optimal parameters, for the initial pair x0 = -e1, x1 = e1.
double peak_lower_bound(double kappa);

}  // namespace hblab
