#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hblab/heavy_ball.hpp"

namespace hblab {

struct NoRestart {};
struct FixedInterval {
  int period = 2;  // >= 2
};
struct FunctionScheme {};   // fire when f(x_k) > f(x_{k-1})
struct GradientScheme {};   // fire when <grad f(x_{k-1}), x_k - x_{k-1}> > 0
struct LyapunovScheme {};   // fire when V_k > V_{k-1}

using RestartPolicy =
    std::variant<NoRestart, FixedInterval, FunctionScheme, GradientScheme,
                 LyapunovScheme>;

std::string policy_name(const RestartPolicy& policy);

/// Evaluates the chosen trigger at iterate k. The Lyapunov scheme requires
/// both V values; the others ignore them.
bool should_restart(const RestartPolicy& policy, const Objective& obj,
                    const Vec& x_k, const Vec& x_prev,
                    std::optional<double> V_k, std::optional<double> V_prev,
                    int k);

/// Clears the momentum memory: the method restarts from the current point
/// with the standard pair (x_curr, x_curr), so the next step is a pure
/// gradient step.
std::pair<Vec, Vec> apply_restart(const Vec& x_curr, const Vec& x_prev);

/// Relaxed smoothness test for an estimate L:
///   f(x_k) <= f(x_{k-1}) + <grad f(x_{k-1}), x_k - x_{k-1}>
///             + L/2 * ||x_k - x_{k-1}||^2 + eps/2.
/// A failure certifies that L underestimates the curvature between the
/// two points.
bool descent_check_eps(const Objective& obj, const Vec& x_k,
                       const Vec& x_prev, double L, double eps);

struct AdaptiveOptions {
  double grad_tol = 1e-9;
  int max_doublings = 60;          // L overflow guard
  std::optional<Vec> x1_override;  // default: standard init x1 = x0
  double divergence_norm = 1e12;
};

/// Momentum method with on-line doubling of the smoothness estimate.
/// Parameters follow the selection rule alpha = 1/(2L), beta =
/// 0.9*sqrt(1 - alpha*L) from the current estimate. A candidate step is
/// accepted only if the merit value V (computed with the current estimate)
/// does not increase and the eps-relaxed descent test holds; otherwise the
/// estimate doubles, V is re-based with the new coefficient, and the step
/// is recomputed from the same pair. Stops at ||grad|| <= grad_tol or
/// max_iters.
Trajectory adaptive_run(const Objective& obj, const Vec& x0, double L0,
                        double eps, int max_iters,
                        const AdaptiveOptions& opts = {});

/// Parameters derived from a smoothness estimate by the selection rule.
HBParams params_from_estimate(double L_estimate);

struct PolicySummary {
  std::string policy;
  int iterations_to_tol = -1;  // -1 when the target was not reached
  int restarts = 0;
  double final_f = 0.0;
  bool reached = false;
  bool diverged = false;
};

/// Runs one policy per row with the same method parameters and initial
/// point; rows are ordered by policy name. params_or_L0 is either explicit
/// parameters or a smoothness estimate fed through params_from_estimate.
/// The target is f(x_k) - f* <= f_tol.
std::vector<PolicySummary> compare_policies(
    const Objective& obj, const Vec& x0,
    const std::variant<HBParams, double>& params_or_L0,
    const std::vector<RestartPolicy>& policies, int max_iters,
    double f_tol = 1e-8);

}  // namespace hblab
