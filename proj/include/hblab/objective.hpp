#pragma once

#include <memory>
#include <optional>
#include <utility>

#include "hblab/vec.hpp"

namespace hblab {

/// A differentiable objective bounded from below, with optional metadata:
/// known optimal value and declared smoothness / curvature constants.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int dim() const = 0;
  virtual double eval(const Vec& x) const = 0;
  virtual Vec grad(const Vec& x) const = 0;

  virtual std::optional<double> f_star() const { return std::nullopt; }
  virtual std::optional<double> L_hint() const { return std::nullopt; }
  virtual std::optional<double> mu_hint() const { return std::nullopt; }

  /// Value and gradient through one validated call path.
  std::pair<double, Vec> eval_and_grad(const Vec& x) const;
};

/// f(x) = 1/2 * sum_i lambda_i * x_i^2 with every lambda_i > 0.
/// Minimizer at the origin, f* = 0; mu and L are the extreme eigenvalues.
class DiagonalQuadratic final : public Objective {
 public:
  explicit DiagonalQuadratic(Vec eigenvalues);

  int dim() const override;
  double eval(const Vec& x) const override;
  Vec grad(const Vec& x) const override;
  std::optional<double> f_star() const override { return 0.0; }
  std::optional<double> L_hint() const override { return L_; }
  std::optional<double> mu_hint() const override { return mu_; }

  double mu() const { return mu_; }
  double L() const { return L_; }
  double condition_number() const { return L_ / mu_; }
  const Vec& eigenvalues() const { return eigen_; }

 private:
  Vec eigen_;
  double mu_ = 0.0;
  double L_ = 0.0;
};

/// f(x) = x^2 + 3*sin^2(x) on the real line. Nonconvex (f'' = 2 + 6*cos(2x)
/// is negative near pi/2) yet gradient-dominated with f* = 0 at x = 0;
/// |f''| <= 8 gives the smoothness constant. The gradient-domination
/// constant is certified numerically via certify_pl_constant, never assumed.
class NonconvexPL final : public Objective {
 public:
  int dim() const override { return 1; }
  double eval(const Vec& x) const override;
  Vec grad(const Vec& x) const override;
  std::optional<double> f_star() const override { return 0.0; }
  std::optional<double> L_hint() const override { return 8.0; }
};

/// ||grad f(x)||^2 / (2 * (f(x) - f*)). Requires a known f* and
/// f(x) > f*; a lower bound on this ratio over a region is the
/// gradient-domination constant on that region.
double pl_ratio(const Objective& obj, const Vec& x);

/// Minimum of pl_ratio over an n_grid-point uniform grid on [lo, hi]
/// (dimension-1 objectives), skipping points with f(x) - f* < 1e-12.
double certify_pl_constant(const Objective& obj, double lo, double hi,
                           int n_grid);

/// Max over coordinates of the relative error between grad() and central
/// finite differences with step h.
double gradient_check(const Objective& obj, const Vec& x, double h);

/// Default finite-difference step: 1e-5 * max(1, ||x||_inf).
double default_fd_step(const Vec& x);

}  // namespace hblab
