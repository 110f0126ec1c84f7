#include "hblab/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hblab {

std::pair<double, Vec> Objective::eval_and_grad(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim())
    throw std::invalid_argument("objective: dimension mismatch");
  return {eval(x), grad(x)};
}

DiagonalQuadratic::DiagonalQuadratic(Vec eigenvalues)
    : eigen_(std::move(eigenvalues)) {
  if (eigen_.empty())
    throw std::invalid_argument("DiagonalQuadratic: empty spectrum");
  for (double l : eigen_)
    if (!(l > 0.0))
      throw std::invalid_argument(
          "DiagonalQuadratic: eigenvalues must be positive");
  mu_ = *std::min_element(eigen_.begin(), eigen_.end());
  L_ = *std::max_element(eigen_.begin(), eigen_.end());
}

int DiagonalQuadratic::dim() const { return static_cast<int>(eigen_.size()); }

double DiagonalQuadratic::eval(const Vec& x) const {
  if (x.size() != eigen_.size())
    throw std::invalid_argument("DiagonalQuadratic: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += eigen_[i] * x[i] * x[i];
  return 0.5 * s;
}

Vec DiagonalQuadratic::grad(const Vec& x) const {
  if (x.size() != eigen_.size())
    throw std::invalid_argument("DiagonalQuadratic: dimension mismatch");
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = eigen_[i] * x[i];
  return g;
}

double NonconvexPL::eval(const Vec& x) const {
  if (x.size() != 1)
    throw std::invalid_argument("NonconvexPL: dimension mismatch");
  const double s = std::sin(x[0]);
  return x[0] * x[0] + 3.0 * s * s;
}

Vec NonconvexPL::grad(const Vec& x) const {
  if (x.size() != 1)
    throw std::invalid_argument("NonconvexPL: dimension mismatch");
  return {2.0 * x[0] + 3.0 * std::sin(2.0 * x[0])};
}

double pl_ratio(const Objective& obj, const Vec& x) {
  const auto fs = obj.f_star();
  if (!fs) throw std::invalid_argument("pl_ratio: objective lacks f_star");
  const auto [f, g] = obj.eval_and_grad(x);
  const double gap = f - *fs;
  if (gap <= 0.0)
    throw std::invalid_argument("pl_ratio: undefined at the optimal value");
  return dot(g, g) / (2.0 * gap);
}

double certify_pl_constant(const Objective& obj, double lo, double hi,
                           int n_grid) {
  if (obj.dim() != 1)
    throw std::invalid_argument("certify_pl_constant: dimension-1 objectives only");
  if (!obj.f_star())
    throw std::invalid_argument("certify_pl_constant: objective lacks f_star");
  if (n_grid < 2 || !(hi > lo))
    throw std::invalid_argument("certify_pl_constant: bad grid");
  const double fs = *obj.f_star();
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int i = 0; i < n_grid; ++i) {
    const Vec x{lo + (hi - lo) * static_cast<double>(i) /
                         static_cast<double>(n_grid - 1)};
    if (obj.eval(x) - fs < 1e-12) continue;  // ratio undefined near the optimum
    best = std::min(best, pl_ratio(obj, x));
    any = true;
  }
  if (!any)
    throw std::invalid_argument("certify_pl_constant: empty effective grid");
  return best;
}

double gradient_check(const Objective& obj, const Vec& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("gradient_check: h must be > 0");
  const Vec g = obj.grad(x);
  double worst = 0.0;
  Vec probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = obj.eval(probe);
    probe[i] = x[i] - h;
    const double fm = obj.eval(probe);
    probe[i] = x[i];
    const double d = (fp - fm) / (2.0 * h);
    const double denom = std::max({1.0, std::abs(g[i]), std::abs(d)});
    worst = std::max(worst, std::abs(g[i] - d) / denom);
  }
  return worst;
}

double default_fd_step(const Vec& x) {
  return 1e-5 * std::max(1.0, norm_inf(x));
}

}  // namespace hblab
