#include "hblab/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hblab {

namespace detail {

double pow_int(double base, int n) {
  if (n < 0) throw std::invalid_argument("pow_int: negative exponent");
  if (n <= 64) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= base;
    return r;
  }
  return std::pow(base, static_cast<double>(n));
}

double equal_roots_solution(double rho, double x0, double x1, int k) {
  if (k < 0) throw std::invalid_argument("equal_roots_solution: k < 0");
  const double kd = static_cast<double>(k);
  const double term1 = (k == 0) ? 0.0 : x1 * kd * pow_int(rho, k - 1);
  const double term2 = x0 * (kd - 1.0) * pow_int(rho, k);
  return term1 - term2;
}

}  // namespace detail

std::vector<double> iterate(const SecondOrderRecurrence& rec, int K) {
  if (K < 1) throw std::invalid_argument("iterate: K must be >= 1");
  std::vector<double> xs(static_cast<std::size_t>(K) + 1);
  xs[0] = rec.x0;
  xs[1] = rec.x1;
  for (int k = 2; k <= K; ++k)
    xs[k] = rec.a1 * xs[k - 1] + rec.a2 * xs[k - 2];
  return xs;
}

RootClassification characteristic_roots(const SecondOrderRecurrence& rec) {
  const double a1 = rec.a1;
  const double a2 = rec.a2;
  const double disc = a1 * a1 + 4.0 * a2;
  // Scale-relative snap to the double-root case; an exact zero never
  // survives floating point.
  const double tau = 1e-10 * std::max({1.0, a1 * a1, std::abs(a2)});
  if (std::abs(disc) <= tau) return EqualRoots{a1 / 2.0};
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    return RealDistinctRoots{(a1 - s) / 2.0, (a1 + s) / 2.0};
  }
  const double modulus = std::sqrt(-a2);
  const double angle = std::atan2(std::sqrt(-disc) / 2.0, a1 / 2.0);
  return ComplexPairRoots{modulus, angle};
}

double max_root_modulus(const RootClassification& roots) {
  if (const auto* e = std::get_if<EqualRoots>(&roots)) return std::abs(e->rho);
  if (const auto* r = std::get_if<RealDistinctRoots>(&roots))
    return std::max(std::abs(r->lambda1), std::abs(r->lambda2));
  return std::get<ComplexPairRoots>(roots).modulus;
}

bool is_stable(const SecondOrderRecurrence& rec) {
  const double m = max_root_modulus(characteristic_roots(rec));
  const bool via_roots = m < 1.0;
  const bool via_coeffs =
      std::abs(rec.a2) < 1.0 && std::abs(rec.a1) < 1.0 - rec.a2;
  if (via_roots != via_coeffs) {
    // The two tests may disagree only in a thin band around the stability
    // boundary (the double-root snap moves roots by up to ~sqrt(tau)).
    const double root_margin = std::abs(m - 1.0);
    const double coeff_margin = std::min(1.0 - std::abs(rec.a2),
                                         (1.0 - rec.a2) - std::abs(rec.a1));
    if (std::min(root_margin, std::abs(coeff_margin)) > 1e-4)
      throw std::logic_error("is_stable: root and coefficient tests disagree");
  }
  return via_roots;
}

double closed_form_equal_roots(double rho, double x0, double x1, int k) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::out_of_range("closed_form_equal_roots: rho must be in (0,1)");
  if (k < 0) throw std::invalid_argument("closed_form_equal_roots: k < 0");
  return detail::equal_roots_solution(rho, x0, x1, k);
}

double closed_form_real_roots(double lambda1, double lambda2, double x0,
                              double x1, int k) {
  if (lambda1 == lambda2)
    throw std::invalid_argument(
        "closed_form_real_roots: equal roots; use the double-root form");
  if (k < 0) throw std::invalid_argument("closed_form_real_roots: k < 0");
  const double c2 = (x1 - x0 * lambda1) / (lambda2 - lambda1);
  const double c1 = x0 - c2;
  return c1 * detail::pow_int(lambda1, k) + c2 * detail::pow_int(lambda2, k);
}

double closed_form_complex(double modulus, double angle, double x0, double x1,
                           int k) {
  if (!(modulus > 0.0 && modulus < 1.0))
    throw std::out_of_range("closed_form_complex: modulus must be in (0,1)");
  if (!(angle > 0.0 && angle < std::numbers::pi))
    throw std::out_of_range("closed_form_complex: angle must be in (0,pi)");
  if (k < 0) throw std::invalid_argument("closed_form_complex: k < 0");
  const double c1 = x0;
  const double c2 =
      (x1 - modulus * std::cos(angle) * x0) / (modulus * std::sin(angle));
  const double kd = static_cast<double>(k);
  return (c1 * std::cos(angle * kd) + c2 * std::sin(angle * kd)) *
         detail::pow_int(modulus, k);
}

double worst_case_peak_envelope(double rho, int k) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::out_of_range("worst_case_peak_envelope: rho must be in (0,1)");
  if (k < 2)
    throw std::invalid_argument("worst_case_peak_envelope: k must be >= 2");
  const double kd = static_cast<double>(k);
  return kd * detail::pow_int(rho, k - 1) + (kd - 1.0) * detail::pow_int(rho, k);
}

int envelope_scan_bound(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::out_of_range("envelope_scan_bound: rho must be in (0,1)");
  return std::max(100, static_cast<int>(std::ceil(10.0 / (1.0 - rho))));
}

PeakReport peak_time(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::out_of_range("peak_time: rho must be in (0,1)");
  const double lr = std::log(rho);
  PeakReport report;
  report.k_continuous = (rho * lr - rho - 1.0) / (lr * (1.0 + rho));
  report.eta_asymptotic = eta_asymptotic(rho);

  // The integer argmax sits at a neighbor of the continuous maximizer, but
  // a safety scan settles it (the envelope values at the two neighbors can
  // be in either order).
  const int k_scan = envelope_scan_bound(rho);
  int k_star = 2;
  double best = worst_case_peak_envelope(rho, 2);
  for (int k = 3; k <= k_scan; ++k) {
    const double v = worst_case_peak_envelope(rho, k);
    if (v > best) {
      best = v;
      k_star = k;
    }
  }
  report.k_star = k_star;
  report.peak = best;
  return report;
}

double eta_asymptotic(double rho) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::out_of_range("eta_asymptotic: rho must be in (0,1)");
  return 2.0 / (std::numbers::e * (1.0 - rho));
}

}  // namespace hblab
