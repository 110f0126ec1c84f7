#pragma once

#include <variant>
#include <vector>

namespace hblab {

/// Scalar second-order linear difference equation
///   x_k = a1 * x_{k-1} + a2 * x_{k-2},  k >= 2,
/// together with its initial pair (x0, x1).
struct SecondOrderRecurrence {
  double a1 = 0.0;
  double a2 = 0.0;
  double x0 = 0.0;
  double x1 = 0.0;
};

struct EqualRoots {
  double rho = 0.0;
};

struct RealDistinctRoots {
  double lambda1 = 0.0;  // lambda1 <= lambda2
  double lambda2 = 0.0;
};

struct ComplexPairRoots {
  double modulus = 0.0;
  double angle = 0.0;  // in (0, pi)
};

/// Classified roots of the characteristic polynomial p(t) = t^2 - a1*t - a2.
using RootClassification =
    std::variant<EqualRoots, RealDistinctRoots, ComplexPairRoots>;

/// Transient-growth summary for the double-root recurrence with root rho:
/// where the worst-case envelope k*rho^(k-1) + (k-1)*rho^k peaks and how
/// large the peak is, plus the rho -> 1 closed-form approximation of it.
struct PeakReport {
  double k_continuous = 0.0;  // real-valued maximizer of the envelope
  int k_star = 2;             // discrete argmax over k >= 2
  double peak = 0.0;          // envelope value at k_star
  double eta_asymptotic = 0.0;
};

/// Runs the recurrence; returns x_0 .. x_K (K+1 values). K >= 1.
std::vector<double> iterate(const SecondOrderRecurrence& rec, int K);

RootClassification characteristic_roots(const SecondOrderRecurrence& rec);

double max_root_modulus(const RootClassification& roots);

/// True iff every characteristic root has modulus < 1. Cross-checked
/// against the coefficient inequalities |a2| < 1, |a1| < 1 - a2; a
/// disagreement away from the stability boundary is an internal error.
bool is_stable(const SecondOrderRecurrence& rec);

/// Double root 0 < rho < 1: x_k = x1*k*rho^(k-1) - x0*(k-1)*rho^k.
double closed_form_equal_roots(double rho, double x0, double x1, int k);

/// Distinct real roots: x_k = c1*l1^k + c2*l2^k with c1 + c2 = x0 and
/// c1*l1 + c2*l2 = x1.
double closed_form_real_roots(double lambda1, double lambda2, double x0,
                              double x1, int k);

/// Complex pair m*exp(+-i*w), 0 < m < 1, 0 < w < pi:
/// x_k = [C1*cos(w*k) + C2*sin(w*k)] * m^k with C1 = x0.
double closed_form_complex(double modulus, double angle, double x0, double x1,
                           int k);

/// max over ||(x0,x1)||_inf <= 1 of x_k for the double-root recurrence:
/// k*rho^(k-1) + (k-1)*rho^k, attained by (x0, x1) = (-1, 1). k >= 2.
double worst_case_peak_envelope(double rho, int k);

/// Upper limit of the envelope scan: max(100, ceil(10/(1-rho))), a 10x
/// margin over the O(1/(1-rho)) location of the continuous maximizer.
int envelope_scan_bound(double rho);

/// Continuous maximizer of the envelope plus the scan-verified discrete
/// argmax. The ceiling of the continuous value can miss the discrete
/// maximizer (rho = 0.6 peaks at k = 2, not 3), so both are reported.
PeakReport peak_time(double rho);

/// rho -> 1 approximation of the peak value: 2 / (e * (1 - rho)).
double eta_asymptotic(double rho);

namespace detail {

/// base^n for n >= 0: repeated multiplication up to n = 64, std::pow above.
double pow_int(double base, int n);

/// Equal-roots solution without the (0,1) range contract; the modal
/// analysis needs it for a negative repeated root.
double equal_roots_solution(double rho, double x0, double x1, int k);

}  // namespace detail

}  // namespace hblab
