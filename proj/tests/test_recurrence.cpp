#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "hblab/recurrence.hpp"
#include "hblab/rng.hpp"

using namespace hblab;

TEST_CASE("iterate reproduces hand-computed values") {
  // Double root 0.6: a1 = 1.2, a2 = -0.36, start (0, 1).
  const auto xs = iterate({1.2, -0.36, 0.0, 1.0}, 2);
  REQUIRE(xs.size() == 3);
  CHECK(xs[0] == 0.0);
  CHECK(xs[1] == 1.0);
  CHECK(xs[2] == doctest::Approx(1.2).epsilon(1e-15));
}

TEST_CASE("iterate: zero start stays at the fixed point") {
  const auto xs = iterate({0.37, -0.91, 0.0, 0.0}, 10);
  for (double v : xs) CHECK(v == 0.0);
}

TEST_CASE("iterate: zero coefficients erase history") {
  const auto xs = iterate({0.0, 0.0, 3.0, 5.0}, 3);
  CHECK(xs[0] == 3.0);
  CHECK(xs[1] == 5.0);
  CHECK(xs[2] == 0.0);
  CHECK(xs[3] == 0.0);
}

TEST_CASE("iterate rejects a degenerate request") {
  CHECK_THROWS_AS(iterate({1.0, 0.0, 0.0, 1.0}, 0), std::invalid_argument);
}

TEST_CASE("every element satisfies the recurrence bitwise") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const SecondOrderRecurrence rec{rng.uniform(-1.5, 1.5), rng.uniform(-1.0, 1.0),
                                    rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const auto xs = iterate(rec, 100);
    for (int k = 2; k <= 100; ++k)
      CHECK(xs[k] == rec.a1 * xs[k - 1] + rec.a2 * xs[k - 2]);
  }
}

TEST_CASE("characteristic roots classify all three regimes") {
  const auto equal = characteristic_roots({1.2, -0.36, 0, 0});
  REQUIRE(std::holds_alternative<EqualRoots>(equal));
  CHECK(std::get<EqualRoots>(equal).rho == doctest::Approx(0.6).epsilon(1e-14));

  const auto real = characteristic_roots({1.5, -0.56, 0, 0});
  REQUIRE(std::holds_alternative<RealDistinctRoots>(real));
  CHECK(std::get<RealDistinctRoots>(real).lambda1 ==
        doctest::Approx(0.7).epsilon(1e-12));
  CHECK(std::get<RealDistinctRoots>(real).lambda2 ==
        doctest::Approx(0.8).epsilon(1e-12));

  const auto complex = characteristic_roots({0.0, -0.25, 0, 0});
  REQUIRE(std::holds_alternative<ComplexPairRoots>(complex));
  CHECK(std::get<ComplexPairRoots>(complex).modulus ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::get<ComplexPairRoots>(complex).angle ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-14));
}

TEST_CASE("root classification round-trips the coefficients") {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    double a1, a2;
    if (trial % 3 == 0) {  // exact double root
      const double rho = rng.uniform(-0.95, 0.95);
      a1 = 2.0 * rho;
      a2 = -rho * rho;
    } else if (trial % 3 == 1) {
      const double l1 = rng.uniform(-0.95, 0.95);
      const double l2 = l1 + rng.uniform(0.01, 0.5);
      a1 = l1 + l2;
      a2 = -l1 * l2;
    } else {
      const double m = rng.uniform(0.05, 0.95);
      const double w = rng.uniform(0.1, std::numbers::pi - 0.1);
      a1 = 2.0 * m * std::cos(w);
      a2 = -m * m;
    }
    const auto roots = characteristic_roots({a1, a2, 0, 0});
    double r1 = 0.0, r2 = 0.0;
    if (const auto* e = std::get_if<EqualRoots>(&roots)) {
      r1 = 2.0 * e->rho;
      r2 = -e->rho * e->rho;
    } else if (const auto* r = std::get_if<RealDistinctRoots>(&roots)) {
      CHECK(r->lambda1 <= r->lambda2);
      r1 = r->lambda1 + r->lambda2;
      r2 = -r->lambda1 * r->lambda2;
    } else {
      const auto& c = std::get<ComplexPairRoots>(roots);
      CHECK(c.modulus * c.modulus == doctest::Approx(-a2).epsilon(1e-12));
      r1 = 2.0 * c.modulus * std::cos(c.angle);
      r2 = -c.modulus * c.modulus;
    }
    CHECK(r1 == doctest::Approx(a1).epsilon(1e-12));
    CHECK(r2 == doctest::Approx(a2).epsilon(1e-12));
  }
}

TEST_CASE("stability matches the root location") {
  CHECK(is_stable({1.2, -0.36, 0, 0}));       // double root 0.6
  CHECK_FALSE(is_stable({2.0, -1.0, 0, 0}));  // double root exactly 1
  CHECK_FALSE(is_stable({0.0, 1.0, 0, 0}));   // roots +-1
  CHECK(is_stable({0.0, -0.25, 0, 0}));
  CHECK_FALSE(is_stable({0.0, -4.0, 0, 0}));
}

TEST_CASE("double-root closed form") {
  CHECK(closed_form_equal_roots(0.6, 0.0, 1.0, 2) ==
        doctest::Approx(1.2).epsilon(1e-15));
  // k = 0 and k = 1 specialize to the initial pair.
  CHECK(closed_form_equal_roots(0.3, 7.0, -2.0, 0) == 7.0);
  CHECK(closed_form_equal_roots(0.3, 7.0, -2.0, 1) == -2.0);
  // Worst-case start (-1, 1): 3*0.36 + 2*0.216 = 1.512 at k = 3.
  CHECK(closed_form_equal_roots(0.6, -1.0, 1.0, 3) ==
        doctest::Approx(1.512).epsilon(1e-15));
  CHECK_THROWS_AS(closed_form_equal_roots(1.0, 0, 1, 2), std::out_of_range);
  CHECK_THROWS_AS(closed_form_equal_roots(0.0, 0, 1, 2), std::out_of_range);
  CHECK_THROWS_AS(closed_form_equal_roots(-0.2, 0, 1, 2), std::out_of_range);
}

TEST_CASE("real-roots closed form") {
  CHECK(closed_form_real_roots(0.7, 0.8, 0.0, 1.0, 2) ==
        doctest::Approx(1.5).epsilon(1e-12));
  CHECK(closed_form_real_roots(0.4, 0.5, 0.0, 1.0, 2) ==
        doctest::Approx(0.9).epsilon(1e-12));
  // Start on a pure mode: x_k = lambda1^k.
  for (int k = 0; k <= 20; ++k)
    CHECK(closed_form_real_roots(0.6, 0.9, 1.0, 0.6, k) ==
          doctest::Approx(std::pow(0.6, k)).epsilon(1e-12));
  CHECK_THROWS_AS(closed_form_real_roots(0.5, 0.5, 0, 1, 2),
                  std::invalid_argument);
}

TEST_CASE("complex closed form") {
  CHECK(closed_form_complex(0.5, std::numbers::pi / 2, 1.0, 0.0, 2) ==
        doctest::Approx(-0.25).epsilon(1e-12));
  for (int k = 0; k <= 30; ++k)
    CHECK(closed_form_complex(0.9, 1.1, 0.0, 0.0, k) == 0.0);
  // sin(3w) vanishes at w = pi/3.
  CHECK(closed_form_complex(0.9, std::numbers::pi / 3, 0.0, 1.0, 3) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(closed_form_complex(0.5, 0.0, 0, 1, 2), std::out_of_range);
  CHECK_THROWS_AS(closed_form_complex(0.5, std::numbers::pi, 0, 1, 2),
                  std::out_of_range);
  CHECK_THROWS_AS(closed_form_complex(1.0, 1.0, 0, 1, 2), std::out_of_range);
}

TEST_CASE("peak envelope values") {
  CHECK(worst_case_peak_envelope(0.6, 2) == doctest::Approx(1.56).epsilon(1e-15));
  CHECK(worst_case_peak_envelope(0.6, 3) == doctest::Approx(1.512).epsilon(1e-15));
  CHECK(worst_case_peak_envelope(1e-4, 2) ==
        doctest::Approx(2e-4 + 1e-8).epsilon(1e-12));
  CHECK_THROWS_AS(worst_case_peak_envelope(0.6, 1), std::invalid_argument);
  CHECK_THROWS_AS(worst_case_peak_envelope(1.2, 2), std::out_of_range);
}

TEST_CASE("peak time: continuous maximizer and discrete argmax") {
  const PeakReport report = peak_time(0.6);
  CHECK(report.k_continuous == doctest::Approx(2.3326).epsilon(1e-3));
  CHECK(report.k_star == 2);  // the ceiling of 2.33 would wrongly give 3
  CHECK(report.peak == doctest::Approx(1.56).epsilon(1e-15));

  CHECK(peak_time(0.9).k_star == 10);
  CHECK(peak_time(0.9).peak == doctest::Approx(7.0123).epsilon(1e-4));
  CHECK(peak_time(0.01).k_star == 2);
}

TEST_CASE("peak value asymptotic") {
  CHECK(eta_asymptotic(0.99) == doctest::Approx(73.5759).epsilon(1e-5));
  CHECK(eta_asymptotic(0.5) == doctest::Approx(4.0 / std::numbers::e).epsilon(1e-15));
  for (const double rho : {0.999, 0.9999}) {
    const PeakReport report = peak_time(rho);
    CHECK(report.peak / report.eta_asymptotic ==
          doctest::Approx(1.0).epsilon(0.05));
  }
}

namespace {

struct StableInstance {
  SecondOrderRecurrence rec;
  RootClassification roots;
};

StableInstance random_stable(Rng& rng) {
  StableInstance inst;
  const int regime = rng.uniform_int(0, 2);
  double a1, a2;
  if (regime == 0) {
    const double rho = rng.uniform(0.05, 0.95);
    a1 = 2.0 * rho;
    a2 = -rho * rho;
  } else if (regime == 1) {
    const double l1 = rng.uniform(-0.9, 0.9);
    double l2 = l1 + rng.uniform(1e-3, 0.5);
    if (l2 >= 0.95) l2 = 0.95;
    a1 = l1 + l2;
    a2 = -l1 * l2;
  } else {
    const double m = rng.uniform(0.05, 0.95);
    const double w = rng.uniform(0.1, std::numbers::pi - 0.1);
    a1 = 2.0 * m * std::cos(w);
    a2 = -m * m;
  }
  inst.rec = {a1, a2, rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
  inst.roots = characteristic_roots(inst.rec);
  return inst;
}

// Coefficient bound |x_k| <= coef * (k+1) * r^k valid in all three regimes.
double decay_coefficient(const StableInstance& inst) {
  const double x0 = inst.rec.x0, x1 = inst.rec.x1;
  if (std::holds_alternative<EqualRoots>(inst.roots))
    return std::abs(x0) + std::abs(x1) + 1.0;
  if (const auto* r = std::get_if<RealDistinctRoots>(&inst.roots)) {
    const double c2 = (x1 - x0 * r->lambda1) / (r->lambda2 - r->lambda1);
    const double c1 = x0 - c2;
    return std::abs(c1) + std::abs(c2) + 1.0;
  }
  const auto& c = std::get<ComplexPairRoots>(inst.roots);
  const double c2 =
      (x1 - c.modulus * std::cos(c.angle) * x0) / (c.modulus * std::sin(c.angle));
  return std::abs(x0) + std::abs(c2) + 1.0;
}

}  // namespace

TEST_CASE("every stable recurrence decays below 1e-6 within the derived horizon") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const StableInstance inst = random_stable(rng);
    REQUIRE(is_stable(inst.rec));
    const double r = max_root_modulus(inst.roots);
    const double coef = decay_coefficient(inst);
    int K = 8;
    while (coef * (K + 1) * std::pow(r, K) >= 1e-6 && K < 2000000) K *= 2;
    const auto xs = iterate(inst.rec, K);
    CHECK(std::abs(xs.back()) < 1e-6);
  }
}

TEST_CASE("closed forms agree with iteration across all regimes") {
  Rng rng(11);
  const int K = 200;
  for (int trial = 0; trial < 1000; ++trial) {
    const StableInstance inst = random_stable(rng);
    const auto xs = iterate(inst.rec, K);
    for (int k = 0; k <= K; ++k) {
      double cf = 0.0;
      if (const auto* e = std::get_if<EqualRoots>(&inst.roots)) {
        cf = detail::equal_roots_solution(e->rho, inst.rec.x0, inst.rec.x1, k);
      } else if (const auto* r = std::get_if<RealDistinctRoots>(&inst.roots)) {
        cf = closed_form_real_roots(r->lambda1, r->lambda2, inst.rec.x0,
                                    inst.rec.x1, k);
      } else {
        const auto& c = std::get<ComplexPairRoots>(inst.roots);
        cf = closed_form_complex(c.modulus, c.angle, inst.rec.x0, inst.rec.x1, k);
      }
      CHECK(std::abs(cf - xs[k]) <= 1e-9);
    }
  }
}

TEST_CASE("envelope dominates every unit-box start and (-1,1) attains it") {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const double rho = rng.uniform(0.05, 0.97);
    const double x0 = rng.uniform(-1.0, 1.0);
    const double x1 = rng.uniform(-1.0, 1.0);
    const int K = std::min(envelope_scan_bound(rho), 400);
    const auto xs = iterate({2.0 * rho, -rho * rho, x0, x1}, K);
    for (int k = 2; k <= K; ++k) {
      const double env = worst_case_peak_envelope(rho, k);
      CHECK(std::abs(xs[k]) <= env * (1.0 + 1e-12) + 1e-300);
    }
  }
  // Tightness of the worst-case start.
  for (const double rho : {0.3, 0.6, 0.9}) {
    for (int k = 2; k <= 60; ++k)
      CHECK(closed_form_equal_roots(rho, -1.0, 1.0, k) ==
            doctest::Approx(worst_case_peak_envelope(rho, k)).epsilon(1e-14));
  }
}

TEST_CASE("real roots straddling the double root order the peaks") {
  const int K = 400;
  auto signed_max = [&](double a1, double a2) {
    const auto xs = iterate({a1, a2, 0.0, 1.0}, K);
    double m = xs[2];
    for (int k = 3; k <= K; ++k) m = std::max(m, xs[k]);
    return m;
  };
  auto abs_max = [&](double a1, double a2) {
    const auto xs = iterate({a1, a2, 0.0, 1.0}, K);
    double m = std::abs(xs[2]);
    for (int k = 3; k <= K; ++k) m = std::max(m, std::abs(xs[k]));
    return m;
  };

  // Reference triples around rho = 0.6.
  CHECK(signed_max(1.5, -0.56) >= signed_max(1.2, -0.36));   // 0.7, 0.8 above
  CHECK(abs_max(0.9, -0.2) <= abs_max(1.2, -0.36));          // 0.4, 0.5 below

  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const double rho = rng.uniform(0.1, 0.85);
    const double above1 = rng.uniform(rho + 1e-3, 0.97);
    const double above2 = rng.uniform(above1 + 1e-3, 0.98);
    CHECK(signed_max(above1 + above2, -above1 * above2) >=
          signed_max(2.0 * rho, -rho * rho) * (1.0 - 1e-12));

    const double below2 = rng.uniform(0.02, rho - 1e-3);
    const double below1 = rng.uniform(0.01, below2 - 1e-3);
    CHECK(abs_max(below1 + below2, -below1 * below2) <=
          abs_max(2.0 * rho, -rho * rho) * (1.0 + 1e-12));
  }
}

TEST_CASE("discrete argmax maximizes the envelope over the scan range") {
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const double rho = rng.uniform(0.05, 0.999);
    const PeakReport report = peak_time(rho);
    const int K = envelope_scan_bound(rho);
    for (int k = 2; k <= K; ++k)
      CHECK(worst_case_peak_envelope(rho, k) <= report.peak);
    // Neighbors of the continuous maximizer bracket the argmax.
    const int lo = std::max(2, static_cast<int>(std::floor(report.k_continuous)));
    const int hi = std::max(2, static_cast<int>(std::ceil(report.k_continuous)));
    CHECK(report.k_star >= lo - 1);
    CHECK(report.k_star <= hi + 1);
  }
}
