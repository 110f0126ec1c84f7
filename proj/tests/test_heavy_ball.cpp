#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "hblab/heavy_ball.hpp"
#include "hblab/rng.hpp"

using namespace hblab;

TEST_CASE("rate-optimal parameters") {
  const HBParams perfect = optimal_params(1.0, 1.0);
  CHECK(perfect.alpha == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(perfect.beta == 0.0);

  const HBParams ill = optimal_params(1.0, 1e4);
  CHECK(ill.alpha == doctest::Approx(4.0 / 10201.0).epsilon(1e-14));
  CHECK(ill.beta == doctest::Approx(9801.0 / 10201.0).epsilon(1e-14));

  const HBParams mild = optimal_params(1.0, 4.0);
  CHECK(mild.alpha == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
  CHECK(mild.beta == doctest::Approx(1.0 / 9.0).epsilon(1e-14));

  CHECK_THROWS_AS(optimal_params(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(optimal_params(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("convergence region membership") {
  CHECK(in_convergence_region(optimal_params(1.0, 1e4), 1e4));
  CHECK_FALSE(in_convergence_region({0.1, 1.0}, 10.0));   // beta < 1 violated
  CHECK_FALSE(in_convergence_region({0.0, 0.5}, 10.0));   // alpha > 0 violated
  CHECK_FALSE(in_convergence_region({0.5, 0.5}, 10.0));   // alpha too large
}

TEST_CASE("one step of the iteration") {
  const DiagonalQuadratic quad({2.0});
  const Vec next = hb_step(quad, {1.0}, {0.5}, {0.1, 0.5});
  CHECK(next[0] == doctest::Approx(1.05).epsilon(1e-15));

  // beta = 0 reduces to a gradient step.
  const Vec gd = hb_step(quad, {1.0}, {0.5}, {0.1, 0.0});
  CHECK(gd[0] == doctest::Approx(1.0 - 0.1 * 2.0).epsilon(1e-15));

  // The minimizer with empty momentum is a fixed point.
  const Vec fixed = hb_step(quad, {0.0}, {0.0}, {0.1, 0.5});
  CHECK(fixed[0] == 0.0);

  CHECK_THROWS_AS(hb_step(quad, {1.0, 2.0}, {0.0, 0.0}, {0.1, 0.5}),
                  std::invalid_argument);
}

TEST_CASE("run: standard init and convergence") {
  const DiagonalQuadratic quad({1.0, 50.0});
  const Trajectory traj =
      run_standard(quad, {1.0, 1.0}, optimal_params(1.0, 50.0), 2000);
  CHECK(traj.records[0].x == traj.records[1].x);
  CHECK(traj.records.size() == 2001);
  for (std::size_t k = 0; k < traj.records.size(); ++k)
    CHECK(traj.records[k].k == static_cast<int>(k));
  CHECK(traj.records.back().x_norm <= 1e-6);
  CHECK(traj.status == RunStatus::Completed);
}

TEST_CASE("run: gradient-tolerance stop") {
  const DiagonalQuadratic quad({1.0, 10.0});
  RunOptions opts;
  opts.grad_tol = 1e-9;
  const Trajectory traj =
      run_standard(quad, {1.0, 1.0}, optimal_params(1.0, 10.0), 100000, opts);
  CHECK(traj.status == RunStatus::GradToleranceReached);
  CHECK(traj.records.back().grad_norm <= 1e-9);

  const Trajectory conv =
      run_to_tolerance(quad, {1.0, 1.0}, optimal_params(1.0, 10.0), 100000);
  CHECK(conv.status == RunStatus::GradToleranceReached);
  CHECK(conv.records.back().grad_norm <= 1e-9);
}

TEST_CASE("run: divergence outside the convergence region") {
  const DiagonalQuadratic quad({1.0, 10.0});
  const Trajectory traj = run_standard(quad, {1.0, 1.0}, {1.0, 0.9}, 5000);
  CHECK(traj.status == RunStatus::Diverged);
  CHECK(traj.last_finite_k >= 1);
  CHECK(traj.records.back().k == traj.last_finite_k);
}

TEST_CASE("record norms are consistent") {
  const DiagonalQuadratic quad({1.0, 9.0});
  const Trajectory traj = run(quad, {1.0, -1.0}, {0.5, 0.25},
                              optimal_params(1.0, 9.0), 50);
  for (const auto& rec : traj.records) {
    CHECK(rec.x_norm == doctest::Approx(norm(rec.x)).epsilon(1e-15));
    CHECK(rec.f == doctest::Approx(quad.eval(rec.x)).epsilon(1e-15));
  }
}

TEST_CASE("worst-case transient bound values") {
  CHECK(peak_lower_bound(1e4) == doctest::Approx(18.3940).epsilon(1e-5));
  CHECK(peak_lower_bound(1.0) ==
        doctest::Approx(1.0 / (2.0 * std::numbers::e)).epsilon(1e-14));
  CHECK(peak_lower_bound(1e6) == doctest::Approx(183.94).epsilon(1e-4));
  CHECK_THROWS_AS(peak_lower_bound(0.5), std::invalid_argument);
}

TEST_CASE("antisymmetric start attains the transient bound") {
  const double kappa = 1e4;
  const DiagonalQuadratic quad({1.0, kappa});
  const Trajectory traj =
      run(quad, {-1.0, 0.0}, {1.0, 0.0}, optimal_params(1.0, kappa), 2000);
  CHECK(traj.max_x_norm() >= peak_lower_bound(kappa));
}

TEST_CASE("modal roots under rate-optimal parameters") {
  const double mu = 1.0, L = 1e4;
  const double q = optimal_rate(mu, L);

  const auto bottom = modal_roots(mu, mu, L);
  REQUIRE(std::holds_alternative<EqualRoots>(bottom));
  CHECK(std::get<EqualRoots>(bottom).rho == doctest::Approx(q).epsilon(1e-10));

  const auto top = modal_roots(L, mu, L);
  REQUIRE(std::holds_alternative<EqualRoots>(top));
  CHECK(std::get<EqualRoots>(top).rho == doctest::Approx(-q).epsilon(1e-10));

  const auto mid = modal_roots(5000.0, mu, L);
  REQUIRE(std::holds_alternative<ComplexPairRoots>(mid));
  CHECK(std::get<ComplexPairRoots>(mid).modulus ==
        doctest::Approx(q).epsilon(1e-10));

  CHECK_THROWS_AS(modal_roots(0.5, mu, L), std::invalid_argument);
  CHECK_THROWS_AS(modal_roots(2e4, mu, L), std::invalid_argument);
}

TEST_CASE("modal closed form: degenerate and quarter-period cases") {
  // Zero start stays at zero.
  for (int k = 0; k <= 40; ++k)
    CHECK(modal_closed_form(7.0, 1.0, 16.0, 0.0, 0.0, k) == 0.0);

  // mu=1, L=9, lambda=5: cos w = 0, so the oscillation has period 4 in k.
  const double mu = 1.0, L = 9.0, lambda = 5.0;
  const double q = optimal_rate(mu, L);  // 1/2
  CHECK(q == doctest::Approx(0.5).epsilon(1e-15));
  const double xi0 = 1.0;
  // C1 = 1, so x_k = cos(pi k / 2) q^k + C2 sin(pi k / 2) q^k; with xi1
  // chosen to zero C2 the even iterates alternate sign and odd ones vanish.
  const double xi1 = 0.0;  // C2 = (0*(4)^2/... - 1*(10-10))/... = 0
  for (int k = 0; k <= 16; ++k) {
    const double expected =
        std::cos(std::numbers::pi * k / 2.0) * std::pow(q, k);
    CHECK(modal_closed_form(lambda, mu, L, xi0, xi1, k) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("modal closed form matches the vector run per coordinate") {
  const double mu = 1.0, L = 1e4;
  const Vec eig{mu, 100.0, L};
  const DiagonalQuadratic quad(eig);
  const Vec x0{0.0, 0.0, 0.0}, x1{1.0, 1.0, 1.0};
  const Trajectory traj = run(quad, x0, x1, optimal_params(mu, L), 500);
  for (int k = 0; k <= 500; ++k) {
    for (int i = 0; i < 3; ++i) {
      const double cf = modal_closed_form(eig[i], mu, L, x0[i], x1[i], k);
      const double it = traj.records[k].x[i];
      CHECK(std::abs(cf - it) <= 1e-9 * std::max({1.0, std::abs(cf), std::abs(it)}));
    }
  }
}

TEST_CASE("vector run equals the per-coordinate scalar recurrence") {
  Rng rng(37);
  const double mu = 1.0, L = 1e4;
  const Vec eig{mu, 317.0, L};
  const DiagonalQuadratic quad(eig);
  const HBParams p = optimal_params(mu, L);
  for (int trial = 0; trial < 20; ++trial) {
    Vec x0(3), x1(3);
    for (int i = 0; i < 3; ++i) {
      x0[i] = rng.uniform(-1.0, 1.0);
      x1[i] = rng.uniform(-1.0, 1.0);
    }
    const Trajectory traj = run(quad, x0, x1, p, 200);
    for (int i = 0; i < 3; ++i) {
      const auto xs =
          iterate({1.0 - p.alpha * eig[i] + p.beta, -p.beta, x0[i], x1[i]}, 200);
      double scale = 1.0;
      for (int k = 0; k <= 200; ++k) {
        scale = std::max({scale, std::abs(xs[k]), std::abs(traj.records[k].x[i])});
        CHECK(std::abs(traj.records[k].x[i] - xs[k]) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("top-mode standard start oscillates while converging") {
  const double kappa = 1e4;
  const DiagonalQuadratic quad({1.0, kappa});
  const Trajectory traj =
      run(quad, {0.0, 1.0}, {0.0, 1.0}, optimal_params(1.0, kappa), 2000);
  int sign_changes = 0;
  for (int k = 1; k < 200; ++k) {
    const double a = traj.records[k - 1].x[1];
    const double b = traj.records[k].x[1];
    if (a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0)) ++sign_changes;
  }
  CHECK(sign_changes >= 10);
  CHECK(traj.max_x_norm() >= peak_lower_bound(kappa));
}

TEST_CASE("norm decays at the optimal rate up to the double-root transient") {
  for (const double kappa : {1e2, 1e3, 1e4}) {
    const DiagonalQuadratic quad({1.0, kappa});
    const Trajectory traj = run(quad, {1.0, 1.0}, {1.0, 1.0},
                                optimal_params(1.0, kappa), 2000);
    const double q = optimal_rate(1.0, kappa);
    const double q_infl = q + 0.01;
    // The double roots put a k*q^k transient on top of the geometric decay;
    // fit C over a window that covers where k*(q/q_infl)^k peaks.
    const int window =
        static_cast<int>(std::ceil(3.0 / std::log(q_infl / q)));
    double C = 0.0;
    double power = 1.0;
    for (int k = 0; k <= std::min(window, 2000); ++k) {
      C = std::max(C, traj.records[k].x_norm / power);
      power *= q_infl;
    }
    power = 1.0;
    for (std::size_t k = 0; k < traj.records.size(); ++k) {
      CHECK(traj.records[k].x_norm <= C * power * (1.0 + 1e-9));
      power *= q_infl;
    }
  }
}

TEST_CASE("beta = 0 with a small step is monotone gradient descent") {
  Rng rng(43);
  const DiagonalQuadratic quad({1.0, 3.0, 20.0});
  const HBParams p{0.9 / quad.L(), 0.0};
  for (int trial = 0; trial < 20; ++trial) {
    Vec x0(3);
    for (auto& v : x0) v = rng.uniform(-2.0, 2.0);
    const Trajectory traj = run_standard(quad, x0, p, 200);
    for (std::size_t k = 1; k < traj.records.size(); ++k)
      CHECK(traj.records[k].f <= traj.records[k - 1].f * (1.0 + 1e-12) + 1e-300);
  }
}
