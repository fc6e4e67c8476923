#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "bipart/calibration.hpp"
#include "bipart/errors.hpp"
#include "bipart/special_functions.hpp"

using namespace bipart;

TEST_SUITE("calibration") {

TEST_CASE("subcritical target") {
  const CalibrationResult r = calibrate({10, 10000}, PartSet::StrictPositive);
  const double alpha = r.params.alpha;
  const double beta = r.params.beta;
  CHECK(std::abs(alpha - 4.598) < 0.05);
  CHECK(std::exp(-alpha) == doctest::Approx(0.01).epsilon(0.2));
  CHECK(-special::phi_derivative(alpha, 1) / beta == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(std::abs(special::phi(alpha) / (beta * beta) - 10000.0) < 1e-6);
  // Bisection oracle on Theta, independent of the Newton polish.
  double lo = 1.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (special::theta(mid, false) > 0.1 ? lo : hi) = mid;
  }
  CHECK(alpha == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-11));
}

TEST_CASE("scale invariance along t") {
  const double a = calibrate({30, 900}, PartSet::StrictPositive).params.alpha;
  CHECK(calibrate({100, 10000}, PartSet::StrictPositive).params.alpha == doctest::Approx(a).epsilon(1e-12));
  for (PartSet ps : {PartSet::StrictPositive, PartSet::NonzeroVectors}) {
    const double base = calibrate({7, 300}, ps).params.alpha;
    for (int k : {2, 4}) {
      CHECK(calibrate({7 * k, 300 * k * k}, ps).params.alpha == doctest::Approx(base).epsilon(1e-12));
    }
  }
}

TEST_CASE("residuals at random targets") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> n1d(1, 2000), n2d(1, 4000000);
  for (int i = 0; i < 100; ++i) {
    const Target t{n1d(rng), n2d(rng)};
    for (PartSet ps : {PartSet::StrictPositive, PartSet::NonzeroVectors}) {
      const CalibrationResult r = calibrate(t, ps);
      CHECK(r.params.alpha > 0.0);
      CHECK(std::abs(r.residuals[0]) < 1e-8);
      CHECK(std::abs(r.residuals[1]) < 1e-10);
      const double target = static_cast<double>(t.n1) / std::sqrt(static_cast<double>(t.n2));
      CHECK(std::abs(special::theta(r.params.alpha, is_barred(ps), special::scaled_tol(r.params.alpha)) - target) <=
            1e-11 * target);
    }
  }
}

TEST_CASE("extreme ratios still bracket") {
  for (double t : {1e-12, 1e-6, 1e-2, 1.0, 1e2, 1e4, 1e5}) {
    for (bool barred : {false, true}) {
      const double alpha = solve_theta(t, barred);
      CHECK(special::theta(alpha, barred, special::scaled_tol(alpha)) == doctest::Approx(t).epsilon(1e-10));
    }
  }
}

TEST_CASE("order checks") {
  const OrderReport rep = order_checks(calibrate({10, 10000}, PartSet::StrictPositive));
  for (double r : rep.ratios) {
    CHECK(r >= 0.1);
    CHECK(r <= 10.0);
  }
  CHECK_FALSE(rep.any_flagged());
  std::array<double, 3> lo{INFINITY, INFINITY, INFINITY}, hi{0, 0, 0};
  for (std::int64_t n2 : {100, 1000, 10000, 100000, 1000000}) {
    const auto n1 = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(n2))));
    const OrderReport r = order_checks(calibrate({n1, n2}, PartSet::StrictPositive));
    CHECK_FALSE(r.any_flagged());
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], r.ratios[k]);
      hi[k] = std::max(hi[k], r.ratios[k]);
    }
  }
  for (int k = 0; k < 3; ++k) CHECK(hi[k] / lo[k] < 2.0);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(solve_theta(0.0, false), DomainError);
  CHECK_THROWS_AS(solve_theta(-1.0, true), DomainError);
  CHECK_THROWS_AS(solve_theta(std::nan(""), true), DomainError);
  CHECK_THROWS_AS(calibrate({0, 10}, PartSet::StrictPositive), DomainError);
  CHECK_THROWS_AS(calibrate({3, 0}, PartSet::NonzeroVectors), DomainError);
  CHECK_THROWS_AS(solve_theta(1e-320, false), NumericError);
}

}
