#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"

#include "bipart/errors.hpp"
#include "bipart/special_functions.hpp"

using namespace bipart;
using namespace bipart::special;

namespace {

// Phi(alpha) = sum_{x in N^2} x2^{-2}... written as the double sum
// sum_r sum_k r^{-2} e^{-r k alpha}, summed in long double far past machine precision.
long double phi_double_sum(double alpha) {
  long double total = 0.0L;
  for (int r = 1; r < 4000; ++r) {
    long double row = 0.0L;
    for (int k = 1; k < 4000; ++k) {
      const long double t = std::exp(-static_cast<long double>(alpha) * r * k);
      row += t;
      if (t < 1e-25L) break;
    }
    total += row / (static_cast<long double>(r) * r);
    if (row < 1e-25L) break;
  }
  return total;
}

// Akiyama-Tanigawa: Bernoulli numbers with B_1 = +1/2.
std::vector<mpq_class> bernoulli_plus(unsigned n) {
  std::vector<mpq_class> out;
  std::vector<mpq_class> a(n + 1);
  for (unsigned m = 0; m <= n; ++m) {
    a[m] = mpq_class(1, m + 1);
    for (unsigned j = m; j >= 1; --j) {
      a[j - 1] = j * (a[j - 1] - a[j]);
      a[j - 1].canonicalize();
    }
    out.push_back(a[0]);
  }
  return out;
}

}  // namespace

TEST_SUITE("special_functions") {

TEST_CASE("reference values") {
  // Frozen from 40-digit mpmath evaluation of the defining r-series.
  CHECK(phi(5.0) == doctest::Approx(0.006795039522594).epsilon(1e-11));
  CHECK(phi_derivative(1.0, 1) == doctest::Approx(-1.036287135575).epsilon(1e-11));
  CHECK(psi(1.0) == doctest::Approx(0.684328866977).epsilon(1e-11));
  CHECK(dirichlet(1.0, 0.0) == doctest::Approx(0.820259511542).epsilon(1e-11));
  CHECK(theta(1.0, true) == doctest::Approx(0.687294250319).epsilon(1e-11));
  CHECK(theta(1.0, false) == doctest::Approx(1.307197352845).epsilon(1e-11));
}

TEST_CASE("phi against a direct double sum") {
  for (double alpha : {0.3, 1.0, 2.5, 7.0}) {
    CHECK(phi(alpha, 1e-15) == doctest::Approx(static_cast<double>(phi_double_sum(alpha))).epsilon(1e-13));
  }
}

TEST_CASE("phi limits") {
  const double zeta3 = 1.2020569031595942854;
  CHECK(std::abs(phi(1e-4) * 1e-4 - zeta3) < 1e-3);
  CHECK(phi(30.0, 1e-30) / std::exp(-30.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(phi_derivative(30.0, 1, 1e-30) + std::exp(-30.0)) < 1e-25);
  for (double alpha : {0.5, 1.0, 2.0, 5.0}) CHECK(phi_derivative(alpha, 2) > 0.0);
}

TEST_CASE("sigma2") {
  CHECK(sigma2(1) == 1);
  CHECK(sigma2(6) == 50);
  CHECK(sigma2(12) == 210);
  for (std::uint64_t m = 1; m <= 200; ++m) {
    std::uint64_t s = 0;
    for (std::uint64_t d = 1; d <= m; ++d) if (m % d == 0) s += d * d;
    CHECK(sigma2(m) == s);
  }
  CHECK_THROWS_AS(sigma2(0), DomainError);
}

TEST_CASE("Lambert form") {
  CHECK(std::abs(phi_lambert(2.0) - phi(2.0)) <= 1e-12);
  CHECK(std::abs(phi_lambert(1.0) - phi(1.0)) <= 1e-12);
  CHECK(phi_lambert(30.0, 1e-30) / std::exp(-30.0) == doctest::Approx(1.0).epsilon(1e-12));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 40.0);
  for (int i = 0; i < 50; ++i) {
    const double alpha = u(rng);
    CHECK(std::abs(phi(alpha) - phi_lambert(alpha)) <= 2 * kDefaultTol);
  }
}

TEST_CASE("psi and dirichlet") {
  CHECK(psi(30.0, 1e-30) / std::exp(-30.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(psi(2.0) - dirichlet(2.0, 1.0)) <= 1e-14);
  for (double alpha : {0.5, 1.0, 5.0}) CHECK(std::abs(dirichlet(alpha, 2.0) - phi(alpha)) <= 1e-13);
  CHECK(std::abs(dirichlet(30.0, -3.0, 1e-30) - std::exp(-30.0)) < 1e-25);
}

TEST_CASE("derivatives match finite differences") {
  for (double alpha : {0.4, 1.0, 3.0}) {
    const double h = 1e-5;
    for (double s : {-1.0, 0.0, 1.0, 2.0}) {
      for (int p = 0; p < 3; ++p) {
        const double fd = (dirichlet_derivative(alpha + h, s, p, 1e-15) -
                           dirichlet_derivative(alpha - h, s, p, 1e-15)) / (2 * h);
        CHECK(dirichlet_derivative(alpha, s, p + 1, 1e-15) == doctest::Approx(fd).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("zeta at negative integers") {
  CHECK(zeta_neg(0) == mpq_class(-1, 2));
  CHECK(zeta_neg(1) == mpq_class(-1, 12));
  CHECK(zeta_neg(2) == 0);
  CHECK(zeta_neg(3) == mpq_class(1, 120));
  for (unsigned j = 1; j <= 10; ++j) CHECK(zeta_neg(2 * j) == 0);
  const auto bplus = bernoulli_plus(21);
  for (unsigned k = 0; k <= 20; ++k) {
    mpq_class expected = -bplus[k + 1] / (k + 1);
    expected.canonicalize();
    CHECK(zeta_neg(k) == expected);
  }
  CHECK(bernoulli(1) == mpq_class(-1, 2));
  CHECK(bernoulli(12) == mpq_class(-691, 2730));
}

TEST_CASE("theta and delta") {
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back(0.02 * std::pow(1.07, i));
  double prev = INFINITY;
  for (double alpha : grid) {
    const double th = theta(alpha, false);
    CHECK(th > 0.0);
    CHECK(th < prev);
    prev = th;
    const double p0 = phi(alpha), p1 = phi_derivative(alpha, 1), p2 = phi_derivative(alpha, 2);
    CHECK(p0 * p2 - p1 * p1 >= 0.0);
  }
  CHECK(theta(1e-4, false) > 100.0);
  CHECK(theta(40.0, false) < 1e-8);
  CHECK(theta(30.0, false, 1e-30) / std::exp(-15.0) == doctest::Approx(1.0).epsilon(1e-6));
  for (double alpha : {0.1, 1.0, 10.0}) CHECK(delta(alpha, false) > 0.0);
  CHECK(delta(30.0, false, 1e-30) / std::exp(-60.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(delta(30.0, true, 1e-30) / (2 * kZeta2 * std::exp(-30.0)) == doctest::Approx(1.0).epsilon(1e-6));
  for (double alpha : {0.3, 1.0, 4.0}) {
    const double lhs = theta(alpha, true) * std::sqrt(phi(alpha) + kZeta2);
    const double rhs = theta(alpha, false) * std::sqrt(phi(alpha));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("halving tol moves results by less than tol") {
  for (double alpha : {0.05, 0.7, 3.0, 12.0}) {
    for (double tol : {1e-6, 1e-9, 1e-12}) {
      CHECK(std::abs(phi(alpha, tol) - phi(alpha, tol / 2)) <= tol);
      CHECK(std::abs(psi(alpha, tol) - psi(alpha, tol / 2)) <= tol);
      CHECK(std::abs(dirichlet(alpha, 0.0, tol) - dirichlet(alpha, 0.0, tol / 2)) <= tol);
      CHECK(std::abs(phi_lambert(alpha, tol) - phi_lambert(alpha, tol / 2)) <= tol);
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(phi(0.0), DomainError);
  CHECK_THROWS_AS(phi(-1.0), DomainError);
  CHECK_THROWS_AS(phi(std::nan("")), DomainError);
  CHECK_THROWS_AS(psi(INFINITY), DomainError);
  CHECK_THROWS_AS(phi_derivative(1.0, 3), DomainError);
  CHECK_THROWS_AS(dirichlet_derivative(1.0, 2.0, 4), DomainError);
}

TEST_CASE("small alpha is summed directly") {
  const double alpha = 9e-7;
  CHECK(phi(alpha, 1e-3) * alpha == doctest::Approx(1.2020569031595942).epsilon(1e-5));
}

}
