#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"

#include "bipart/calibration.hpp"
#include "bipart/errors.hpp"
#include "bipart/gibbs_model.hpp"
#include "stats.hpp"

using namespace bipart;

namespace {

// phi(t) = prod_x (1 - q) / (1 - q e^{i<t,x>}), multiplied out over parts.
std::complex<double> char_fn_product(const ShapeParams& p, PartSet ps, const Vec2& t) {
  std::complex<double> log_phi = 0.0;
  const int lo = is_barred(ps) ? 0 : 1;
  for (int x1 = lo; x1 < 2000; ++x1) {
    double row_mass = 0.0;
    for (int x2 = lo; x2 < 200000; ++x2) {
      if (x1 == 0 && x2 == 0) continue;
      const double q = std::exp(-(p.alpha * x1 + p.beta * x2));
      const std::complex<double> e = std::polar(1.0, t[0] * x1 + t[1] * x2);
      log_phi += std::log1p(-q) - std::log(1.0 - q * e);
      row_mass += q;
      if (q < 1e-18) break;
    }
    if (row_mass < 1e-18) break;
  }
  return std::exp(log_phi);
}

double brute_excluded_mass(const ShapeParams& p, PartSet ps, double T) {
  double total = 0.0;
  const int lo = is_barred(ps) ? 0 : 1;
  for (int x1 = lo; x1 < 5000; ++x1) {
    double row = 0.0;
    for (int x2 = lo; x2 < 100000; ++x2) {
      if (x1 == 0 && x2 == 0) continue;
      const double dot = p.alpha * x1 + p.beta * x2;
      const double q = std::exp(-dot);
      if (dot > T) row += q;
      if (q < 1e-20) break;
    }
    total += row;
    if (p.alpha * x1 > T && row < 1e-20) break;
  }
  return total;
}

}  // namespace

TEST_SUITE("gibbs_model") {

TEST_CASE("truncation mass") {
  for (PartSet ps : {PartSet::StrictPositive, PartSet::NonzeroVectors}) {
    for (ShapeParams p : {ShapeParams{1.0, 1.0}, ShapeParams{0.3, 2.0}, ShapeParams{2.0, 0.05}}) {
      for (double T : {0.5, 3.0, 12.0}) {
        CHECK(excluded_mass(p, ps, T) == doctest::Approx(brute_excluded_mass(p, ps, T)).epsilon(1e-10));
      }
    }
  }
  const BoltzmannSampler s({{1.0, 0.1}, PartSet::StrictPositive, 1e-5, 1});
  CHECK(s.excluded_mass() <= 1e-5);
  CHECK(s.part_count() > 0);
}

TEST_CASE("sampler contract") {
  const SamplerSpec spec{{0.7, 0.2}, PartSet::NonzeroVectors, 1e-6, 42};
  const BoltzmannSampler s(spec);
  CHECK(s.sample(3) == s.sample(3));
  CHECK(sample(spec) == s.sample(0));
  const auto par = s.draw_many(300);
  CHECK(par == s.draw_many_reference(300));
  for (const auto& d : par) {
    std::int64_t n1 = 0, n2 = 0;
    for (const auto& [x, k] : d.multiplicities) {
      CHECK(k >= 1);
      n1 += k * x.first;
      n2 += k * x.second;
    }
    CHECK(n1 == d.n1);
    CHECK(n2 == d.n2);
  }
  SamplerSpec other = spec;
  other.seed = 43;
  CHECK_FALSE(BoltzmannSampler(other).draw_many(20) == s.draw_many(20));
}

TEST_CASE("sampler configuration errors") {
  CHECK_THROWS_AS(BoltzmannSampler({{1.0, 1.0}, PartSet::StrictPositive, 0.0, 0}), ConfigError);
  CHECK_THROWS_AS(BoltzmannSampler({{1.0, 1.0}, PartSet::StrictPositive, 2e-3, 0}), ConfigError);
  CHECK_THROWS_AS(BoltzmannSampler({{1e-5, 1e-5}, PartSet::StrictPositive, 1e-6, 0}), ConfigError);
  CHECK_THROWS_AS(BoltzmannSampler({{-1.0, 1.0}, PartSet::StrictPositive, 1e-6, 0}), DomainError);
}

TEST_CASE("empty partition rate") {
  const ShapeParams p{5.0, 5.0};
  const BoltzmannSampler s({p, PartSet::StrictPositive, 1e-6, 2024});
  const std::size_t n = 100000;
  const auto draws = s.draw_many(n);
  double empty = 0;
  for (const auto& d : draws) empty += d.multiplicities.empty() ? 1 : 0;
  const double prob = std::exp(-log_z_direct(p, PartSet::StrictPositive, 1e-16));
  double product = 1.0;
  for (int x1 = 1; x1 < 20; ++x1)
    for (int x2 = 1; x2 < 20; ++x2) product *= -std::expm1(-(p.alpha * x1 + p.beta * x2));
  CHECK(prob == doctest::Approx(product).epsilon(1e-13));
  CHECK(std::abs(empty / n - prob) <= 3 * std::sqrt(prob * (1 - prob) / n));
}

TEST_CASE("sample mean at a calibrated target") {
  const ShapeParams p = calibrate({10, 400}, PartSet::StrictPositive).params;
  const auto draws = BoltzmannSampler({p, PartSet::StrictPositive, 1e-6, 7}).draw_many(10000);
  const auto m = testing::empirical_moments(draws);
  const Vec2 mean = gibbs_mean(p, PartSet::StrictPositive);
  CHECK(std::abs(m.mean[0] - mean[0]) <= 4 * m.mean_se[0]);
  CHECK(std::abs(m.mean[1] - mean[1]) <= 4 * m.mean_se[1]);
  // Ten times the truncation budget moves the mean by less than one standard error.
  const auto loose = BoltzmannSampler({p, PartSet::StrictPositive, 1e-5, 7}).draw_many(10000);
  const auto ml = testing::empirical_moments(loose);
  CHECK(std::abs(ml.mean[0] - m.mean[0]) < m.mean_se[0]);
  CHECK(std::abs(ml.mean[1] - m.mean[1]) < m.mean_se[1]);
}

TEST_CASE("marginal law and covariance at alpha = beta = 1") {
  const ShapeParams p{1.0, 1.0};
  for (PartSet ps : {PartSet::StrictPositive, PartSet::NonzeroVectors}) {
    const auto draws = BoltzmannSampler({p, ps, 1e-6, 99}).draw_many(100000);
    for (Part x : {Part{1, 1}, Part{1, 2}, Part{2, 1}, Part{2, 2}, Part{1, 3}}) {
      const double q = std::exp(-(p.alpha * x.first + p.beta * x.second));
      CHECK(testing::geometric_chi_square_p(draws, x, q) > 0.001);
    }
    const auto m = testing::empirical_moments(draws);
    const Mat2 g = gibbs_covariance(p, ps);
    CHECK(std::abs(m.cov.xx - g.xx) <= 5 * m.cov_se.xx);
    CHECK(std::abs(m.cov.xy - g.xy) <= 5 * m.cov_se.xy);
    CHECK(std::abs(m.cov.yy - g.yy) <= 5 * m.cov_se.yy);
  }
}

TEST_CASE("characteristic function") {
  for (PartSet ps : {PartSet::StrictPositive, PartSet::NonzeroVectors}) {
    for (ShapeParams p : {ShapeParams{1.0, 0.3}, ShapeParams{0.4, 0.4}}) {
      CHECK(std::abs(char_fn(p, ps, {0.0, 0.0}) - 1.0) < 1e-14);
      for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
          const Vec2 t{-std::numbers::pi + 2 * std::numbers::pi * i / 19,
                       -std::numbers::pi + 2 * std::numbers::pi * j / 19};
          const std::complex<double> phi = char_fn(p, ps, t);
          CHECK(std::abs(phi) <= 1.0 + 1e-12);
          if (ps == PartSet::StrictPositive) CHECK(std::abs(phi) <= char_fn_bound(p, t) * (1 + 1e-12));
          if (i % 6 == 0 && j % 6 == 0) CHECK(std::abs(phi - char_fn_product(p, ps, t)) < 1e-10);
        }
      }
    }
  }
  CHECK_THROWS_AS(char_fn({1.0, 1.0}, PartSet::StrictPositive, {NAN, 0.0}), DomainError);
}

TEST_CASE("characteristic function decays off the ellipse") {
  std::vector<double> rates;
  for (std::int64_t n2 : {400, 2500}) {
    const auto n1 = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n2)));
    const ShapeParams p = calibrate({n1, n2}, PartSet::StrictPositive).params;
    const Mat2 root = gibbs_covariance(p, PartSet::StrictPositive).sqrt();
    const double radius = 1.0 / (4.0 * lyapunov_bound(p, PartSet::StrictPositive));
    double worst = 0.0;
    const int steps = 60;
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; j <= steps; ++j) {
        const Vec2 t{-std::numbers::pi + 2 * std::numbers::pi * i / steps,
                     -std::numbers::pi + 2 * std::numbers::pi * j / steps};
        const Vec2 w = root.apply(t);
        if (std::hypot(w[0], w[1]) <= radius) continue;
        worst = std::max(worst, std::abs(char_fn(p, PartSet::StrictPositive, t)));
      }
    }
    rates.push_back(-std::log(worst) / static_cast<double>(n1));
  }
  const double c = *std::min_element(rates.begin(), rates.end());
  CHECK(c > 0.0);
}

TEST_CASE("lyapunov bound") {
  for (PartSet ps : {PartSet::StrictPositive, PartSet::NonzeroVectors}) {
    for (ShapeParams p : {ShapeParams{1.0, 0.05}, ShapeParams{2.0, 2.0}, ShapeParams{0.3, 0.01}}) {
      const double l = lyapunov_bound(p, ps);
      CHECK(l > 0.0);
      CHECK(l == lyapunov_bound_reference(p, ps));
      CHECK(lyapunov_bound(p, ps, 720) == doctest::Approx(l).epsilon(0.01));
      CHECK(lyapunov_bound(p, ps, 360, 1e-12) == doctest::Approx(l).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(lyapunov_bound({1.0, 1.0}, PartSet::StrictPositive, 1), DomainError);
}

TEST_CASE("local limit report") {
  const CountTable tab = count_table(PartSet::StrictPositive, 30, 900);
  const LLTReport r = llt_check({30, 900}, tab);
  CHECK(r.normalized_ratio >= 0.5);
  CHECK(r.normalized_ratio <= 2.0);
  CHECK(r.sigma_sq > 0.0);
  CHECK(r.det_gamma > 0.0);
  CHECK(r.ellipse_radius * r.lyapunov_bound == 0.25);
  CHECK(r.p_exact == tab.at(30, 900));
  CHECK(r.gaussian_pred > 0.0);

  double prev = INFINITY;
  double lo = INFINITY, hi = 0.0;
  for (std::int64_t n1 : {10, 15, 20, 25, 30}) {
    const LLTReport s = llt_check({n1, n1 * n1}, tab);
    CHECK(std::abs(std::log(s.normalized_ratio)) < prev);
    prev = std::abs(std::log(s.normalized_ratio));
    lo = std::min(lo, s.sigma_sq / n1);
    hi = std::max(hi, s.sigma_sq / n1);
  }
  CHECK(hi / lo < 2.0);

  const std::string json = r.to_json();
  CHECK(json.find("\"n1\": 30") != std::string::npos);
  CHECK(json.find("\"p_exact_decimal_string\": \"147896941106794384169112767989\"") != std::string::npos);
  CHECK(json.find("\"n1\"") < json.find("\"normalized_ratio\""));
  CHECK_THROWS_AS(llt_check({50, 2500}, PartSet::StrictPositive, 1000), ResourceError);
}

}
