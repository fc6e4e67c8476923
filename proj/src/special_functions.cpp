#include "bipart/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include "bipart/detail/summation.hpp"
#include "bipart/errors.hpp"

namespace bipart::special {
namespace {

void check_alpha(double alpha) {
  if (!std::isfinite(alpha) || alpha <= 0.0) {
    throw DomainError("alpha must be finite and strictly positive");
  }
}

void check_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("tolerance must be positive");
}

}  // namespace

double scaled_tol(double alpha, double rel) {
  return std::max(rel * std::exp(-std::max(alpha, 0.0)), 1e-300);
}

double dirichlet_derivative(double alpha, double s, int p, double tol) {
  check_alpha(alpha);
  check_tol(tol);
  if (p < 0 || p > 3) throw DomainError("derivative order must be in 0..3");
  // d^p/dalpha^p of G(r alpha) = (-1)^p r^p Li_{-p}(e^{-r alpha}).
  const double sign = (p % 2 == 0) ? 1.0 : -1.0;
  const double power = static_cast<double>(p) - s;
  const double total = detail::sum_with_geometric_tail(
      [&](std::int64_t r) {
        const double rd = static_cast<double>(r);
        return std::pow(rd, power) * detail::polylog_neg_exp(p, rd * alpha);
      },
      power, alpha, tol);
  return sign * total;
}

double dirichlet(double alpha, double s, double tol) {
  return dirichlet_derivative(alpha, s, 0, tol);
}

double phi(double alpha, double tol) { return dirichlet(alpha, 2.0, tol); }

double phi_derivative(double alpha, int order, double tol) {
  if (order != 1 && order != 2) throw DomainError("phi_derivative: order must be 1 or 2");
  return dirichlet_derivative(alpha, 2.0, order, tol);
}

double phi_lambert(double alpha, double tol) {
  check_alpha(alpha);
  check_tol(tol);
  // sigma_2(m)/m^2 <= zeta(2) for every m, and the ratio of consecutive
  // majorants zeta(2) e^{-alpha m} is exactly e^{-alpha}.
  detail::CompensatedSum acc;
  const double rho = std::exp(-alpha);
  for (std::uint64_t m = 1;; ++m) {
    const double md = static_cast<double>(m);
    const double weight = static_cast<double>(sigma2(m)) / (md * md);
    const double e = std::exp(-alpha * md);
    acc.add(weight * e);
    const double tail = kZeta2 * e * rho / (1.0 - rho);
    if (tail < tol || e == 0.0) break;
    if (m > static_cast<std::uint64_t>(detail::kMaxSeriesTerms)) {
      throw ResourceError("phi_lambert: term cap exceeded");
    }
  }
  return acc.value();
}

double psi(double alpha, double tol) { return dirichlet(alpha, 1.0, tol); }

double theta(double alpha, bool barred, double tol) {
  const double p = phi(alpha, tol) + (barred ? kZeta2 : 0.0);
  return -phi_derivative(alpha, 1, tol) / std::sqrt(p);
}

double delta(double alpha, bool barred, double tol) {
  const double p = phi(alpha, tol) + (barred ? kZeta2 : 0.0);
  const double d1 = phi_derivative(alpha, 1, tol);
  const double d2 = phi_derivative(alpha, 2, tol);
  return 2.0 * p * d2 - d1 * d1;
}

std::uint64_t sigma2(std::uint64_t m) {
  if (m == 0) throw DomainError("sigma2: m must be positive");
  std::uint64_t total = 0;
  for (std::uint64_t d = 1; d * d <= m; ++d) {
    if (m % d != 0) continue;
    const std::uint64_t e = m / d;
    total += d * d;
    if (e != d) total += e * e;
  }
  return total;
}

mpq_class bernoulli(unsigned n) {
  // sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1, memoised across calls.
  static std::mutex mutex;
  static std::vector<mpq_class> cache{mpq_class(1)};
  std::lock_guard<std::mutex> lock(mutex);
  while (cache.size() <= n) {
    const unsigned m = static_cast<unsigned>(cache.size());
    mpq_class acc(0);
    mpz_class binom(1);  // C(m+1, 0)
    for (unsigned j = 0; j < m; ++j) {
      acc += binom * cache[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    mpq_class b = -acc / mpq_class(m + 1);
    b.canonicalize();
    cache.push_back(b);
  }
  return cache[n];
}

mpq_class zeta_neg(unsigned k) {
  mpq_class v = bernoulli(k + 1) / mpq_class(k + 1);
  if (k % 2 == 1) v = -v;
  v.canonicalize();
  return v;
}

}  // namespace bipart::special
