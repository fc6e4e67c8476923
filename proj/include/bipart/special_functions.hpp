#pragma once

#include <cstdint>

#include <gmpxx.h>

namespace bipart::special {

/// Default absolute truncation target for the r-series evaluators.
inline constexpr double kDefaultTol = 1e-12;

/// zeta(2) = pi^2 / 6, the shift between Phi and its barred counterpart.
inline constexpr double kZeta2 = 1.6449340668482264365;

/// Absolute tolerance giving roughly rel digits relative to Phi(alpha) ~ e^{-alpha}
/// at large alpha, and rel in absolute terms for alpha <= 1.
double scaled_tol(double alpha, double rel = 1e-15);

/// D_alpha(s) = sum_{r>=1} r^{-s} e^{-alpha r} / (1 - e^{-alpha r}).
///
/// Converges for every real s because the summand decays like e^{-alpha r}.
/// The r-series stops once a geometric bound on the remaining tail is below
/// tol. There is no small-alpha shortcut: the number of terms grows like
/// log(1/tol) / alpha.
double dirichlet(double alpha, double s, double tol = kDefaultTol);

/// p-th derivative in alpha of D_alpha(s), p in 0..3, from the differentiated series.
double dirichlet_derivative(double alpha, double s, int p, double tol = kDefaultTol);

/// Phi(alpha) = D_alpha(2).
double phi(double alpha, double tol = kDefaultTol);

/// Phi'(alpha) (order 1) or Phi''(alpha) (order 2). Never by finite differences.
double phi_derivative(double alpha, int order, double tol = kDefaultTol);

/// Phi via its Lambert form sum_m sigma_2(m) m^{-2} e^{-alpha m}. Independent cross-check of phi().
double phi_lambert(double alpha, double tol = kDefaultTol);

/// Psi(alpha) = D_alpha(1).
double psi(double alpha, double tol = kDefaultTol);

/// Theta = -Phi' / sqrt(Phi); barred uses Phi + zeta(2) under the root.
double theta(double alpha, bool barred, double tol = kDefaultTol);

/// Delta = 2 Phi Phi'' - Phi'^2; barred uses Phi + zeta(2) in the first product.
double delta(double alpha, bool barred, double tol = kDefaultTol);

/// sigma_2(m) = sum of d^2 over divisors d of m. Throws DomainError for m = 0.
std::uint64_t sigma2(std::uint64_t m);

/// Bernoulli number B_n as an exact rational, with B_1 = -1/2.
mpq_class bernoulli(unsigned n);

/// Exact zeta(-k) = (-1)^k B_{k+1} / (k+1).
mpq_class zeta_neg(unsigned k);

}  // namespace bipart::special
