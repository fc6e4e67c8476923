#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "bipart/calibration.hpp"
#include "bipart/formal_series.hpp"
#include "bipart/types.hpp"

namespace bipart {

inline constexpr double kLogZTol = 1e-12;
/// Relative truncation target for the moment sums (mean, covariance).
inline constexpr double kMomentRelTol = 1e-14;
inline constexpr int kMaxExpansionOrder = 8;

/// log Z_lambda from the collapsed r-series
/// sum_r r^{-1} G(r alpha) G(r beta), G(u) = e^{-u}/(1 - e^{-u}),
/// plus Psi(alpha) + Psi(beta) for NonzeroVectors.
double log_z_direct(const ShapeParams& params, PartSet part_set, double tol = kLogZTol);

struct LogZExpansion {
  ShapeParams params;
  int order = 0;
  double leading = 0.0;        // D_alpha(2) / beta
  std::vector<double> terms;   // (-1)^k zeta(-k) D_alpha(1-k) beta^k / k!, k = 0..order
  double axis_terms = 0.0;     // Psi(alpha) + Psi(beta) for NonzeroVectors, else 0
  double value = 0.0;          // leading + sum(terms) + axis_terms
};

/// Truncated small-beta expansion of log Z. For NonzeroVectors the two
/// one-dimensional factors Psi(alpha) + Psi(beta) are added exactly, so the
/// remainder is the same as for StrictPositive. order must be in 0..8.
LogZExpansion log_z_expansion(const ShapeParams& params, PartSet part_set, int order);

/// The informal small-beta expansion of log Z for NonzeroVectors through the
/// beta^1 term: (Phi + zeta(2))/beta + log(beta)/2 + Psi(alpha)/2 - log(2 pi)/2
/// + (D_alpha(0)/12 - 1/24) beta. Diagnostic only.
double log_z_bar_informal(const ShapeParams& params);

using Vec2 = std::array<double, 2>;

/// Symmetric 2x2 matrix {{xx, xy}, {xy, yy}}.
struct Mat2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
  /// Eigenvalues, ascending.
  std::array<double, 2> eigenvalues() const;
  Mat2 inverse() const;
  /// Symmetric positive square root (and its inverse).
  Mat2 sqrt() const;
  Mat2 inv_sqrt() const;
  Vec2 apply(const Vec2& v) const { return {xx * v[0] + xy * v[1], xy * v[0] + yy * v[1]}; }
  double quad(const Vec2& v) const;
  /// Spectral norm.
  double norm() const;
};

/// E(N) = -grad log Z via differentiated r-series.
Vec2 gibbs_mean(const ShapeParams& params, PartSet part_set, double rel_tol = kMomentRelTol);

/// Cov(N) = Hess log Z via twice-differentiated r-series.
Mat2 gibbs_covariance(const ShapeParams& params, PartSet part_set,
                      double rel_tol = kMomentRelTol);

/// Closed-form approximation {{Phi''/beta, -Phi'/beta^2}, {., 2 Phi/beta^3}}.
Mat2 sigma_approx(const ShapeParams& params);

struct AsymptoticEstimate {
  double log_value = 0.0;
  double exponent = 0.0;
  double log_prefactor = 0.0;
  PartSet part_set = PartSet::StrictPositive;
  CalibrationResult calibration;
};

/// Calibrates and evaluates the leading-order asymptotic formula in log space.
AsymptoticEstimate theorem_estimate(Target target, PartSet part_set);

/// Rate function: alpha t + 2 sqrt(Phi(alpha)) with Theta(alpha) = t
/// (barred for NonzeroVectors). Throws DomainError for t <= 0.
double rate_function(double t, PartSet part_set, double rel_tol = kDefaultRelTol);

struct RateRow {
  double t = 0.0;
  double h = 0.0;
  double h_bar = 0.0;
};

std::vector<RateRow> rate_table(const std::vector<double>& t_grid,
                                double rel_tol = kDefaultRelTol);

/// Evenly spaced grid of `steps` points from t_min to t_max inclusive.
std::vector<double> linear_grid(double t_min, double t_max, int steps);

/// Writes "t,h,hbar" CSV with 12 significant digits.
void write_rate_csv(std::ostream& out, const std::vector<RateRow>& rows);

/// log of the subcritical closed forms with coefficients c_1..c_{K-1} taken
/// from the report (n1 = o(sqrt(n2)) regimes).
double subcritical_log_estimate(Target target, const series::CoeffReport& coeffs);
double subcritical_log_estimate_barred(Target target, const series::CoeffReport& coeffs);

/// Formats a double with 12 significant digits (CSV convention).
std::string format_real(double x);

}  // namespace bipart
