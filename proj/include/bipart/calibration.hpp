#pragma once

#include <array>

#include "bipart/types.hpp"

namespace bipart {

inline constexpr double kDefaultRelTol = 1e-12;
inline constexpr int kMaxCalibrationIterations = 200;

struct CalibrationResult {
  ShapeParams params;
  Target target;
  PartSet part_set = PartSet::StrictPositive;
  /// Relative defects of -Phi'(alpha)/beta = n1 and Phi(alpha)/beta^2 = n2
  /// (Phi replaced by Phi + zeta(2) for NonzeroVectors).
  std::array<double, 2> residuals{};
};

/// Solves Theta(alpha) = t (barred: Theta-bar) for alpha > 0.
///
/// Brackets the root by geometric expansion from alpha = 1, bisects to a
/// width of 1e-2, then runs Newton on log Theta with a bisection fallback.
/// Throws NumericError carrying the final bracket after 200 iterations, and
/// DomainError for t <= 0.
double solve_theta(double t, bool barred, double rel_tol = kDefaultRelTol);

/// Calibrates the shape parameters for a target with n1, n2 >= 1.
/// beta is taken from the Phi/n2 equation; the n1 equation is a residual.
CalibrationResult calibrate(Target target, PartSet part_set, double rel_tol = kDefaultRelTol);

struct OrderReport {
  /// e^{-alpha} / (beta n1), e^{-alpha} / (beta^2 n2), beta n2 / n1.
  std::array<double, 3> ratios{};
  /// Ratio outside [1/50, 50].
  std::array<bool, 3> flagged{};
  bool any_flagged() const { return flagged[0] || flagged[1] || flagged[2]; }
};

OrderReport order_checks(const CalibrationResult& result);

}  // namespace bipart
