#include "bipart/calibration.hpp"

#include <cmath>
#include <limits>

#include "bipart/errors.hpp"
#include "bipart/special_functions.hpp"

namespace bipart {
namespace {

constexpr double kEvalTol = 1e-15;

struct ThetaEval {
  double log_theta;
  double dlog_theta;  // d/dalpha log Theta = Delta / (2 Phi Phi')
};

ThetaEval eval_theta(double alpha, bool barred) {
  // Absolute tolerance scaled to the magnitude of Phi so that large alpha
  // keeps its relative accuracy.
  const double tol = special::scaled_tol(alpha, kEvalTol);
  const double p = special::phi(alpha, tol) + (barred ? special::kZeta2 : 0.0);
  const double d1 = special::phi_derivative(alpha, 1, tol);
  const double d2 = special::phi_derivative(alpha, 2, tol);
  if (!(p > 0.0) || !(d1 < 0.0)) {
    throw NumericError("Theta underflowed at alpha = " + std::to_string(alpha), alpha, alpha);
  }
  const double log_theta = std::log(-d1) - 0.5 * std::log(p);
  const double dlt = (2.0 * p * d2 - d1 * d1) / (2.0 * p * d1);
  return {log_theta, dlt};
}

}  // namespace

double solve_theta(double t, bool barred, double rel_tol) {
  if (!std::isfinite(t) || t <= 0.0) throw DomainError("solve_theta: target ratio must be > 0");
  const double log_t = std::log(t);
  // f(alpha) = log Theta(alpha) - log t is strictly decreasing.
  auto f = [&](double a) { return eval_theta(a, barred).log_theta - log_t; };

  double lo = 1.0;
  double hi = 1.0;
  const double f1 = f(1.0);
  if (f1 == 0.0) return 1.0;
  if (f1 > 0.0) {
    do {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e4) throw NumericError("solve_theta: no upper bracket", lo, hi);
    } while (f(hi) > 0.0);
  } else {
    do {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) throw NumericError("solve_theta: no lower bracket", lo, hi);
    } while (f(lo) < 0.0);
  }

  int iterations = 0;
  while (hi - lo > 1e-2 && iterations < kMaxCalibrationIterations) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
    ++iterations;
  }

  double alpha = 0.5 * (lo + hi);
  for (; iterations < kMaxCalibrationIterations; ++iterations) {
    const ThetaEval e = eval_theta(alpha, barred);
    const double fa = e.log_theta - log_t;
    const double newton = alpha - fa / e.dlog_theta;
    if (std::abs(fa) <= rel_tol) {
      // One last Newton polish when it stays inside the bracket.
      return (newton > lo && newton < hi) ? newton : alpha;
    }
    (fa > 0.0 ? lo : hi) = alpha;
    alpha = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
  }
  throw NumericError("solve_theta: no convergence after 200 iterations", lo, hi);
}

CalibrationResult calibrate(Target target, PartSet part_set, double rel_tol) {
  if (target.n1 < 1 || target.n2 < 1) throw DomainError("calibrate: n1 and n2 must be >= 1");
  const bool barred = is_barred(part_set);
  const double n1 = static_cast<double>(target.n1);
  const double n2 = static_cast<double>(target.n2);
  const double alpha = solve_theta(n1 / std::sqrt(n2), barred, rel_tol);

  const double tol = special::scaled_tol(alpha, kEvalTol);
  const double p = special::phi(alpha, tol) + (barred ? special::kZeta2 : 0.0);
  const double d1 = special::phi_derivative(alpha, 1, tol);
  const double beta = std::sqrt(p / n2);

  CalibrationResult result;
  result.params = {alpha, beta};
  result.target = target;
  result.part_set = part_set;
  result.residuals = {(-d1 / beta - n1) / n1, (p / (beta * beta) - n2) / n2};
  return result;
}

OrderReport order_checks(const CalibrationResult& result) {
  const double alpha = result.params.alpha;
  const double beta = result.params.beta;
  const double n1 = static_cast<double>(result.target.n1);
  const double n2 = static_cast<double>(result.target.n2);
  const double e = std::exp(-alpha);
  OrderReport report;
  report.ratios = {e / (beta * n1), e / (beta * beta * n2), beta * n2 / n1};
  for (std::size_t i = 0; i < 3; ++i) {
    report.flagged[i] = !(report.ratios[i] >= 1.0 / 50.0 && report.ratios[i] <= 50.0);
  }
  return report;
}

}  // namespace bipart
