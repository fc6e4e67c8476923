#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "bipart/errors.hpp"

namespace bipart::detail {

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Li_{-p}(e^{-u}) = sum_{k>=1} k^p e^{-ku} for u > 0 and p in 0..3, in closed form.
inline double polylog_neg_exp(int p, double u) {
  const double x = std::exp(-u);
  const double one_minus_x = -std::expm1(-u);
  switch (p) {
    case 0:
      return x / one_minus_x;
    case 1:
      return x / (one_minus_x * one_minus_x);
    case 2:
      return x * (1.0 + x) / (one_minus_x * one_minus_x * one_minus_x);
    case 3: {
      const double d2 = one_minus_x * one_minus_x;
      return x * (1.0 + x * (4.0 + x)) / (d2 * d2);
    }
    default:
      throw DomainError("polylog_neg_exp: order must be in 0..3");
  }
}

inline constexpr std::int64_t kMaxSeriesTerms = 2'000'000'000;

/// Sums term(r) for r = 1, 2, ... until the remaining tail is provably below tol.
///
/// The caller promises |term(r+1)| <= ((r+1)/r)^power * exp(-decay) * |term(r)|
/// for all r, with decay > 0. The bound on the ratio is non-increasing in r,
/// so once it drops below one the tail after r is at most
/// |term(r)| * rho / (1 - rho).
///
/// With relative = true the stopping test is tail < tol * |partial sum|.
template <typename TermFn>
double sum_with_geometric_tail(TermFn&& term, double power, double decay, double tol,
                               bool relative = false) {
  CompensatedSum acc;
  const double q = power > 0.0 ? power : 0.0;
  for (std::int64_t r = 1; r < kMaxSeriesTerms; ++r) {
    const double t = term(r);
    acc.add(t);
    const double rd = static_cast<double>(r);
    const double rho = q == 0.0 ? std::exp(-decay)
                                : std::exp(q * std::log1p(1.0 / rd) - decay);
    if (rho < 1.0) {
      const double tail = std::abs(t) * rho / (1.0 - rho);
      const double bound = relative ? tol * std::abs(acc.value()) : tol;
      if (tail < bound || t == 0.0) return acc.value();
    }
  }
  throw ResourceError("series did not reach its tail bound within the term cap");
}

}  // namespace bipart::detail
