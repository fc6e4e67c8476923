#pragma once

#include <stdexcept>
#include <string>

namespace bipart {

/// Argument outside the mathematical domain of an evaluator (e.g. alpha <= 0).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation would exceed a configured resource budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterative solver failed to converge. Carries the last bracket.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}

  double bracket_lo() const { return lo_; }
  double bracket_hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Exact series algebra hit a non-invertible element or a broken identity.
class AlgebraError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Invalid run or sampler configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bipart
