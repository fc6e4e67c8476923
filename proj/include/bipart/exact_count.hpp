#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <gmpxx.h>

#include "bipart/types.hpp"

namespace bipart {

inline constexpr std::int64_t kDefaultCellBudget = std::int64_t{1} << 26;

/// Dense table of exact counts p_X(a, b) for 0 <= a <= max1, 0 <= b <= max2.
/// Immutable once built; safe to share across threads.
class CountTable {
 public:
  CountTable(PartSet part_set, std::int64_t max1, std::int64_t max2,
             std::vector<mpz_class> cells);

  PartSet part_set() const { return part_set_; }
  std::int64_t max1() const { return max1_; }
  std::int64_t max2() const { return max2_; }

  /// Throws std::out_of_range outside the table bounds.
  const mpz_class& at(std::int64_t a, std::int64_t b) const;

  /// Writes "a,b,count" header then one row per cell, a-major.
  void write_csv(std::ostream& out) const;

  friend bool operator==(const CountTable& lhs, const CountTable& rhs) = default;

 private:
  PartSet part_set_;
  std::int64_t max1_;
  std::int64_t max2_;
  std::vector<mpz_class> cells_;
};

/// Unbounded-knapsack DP over the parts of X, parts taken in (x1, x2)
/// ascending order. The inner loops are OpenMP-parallel; the result is
/// bit-identical to count_table_reference for any thread count.
/// Throws ResourceError when (n1+1)(n2+1) exceeds cell_budget.
CountTable count_table(PartSet part_set, std::int64_t n1, std::int64_t n2,
                       std::int64_t cell_budget = kDefaultCellBudget);

/// Serial version of the same DP.
CountTable count_table_reference(PartSet part_set, std::int64_t n1, std::int64_t n2,
                                 std::int64_t cell_budget = kDefaultCellBudget);

inline constexpr std::int64_t kNaiveMaxCoordinate = 8;

/// Counts multisets of parts by explicit recursive enumeration. Oracle for
/// count_table; throws ResourceError when a coordinate exceeds 8.
mpz_class count_naive(PartSet part_set, Target target);

/// Ordinary partition number p(n).
mpz_class count_1d(std::int64_t n);

/// Natural logarithm of a positive big integer.
double log_mpz(const mpz_class& value);

}  // namespace bipart
