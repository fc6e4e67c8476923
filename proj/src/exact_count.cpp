#include "bipart/exact_count.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "bipart/errors.hpp"

namespace bipart {
namespace {

struct Part {
  std::int64_t x1;
  std::int64_t x2;
};

bool admits(PartSet part_set, std::int64_t x1, std::int64_t x2) {
  if (x1 == 0 && x2 == 0) return false;
  if (part_set == PartSet::StrictPositive) return x1 >= 1 && x2 >= 1;
  return true;
}

// x1 ascending, then x2 ascending.
std::vector<Part> parts_up_to(PartSet part_set, std::int64_t n1, std::int64_t n2) {
  std::vector<Part> parts;
  for (std::int64_t x1 = 0; x1 <= n1; ++x1) {
    for (std::int64_t x2 = 0; x2 <= n2; ++x2) {
      if (admits(part_set, x1, x2)) parts.push_back({x1, x2});
    }
  }
  return parts;
}

std::vector<mpz_class> empty_table(std::int64_t n1, std::int64_t n2, std::int64_t cell_budget) {
  if (n1 < 0 || n2 < 0) throw DomainError("count_table: bounds must be non-negative");
  const std::int64_t rows = n1 + 1;
  const std::int64_t cols = n2 + 1;
  if (cols > cell_budget / rows) {
    throw ResourceError("count_table: " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " cells exceed the budget of " + std::to_string(cell_budget));
  }
  std::vector<mpz_class> cells(static_cast<std::size_t>(rows * cols));
  cells[0] = 1;
  return cells;
}

}  // namespace

CountTable::CountTable(PartSet part_set, std::int64_t max1, std::int64_t max2,
                       std::vector<mpz_class> cells)
    : part_set_(part_set), max1_(max1), max2_(max2), cells_(std::move(cells)) {
  if (static_cast<std::int64_t>(cells_.size()) != (max1_ + 1) * (max2_ + 1)) {
    throw std::invalid_argument("CountTable: cell count does not match bounds");
  }
}

const mpz_class& CountTable::at(std::int64_t a, std::int64_t b) const {
  if (a < 0 || b < 0 || a > max1_ || b > max2_) {
    throw std::out_of_range("CountTable::at(" + std::to_string(a) + ", " + std::to_string(b) +
                            ")");
  }
  return cells_[static_cast<std::size_t>(a * (max2_ + 1) + b)];
}

void CountTable::write_csv(std::ostream& out) const {
  out << "a,b,count\n";
  for (std::int64_t a = 0; a <= max1_; ++a) {
    for (std::int64_t b = 0; b <= max2_; ++b) {
      out << a << ',' << b << ',' << at(a, b).get_str() << '\n';
    }
  }
}

CountTable count_table_reference(PartSet part_set, std::int64_t n1, std::int64_t n2,
                                 std::int64_t cell_budget) {
  std::vector<mpz_class> dp = empty_table(n1, n2, cell_budget);
  const std::int64_t cols = n2 + 1;
  for (const Part& part : parts_up_to(part_set, n1, n2)) {
    for (std::int64_t a = part.x1; a <= n1; ++a) {
      for (std::int64_t b = part.x2; b <= n2; ++b) {
        mpz_class& dst = dp[static_cast<std::size_t>(a * cols + b)];
        const mpz_class& src = dp[static_cast<std::size_t>((a - part.x1) * cols + b - part.x2)];
        mpz_add(dst.get_mpz_t(), dst.get_mpz_t(), src.get_mpz_t());
      }
    }
  }
  return CountTable(part_set, n1, n2, std::move(dp));
}

CountTable count_table(PartSet part_set, std::int64_t n1, std::int64_t n2,
                       std::int64_t cell_budget) {
  std::vector<mpz_class> dp = empty_table(n1, n2, cell_budget);
  const std::int64_t cols = n2 + 1;
  mpz_class* cells = dp.data();
  for (const Part& part : parts_up_to(part_set, n1, n2)) {
    const std::int64_t p1 = part.x1;
    const std::int64_t p2 = part.x2;
    if (p1 >= 1) {
      // Row a only reads row a - p1, which is already final for this part,
      // so the cells of one row are independent.
#pragma omp parallel if (n2 - p2 >= 256)
      for (std::int64_t a = p1; a <= n1; ++a) {
        mpz_class* dst_row = cells + a * cols;
        const mpz_class* src_row = cells + (a - p1) * cols - p2;
#pragma omp for schedule(static)
        for (std::int64_t b = p2; b <= n2; ++b) {
          mpz_add(dst_row[b].get_mpz_t(), dst_row[b].get_mpz_t(), src_row[b].get_mpz_t());
        }
      }
    } else {
      // Axis part (0, p2): dependencies run along b, rows are independent.
#pragma omp parallel for schedule(static) if (n1 >= 8)
      for (std::int64_t a = 0; a <= n1; ++a) {
        mpz_class* row = cells + a * cols;
        for (std::int64_t b = p2; b <= n2; ++b) {
          mpz_add(row[b].get_mpz_t(), row[b].get_mpz_t(), row[b - p2].get_mpz_t());
        }
      }
    }
  }
  return CountTable(part_set, n1, n2, std::move(dp));
}

namespace {

// Number of multisets drawn from parts[index..] (non-increasing order) summing to (r1, r2).
std::uint64_t enumerate_multisets(const std::vector<Part>& parts, std::size_t index,
                                  std::int64_t r1, std::int64_t r2) {
  if (r1 == 0 && r2 == 0) return 1;
  std::uint64_t total = 0;
  for (std::size_t i = index; i < parts.size(); ++i) {
    const Part& p = parts[i];
    if (p.x1 <= r1 && p.x2 <= r2) total += enumerate_multisets(parts, i, r1 - p.x1, r2 - p.x2);
  }
  return total;
}

}  // namespace

mpz_class count_naive(PartSet part_set, Target target) {
  if (target.n1 < 0 || target.n2 < 0) throw DomainError("count_naive: negative target");
  if (target.n1 > kNaiveMaxCoordinate || target.n2 > kNaiveMaxCoordinate) {
    throw ResourceError("count_naive: oracle is limited to coordinates <= 8");
  }
  std::vector<Part> parts = parts_up_to(part_set, target.n1, target.n2);
  // lexicographically non-increasing
  std::vector<Part> descending(parts.rbegin(), parts.rend());
  const std::uint64_t n = enumerate_multisets(descending, 0, target.n1, target.n2);
  return mpz_class(std::to_string(n));
}

mpz_class count_1d(std::int64_t n) {
  if (n < 0) throw DomainError("count_1d: n must be non-negative");
  std::vector<mpz_class> dp(static_cast<std::size_t>(n + 1));
  dp[0] = 1;
  for (std::int64_t k = 1; k <= n; ++k) {
    for (std::int64_t t = k; t <= n; ++t) dp[t] += dp[t - k];
  }
  return dp[static_cast<std::size_t>(n)];
}

double log_mpz(const mpz_class& value) {
  if (sgn(value) <= 0) throw DomainError("log_mpz: value must be positive");
  long exponent = 0;
  const double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
  return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

}  // namespace bipart
