#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace bipart {

/// Which lattice of parts a partition may use.
enum class PartSet {
  StrictPositive,  // both coordinates >= 1
  NonzeroVectors,  // any nonzero vector of Z_+^2
};

std::string_view to_string(PartSet part_set);
/// Accepts "strict" / "nonzero" (the CLI spelling) as well as the enum names.
PartSet parse_part_set(std::string_view text);

inline bool is_barred(PartSet part_set) { return part_set == PartSet::NonzeroVectors; }

struct Target {
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;
};

/// Gibbs parameters lambda = (alpha, beta), both strictly positive.
struct ShapeParams {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Throws DomainError unless both parameters are finite and positive.
void validate(const ShapeParams& params);

}  // namespace bipart
