#include "bipart/types.hpp"

#include <cmath>

#include "bipart/errors.hpp"

namespace bipart {

std::string_view to_string(PartSet part_set) {
  return part_set == PartSet::StrictPositive ? "strict" : "nonzero";
}

PartSet parse_part_set(std::string_view text) {
  if (text == "strict" || text == "StrictPositive") return PartSet::StrictPositive;
  if (text == "nonzero" || text == "NonzeroVectors") return PartSet::NonzeroVectors;
  throw ConfigError("unknown part set '" + std::string(text) + "' (expected strict|nonzero)");
}

void validate(const ShapeParams& params) {
  if (!std::isfinite(params.alpha) || params.alpha <= 0.0 || !std::isfinite(params.beta) ||
      params.beta <= 0.0) {
    throw DomainError("shape parameters must be finite and strictly positive");
  }
}

}  // namespace bipart
