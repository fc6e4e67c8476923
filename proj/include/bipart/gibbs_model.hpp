#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "bipart/exact_count.hpp"
#include "bipart/partition_asymptotics.hpp"
#include "bipart/types.hpp"

namespace bipart {

inline constexpr double kMaxTvBudget = 1e-3;
inline constexpr std::size_t kMaxRetainedParts = std::size_t{1} << 24;

struct SamplerSpec {
  ShapeParams params;
  PartSet part_set = PartSet::StrictPositive;
  double tv_budget = 1e-6;
  std::uint64_t seed = 0;
};

using Part = std::pair<std::int64_t, std::int64_t>;

struct SampledPartition {
  std::map<Part, std::int64_t> multiplicities;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;

  std::int64_t multiplicity(const Part& x) const;
  friend bool operator==(const SampledPartition&, const SampledPartition&) = default;
};

/// Boltzmann sampler: one independent geometric multiplicity per part,
/// P(omega(x) = k) = q^k (1 - q), q = e^{-<lambda, x>}. Parts whose total
/// activation mass lies beyond the tv_budget are dropped.
class BoltzmannSampler {
 public:
  /// Throws ConfigError for tv_budget outside (0, 1e-3] or when the retained
  /// part set would exceed kMaxRetainedParts.
  explicit BoltzmannSampler(const SamplerSpec& spec);

  const SamplerSpec& spec() const { return spec_; }
  std::size_t part_count() const { return parts_.size(); }
  /// Threshold T: parts with <lambda, x> <= T are retained.
  double threshold() const { return threshold_; }
  /// Sum of e^{-<lambda, x>} over the dropped parts (bounds the TV error).
  double excluded_mass() const { return excluded_mass_; }

  /// Replica `replica` of the stream; deterministic in (seed, replica).
  SampledPartition sample(std::uint64_t replica = 0) const;

  /// Replicas 0..count-1, OpenMP-parallel over replicas.
  std::vector<SampledPartition> draw_many(std::size_t count) const;
  /// Serial version of draw_many; identical output.
  std::vector<SampledPartition> draw_many_reference(std::size_t count) const;

 private:
  struct Entry {
    Part x;
    double q;
  };
  SamplerSpec spec_;
  std::vector<Entry> parts_;
  double threshold_ = 0.0;
  double excluded_mass_ = 0.0;
};

SampledPartition sample(const SamplerSpec& spec);

/// Sum of e^{-<lambda, x>} over parts with <lambda, x> > threshold.
double excluded_mass(const ShapeParams& params, PartSet part_set, double threshold);

inline constexpr double kCharFnTol = 1e-12;

/// phi_lambda(t) = E exp(i <t, N>) from the collapsed r-series of log phi.
std::complex<double> char_fn(const ShapeParams& params, PartSet part_set, const Vec2& t,
                             double tol = kCharFnTol);

/// exp{1/(|e^alpha - e^{i t1}| |e^beta - e^{i t2}|) - 1/((e^alpha - 1)(e^beta - 1))},
/// an upper bound on |phi(t)| for StrictPositive.
double char_fn_bound(const ShapeParams& params, const Vec2& t);

inline constexpr int kLyapunovDirections = 360;
inline constexpr double kLyapunovTol = 1e-10;

/// Upper bound on the Lyapunov ratio: the maximum over `directions` unit
/// vectors u of sum_x 3 q_x (1 - q_x)^{-3} |<Gamma^{-1/2} u, x>|^3, where
/// Gamma is the exact covariance. The part sum is cut where its majorant
/// tail falls below tol. OpenMP-parallel over directions. Throws ResourceError
/// when the truncated part set would exceed kMaxRetainedParts.
double lyapunov_bound(const ShapeParams& params, PartSet part_set,
                      int directions = kLyapunovDirections, double tol = kLyapunovTol);
double lyapunov_bound_reference(const ShapeParams& params, PartSet part_set,
                                int directions = kLyapunovDirections,
                                double tol = kLyapunovTol);

struct LLTReport {
  Target target;
  PartSet part_set = PartSet::StrictPositive;
  ShapeParams params;
  Mat2 gamma;
  Vec2 mean{};
  double det_gamma = 0.0;
  double sigma_sq = 0.0;
  double lyapunov_bound = 0.0;
  double ellipse_radius = 0.0;
  mpz_class p_exact;
  double log_probability = 0.0;
  double gaussian_pred = 0.0;
  double normalized_ratio = 0.0;

  /// Stable-key JSON: n1, n2, part_set, alpha, beta, det_gamma, sigma_sq,
  /// lyapunov, p_exact_decimal_string, normalized_ratio.
  std::string to_json() const;
};

/// P_lambda(N = n) from the exact count at the calibrated parameters,
/// compared against the Gaussian density. Throws ResourceError over budget.
LLTReport llt_check(Target target, PartSet part_set,
                    std::int64_t cell_budget = kDefaultCellBudget);
/// Same, reading p_X(n) from a precomputed table of matching part set.
LLTReport llt_check(Target target, const CountTable& table);

}  // namespace bipart
