#include "bipart/gibbs_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "json.hpp"

#include "bipart/calibration.hpp"
#include "bipart/detail/summation.hpp"
#include "bipart/errors.hpp"

namespace bipart {
namespace {

using detail::polylog_neg_exp;

constexpr double kThresholdCap = 1e4;

double binomial3(int n, int k) {
  static constexpr double table[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  return table[n][k];
}

// sum_{x >= m} x^i e^{-u x}, 0 <= i <= 3.
double tail_1d(int i, double u, std::int64_t m) {
  if (m <= 1) {
    double s = polylog_neg_exp(i, u);
    if (m <= 0 && i == 0) s += 1.0;
    return s;
  }
  // Shift x = y + (m - 1), y >= 1, and expand (y + m - 1)^i.
  const double shift = static_cast<double>(m - 1);
  double s = 0.0;
  for (int k = 0; k <= i; ++k) {
    s += binomial3(i, k) * std::pow(shift, i - k) * polylog_neg_exp(k, u);
  }
  return std::exp(-u * shift) * s;
}

// Sum over parts x with a x1 + b x2 > T of e^{-a x1 - b x2} (sa x1 + sb x2)^p,
// p in 0..3. Exact up to rounding: rows below T/a are summed one by one,
// the rest in closed form.
double excluded_moment(double a, double b, double sa, double sb, int p, double T, bool strict) {
  const auto last_row = static_cast<std::int64_t>(std::floor(T / a));
  double total = 0.0;
  for (std::int64_t x1 = strict ? 1 : 0; x1 <= last_row; ++x1) {
    const std::int64_t lo = (strict || x1 == 0) ? 1 : 0;
    const double room = T - a * static_cast<double>(x1);
    const auto first = static_cast<std::int64_t>(std::floor(room / b)) + 1;
    const std::int64_t m = std::max(lo, first);
    const double c = sa * static_cast<double>(x1);
    double row = 0.0;
    for (int i = 0; i <= p; ++i) {
      row += binomial3(p, i) * std::pow(c, p - i) * std::pow(sb, i) * tail_1d(i, b, m);
    }
    total += std::exp(-a * static_cast<double>(x1)) * row;
  }
  const std::int64_t lo2 = strict ? 1 : 0;
  const std::int64_t next = std::max<std::int64_t>(last_row + 1, 1);
  for (int i = 0; i <= p; ++i) {
    total += binomial3(p, i) * std::pow(sa, p - i) * std::pow(sb, i) *
             tail_1d(p - i, a, next) * tail_1d(i, b, lo2);
  }
  return total;
}

// Orders the axes so rows run along the larger parameter.
double excluded_moment_sym(const ShapeParams& params, double s1, double s2, int p, double T,
                           bool strict) {
  if (params.alpha >= params.beta) {
    return excluded_moment(params.alpha, params.beta, s1, s2, p, T, strict);
  }
  return excluded_moment(params.beta, params.alpha, s2, s1, p, T, strict);
}

template <class Fn>
void for_each_retained(const ShapeParams& params, PartSet part_set, double T, Fn&& fn) {
  const bool strict = !is_barred(part_set);
  for (std::int64_t x1 = strict ? 1 : 0;; ++x1) {
    const std::int64_t lo = (strict || x1 == 0) ? 1 : 0;
    const double base = params.alpha * static_cast<double>(x1);
    if (base + params.beta * static_cast<double>(lo) > T) break;
    for (std::int64_t x2 = lo;; ++x2) {
      const double dot = base + params.beta * static_cast<double>(x2);
      if (dot > T) break;
      fn(x1, x2, dot);
    }
  }
}

std::size_t count_retained(const ShapeParams& params, PartSet part_set, double T) {
  const bool strict = !is_barred(part_set);
  std::size_t count = 0;
  for (std::int64_t x1 = strict ? 1 : 0;; ++x1) {
    const std::int64_t lo = (strict || x1 == 0) ? 1 : 0;
    const double room = T - params.alpha * static_cast<double>(x1);
    if (room < params.beta * static_cast<double>(lo)) break;
    const auto hi = static_cast<std::int64_t>(std::floor(room / params.beta));
    count += static_cast<std::size_t>(hi - lo + 1);
    if (count > kMaxRetainedParts) break;
  }
  return count;
}

// Smallest threshold with bound(T) <= target; bound is decreasing in T.
// Returns -1 once the retained part set would exceed kMaxRetainedParts.
template <class Bound>
double find_threshold(const ShapeParams& params, PartSet part_set, Bound&& bound, double target) {
  double hi = 1.0;
  while (bound(hi) > target) {
    hi *= 2.0;
    if (hi > kThresholdCap || count_retained(params, part_set, hi) > kMaxRetainedParts) return -1.0;
  }
  double lo = hi / 2.0;
  if (bound(lo) <= target) return lo;
  for (int it = 0; it < 40 && hi - lo > 1e-6 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) <= target ? hi : lo) = mid;
  }
  return hi;
}

std::complex<double> geometric_c(std::complex<double> z) { return 1.0 / (std::exp(z) - 1.0); }

double geometric_r(double u) { return polylog_neg_exp(0, u); }

}  // namespace

std::int64_t SampledPartition::multiplicity(const Part& x) const {
  const auto it = multiplicities.find(x);
  return it == multiplicities.end() ? 0 : it->second;
}

double excluded_mass(const ShapeParams& params, PartSet part_set, double threshold) {
  validate(params);
  return excluded_moment_sym(params, 0.0, 0.0, 0, threshold, !is_barred(part_set));
}

BoltzmannSampler::BoltzmannSampler(const SamplerSpec& spec) : spec_(spec) {
  validate(spec.params);
  if (!(spec.tv_budget > 0.0) || spec.tv_budget > kMaxTvBudget) {
    throw ConfigError("tv_budget must lie in (0, 1e-3]");
  }
  threshold_ = find_threshold(
      spec.params, spec.part_set,
      [&](double T) { return bipart::excluded_mass(spec.params, spec.part_set, T); }, spec.tv_budget);
  if (threshold_ < 0.0) {
    throw ConfigError("sampler truncation infeasible for these parameters and tv_budget");
  }
  excluded_mass_ = bipart::excluded_mass(spec.params, spec.part_set, threshold_);
  for_each_retained(spec.params, spec.part_set, threshold_,
                    [&](std::int64_t x1, std::int64_t x2, double dot) {
                      parts_.push_back({{x1, x2}, std::exp(-dot)});
                    });
}

SampledPartition BoltzmannSampler::sample(std::uint64_t replica) const {
  std::seed_seq seq{static_cast<std::uint32_t>(spec_.seed), static_cast<std::uint32_t>(spec_.seed >> 32),
                    static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampledPartition out;
  for (const Entry& e : parts_) {
    if (unit(rng) >= e.q) continue;
    std::geometric_distribution<std::int64_t> extra(1.0 - e.q);
    const std::int64_t k = 1 + extra(rng);
    out.multiplicities.emplace(e.x, k);
    out.n1 += k * e.x.first;
    out.n2 += k * e.x.second;
  }
  return out;
}

std::vector<SampledPartition> BoltzmannSampler::draw_many(std::size_t count) const {
  std::vector<SampledPartition> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = sample(static_cast<std::uint64_t>(i));
  }
  return out;
}

std::vector<SampledPartition> BoltzmannSampler::draw_many_reference(std::size_t count) const {
  std::vector<SampledPartition> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sample(i));
  return out;
}

SampledPartition sample(const SamplerSpec& spec) { return BoltzmannSampler(spec).sample(0); }

std::complex<double> char_fn(const ShapeParams& params, PartSet part_set, const Vec2& t,
                             double tol) {
  validate(params);
  if (!std::isfinite(t[0]) || !std::isfinite(t[1])) throw DomainError("char_fn: t must be finite");
  const double alpha = params.alpha;
  const double beta = params.beta;
  const std::complex<double> za(alpha, -t[0]);
  const std::complex<double> zb(beta, -t[1]);
  const bool barred = is_barred(part_set);
  // |term_r| <= 2 G(r alpha) G(r beta) / r (+ 2 G(r alpha)/r + 2 G(r beta)/r), and each
  // majorant decays at least by e^{-min(alpha, beta)} per step.
  const double decay = barred ? std::min(alpha, beta) : alpha + beta;
  const double rho = std::exp(-decay);
  std::complex<double> acc = 0.0;
  for (std::int64_t r = 1; r < detail::kMaxSeriesTerms; ++r) {
    const double rd = static_cast<double>(r);
    const double ga = geometric_r(rd * alpha);
    const double gb = geometric_r(rd * beta);
    std::complex<double> term = geometric_c(rd * za) * geometric_c(rd * zb) - ga * gb;
    double majorant = 2.0 * ga * gb;
    if (barred) {
      term += geometric_c(rd * za) - ga + geometric_c(rd * zb) - gb;
      majorant += 2.0 * (ga + gb);
    }
    acc += term / rd;
    majorant /= rd;
    if (majorant * rho / (1.0 - rho) < tol) return std::exp(acc);
  }
  throw ResourceError("char_fn: series did not converge");
}

double char_fn_bound(const ShapeParams& params, const Vec2& t) {
  validate(params);
  const std::complex<double> i(0.0, 1.0);
  const double da = std::abs(std::exp(params.alpha) - std::exp(i * t[0]));
  const double db = std::abs(std::exp(params.beta) - std::exp(i * t[1]));
  return std::exp(1.0 / (da * db) - 1.0 / (std::expm1(params.alpha) * std::expm1(params.beta)));
}

namespace {

struct LyapunovSetup {
  Mat2 inv_sqrt;
  std::vector<std::array<double, 3>> parts;  // x1, x2, weight
};

LyapunovSetup lyapunov_setup(const ShapeParams& params, PartSet part_set, int directions,
                             double tol) {
  validate(params);
  if (directions < 2) throw DomainError("lyapunov_bound: need at least 2 directions");
  if (!(tol > 0.0)) throw DomainError("lyapunov_bound: tol must be > 0");
  const Mat2 gamma = gibbs_covariance(params, part_set);
  const Mat2 inv = gamma.inverse();
  const double s1 = std::sqrt(inv.xx);
  const double s2 = std::sqrt(inv.yy);
  const bool strict = !is_barred(part_set);
  const auto tail = [&](double T) {
    const double lead = 3.0 / std::pow(-std::expm1(-T), 3);
    return lead * excluded_moment_sym(params, s1, s2, 3, T, strict);
  };
  const double T = find_threshold(params, part_set, tail, tol);
  if (T < 0.0) throw ResourceError("lyapunov_bound: truncated part set too large");
  LyapunovSetup setup{gamma.inv_sqrt(), {}};
  for_each_retained(params, part_set, T, [&](std::int64_t x1, std::int64_t x2, double dot) {
    const double q = std::exp(-dot);
    const double w = 3.0 * q / std::pow(-std::expm1(-dot), 3);
    setup.parts.push_back({static_cast<double>(x1), static_cast<double>(x2), w});
  });
  return setup;
}

// u and -u give the same sum, so an even grid only needs its first half.
int distinct_directions(int directions) { return directions % 2 == 0 ? directions / 2 : directions; }

double direction_sum(const LyapunovSetup& setup, int k, int directions) {
  const double angle = 2.0 * std::numbers::pi * k / directions;
  const Vec2 v = setup.inv_sqrt.apply({std::cos(angle), std::sin(angle)});
  double s = 0.0;
  for (const auto& p : setup.parts) {
    const double d = std::abs(v[0] * p[0] + v[1] * p[1]);
    s += p[2] * d * d * d;
  }
  return s;
}

}  // namespace

double lyapunov_bound(const ShapeParams& params, PartSet part_set, int directions, double tol) {
  const LyapunovSetup setup = lyapunov_setup(params, part_set, directions, tol);
  const int m = distinct_directions(directions);
  double best = 0.0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (int k = 0; k < m; ++k) best = std::max(best, direction_sum(setup, k, directions));
  return best;
}

double lyapunov_bound_reference(const ShapeParams& params, PartSet part_set, int directions,
                                double tol) {
  const LyapunovSetup setup = lyapunov_setup(params, part_set, directions, tol);
  const int m = distinct_directions(directions);
  double best = 0.0;
  for (int k = 0; k < m; ++k) best = std::max(best, direction_sum(setup, k, directions));
  return best;
}

std::string LLTReport::to_json() const {
  nlohmann::ordered_json j;
  j["n1"] = target.n1;
  j["n2"] = target.n2;
  j["part_set"] = to_string(part_set);
  j["alpha"] = params.alpha;
  j["beta"] = params.beta;
  j["det_gamma"] = det_gamma;
  j["sigma_sq"] = sigma_sq;
  j["lyapunov"] = lyapunov_bound;
  j["p_exact_decimal_string"] = p_exact.get_str();
  j["normalized_ratio"] = normalized_ratio;
  return j.dump(2);
}

LLTReport llt_check(Target target, PartSet part_set, std::int64_t cell_budget) {
  if (target.n1 < 1 || target.n2 < 1) throw DomainError("llt_check: target must be positive");
  return llt_check(target, count_table(part_set, target.n1, target.n2, cell_budget));
}

LLTReport llt_check(Target target, const CountTable& table) {
  LLTReport rep;
  rep.target = target;
  rep.part_set = table.part_set();
  rep.p_exact = table.at(target.n1, target.n2);
  const CalibrationResult cal = calibrate(target, rep.part_set);
  rep.params = cal.params;
  rep.gamma = gibbs_covariance(rep.params, rep.part_set);
  rep.mean = gibbs_mean(rep.params, rep.part_set);
  rep.det_gamma = rep.gamma.det();
  rep.sigma_sq = rep.gamma.eigenvalues()[0];
  rep.lyapunov_bound = lyapunov_bound(rep.params, rep.part_set);
  rep.ellipse_radius = 1.0 / (4.0 * rep.lyapunov_bound);

  const double n1 = static_cast<double>(target.n1);
  const double n2 = static_cast<double>(target.n2);
  const double log_z = log_z_direct(rep.params, rep.part_set);
  rep.log_probability = (sgn(rep.p_exact) > 0 ? log_mpz(rep.p_exact) : -INFINITY) -
                        rep.params.alpha * n1 - rep.params.beta * n2 - log_z;
  const double scale = 2.0 * std::numbers::pi * std::sqrt(rep.det_gamma);
  rep.normalized_ratio = scale * std::exp(rep.log_probability);
  const Vec2 d{n1 - rep.mean[0], n2 - rep.mean[1]};
  rep.gaussian_pred = std::exp(-0.5 * rep.gamma.inverse().quad(d)) / scale;
  return rep;
}

}  // namespace bipart
