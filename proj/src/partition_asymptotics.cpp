#include "bipart/partition_asymptotics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "bipart/detail/summation.hpp"
#include "bipart/errors.hpp"
#include "bipart/special_functions.hpp"

namespace bipart {
namespace {

using detail::polylog_neg_exp;
using detail::sum_with_geometric_tail;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sum_r r^power Li_{-p}(e^{-r alpha}) Li_{-q}(e^{-r beta}), all terms positive.
double product_sum(const ShapeParams& lambda, int p, int q, int power, double tol, bool relative) {
  return sum_with_geometric_tail(
      [&](std::int64_t r) {
        const double rd = static_cast<double>(r);
        return std::pow(rd, power) * polylog_neg_exp(p, rd * lambda.alpha) *
               polylog_neg_exp(q, rd * lambda.beta);
      },
      static_cast<double>(power), lambda.alpha + lambda.beta, tol, relative);
}

// sum_r r^power Li_{-p}(e^{-r u}), the one-dimensional (axis) contribution.
double axis_sum(double u, int p, int power, double tol, bool relative) {
  return sum_with_geometric_tail(
      [&](std::int64_t r) {
        const double rd = static_cast<double>(r);
        return std::pow(rd, power) * polylog_neg_exp(p, rd * u);
      },
      static_cast<double>(power), u, tol, relative);
}

}  // namespace

std::array<double, 2> Mat2::eigenvalues() const {
  const double mean = 0.5 * (xx + yy);
  const double half_diff = 0.5 * (xx - yy);
  const double radius = std::hypot(half_diff, xy);
  // Smaller eigenvalue via det / larger to avoid cancellation.
  const double larger = mean + radius;
  return {det() / larger, larger};
}

Mat2 Mat2::inverse() const {
  const double d = det();
  return {yy / d, -xy / d, xx / d};
}

Mat2 Mat2::sqrt() const {
  const double s = std::sqrt(det());
  const double t = std::sqrt(xx + yy + 2.0 * s);
  return {(xx + s) / t, xy / t, (yy + s) / t};
}

Mat2 Mat2::inv_sqrt() const { return sqrt().inverse(); }

double Mat2::quad(const Vec2& v) const {
  return xx * v[0] * v[0] + 2.0 * xy * v[0] * v[1] + yy * v[1] * v[1];
}

double Mat2::norm() const {
  const double mean = 0.5 * (xx + yy);
  const double radius = std::hypot(0.5 * (xx - yy), xy);
  return std::max(std::abs(mean + radius), std::abs(mean - radius));
}

double log_z_direct(const ShapeParams& params, PartSet part_set, double tol) {
  validate(params);
  double total = product_sum(params, 0, 0, -1, tol, false);
  if (is_barred(part_set)) {
    total += special::psi(params.alpha, tol) + special::psi(params.beta, tol);
  }
  return total;
}

LogZExpansion log_z_expansion(const ShapeParams& params, PartSet part_set, int order) {
  validate(params);
  if (order < 0 || order > kMaxExpansionOrder) {
    throw DomainError("log_z_expansion: order must be in 0..8");
  }
  const double alpha = params.alpha;
  const double beta = params.beta;
  const double tol = special::scaled_tol(alpha, 1e-16);
  LogZExpansion out;
  out.params = params;
  out.order = order;
  out.leading = special::dirichlet(alpha, 2.0, tol) / beta;
  double factorial = 1.0;
  double beta_power = 1.0;
  double sum = out.leading;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) {
      factorial *= k;
      beta_power *= beta;
    }
    const mpq_class zeta = special::zeta_neg(static_cast<unsigned>(k));
    double term = 0.0;
    if (sgn(zeta) != 0) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      term = sign * zeta.get_d() * special::dirichlet(alpha, 1.0 - k, tol) * beta_power / factorial;
    }
    out.terms.push_back(term);
    sum += term;
  }
  if (is_barred(part_set)) {
    out.axis_terms = special::psi(alpha, kLogZTol) + special::psi(beta, kLogZTol);
  }
  out.value = sum + out.axis_terms;
  return out;
}

double log_z_bar_informal(const ShapeParams& params) {
  validate(params);
  const double alpha = params.alpha;
  const double beta = params.beta;
  return (special::phi(alpha) + special::kZeta2) / beta + 0.5 * std::log(beta) +
         0.5 * special::psi(alpha) - 0.5 * std::log(kTwoPi) +
         (special::dirichlet(alpha, 0.0) / 12.0 - 1.0 / 24.0) * beta;
}

Vec2 gibbs_mean(const ShapeParams& params, PartSet part_set, double rel_tol) {
  validate(params);
  const ShapeParams swapped{params.beta, params.alpha};
  Vec2 mean{product_sum(params, 1, 0, 0, rel_tol, true),
            product_sum(swapped, 1, 0, 0, rel_tol, true)};
  if (is_barred(part_set)) {
    mean[0] += axis_sum(params.alpha, 1, 0, rel_tol, true);
    mean[1] += axis_sum(params.beta, 1, 0, rel_tol, true);
  }
  return mean;
}

Mat2 gibbs_covariance(const ShapeParams& params, PartSet part_set, double rel_tol) {
  validate(params);
  const ShapeParams swapped{params.beta, params.alpha};
  Mat2 cov{product_sum(params, 2, 0, 1, rel_tol, true), product_sum(params, 1, 1, 1, rel_tol, true),
           product_sum(swapped, 2, 0, 1, rel_tol, true)};
  if (is_barred(part_set)) {
    cov.xx += axis_sum(params.alpha, 2, 1, rel_tol, true);
    cov.yy += axis_sum(params.beta, 2, 1, rel_tol, true);
  }
  return cov;
}

Mat2 sigma_approx(const ShapeParams& params) {
  validate(params);
  const double alpha = params.alpha;
  const double beta = params.beta;
  const double tol = special::scaled_tol(alpha);
  const double p0 = special::phi(alpha, tol);
  const double p1 = special::phi_derivative(alpha, 1, tol);
  const double p2 = special::phi_derivative(alpha, 2, tol);
  return {p2 / beta, -p1 / (beta * beta), 2.0 * p0 / (beta * beta * beta)};
}

AsymptoticEstimate theorem_estimate(Target target, PartSet part_set) {
  AsymptoticEstimate est;
  est.part_set = part_set;
  est.calibration = calibrate(target, part_set);
  const bool barred = is_barred(part_set);
  const double alpha = est.calibration.params.alpha;
  const double n2 = static_cast<double>(target.n2);
  const double tol = special::scaled_tol(alpha);

  const double p = special::phi(alpha, tol) + (barred ? special::kZeta2 : 0.0);
  const double th = special::theta(alpha, barred, tol);
  const double dl = special::delta(alpha, barred, tol);
  const double ps = special::psi(alpha, tol);

  est.exponent = (alpha * th + 2.0 * std::sqrt(p)) * std::sqrt(n2);
  if (!barred) {
    est.log_prefactor = -std::log(kTwoPi) + std::log(p / n2) - 0.5 * ps - 0.5 * std::log(dl);
  } else {
    est.log_prefactor =
        -1.5 * std::log(kTwoPi) + 1.25 * std::log(p / n2) + 0.5 * ps - 0.5 * std::log(dl);
  }
  est.log_value = est.exponent + est.log_prefactor;
  return est;
}

double rate_function(double t, PartSet part_set, double rel_tol) {
  if (!std::isfinite(t) || t <= 0.0) throw DomainError("rate_function: t must be > 0");
  const bool barred = is_barred(part_set);
  const double alpha = solve_theta(t, barred, rel_tol);
  const double p = special::phi(alpha, special::scaled_tol(alpha)) + (barred ? special::kZeta2 : 0.0);
  return alpha * t + 2.0 * std::sqrt(p);
}

std::vector<RateRow> rate_table(const std::vector<double>& t_grid, double rel_tol) {
  std::vector<RateRow> rows(t_grid.size());
  const auto n = static_cast<std::int64_t>(t_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = t_grid[static_cast<std::size_t>(i)];
    rows[static_cast<std::size_t>(i)] = {t, rate_function(t, PartSet::StrictPositive, rel_tol),
                                         rate_function(t, PartSet::NonzeroVectors, rel_tol)};
  }
  return rows;
}

std::vector<double> linear_grid(double t_min, double t_max, int steps) {
  if (steps < 1) throw DomainError("linear_grid: steps must be >= 1");
  if (!(t_min > 0.0) || !(t_max >= t_min)) throw DomainError("linear_grid: need 0 < t_min <= t_max");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    grid.push_back(t_min);
    return grid;
  }
  const double h = (t_max - t_min) / (steps - 1);
  for (int i = 0; i < steps; ++i) grid.push_back(i + 1 == steps ? t_max : t_min + h * i);
  return grid;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_rate_csv(std::ostream& out, const std::vector<RateRow>& rows) {
  out << "t,h,hbar\n";
  for (const RateRow& row : rows) {
    out << format_real(row.t) << ',' << format_real(row.h) << ',' << format_real(row.h_bar) << '\n';
  }
}

double subcritical_log_estimate(Target target, const series::CoeffReport& coeffs) {
  if (coeffs.variant != series::Variant::Unbarred) throw DomainError("expected unbarred coefficients");
  const double n1 = static_cast<double>(target.n1);
  const double n2 = static_cast<double>(target.n2);
  double value = std::log(n1 / n2) + n1 * std::log(n2) - 2.0 * std::lgamma(n1 + 1.0);
  const double w = n1 * n1 / n2;
  double wk = 1.0;
  for (std::size_t k = 1; k <= coeffs.size(); ++k) {
    wk *= w;
    value += coeffs.value(k) * n1 * wk;
  }
  return value;
}

double subcritical_log_estimate_barred(Target target, const series::CoeffReport& coeffs) {
  if (coeffs.variant != series::Variant::Barred) throw DomainError("expected barred coefficients");
  const double n1 = static_cast<double>(target.n1);
  const double n2 = static_cast<double>(target.n2);
  const double pi = std::numbers::pi;
  double value = -std::lgamma(n1 + 1.0) + n1 * std::log(std::sqrt(6.0 * n2) / pi) -
                 std::log(4.0 * n2 * std::sqrt(3.0)) + pi * std::sqrt(2.0 * n2 / 3.0);
  const double w = n1 / std::sqrt(n2);
  double wk = 1.0;
  for (std::size_t k = 1; k <= coeffs.size(); ++k) {
    wk *= w;
    value += coeffs.value(k) * n1 * wk;
  }
  return value;
}

}  // namespace bipart
