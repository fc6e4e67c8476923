#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "bipart/errors.hpp"

namespace bipart::series {

/// Finite Laurent polynomial in the symbol a (a stands for sqrt(zeta(2)))
/// with exact rational coefficients. Zero coefficients are never stored.
class LaurentA {
 public:
  LaurentA() = default;
  LaurentA(int value);  // NOLINT: implicit, constants embed as a^0 terms
  LaurentA(const mpq_class& value);  // NOLINT
  static LaurentA monomial(const mpq_class& coeff, int exponent);

  const std::map<int, mpq_class>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  mpq_class coeff(int exponent) const;

  LaurentA& operator+=(const LaurentA& rhs);
  LaurentA& operator-=(const LaurentA& rhs);
  LaurentA& operator*=(const LaurentA& rhs);
  LaurentA& operator*=(const mpq_class& rhs);

  friend LaurentA operator+(LaurentA lhs, const LaurentA& rhs) { return lhs += rhs; }
  friend LaurentA operator-(LaurentA lhs, const LaurentA& rhs) { return lhs -= rhs; }
  friend LaurentA operator*(LaurentA lhs, const LaurentA& rhs) { return lhs *= rhs; }
  friend LaurentA operator*(LaurentA lhs, const mpq_class& rhs) { return lhs *= rhs; }
  friend LaurentA operator-(LaurentA x);
  friend bool operator==(const LaurentA& lhs, const LaurentA& rhs) { return lhs.terms_ == rhs.terms_; }

  /// Numeric value with a = sqrt(zeta(2)) = pi / sqrt(6).
  double evaluate() const;

  /// "p/q * a^e" terms joined by " + " / " - ", exponents descending; "0" when empty.
  std::string to_string() const;

 private:
  void add_term(int exponent, const mpq_class& coeff);
  std::map<int, mpq_class> terms_;
};

/// Multiplicative inverse; only monomials are units.
LaurentA ring_inverse(const LaurentA& x);
mpq_class ring_inverse(const mpq_class& x);

inline bool ring_is_zero(const mpq_class& x) { return sgn(x) == 0; }
inline bool ring_is_zero(const LaurentA& x) { return x.is_zero(); }

/// Exact coefficient ring usable in Series: commutative ring operations
/// plus scaling by rationals (needed for log and sqrt).
template <typename R>
concept CoefficientRing = requires(R x, const R& y, const mpq_class& q) {
  { R(0) };
  { R(1) };
  { x += y };
  { x -= y };
  { x *= y };
  { x *= q };
  { ring_inverse(y) } -> std::convertible_to<R>;
  { ring_is_zero(y) } -> std::convertible_to<bool>;
};

/// Dense power series truncated after the coefficient of w^order.
template <CoefficientRing R>
class Series {
 public:
  explicit Series(std::size_t order) : coeffs_(order + 1, R(0)) {}
  Series(std::size_t order, std::vector<R> coeffs) : coeffs_(std::move(coeffs)) {
    coeffs_.resize(order + 1, R(0));
  }

  static Series identity(std::size_t order) {
    Series s(order);
    if (order >= 1) s.coeffs_[1] = R(1);
    return s;
  }
  static Series constant(std::size_t order, const R& c) {
    Series s(order);
    s.coeffs_[0] = c;
    return s;
  }

  std::size_t order() const { return coeffs_.size() - 1; }
  const R& operator[](std::size_t k) const { return coeffs_[k]; }
  R& operator[](std::size_t k) { return coeffs_[k]; }
  const std::vector<R>& coeffs() const { return coeffs_; }

  friend bool operator==(const Series& lhs, const Series& rhs) { return lhs.coeffs_ == rhs.coeffs_; }

  Series& operator+=(const Series& rhs) {
    for (std::size_t k = 0; k <= order(); ++k) coeffs_[k] += rhs.at_or_zero(k);
    return *this;
  }
  Series& operator-=(const Series& rhs) {
    for (std::size_t k = 0; k <= order(); ++k) coeffs_[k] -= rhs.at_or_zero(k);
    return *this;
  }
  friend Series operator+(Series lhs, const Series& rhs) { return lhs += rhs; }
  friend Series operator-(Series lhs, const Series& rhs) { return lhs -= rhs; }

  friend Series operator*(const Series& lhs, const Series& rhs) {
    const std::size_t n = lhs.order();
    Series out(n);
    for (std::size_t i = 0; i <= n; ++i) {
      if (ring_is_zero(lhs.coeffs_[i])) continue;
      for (std::size_t j = 0; i + j <= n; ++j) {
        R term = lhs.coeffs_[i];
        term *= rhs.at_or_zero(j);
        out.coeffs_[i + j] += term;
      }
    }
    return out;
  }

  Series scaled(const R& c) const {
    Series out = *this;
    for (R& x : out.coeffs_) x *= c;
    return out;
  }

  /// First order+1 coefficients.
  Series truncated(std::size_t order) const {
    return Series(order, std::vector<R>(coeffs_.begin(),
                                        coeffs_.begin() + std::min(coeffs_.size(), order + 1)));
  }

  /// Multiplicative inverse; requires a unit constant term.
  Series inverse() const {
    const R c0_inv = ring_inverse(coeffs_[0]);
    const std::size_t n = order();
    Series out(n);
    out.coeffs_[0] = c0_inv;
    for (std::size_t k = 1; k <= n; ++k) {
      R acc(0);
      for (std::size_t j = 1; j <= k; ++j) {
        R term = coeffs_[j];
        term *= out.coeffs_[k - j];
        acc += term;
      }
      acc *= c0_inv;
      out.coeffs_[k] = R(0);
      out.coeffs_[k] -= acc;
    }
    return out;
  }

  friend Series operator/(const Series& lhs, const Series& rhs) { return lhs * rhs.inverse(); }

  Series derivative() const {
    Series out(order());
    for (std::size_t k = 1; k <= order(); ++k) {
      out.coeffs_[k - 1] = coeffs_[k];
      out.coeffs_[k - 1] *= mpq_class(static_cast<long>(k));
    }
    return out;
  }

  /// Divides by w; the constant term must vanish. The top coefficient becomes 0
  /// (unknown beyond the truncation), so callers keep one spare order.
  Series shift_down() const {
    if (!ring_is_zero(coeffs_[0])) throw AlgebraError("shift_down: nonzero constant term");
    Series out(order());
    for (std::size_t k = 1; k <= order(); ++k) out.coeffs_[k - 1] = coeffs_[k];
    return out;
  }

  /// Multiplies by w, dropping the top coefficient.
  Series shift_up() const {
    Series out(order());
    for (std::size_t k = 1; k <= order(); ++k) out.coeffs_[k] = coeffs_[k - 1];
    return out;
  }

  /// sqrt for a series with constant term exactly 1.
  Series sqrt_of_unit() const {
    require_unit_one("sqrt_of_unit");
    const std::size_t n = order();
    Series out(n);
    out.coeffs_[0] = R(1);
    const mpq_class half(1, 2);
    for (std::size_t k = 1; k <= n; ++k) {
      R acc = coeffs_[k];
      for (std::size_t j = 1; j < k; ++j) {
        R term = out.coeffs_[j];
        term *= out.coeffs_[k - j];
        acc -= term;
      }
      acc *= half;
      out.coeffs_[k] = acc;
    }
    return out;
  }

  /// log for a series with constant term exactly 1, as the integral of f'/f.
  Series log_of_unit() const {
    require_unit_one("log_of_unit");
    const Series q = derivative() * inverse();
    Series out(order());
    for (std::size_t k = 1; k <= order(); ++k) {
      out.coeffs_[k] = q.coeffs_[k - 1];
      out.coeffs_[k] *= mpq_class(1, static_cast<long>(k));
    }
    return out;
  }

  /// this(inner(w)); inner must have zero constant term.
  Series compose(const Series& inner) const {
    if (!ring_is_zero(inner.coeffs_[0])) throw AlgebraError("compose: inner series has a constant term");
    const std::size_t n = std::min(order(), inner.order());
    Series out = Series::constant(n, coeffs_[n]);
    Series in(n, inner.coeffs_);
    for (std::size_t k = n; k-- > 0;) {
      out = out * in;
      out.coeffs_[0] += coeffs_[k];
    }
    return out;
  }

  /// Compositional inverse of this = c1 w + c2 w^2 + ... with c1 a unit.
  /// Newton iteration z <- z - (g(z) - w) / g'(z), exact in the ring.
  Series reverse() const {
    if (!ring_is_zero(coeffs_[0])) throw AlgebraError("reverse: constant term must vanish");
    const std::size_t n = order();
    if (n == 0) return Series(0);
    const R c1_inv = ring_inverse(coeffs_[1]);
    const Series w = Series::identity(n);
    const Series g_prime = derivative();
    Series z = w.scaled(c1_inv);
    // Correct orders double each step; one extra pass confirms the fixed point.
    for (int pass = 0; pass < 64; ++pass) {
      const Series defect = compose(z) - w;
      const Series next = z - defect / g_prime.compose(z);
      if (next == z) return z;
      z = next;
    }
    throw AlgebraError("reverse: Newton iteration did not settle");
  }

 private:
  R at_or_zero(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : R(0); }
  void require_unit_one(const char* op) const {
    R diff = coeffs_[0];
    diff -= R(1);
    if (!ring_is_zero(diff)) throw AlgebraError(std::string(op) + ": constant term must be 1");
  }

  std::vector<R> coeffs_;
};

/// f(z) = sum_{m=1}^{order} sigma_2(m)/m^2 z^m over the rationals.
Series<mpq_class> build_f(std::size_t order);

enum class Variant { Unbarred, Barred };

struct CoeffReport {
  Variant variant = Variant::Unbarred;
  int order = 1;  // K; the report holds indices 1..K-1
  std::variant<std::vector<mpq_class>, std::vector<LaurentA>> coefficients;

  std::size_t size() const;
  /// Floating value of coefficient k (1-based), with a = sqrt(zeta(2)) for Barred.
  double value(std::size_t k) const;
  /// One line per coefficient: "c_k = p/q" or "cbar_k = <LaurentA>".
  std::string to_string() const;
};

inline constexpr int kMaxUnbarredOrder = 8;
inline constexpr int kMaxBarredOrder = 6;

/// Exact c_1..c_{K-1} for the subcritical expansion without zero components.
/// Throws DomainError unless 1 <= K <= 8.
CoeffReport unbarred_coeffs(int order);

/// Exact cbar_1..cbar_{K-1} as Laurent polynomials in a. 1 <= K <= 6.
CoeffReport barred_coeffs(int order);

/// The series z(w) solving g(z) = w (unbarred) or Theta-bar(z) = w (barred),
/// exposed for reversion checks. order is the truncation of the w-series.
Series<mpq_class> unbarred_root(std::size_t order);
Series<LaurentA> barred_root(std::size_t order);

/// g(z) = (z f'(z))^2 / f(z) and gbar(z) = (z f'(z))^2 / (a^2 + f(z)).
Series<mpq_class> build_g(std::size_t order);
Series<LaurentA> build_gbar(std::size_t order);

}  // namespace bipart::series
