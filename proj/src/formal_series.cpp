#include "bipart/formal_series.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bipart/special_functions.hpp"

namespace bipart::series {

LaurentA::LaurentA(int value) : LaurentA(mpq_class(value)) {}

LaurentA::LaurentA(const mpq_class& value) { add_term(0, value); }

LaurentA LaurentA::monomial(const mpq_class& coeff, int exponent) {
  LaurentA x;
  x.add_term(exponent, coeff);
  return x;
}

mpq_class LaurentA::coeff(int exponent) const {
  const auto it = terms_.find(exponent);
  return it == terms_.end() ? mpq_class(0) : it->second;
}

void LaurentA::add_term(int exponent, const mpq_class& coeff) {
  if (sgn(coeff) == 0) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coeff);
  if (!inserted) {
    it->second += coeff;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

LaurentA& LaurentA::operator+=(const LaurentA& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

LaurentA& LaurentA::operator-=(const LaurentA& rhs) {
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

LaurentA& LaurentA::operator*=(const LaurentA& rhs) {
  LaurentA out;
  for (const auto& [e1, c1] : terms_) {
    for (const auto& [e2, c2] : rhs.terms_) out.add_term(e1 + e2, c1 * c2);
  }
  *this = std::move(out);
  return *this;
}

LaurentA& LaurentA::operator*=(const mpq_class& rhs) {
  if (sgn(rhs) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= rhs;
  return *this;
}

LaurentA operator-(LaurentA x) {
  for (auto& [e, c] : x.terms_) c = -c;
  return x;
}

double LaurentA::evaluate() const {
  const double a = std::numbers::pi / std::sqrt(6.0);
  double total = 0.0;
  for (const auto& [e, c] : terms_) total += c.get_d() * std::pow(a, e);
  return total;
}

std::string LaurentA::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const mpq_class& c = it->second;
    const bool negative = sgn(c) < 0;
    if (first) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    mpq_class magnitude = abs(c);
    out << magnitude.get_str() << " * a^" << it->first;
    first = false;
  }
  return out.str();
}

LaurentA ring_inverse(const LaurentA& x) {
  if (!x.is_monomial()) throw AlgebraError("LaurentA: only monomials are invertible");
  const auto& [e, c] = *x.terms().begin();
  return LaurentA::monomial(1 / c, -e);
}

mpq_class ring_inverse(const mpq_class& x) {
  if (sgn(x) == 0) throw AlgebraError("division by zero rational");
  mpq_class inv = 1 / x;
  return inv;
}

Series<mpq_class> build_f(std::size_t order) {
  Series<mpq_class> f(order);
  for (std::size_t m = 1; m <= order; ++m) {
    mpq_class c(static_cast<unsigned long>(special::sigma2(m)),
                static_cast<unsigned long>(m * m));
    c.canonicalize();
    f[m] = c;
  }
  return f;
}

namespace {

// z f'(z) / z = sum_m sigma_2(m)/m z^{m-1}, valid through z^order.
Series<mpq_class> zfprime_over_z(std::size_t order) {
  const Series<mpq_class> f = build_f(order + 1);
  Series<mpq_class> u(order);
  for (std::size_t m = 1; m <= order + 1; ++m) {
    mpq_class c = f[m] * mpq_class(static_cast<unsigned long>(m));
    c.canonicalize();
    u[m - 1] = c;
  }
  return u;
}

template <typename R>
Series<R> lift(const Series<mpq_class>& s) {
  std::vector<R> coeffs;
  coeffs.reserve(s.order() + 1);
  for (const mpq_class& c : s.coeffs()) coeffs.emplace_back(c);
  return Series<R>(s.order(), std::move(coeffs));
}

const LaurentA& symbol_a() {
  static const LaurentA a = LaurentA::monomial(1, 1);
  return a;
}

const LaurentA& symbol_a_inv() {
  static const LaurentA a_inv = LaurentA::monomial(1, -1);
  return a_inv;
}

// Theta-bar as a series in z: z u(z) (1 + f(z)/a^2)^{-1/2} / a.
Series<LaurentA> build_theta_bar(std::size_t order) {
  const Series<LaurentA> f = lift<LaurentA>(build_f(order));
  const Series<LaurentA> u = lift<LaurentA>(zfprime_over_z(order));
  const LaurentA a_inv2 = symbol_a_inv() * symbol_a_inv();
  const Series<LaurentA> unit = Series<LaurentA>::constant(order, LaurentA(1)) + f.scaled(a_inv2);
  return (u * unit.sqrt_of_unit().inverse()).shift_up().scaled(symbol_a_inv());
}

void require_zero(const mpq_class& c, const char* what) {
  if (sgn(c) != 0) throw AlgebraError(std::string(what) + " did not cancel exactly");
}

void require_zero(const LaurentA& c, const char* what) {
  if (!c.is_zero()) throw AlgebraError(std::string(what) + " did not cancel exactly");
}

}  // namespace

Series<mpq_class> build_g(std::size_t order) {
  const Series<mpq_class> f = build_f(order + 1);
  const Series<mpq_class> u = zfprime_over_z(order);
  const Series<mpq_class> f_over_z = f.shift_down().truncated(order);
  return (u * u / f_over_z).shift_up();
}

Series<LaurentA> build_gbar(std::size_t order) {
  const Series<LaurentA> f = lift<LaurentA>(build_f(order));
  const Series<LaurentA> u = lift<LaurentA>(zfprime_over_z(order));
  const LaurentA a2 = symbol_a() * symbol_a();
  const Series<LaurentA> fbar = Series<LaurentA>::constant(order, a2) + f;
  return (u * u / fbar).shift_up().shift_up();
}

Series<mpq_class> unbarred_root(std::size_t order) { return build_g(order).reverse(); }

Series<LaurentA> barred_root(std::size_t order) { return build_theta_bar(order).reverse(); }

CoeffReport unbarred_coeffs(int order) {
  if (order < 1 || order > kMaxUnbarredOrder) {
    throw DomainError("unbarred_coeffs: order must be in 1..8");
  }
  const std::size_t n = static_cast<std::size_t>(order) + 1;
  const Series<mpq_class> z = unbarred_root(n);
  const Series<mpq_class> z_over_w = z.shift_down();
  const Series<mpq_class> f_over_w = build_f(n).compose(z).shift_down();
  // E(w) + log w - 2 = -log(z/w) + 2 sqrt(f(z)/w) - 2
  Series<mpq_class> e = f_over_w.sqrt_of_unit().scaled(mpq_class(2)) - z_over_w.log_of_unit();
  e[0] -= 2;
  require_zero(e[0], "constant term of the unbarred exponent");

  std::vector<mpq_class> coeffs;
  for (int k = 1; k < order; ++k) coeffs.push_back(e[static_cast<std::size_t>(k)]);
  return CoeffReport{Variant::Unbarred, order, std::move(coeffs)};
}

CoeffReport barred_coeffs(int order) {
  if (order < 1 || order > kMaxBarredOrder) {
    throw DomainError("barred_coeffs: order must be in 1..6");
  }
  const std::size_t n = static_cast<std::size_t>(order) + 1;
  const Series<LaurentA> z = barred_root(n);
  // log z = log a + log w + log(z / (a w)); the first two cancel against the
  // normalisation only if z / (a w) starts with exactly 1.
  const Series<LaurentA> z_over_aw = z.shift_down().scaled(symbol_a_inv());
  {
    LaurentA lead = z_over_aw[0];
    lead -= LaurentA(1);
    require_zero(lead, "log a term");
  }
  const Series<LaurentA> f_of_z = lift<LaurentA>(build_f(n)).compose(z);
  const LaurentA a_inv2 = symbol_a_inv() * symbol_a_inv();
  Series<LaurentA> root = (Series<LaurentA>::constant(n, LaurentA(1)) + f_of_z.scaled(a_inv2))
                              .sqrt_of_unit();
  root[0] -= LaurentA(1);
  // (2 sqrt(a^2 + f) - 2a) / w = 2a (sqrt(1 + f/a^2) - 1) / w
  Series<LaurentA> e = root.shift_down().scaled(symbol_a() * LaurentA(2)) - z_over_aw.log_of_unit();
  e[0] -= LaurentA(1);
  require_zero(e[0], "constant term of the barred exponent");

  std::vector<LaurentA> coeffs;
  for (int k = 1; k < order; ++k) coeffs.push_back(e[static_cast<std::size_t>(k)]);
  return CoeffReport{Variant::Barred, order, std::move(coeffs)};
}

std::size_t CoeffReport::size() const {
  return std::visit([](const auto& v) { return v.size(); }, coefficients);
}

double CoeffReport::value(std::size_t k) const {
  if (k < 1 || k > size()) throw std::out_of_range("CoeffReport::value");
  if (const auto* q = std::get_if<std::vector<mpq_class>>(&coefficients)) return (*q)[k - 1].get_d();
  return std::get<std::vector<LaurentA>>(coefficients)[k - 1].evaluate();
}

std::string CoeffReport::to_string() const {
  std::ostringstream out;
  if (const auto* q = std::get_if<std::vector<mpq_class>>(&coefficients)) {
    for (std::size_t k = 0; k < q->size(); ++k) out << "c_" << k + 1 << " = " << (*q)[k].get_str() << '\n';
  } else {
    const auto& l = std::get<std::vector<LaurentA>>(coefficients);
    for (std::size_t k = 0; k < l.size(); ++k) out << "cbar_" << k + 1 << " = " << l[k].to_string() << '\n';
  }
  return out.str();
}

}  // namespace bipart::series
