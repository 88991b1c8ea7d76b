#pragma once

// Dense univariate polynomials over a finite field.

#include <string>
#include <utility>
#include <vector>

#include "hesse3/field.hpp"

namespace hesse3 {

class Poly {
 public:
  Poly() = default;
  explicit Poly(Field f) : f_(f) {}
  Poly(Field f, std::vector<Element> coeffs) : f_(f), c_(std::move(coeffs)) { normalize(); }

  /// Builds a polynomial from small integer coefficients, constant term first.
  static Poly from_ints(Field f, std::initializer_list<long long> coeffs) {
    std::vector<Element> c;
    for (long long v : coeffs) c.push_back(f.from_int(v));
    return Poly(f, std::move(c));
  }
  static Poly constant(const Element& e) { return Poly(e.field(), {e}); }
  static Poly x(Field f) { return Poly(f, {f.zero(), f.one()}); }
  static Poly monomial(const Element& c, unsigned deg) {
    std::vector<Element> v(deg + 1, c.field().zero());
    v[deg] = c;
    return Poly(c.field(), std::move(v));
  }

  Field field() const { return f_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<Element>& coeffs() const { return c_; }
  Element coeff(std::size_t i) const { return i < c_.size() ? c_[i] : f_.zero(); }
  const Element& lead() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

  Element operator()(const Element& x) const {
    Element acc = f_.zero();
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  Poly& operator+=(const Poly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), f_.zero());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    normalize();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), f_.zero());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    normalize();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator-() const {
    Poly r = *this;
    for (auto& e : r.c_) e = -e;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly(a.f_);
    std::vector<Element> out(a.c_.size() + b.c_.size() - 1, a.f_.zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(a.f_, std::move(out));
  }
  friend Poly operator*(const Poly& a, const Element& s) {
    Poly r = a;
    for (auto& e : r.c_) e *= s;
    r.normalize();
    return r;
  }
  friend Poly operator*(const Element& s, const Poly& a) { return a * s; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  /// Euclidean division; throws ZeroPolynomial for a zero divisor.
  std::pair<Poly, Poly> divmod(const Poly& d) const {
    if (d.is_zero()) fail(ErrorCode::ZeroPolynomial, "division by the zero polynomial");
    if (degree() < d.degree()) return {Poly(f_), *this};
    std::vector<Element> r = c_;
    std::vector<Element> q(c_.size() - d.c_.size() + 1, f_.zero());
    const Element inv = d.lead().inverse();
    const std::size_t dn = d.c_.size();
    for (std::size_t i = r.size(); i-- >= dn;) {
      if (r[i].is_zero()) continue;
      const Element coef = r[i] * inv;
      const std::size_t shift = i - (dn - 1);
      q[shift] = coef;
      for (std::size_t j = 0; j < dn; ++j) r[shift + j] -= coef * d.c_[j];
      if (i == 0) break;
    }
    r.resize(dn - 1);
    return {Poly(f_, std::move(q)), Poly(f_, std::move(r))};
  }
  friend Poly operator%(const Poly& a, const Poly& b) { return a.divmod(b).second; }
  friend Poly operator/(const Poly& a, const Poly& b) { return a.divmod(b).first; }

  /// Quotient when `d` divides exactly; Internal error otherwise.
  Poly exact_div(const Poly& d) const {
    auto [q, r] = divmod(d);
    if (!r.is_zero()) fail(ErrorCode::Internal, "inexact polynomial division");
    return q;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return *this * lead().inverse();
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly(f_);
    std::vector<Element> out(c_.size() - 1, f_.zero());
    for (std::size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * f_.from_int(static_cast<long long>(i % f_.characteristic()));
    return Poly(f_, std::move(out));
  }

  /// this^e mod m.
  Poly powmod(unsigned __int128 e, const Poly& m) const {
    Poly result = Poly::constant(f_.one()) % m;
    Poly base = *this % m;
    while (e > 0) {
      if (e & 1) result = (result * base) % m;
      e >>= 1;
      if (e) base = (base * base) % m;
    }
    return result;
  }

  /// Applies the p-power Frobenius to every coefficient `times` times.
  Poly frobenius_coeffs(unsigned times = 1) const {
    Poly r = *this;
    for (auto& e : r.c_) e = e.frobenius(times);
    return r;
  }

  /// f(g) composition.
  Poly compose(const Poly& g) const {
    Poly acc(f_);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * g + Poly::constant(c_[i]);
    return acc;
  }

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      const bool unit = c_[i].is_one();
      if (!unit || i == 0) s += f_.is_prime_field() ? c_[i].to_string() : "(" + c_[i].to_string() + ")";
      if (i >= 1) s += (unit ? "" : "*") + std::string("t");
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.f_ == b.f_ && a.c_ == b.c_; }

 private:
  void normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }

  Field f_;
  std::vector<Element> c_;
};

/// Monic gcd (zero if both inputs are zero).
inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

inline Poly pow(const Poly& f, unsigned e) {
  Poly r = Poly::constant(f.field().one());
  for (unsigned i = 0; i < e; ++i) r *= f;
  return r;
}

/// Determinant of a square matrix over a field by Gaussian elimination.
inline Element determinant(std::vector<std::vector<Element>> m, Field f) {
  const std::size_t n = m.size();
  Element det = f.one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return f.zero();
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    const Element inv = m[col][col].inverse();
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      const Element factor = m[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return det;
}

/// Sylvester resultant with formal degrees `df` >= deg f and `dg` >= deg g,
/// so that the result is the reduction of the generic integer resultant.
inline Element resultant(const Poly& f, const Poly& g, unsigned df, unsigned dg) {
  const Field F = f.field();
  const std::size_t n = df + dg;
  if (n == 0) return F.one();
  std::vector<std::vector<Element>> m(n, std::vector<Element>(n, F.zero()));
  for (unsigned r = 0; r < dg; ++r)
    for (unsigned i = 0; i <= df; ++i) m[r][r + i] = f.coeff(df - i);
  for (unsigned r = 0; r < df; ++r)
    for (unsigned i = 0; i <= dg; ++i) m[dg + r][r + i] = g.coeff(dg - i);
  return determinant(std::move(m), F);
}

inline Element resultant(const Poly& f, const Poly& g) {
  if (f.is_zero() || g.is_zero()) return f.field().zero();
  return resultant(f, g, static_cast<unsigned>(f.degree()), static_cast<unsigned>(g.degree()));
}

/// disc(f) = (-1)^(d(d-1)/2) res(f, f') / lc(f), with f' taken at formal
/// degree d-1 so that small characteristic is handled by reduction.
inline Element poly_discriminant(const Poly& f) {
  if (f.degree() < 1) fail(ErrorCode::ZeroPolynomial, "discriminant needs degree >= 1");
  const unsigned d = static_cast<unsigned>(f.degree());
  if (d == 1) return f.field().one();
  Element r = resultant(f, f.derivative(), d, d - 1) / f.lead();
  if ((d * (d - 1) / 2) % 2 == 1) r = -r;
  return r;
}

}  // namespace hesse3
