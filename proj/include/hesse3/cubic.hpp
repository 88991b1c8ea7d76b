#pragma once

// Ternary forms (mostly cubics), Hessians, flexes and singular points.

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hesse3/factor.hpp"
#include "hesse3/projective.hpp"

namespace hesse3 {

/// Homogeneous polynomial of degree `deg` in X, Y, Z. Coefficients are kept
/// in graded lexicographic order; for cubics that order is
/// X^3, X^2Y, X^2Z, XY^2, XYZ, XZ^2, Y^3, Y^2Z, YZ^2, Z^3.
class TernaryForm {
 public:
  using Exps = std::array<unsigned, 3>;

  TernaryForm() = default;
  TernaryForm(Field f, unsigned deg) : f_(f), deg_(deg), c_(count(deg), f.zero()) {}
  TernaryForm(Field f, unsigned deg, std::vector<Element> c) : f_(f), deg_(deg), c_(std::move(c)) {
    if (c_.size() != count(deg)) fail(ErrorCode::Internal, "wrong number of form coefficients");
  }
  static TernaryForm cubic(Field f, const std::array<Element, 10>& c) { return TernaryForm(f, 3, std::vector<Element>(c.begin(), c.end())); }
  static TernaryForm cubic_from_ints(Field f, const std::array<long long, 10>& c) {
    std::vector<Element> v;
    for (long long x : c) v.push_back(f.from_int(x));
    return TernaryForm(f, 3, std::move(v));
  }
  /// Linear form aX + bY + cZ.
  static TernaryForm linear(const Element& a, const Element& b, const Element& c) { return TernaryForm(a.field(), 1, {a, b, c}); }
  static TernaryForm monomial(const Element& c, Exps e) {
    TernaryForm r(c.field(), e[0] + e[1] + e[2]);
    r.c_[index(e)] = c;
    return r;
  }

  static std::size_t count(unsigned deg) { return (deg + 1) * (deg + 2) / 2; }
  static const std::vector<Exps>& monomials(unsigned deg) {
    static const std::array<std::vector<Exps>, 7> table = [] {
      std::array<std::vector<Exps>, 7> t;
      for (unsigned d = 0; d < 7; ++d)
        for (unsigned i = d + 1; i-- > 0;)
          for (unsigned j = d - i + 1; j-- > 0;) t[d].push_back({i, j, d - i - j});
      return t;
    }();
    if (deg >= table.size()) fail(ErrorCode::Internal, "form degree too large");
    return table[deg];
  }
  static std::size_t index(Exps e) {
    const unsigned d = e[0] + e[1] + e[2];
    const unsigned a = d - e[0];  // number of earlier blocks is sum_{i > e0}
    return static_cast<std::size_t>(a) * (a + 1) / 2 + (a - e[1]);
  }

  Field field() const { return f_; }
  unsigned degree() const { return deg_; }
  const std::vector<Element>& coeffs() const { return c_; }
  const Element& coeff(Exps e) const { return c_[index(e)]; }
  Element& coeff(Exps e) { return c_[index(e)]; }
  const Element& operator[](std::size_t i) const { return c_[i]; }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Element& e) { return e.is_zero(); });
  }

  Element operator()(const Element& x, const Element& y, const Element& z) const {
    std::array<std::array<Element, 7>, 3> pw;
    const std::array<Element, 3> v{x, y, z};
    for (int i = 0; i < 3; ++i) {
      pw[i][0] = f_.one();
      for (unsigned k = 1; k <= deg_; ++k) pw[i][k] = pw[i][k - 1] * v[i];
    }
    Element acc = f_.zero();
    const auto& mons = monomials(deg_);
    for (std::size_t m = 0; m < c_.size(); ++m) {
      if (c_[m].is_zero()) continue;
      acc += c_[m] * pw[0][mons[m][0]] * pw[1][mons[m][1]] * pw[2][mons[m][2]];
    }
    return acc;
  }
  Element operator()(const ProjPoint2& p) const { return (*this)(p.x(), p.y(), p.z()); }

  TernaryForm partial(int var) const {
    if (deg_ == 0) return TernaryForm(f_, 0);
    TernaryForm r(f_, deg_ - 1);
    const auto& mons = monomials(deg_);
    for (std::size_t m = 0; m < c_.size(); ++m) {
      Exps e = mons[m];
      if (e[var] == 0 || c_[m].is_zero()) continue;
      const Element k = f_.from_int(e[var]);
      --e[var];
      r.c_[index(e)] += k * c_[m];
    }
    return r;
  }
  std::array<Element, 3> gradient(const ProjPoint2& p) const { return {partial(0)(p), partial(1)(p), partial(2)(p)}; }

  friend TernaryForm operator+(TernaryForm a, const TernaryForm& b) {
    a.check_same(b);
    for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
    return a;
  }
  friend TernaryForm operator-(TernaryForm a, const TernaryForm& b) {
    a.check_same(b);
    for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] -= b.c_[i];
    return a;
  }
  friend TernaryForm operator*(const Element& s, TernaryForm a) {
    for (auto& e : a.c_) e *= s;
    return a;
  }
  friend TernaryForm operator*(const TernaryForm& a, const TernaryForm& b) {
    TernaryForm r(a.f_, a.deg_ + b.deg_);
    const auto& ma = monomials(a.deg_);
    const auto& mb = monomials(b.deg_);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (b.c_[j].is_zero()) continue;
        r.c_[index({ma[i][0] + mb[j][0], ma[i][1] + mb[j][1], ma[i][2] + mb[j][2]})] += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }

  /// The form v -> F(M v).
  TernaryForm substitute(const Mat3& m) const {
    std::array<TernaryForm, 3> lin;
    for (int i = 0; i < 3; ++i) lin[i] = linear(m(i, 0), m(i, 1), m(i, 2));
    std::array<std::vector<TernaryForm>, 3> pw;
    for (int i = 0; i < 3; ++i) {
      pw[i].push_back(TernaryForm(f_, 0, {f_.one()}));
      for (unsigned k = 1; k <= deg_; ++k) pw[i].push_back(pw[i].back() * lin[i]);
    }
    TernaryForm r(f_, deg_);
    const auto& mons = monomials(deg_);
    for (std::size_t m2 = 0; m2 < c_.size(); ++m2) {
      if (c_[m2].is_zero()) continue;
      r = r + c_[m2] * (pw[0][mons[m2][0]] * pw[1][mons[m2][1]] * pw[2][mons[m2][2]]);
    }
    return r;
  }

  TernaryForm embedded(const Field& target) const {
    TernaryForm r(target, deg_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = embed(c_[i], target);
    return r;
  }
  TernaryForm mapped(const Embedding& e) const {
    TernaryForm r(e.target(), deg_);
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = e(c_[i]);
    return r;
  }

  /// Scaled so the first nonzero coefficient is 1.
  TernaryForm normalized() const {
    for (const auto& e : c_)
      if (!e.is_zero()) return e.inverse() * *this;
    return *this;
  }
  bool proportional_to(const TernaryForm& o) const { return deg_ == o.deg_ && f_ == o.f_ && normalized() == o.normalized(); }

  std::string to_string() const {
    static const char* var = "XYZ";
    std::string s;
    const auto& mons = monomials(deg_);
    for (std::size_t m = 0; m < c_.size(); ++m) {
      if (c_[m].is_zero()) continue;
      if (!s.empty()) s += " + ";
      std::string mon;
      for (int v = 0; v < 3; ++v) {
        if (mons[m][v] == 0) continue;
        mon += var[v];
        if (mons[m][v] > 1) mon += "^" + std::to_string(mons[m][v]);
      }
      if (!c_[m].is_one() || mon.empty()) s += f_.is_prime_field() ? c_[m].to_string() : "(" + c_[m].to_string() + ")";
      if (!c_[m].is_one() && !mon.empty()) s += "*";
      s += mon;
    }
    return s.empty() ? "0" : s;
  }

  friend bool operator==(const TernaryForm& a, const TernaryForm& b) { return a.f_ == b.f_ && a.deg_ == b.deg_ && a.c_ == b.c_; }

 private:
  void check_same(const TernaryForm& b) const {
    if (!(f_ == b.f_)) fail(ErrorCode::FieldMismatch, "forms over different fields");
    if (deg_ != b.deg_) fail(ErrorCode::Internal, "forms of different degree");
  }

  Field f_;
  unsigned deg_ = 0;
  std::vector<Element> c_;
};

using TernaryCubic = TernaryForm;

/// Determinant of the matrix of second partials (characteristic >= 5).
inline TernaryCubic hessian_classical(const TernaryCubic& F) {
  if (F.field().characteristic() == 2) fail(ErrorCode::WrongCharacteristic, "the classical Hessian vanishes in characteristic 2");
  std::array<std::array<TernaryForm, 3>, 3> h;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h[i][j] = F.partial(i).partial(j);
  return h[0][0] * (h[1][1] * h[2][2] - h[1][2] * h[2][1]) - h[0][1] * (h[1][0] * h[2][2] - h[1][2] * h[2][0]) +
         h[0][2] * (h[1][0] * h[2][1] - h[1][1] * h[2][0]);
}

namespace detail {
inline void require_char2(const Element& e) {
  if (e.field().characteristic() != 2) fail(ErrorCode::WrongCharacteristic, "characteristic 2 required");
}
}  // namespace detail

/// Y^2Z + XY^2 + X^2Y + XYZ + a2 X^3 + a2 X^2Z + a6 XZ^2.
inline TernaryCubic hessian_char2_ordinary(const Element& a2, const Element& a6) {
  detail::require_char2(a2);
  if (a6.is_zero()) fail(ErrorCode::SingularInput, "a6 = 0 gives a singular curve");
  const Field f = a2.field();
  const Element one = f.one();
  TernaryCubic h(f, 3);
  h.coeff({0, 2, 1}) = one;
  h.coeff({1, 2, 0}) = one;
  h.coeff({2, 1, 0}) = one;
  h.coeff({1, 1, 1}) = one;
  h.coeff({3, 0, 0}) = a2;
  h.coeff({2, 0, 1}) = a2;
  h.coeff({1, 0, 2}) = a6;
  return h;
}

/// XY^2 + a3 XYZ + a4 X^2Z + (a3^2 + a6) XZ^2 + a4^2 Z^3.
inline TernaryCubic hessian_char2_supersingular(const Element& a3, const Element& a4, const Element& a6) {
  detail::require_char2(a3);
  if (a3.is_zero()) fail(ErrorCode::SingularInput, "a3 = 0 gives a singular curve");
  const Field f = a3.field();
  TernaryCubic h(f, 3);
  h.coeff({1, 2, 0}) = f.one();
  h.coeff({1, 1, 1}) = a3;
  h.coeff({2, 0, 1}) = a4;
  h.coeff({1, 0, 2}) = a3 * a3 + a6;
  h.coeff({0, 0, 3}) = a4 * a4;
  return h;
}

/// Recognized characteristic-2 Weierstrass shapes of a cubic, up to scalar.
struct Char2Shape {
  bool ordinary = false;
  Element a2, a3, a4, a6;
};

inline std::optional<Char2Shape> recognize_char2_shape(const TernaryCubic& F) {
  if (F.degree() != 3 || F.field().characteristic() != 2) return std::nullopt;
  const Element lead = F.coeff({3, 0, 0});
  if (lead.is_zero()) return std::nullopt;
  const TernaryCubic G = lead.inverse() * F;
  const Field f = F.field();
  const Element y2z = G.coeff({0, 2, 1});
  if (!y2z.is_one()) return std::nullopt;
  for (TernaryForm::Exps e : {TernaryForm::Exps{2, 1, 0}, {1, 2, 0}, {0, 3, 0}})
    if (!G.coeff(e).is_zero()) return std::nullopt;
  Char2Shape s;
  const Element a1 = G.coeff({1, 1, 1});
  s.a3 = G.coeff({0, 1, 2});
  s.a2 = G.coeff({2, 0, 1});
  s.a4 = G.coeff({1, 0, 2});
  s.a6 = G.coeff({0, 0, 3});
  if (a1.is_one() && s.a3.is_zero() && s.a4.is_zero()) {
    s.ordinary = true;
    return s;
  }
  if (a1.is_zero() && s.a2.is_zero() && !s.a3.is_zero()) return s;
  (void)f;
  return std::nullopt;
}

/// Intersection multiplicity test along the tangent line at a smooth point.
inline bool is_flex(const TernaryCubic& F, const ProjPoint2& P) {
  const Field f = F.field();
  if (!(P.field() == f)) fail(ErrorCode::FieldMismatch, "point and cubic over different fields");
  if (!F(P).is_zero()) fail(ErrorCode::NotOnCurve, "point is not on the cubic");
  const auto g = F.gradient(P);
  if (g[0].is_zero() && g[1].is_zero() && g[2].is_zero()) fail(ErrorCode::SingularPoint, "tangent line undefined at a singular point");
  // Two independent vectors spanning the tangent line's kernel.
  std::array<std::array<Element, 3>, 2> basis;
  if (!g[0].is_zero()) {
    basis[0] = {-g[1] / g[0], f.one(), f.zero()};
    basis[1] = {-g[2] / g[0], f.zero(), f.one()};
  } else if (!g[1].is_zero()) {
    basis[0] = {f.one(), f.zero(), f.zero()};
    basis[1] = {f.zero(), -g[2] / g[1], f.one()};
  } else {
    basis[0] = {f.one(), f.zero(), f.zero()};
    basis[1] = {f.zero(), f.one(), f.zero()};
  }
  std::array<Element, 3> q = basis[0];
  if (ProjPoint2(q[0], q[1], q[2]) == P) q = basis[1];
  // F(P + sQ) as a polynomial in s.
  std::array<Poly, 3> coord;
  for (int i = 0; i < 3; ++i) coord[i] = Poly(f, {P[i], q[i]});
  Poly restricted(f);
  const auto& mons = TernaryForm::monomials(F.degree());
  for (std::size_t m = 0; m < mons.size(); ++m) {
    if (F[m].is_zero()) continue;
    restricted += F[m] * (pow(coord[0], mons[m][0]) * pow(coord[1], mons[m][1]) * pow(coord[2], mons[m][2]));
  }
  return restricted.coeff(0).is_zero() && restricted.coeff(1).is_zero() && restricted.coeff(2).is_zero();
}

namespace detail {

/// Bivariate polynomial in (x, y) as a vector over y-degree of Polys in x.
using BiPoly = std::vector<Poly>;

inline BiPoly affine_chart(const TernaryForm& F) {
  const Field f = F.field();
  BiPoly out(F.degree() + 1, Poly(f));
  const auto& mons = TernaryForm::monomials(F.degree());
  for (std::size_t m = 0; m < mons.size(); ++m) {
    if (F[m].is_zero()) continue;
    out[mons[m][1]] += Poly::monomial(F[m], mons[m][0]);
  }
  while (!out.empty() && out.back().is_zero()) out.pop_back();
  return out;
}

/// Fraction-free determinant over F[x].
inline Poly bareiss_det(std::vector<std::vector<Poly>> m, Field f) {
  const std::size_t n = m.size();
  if (n == 0) return Poly::constant(f.one());
  Poly prev = Poly::constant(f.one());
  bool neg = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t piv = k + 1;
      while (piv < n && m[piv][k].is_zero()) ++piv;
      if (piv == n) return Poly(f);
      std::swap(m[piv], m[k]);
      neg = !neg;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]).exact_div(prev);
    }
    prev = m[k][k];
  }
  return neg ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

/// Resultant in y of two bivariate polynomials, a polynomial in x.
inline Poly resultant_y(const BiPoly& a, const BiPoly& b, Field f) {
  if (a.empty() || b.empty()) return Poly(f);
  const std::size_t da = a.size() - 1, db = b.size() - 1;
  const std::size_t n = da + db;
  if (n == 0) return Poly::constant(f.one());
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n, Poly(f)));
  for (std::size_t r = 0; r < db; ++r)
    for (std::size_t i = 0; i <= da; ++i) m[r][r + i] = a[da - i];
  for (std::size_t r = 0; r < da; ++r)
    for (std::size_t i = 0; i <= db; ++i) m[db + r][r + i] = b[db - i];
  return bareiss_det(std::move(m), f);
}

inline Poly specialize_x(const BiPoly& a, const Element& x0) {
  std::vector<Element> c;
  for (const auto& p : a) c.push_back(p(x0));
  return Poly(x0.field(), std::move(c));
}

}  // namespace detail

/// Common zeros of two forms in P^2(search). Throws DegenerateConfiguration if
/// the forms share a component.
inline std::vector<ProjPoint2> intersect(const TernaryForm& A0, const TernaryForm& B0, const Field& search) {
  const TernaryForm A = A0.embedded(search), B = B0.embedded(search);
  const Field L = search;
  std::set<ProjPoint2> pts;
  // Line at infinity: points (x:1:0) and (1:0:0).
  if (A(L.one(), L.zero(), L.zero()).is_zero() && B(L.one(), L.zero(), L.zero()).is_zero()) pts.insert(ProjPoint2(L.one(), L.zero(), L.zero()));
  {
    auto at_inf = [&](const TernaryForm& F) {
      std::vector<Element> c(F.degree() + 1, L.zero());
      const auto& mons = TernaryForm::monomials(F.degree());
      for (std::size_t m = 0; m < mons.size(); ++m)
        if (mons[m][2] == 0) c[mons[m][0]] += F[m];
      return Poly(L, std::move(c));
    };
    const Poly a = at_inf(A), b = at_inf(B);
    if (a.is_zero() && b.is_zero()) fail(ErrorCode::DegenerateConfiguration, "forms share the line at infinity");
    const Poly g = gcd(a, b);
    for (const auto& x : distinct_roots(g, L)) pts.insert(ProjPoint2(x, L.one(), L.zero()));
  }
  const auto ca = detail::affine_chart(A), cb = detail::affine_chart(B);
  const Poly R = detail::resultant_y(ca, cb, L);
  if (R.is_zero()) fail(ErrorCode::DegenerateConfiguration, "forms share a component");
  for (const auto& x0 : distinct_roots(R, L)) {
    const Poly fa = detail::specialize_x(ca, x0), fb = detail::specialize_x(cb, x0);
    if (fa.is_zero() && fb.is_zero()) fail(ErrorCode::DegenerateConfiguration, "forms share a vertical line");
    const Poly g = gcd(fa, fb);
    if (g.degree() < 1) continue;
    for (const auto& y0 : distinct_roots(g, L)) pts.insert(ProjPoint2(x0, y0, L.one()));
  }
  return {pts.begin(), pts.end()};
}

/// A singular point with coordinates in `search`, if any.
inline std::optional<ProjPoint2> cubic_is_singular(const TernaryCubic& F0, const Field& search) {
  const TernaryCubic F = F0.embedded(search);
  const TernaryForm fx = F.partial(0), fy = F.partial(1), fz = F.partial(2);
  auto singular_at = [&](const ProjPoint2& p) { return F(p).is_zero() && fx(p).is_zero() && fy(p).is_zero() && fz(p).is_zero(); };
  // Try the algebraic route on each pair of partials, then fall back to a scan.
  const std::array<std::pair<const TernaryForm*, const TernaryForm*>, 3> pairs{{{&fx, &fy}, {&fx, &fz}, {&fy, &fz}}};
  for (auto [a, b] : pairs) {
    if (a->is_zero() || b->is_zero()) continue;
    try {
      for (const auto& p : intersect(*a, *b, search))
        if (singular_at(p)) return p;
      return std::nullopt;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateConfiguration) throw;
    }
  }
  for (const auto& p : all_points_p2(search))
    if (singular_at(p)) return p;
  return std::nullopt;
}

/// Flex points of a smooth cubic with coordinates in `search`.
inline std::vector<ProjPoint2> flex_points(const TernaryCubic& F, const Field& search) {
  const unsigned p = F.field().characteristic();
  TernaryCubic H;
  if (p == 2) {
    const auto shape = recognize_char2_shape(F);
    if (!shape) fail(ErrorCode::UnsupportedShape, "characteristic-2 flexes need a Weierstrass cubic");
    H = shape->ordinary ? hessian_char2_ordinary(shape->a2, shape->a6) : hessian_char2_supersingular(shape->a3, shape->a4, shape->a6);
  } else {
    H = hessian_classical(F);
  }
  if (search.order() && *search.order() <= 4096) {
    if (auto s = cubic_is_singular(F, search)) fail(ErrorCode::SingularInput, "cubic is singular at " + s->to_string());
  } else if (auto s = cubic_is_singular(F, F.field())) {
    fail(ErrorCode::SingularInput, "cubic is singular at " + s->to_string());
  }
  std::vector<ProjPoint2> out;
  const TernaryCubic FL = F.embedded(search);
  for (const auto& P : intersect(F, H, search)) {
    if (!is_flex(FL, P)) fail(ErrorCode::Internal, "Hessian intersection point is not a flex");
    out.push_back(P);
  }
  return out;
}

}  // namespace hesse3
