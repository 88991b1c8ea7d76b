#pragma once

// Weierstrass curves in three shapes: short (p >= 5), and the ordinary and
// supersingular normal forms in characteristic 2.

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hesse3/cubic.hpp"
#include "hesse3/factor.hpp"
#include "hesse3/projective.hpp"

namespace hesse3 {

enum class Shape { ShortW, Char2Ord, Char2SS };

inline const char* shape_name(Shape s) {
  switch (s) {
    case Shape::ShortW: return "shortw";
    case Shape::Char2Ord: return "ord2";
    case Shape::Char2SS: return "ss2";
  }
  return "?";
}

/// Affine point or the point at infinity (0:1:0).
struct Point {
  bool infinity = true;
  Element x, y;

  static Point at_infinity() { return Point{}; }
  static Point affine(Element x, Element y) { return Point{false, std::move(x), std::move(y)}; }

  bool is_infinity() const { return infinity; }
  ProjPoint2 to_proj(const Field& f) const {
    if (infinity) return ProjPoint2(f.zero(), f.one(), f.zero());
    return ProjPoint2(x, y, f.one());
  }
  static Point from_proj(const ProjPoint2& p) {
    if (p.z().is_zero()) return at_infinity();
    return affine(p.x(), p.y());
  }
  Point frobenius(unsigned times) const { return infinity ? *this : affine(x.frobenius(times), y.frobenius(times)); }
  Point mapped(const Embedding& e) const { return infinity ? *this : affine(e(x), e(y)); }

  std::string to_string() const { return infinity ? "O" : "(" + x.to_string() + ", " + y.to_string() + ")"; }

  friend bool operator==(const Point& a, const Point& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator<(const Point& a, const Point& b) {
    if (a.infinity || b.infinity) return a.infinity && !b.infinity;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

/// a1..a6 of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6, indexed a[1..6] (a[0], a[5] unused).
using WCoeffs = std::array<Element, 7>;

/// Coefficients after x = u^2 x' + r, y = u^3 y' + s u^2 x' + w.
inline WCoeffs weierstrass_transform(const WCoeffs& a, const Element& u, const Element& r, const Element& s, const Element& w) {
  const Field f = u.field();
  auto k = [&](long long v) { return f.from_int(v); };
  const Element u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  WCoeffs out = a;
  out[1] = (a[1] + k(2) * s) / u;
  out[2] = (a[2] - s * a[1] + k(3) * r - s * s) / u2;
  out[3] = (a[3] + r * a[1] + k(2) * w) / u3;
  out[4] = (a[4] - s * a[3] + k(2) * r * a[2] - (w + r * s) * a[1] + k(3) * r * r - k(2) * s * w) / u4;
  out[6] = (a[6] + r * a[4] + r * r * a[2] + r * r * r - w * a[3] - w * w - r * w * a[1]) / u6;
  return out;
}

class EllipticModel {
 public:
  EllipticModel() = default;

  static EllipticModel shortw(const Element& a, const Element& b) {
    const Field f = a.field();
    if (f.characteristic() == 2) fail(ErrorCode::WrongCharacteristic, "short Weierstrass form needs p >= 5");
    EllipticModel e(f, Shape::ShortW);
    e.a_[4] = a;
    e.a_[6] = b;
    e.check_smooth();
    return e;
  }
  static EllipticModel ord2(const Element& a2, const Element& a6) {
    const Field f = a2.field();
    if (f.characteristic() != 2) fail(ErrorCode::WrongCharacteristic, "ordinary char-2 form needs p = 2");
    EllipticModel e(f, Shape::Char2Ord);
    e.a_[1] = f.one();
    e.a_[2] = a2;
    e.a_[6] = a6;
    e.check_smooth();
    return e;
  }
  static EllipticModel ss2(const Element& a3, const Element& a4, const Element& a6) {
    const Field f = a3.field();
    if (f.characteristic() != 2) fail(ErrorCode::WrongCharacteristic, "supersingular char-2 form needs p = 2");
    EllipticModel e(f, Shape::Char2SS);
    e.a_[3] = a3;
    e.a_[4] = a4;
    e.a_[6] = a6;
    e.check_smooth();
    return e;
  }

  struct Normalized;
  /// Normalizes a general Weierstrass equation into one of the three shapes
  /// by x = u^2 x' + r, y = u^3 y' + s u^2 x' + w.
  static Normalized from_general(const WCoeffs& a);

  Field field() const { return f_; }
  Shape shape() const { return shape_; }
  const WCoeffs& coeffs() const { return a_; }
  const Element& a(int i) const { return a_[i]; }

  /// Named parameters of the shape: (a, b), (a2, a6) or (a3, a4, a6).
  std::vector<std::pair<std::string, Element>> params() const {
    switch (shape_) {
      case Shape::ShortW: return {{"a", a_[4]}, {"b", a_[6]}};
      case Shape::Char2Ord: return {{"a2", a_[2]}, {"a6", a_[6]}};
      case Shape::Char2SS: return {{"a3", a_[3]}, {"a4", a_[4]}, {"a6", a_[6]}};
    }
    return {};
  }

  std::array<Element, 4> b_invariants() const {
    const auto k = [&](long long v) { return f_.from_int(v); };
    const Element b2 = a_[1] * a_[1] + k(4) * a_[2];
    const Element b4 = k(2) * a_[4] + a_[1] * a_[3];
    const Element b6 = a_[3] * a_[3] + k(4) * a_[6];
    const Element b8 = a_[1] * a_[1] * a_[6] + k(4) * a_[2] * a_[6] - a_[1] * a_[3] * a_[4] + a_[2] * a_[3] * a_[3] - a_[4] * a_[4];
    return {b2, b4, b6, b8};
  }

  Element discriminant() const {
    switch (shape_) {
      case Shape::ShortW: {
        const Element a = a_[4], b = a_[6];
        return f_.from_int(-16) * (f_.from_int(4) * a * a * a + f_.from_int(27) * b * b);
      }
      case Shape::Char2Ord: return a_[6];
      case Shape::Char2SS: return a_[3].pow(4);
    }
    return f_.zero();
  }

  Element j_invariant() const {
    const Element d = discriminant();
    if (d.is_zero()) fail(ErrorCode::SingularCurve, "singular curve");
    switch (shape_) {
      case Shape::ShortW: {
        const Element a3 = a_[4] * a_[4] * a_[4];
        return f_.from_int(6912) * a3 / (f_.from_int(4) * a3 + f_.from_int(27) * a_[6] * a_[6]);
      }
      case Shape::Char2Ord: return a_[6].inverse();
      case Shape::Char2SS: return f_.zero();
    }
    return f_.zero();
  }

  /// Y^2Z + a1 XYZ + a3 YZ^2 - X^3 - a2 X^2Z - a4 XZ^2 - a6 Z^3.
  TernaryCubic cubic() const {
    TernaryCubic c(f_, 3);
    c.coeff({0, 2, 1}) = f_.one();
    c.coeff({1, 1, 1}) = a_[1];
    c.coeff({0, 1, 2}) = a_[3];
    c.coeff({3, 0, 0}) = -f_.one();
    c.coeff({2, 0, 1}) = -a_[2];
    c.coeff({1, 0, 2}) = -a_[4];
    c.coeff({0, 0, 3}) = -a_[6];
    return c;
  }

  EllipticModel base_change(const Field& target) const {
    if (target == f_) return *this;
    EllipticModel e(target, shape_);
    for (int i = 1; i <= 6; ++i) e.a_[i] = embed(a_[i], target);
    return e;
  }
  EllipticModel mapped(const Embedding& emb) const {
    EllipticModel e(emb.target(), shape_);
    for (int i = 1; i <= 6; ++i) e.a_[i] = emb(a_[i]);
    return e;
  }
  /// Same curve with coefficients pulled back into a subfield, if possible.
  std::optional<EllipticModel> restricted(const Embedding& emb) const {
    EllipticModel e(emb.source(), shape_);
    for (int i = 1; i <= 6; ++i) {
      auto v = emb.preimage(a_[i]);
      if (!v) return std::nullopt;
      e.a_[i] = *v;
    }
    return e;
  }

  bool contains(const Point& P) const {
    if (P.infinity) return true;
    check_field(P);
    const Element& x = P.x;
    const Element& y = P.y;
    return (y * y + a_[1] * x * y + a_[3] * y - x * x * x - a_[2] * x * x - a_[4] * x - a_[6]).is_zero();
  }
  void require_on(const Point& P) const {
    if (!contains(P)) fail(ErrorCode::NotOnCurve, "point " + P.to_string() + " is not on the curve");
  }

  Point neg(const Point& P) const {
    if (P.infinity) return P;
    return Point::affine(P.x, -P.y - a_[1] * P.x - a_[3]);
  }

  Point add(const Point& P, const Point& Q) const {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    check_field(P);
    check_field(Q);
    const auto k = [&](long long v) { return f_.from_int(v); };
    Element lambda, nu;
    if (P.x == Q.x) {
      if ((P.y + Q.y + a_[1] * Q.x + a_[3]).is_zero()) return Point::at_infinity();
      const Element den = k(2) * P.y + a_[1] * P.x + a_[3];
      lambda = (k(3) * P.x * P.x + k(2) * a_[2] * P.x + a_[4] - a_[1] * P.y) / den;
      nu = (-P.x * P.x * P.x + a_[4] * P.x + k(2) * a_[6] - a_[3] * P.y) / den;
    } else {
      const Element den = Q.x - P.x;
      lambda = (Q.y - P.y) / den;
      nu = (P.y * Q.x - Q.y * P.x) / den;
    }
    const Element x3 = lambda * lambda + a_[1] * lambda - a_[2] - P.x - Q.x;
    const Element y3 = -(lambda + a_[1]) * x3 - nu - a_[3];
    return Point::affine(x3, y3);
  }

  Point sub(const Point& P, const Point& Q) const { return add(P, neg(Q)); }

  Point mul(long long n, const Point& P) const {
    Point base = n < 0 ? neg(P) : P;
    unsigned long long m = n < 0 ? static_cast<unsigned long long>(-(n + 1)) + 1 : static_cast<unsigned long long>(n);
    Point acc = Point::at_infinity();
    while (m) {
      if (m & 1) acc = add(acc, base);
      m >>= 1;
      if (m) base = add(base, base);
    }
    return acc;
  }

  /// Smallest n >= 1 with nP = O, searched up to `limit`.
  std::optional<unsigned> order_of(const Point& P, unsigned limit = 1u << 16) const {
    Point acc = P;
    for (unsigned n = 1; n <= limit; ++n) {
      if (acc.infinity) return n;
      acc = add(acc, P);
    }
    return std::nullopt;
  }

  std::string to_string() const {
    std::string s = shape_name(shape_);
    s += ":";
    bool first = true;
    for (const auto& [name, v] : params()) {
      if (!first) s += ",";
      first = false;
      s += name + "=" + v.to_string();
    }
    return s;
  }

  friend bool operator==(const EllipticModel& a, const EllipticModel& b) { return a.f_ == b.f_ && a.shape_ == b.shape_ && a.a_ == b.a_; }

 private:
  EllipticModel(Field f, Shape s) : f_(f), shape_(s) { a_.fill(f.zero()); }

  void check_smooth() const {
    if (discriminant().is_zero()) fail(ErrorCode::SingularCurve, "discriminant vanishes");
  }
  void check_field(const Point& P) const {
    if (!(P.x.field() == f_)) fail(ErrorCode::FieldMismatch, "point and curve over different fields");
  }

  Field f_;
  Shape shape_ = Shape::ShortW;
  WCoeffs a_;
};

struct EllipticModel::Normalized {
  EllipticModel curve;
  Element u, r, s, w;
};

inline EllipticModel::Normalized EllipticModel::from_general(const WCoeffs& a) {
  const Field f = a[1].field();
  const Element z = f.zero(), one = f.one();
  if (f.characteristic() != 2) {
    const Element two = f.from_int(2);
    const Element s = -a[1] / two;
    const Element b2 = a[1] * a[1] + f.from_int(4) * a[2];
    const Element r = -b2 / f.from_int(12);
    const Element w = -(a[3] + r * a[1]) / two;
    const WCoeffs b = weierstrass_transform(a, one, r, s, w);
    return {shortw(b[4], b[6]), one, r, s, w};
  }
  if (!a[1].is_zero()) {
    const Element u = a[1], r = a[3] / a[1];
    const Element w = (a[4] + r * r) / a[1];
    const WCoeffs b = weierstrass_transform(a, u, r, z, w);
    return {ord2(b[2], b[6]), u, r, z, w};
  }
  const Element r = a[2];
  const WCoeffs b = weierstrass_transform(a, one, r, z, z);
  return {ss2(b[3], b[4], b[6]), one, r, z, z};
}

inline Element curve_discriminant(const EllipticModel& E) { return E.discriminant(); }

/// All rational points over F (O first, then affine points in increasing order).
inline std::vector<Point> points_over(const EllipticModel& E0, const Field& F, std::uint64_t bound = 4096) {
  F.order_at_most(bound);
  const EllipticModel E = E0.base_change(F);
  std::vector<Point> out{Point::at_infinity()};
  const auto& a = E.coeffs();
  for (const auto& x : all_elements(F, bound)) {
    // y^2 + (a1 x + a3) y - rhs = 0
    const Element lin = a[1] * x + a[3];
    const Element rhs = x * x * x + a[2] * x * x + a[4] * x + a[6];
    for (const auto& y : distinct_roots(Poly(F, {-rhs, lin, F.one()}), F)) out.push_back(Point::affine(x, y));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// x = u^2 x' + r, y = u^3 y' + s u^2 x' + w, carrying `source` onto `target`.
struct CurveIso {
  EllipticModel source, target;
  Element u, r, s, w;

  /// Image of a source point on the target.
  Point operator()(const Point& P) const {
    if (P.infinity) return P;
    const Element u2 = u * u, u3 = u2 * u;
    const Element xp = (P.x - r) / u2;
    const Element yp = (P.y - s * u2 * xp - w) / u3;
    return Point::affine(xp, yp);
  }
  /// Image of a target point on the source.
  Point inverse_apply(const Point& P) const {
    if (P.infinity) return P;
    const Element u2 = u * u;
    return Point::affine(u2 * P.x + r, u2 * u * P.y + s * u2 * P.x + w);
  }

  CurveIso inverse() const {
    const Element ui = u.inverse();
    const Element u2 = ui * ui;
    // x' = u^-2 (x - r), y' = u^-3 (y - s(x - r) - w)
    return CurveIso{target, source, ui, -r * u2, -s * ui, (r * s - w) * u2 * ui};
  }

  /// this after other: other maps A -> B, this maps B -> C.
  CurveIso after(const CurveIso& other) const {
    // x_A = uo^2 x_B + ro, x_B = u^2 x_C + r.
    const Element& uo = other.u;
    const Element uu = uo * u;
    const Element uo2 = uo * uo;
    const Element nr = uo2 * r + other.r;
    const Element ns = other.s + s * uo;
    const Element nw = uo2 * uo * w + other.s * uo2 * r + other.w;
    return CurveIso{other.source, target, uu, nr, ns, nw};
  }

  /// Projective matrix sending target coordinates to source coordinates.
  Mat3 matrix() const {
    const Field f = u.field();
    Mat3 m = Mat3::zero(f);
    const Element u2 = u * u;
    m(0, 0) = u2;
    m(0, 2) = r;
    m(1, 0) = s * u2;
    m(1, 1) = u2 * u;
    m(1, 2) = w;
    m(2, 2) = f.one();
    return m;
  }

  /// Checks the substitution maps the source equation onto the target one.
  bool valid() const {
    if (u.is_zero()) return false;
    return weierstrass_transform(source.coeffs(), u, r, s, w) == target.coeffs();
  }

  bool is_identity() const { return u.is_one() && r.is_zero() && s.is_zero() && w.is_zero(); }

  std::string to_string() const {
    return "u=" + u.to_string() + " r=" + r.to_string() + " s=" + s.to_string() + " w=" + w.to_string();
  }
};

/// All isomorphisms E -> E' defined over F.
inline std::vector<CurveIso> isomorphisms_over(const EllipticModel& E0, const EllipticModel& E1, const Field& F) {
  const EllipticModel E = E0.base_change(F), Ep = E1.base_change(F);
  std::vector<CurveIso> out;
  if (E.shape() != Ep.shape()) return out;
  const Element z = F.zero(), one = F.one();
  const auto& a = E.coeffs();
  const auto& b = Ep.coeffs();
  switch (E.shape()) {
    case Shape::ShortW: {
      // u^4 a' = a, u^6 b' = b
      Poly g(F);
      const Poly p4 = Poly::monomial(b[4], 4) - Poly::constant(a[4]);
      const Poly p6 = Poly::monomial(b[6], 6) - Poly::constant(a[6]);
      g = gcd(p4, p6);
      if (g.is_zero()) fail(ErrorCode::Internal, "degenerate isomorphism system");
      for (const auto& u : distinct_roots(g, F))
        if (!u.is_zero()) out.push_back({E, Ep, u, z, z, z});
      break;
    }
    case Shape::Char2Ord: {
      if (a[6] != b[6]) break;
      for (const auto& s : distinct_roots(Poly(F, {a[2] + b[2], one, one}), F)) out.push_back({E, Ep, one, z, s, z});
      break;
    }
    case Shape::Char2SS: {
      for (const auto& u : distinct_roots(Poly(F, {a[3] / b[3], z, z, one}), F)) {
        const Element u4 = u.pow(4), u6 = u.pow(6);
        for (const auto& s : distinct_roots(Poly(F, {a[4] + u4 * b[4], a[3], z, z, one}), F)) {
          const Element c0 = a[6] + s * s * a[4] + s.pow(6) + u6 * b[6];
          for (const auto& w : distinct_roots(Poly(F, {c0, a[3], one}), F)) out.push_back({E, Ep, u, s * s, s, w});
        }
      }
      break;
    }
  }
  for (const auto& iso : out)
    if (!iso.valid()) fail(ErrorCode::Internal, "isomorphism failed verification");
  return out;
}

inline std::optional<CurveIso> isomorphism_over(const EllipticModel& E, const EllipticModel& Ep, const Field& F) {
  auto all = isomorphisms_over(E, Ep, F);
  if (all.empty()) return std::nullopt;
  return all.front();
}

inline std::vector<CurveIso> automorphisms(const EllipticModel& E, const Field& F) { return isomorphisms_over(E, E, F); }

}  // namespace hesse3
