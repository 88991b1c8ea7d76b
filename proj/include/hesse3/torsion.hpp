#pragma once

// 3-torsion: division polynomial, the 3-torsion field, Weil pairing (tangent
// lines and Miller), Frobenius matrices over F_3.

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hesse3/cubic.hpp"
#include "hesse3/elliptic.hpp"
#include "hesse3/factor.hpp"

namespace hesse3 {

/// 2x2 matrix over F_3, entries in {0, 1, 2}.
struct Mat2F3 {
  std::array<std::array<int, 2>, 2> m{{{1, 0}, {0, 1}}};

  static Mat2F3 identity() { return {}; }
  static Mat2F3 of(int a, int b, int c, int d) {
    Mat2F3 r;
    r.m = {{{mod3(a), mod3(b)}, {mod3(c), mod3(d)}}};
    return r;
  }
  static int mod3(int v) { return ((v % 3) + 3) % 3; }

  int operator()(int i, int j) const { return m[i][j]; }
  int det() const { return mod3(m[0][0] * m[1][1] - m[0][1] * m[1][0]); }
  friend Mat2F3 operator*(const Mat2F3& a, const Mat2F3& b) {
    Mat2F3 r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r.m[i][j] = mod3(a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j]);
    return r;
  }
  Mat2F3 inverse() const {
    const int d = det();
    if (d == 0) fail(ErrorCode::DegenerateConfiguration, "singular F_3 matrix");
    const int di = d;  // 1^-1 = 1, 2^-1 = 2
    return of(m[1][1] * di, -m[0][1] * di, -m[1][0] * di, m[0][0] * di);
  }
  std::string to_string() const {
    return "[[" + std::to_string(m[0][0]) + "," + std::to_string(m[0][1]) + "],[" + std::to_string(m[1][0]) + "," + std::to_string(m[1][1]) + "]]";
  }
  friend bool operator==(const Mat2F3&, const Mat2F3&) = default;
};

/// All 48 elements of GL_2(F_3) in a fixed order.
/// All 48 invertible matrices: the identity, then the rest in entry order.
inline std::vector<Mat2F3> gl2_f3() {
  std::vector<Mat2F3> out{Mat2F3::identity()};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int d = 0; d < 3; ++d) {
          auto m = Mat2F3::of(a, b, c, d);
          if (m.det() != 0 && !(m == Mat2F3::identity())) out.push_back(m);
        }
  return out;
}

/// 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8.
inline Poly psi3(const EllipticModel& E) {
  const Field f = E.field();
  const auto b = E.b_invariants();
  const Element three = f.from_int(3);
  return Poly(f, {b[3], three * b[2], three * b[1], b[0], three});
}

/// Minimal primitive element of F (smallest by index).
inline Element minimal_primitive_element(const Field& f) {
  const auto order = f.order();
  if (!order) fail(ErrorCode::FieldTooLarge, "field order overflows");
  const std::uint64_t n = *order - 1;
  const auto primes = detail::prime_factors(n);
  for (std::uint64_t i = 1; i <= *order; ++i) {
    const Element g = f.at(i);
    if (g.is_zero()) continue;
    bool ok = true;
    for (auto r : primes) {
      if (g.pow(n / r).is_one()) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  fail(ErrorCode::Internal, "no primitive element");
}

/// k(mu_3): k itself when 3 | |k| - 1, otherwise its quadratic extension.
inline Field cyclotomic3_field(const Field& k) {
  const auto q = k.order();
  if (q && (*q % 3) == 1) return k;
  return extension_of(k, 2);
}

/// Canonical primitive cube root of unity of k(mu_3): g^((|K|-1)/3) for the
/// minimal primitive element g.
inline Element canonical_zeta3(const Field& k) {
  const Field K = cyclotomic3_field(k);
  static std::mutex mu;
  static std::map<std::uint64_t, Element> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(K.data()->serial);
  if (it != cache.end()) return it->second;
  const Element g = minimal_primitive_element(K);
  const Element z = g.pow((*K.order() - 1) / 3);
  cache.emplace(K.data()->serial, z);
  return z;
}

/// The canonical cube root of unity of k transported into an extension L.
inline Element canonical_zeta3_in(const Field& k, const Field& L) {
  const Field K = cyclotomic3_field(k);
  return (*embedding(K, L, {k}))(canonical_zeta3(k));
}

/// Tangent line at a smooth point of a cubic, first nonzero coefficient 1.
struct TangentLine {
  ProjPoint2 base;
  std::array<Element, 3> coeffs;

  Element operator()(const ProjPoint2& P) const { return coeffs[0] * P.x() + coeffs[1] * P.y() + coeffs[2] * P.z(); }
};

inline TangentLine tangent_line(const TernaryCubic& F, const ProjPoint2& P) {
  auto g = F.gradient(P);
  if (g[0].is_zero() && g[1].is_zero() && g[2].is_zero()) fail(ErrorCode::SingularPoint, "no tangent at a singular point");
  for (const auto& e : g) {
    if (!e.is_zero()) {
      const Element inv = e.inverse();
      for (auto& c : g) c *= inv;
      break;
    }
  }
  return TangentLine{P, g};
}

/// Third intersection of the line through distinct points P, Q with F.
inline ProjPoint2 third_point(const TernaryCubic& F, const ProjPoint2& P, const ProjPoint2& Q) {
  const Field f = F.field();
  // F(l P + m Q) = l m (alpha l + beta m)
  Poly lam(f, {P.x(), Q.x()}), mu(f, {P.y(), Q.y()}), nu(f, {P.z(), Q.z()});
  // Dehomogenize at l = 1: polynomial in m of degree <= 3; coefficient of m is alpha, of m^2 beta.
  Poly r(f);
  const auto& mons = TernaryForm::monomials(3);
  for (std::size_t k = 0; k < mons.size(); ++k) {
    if (F[k].is_zero()) continue;
    r += F[k] * (pow(lam, mons[k][0]) * pow(mu, mons[k][1]) * pow(nu, mons[k][2]));
  }
  const Element alpha = r.coeff(1), beta = r.coeff(2);
  if (!r.coeff(0).is_zero() || !r.coeff(3).is_zero()) fail(ErrorCode::NotOnCurve, "points are not on the cubic");
  if (beta.is_zero()) return Q;  // line tangent at Q
  // root m = -alpha / beta with l = 1
  const Element m = -alpha / beta;
  return ProjPoint2(P.x() + m * Q.x(), P.y() + m * Q.y(), P.z() + m * Q.z());
}

/// e_3(S, T) on a smooth cubic with flex O, from tangent lines at O, S, T, -T.
/// Degenerate inputs (S = O, T = O, T = +-S) give 1.
inline Element weil_pairing_tangent(const TernaryCubic& F, const ProjPoint2& O, const ProjPoint2& S, const ProjPoint2& T) {
  const Field f = F.field();
  if (S == O || T == O || S == T) return f.one();
  const ProjPoint2 negT = third_point(F, O, T);
  if (negT == S) return f.one();
  const TangentLine LO = tangent_line(F, O), LS = tangent_line(F, S), LT = tangent_line(F, T), LnT = tangent_line(F, negT);
  const Element num = LS(T) * LO(negT) * LT(O) * LnT(S);
  const Element den = LO(T) * LS(negT) * LnT(O) * LT(S);
  if (den.is_zero() || num.is_zero()) fail(ErrorCode::DegenerateConfiguration, "overlapping divisor supports");
  const Element v = num / den;
  return v * v;
}

inline Element weil_pairing_tangent(const EllipticModel& E0, const Point& S, const Point& T) {
  if (S.infinity || T.infinity) return E0.field().one();
  const Field L = S.x.field();
  const EllipticModel E = E0.base_change(L);
  E.require_on(S);
  E.require_on(T);
  const ProjPoint2 O(L.zero(), L.one(), L.zero());
  return weil_pairing_tangent(E.cubic(), O, S.to_proj(L), T.to_proj(L));
}

namespace detail {

/// Line through P and Q (tangent if equal) evaluated at X, with the vertical
/// line at the sum as denominator. Returns nullopt on a zero denominator.
struct MillerStep {
  Point sum;
  Element value;
  bool ok;
};

inline MillerStep miller_step(const EllipticModel& E, const Point& P, const Point& Q, const Point& X) {
  const Field f = E.field();
  const auto& a = E.coeffs();
  const Point R = E.add(P, Q);
  if (P.infinity || Q.infinity) return {R, f.one(), true};  // after a 2-torsion doubling
  Element num;
  if (P.x == Q.x && (P.y + Q.y + a[1] * Q.x + a[3]).is_zero()) {
    num = X.x - P.x;  // vertical line; R = O
    return {R, num, true};
  }
  Element lambda;
  if (P == Q) {
    lambda = (f.from_int(3) * P.x * P.x + f.from_int(2) * a[2] * P.x + a[4] - a[1] * P.y) / (f.from_int(2) * P.y + a[1] * P.x + a[3]);
  } else {
    lambda = (Q.y - P.y) / (Q.x - P.x);
  }
  num = X.y - P.y - lambda * (X.x - P.x);
  const Element den = R.infinity ? f.one() : X.x - R.x;
  if (den.is_zero()) return {R, f.zero(), false};
  return {R, num / den, true};
}

/// f_{3,P}(X) with divisor 3(P) - (3P) - 2(O).
inline std::optional<Element> miller3(const EllipticModel& E, const Point& P, const Point& X) {
  auto s1 = miller_step(E, P, P, X);
  if (!s1.ok) return std::nullopt;
  auto s2 = miller_step(E, s1.sum, P, X);
  if (!s2.ok) return std::nullopt;
  return s1.value * s2.value;
}

inline std::optional<Point> random_point(const EllipticModel& E, std::mt19937_64& rng) {
  const Field f = E.field();
  const auto& a = E.coeffs();
  for (int tries = 0; tries < 64; ++tries) {
    const Element x = random_element(f, rng);
    const Element lin = a[1] * x + a[3];
    const Element rhs = x * x * x + a[2] * x * x + a[4] * x + a[6];
    auto ys = distinct_roots(Poly(f, {-rhs, lin, f.one()}), f);
    if (ys.empty()) continue;
    return Point::affine(x, ys[rng() % ys.size()]);
  }
  return std::nullopt;
}

}  // namespace detail

/// e_3(S, T) via Miller functions with random auxiliary points, evaluated in
/// an extension with enough points and pulled back to the points' field.
inline Element weil_pairing_miller(const EllipticModel& E0, const Point& S0, const Point& T0) {
  if (S0.infinity || T0.infinity) return E0.field().one();
  const Field L = S0.x.field();
  const EllipticModel EL = E0.base_change(L);
  EL.require_on(S0);
  EL.require_on(T0);
  const Field M = extension_of(L, 2);
  const auto emb = embedding(L, M);
  const EllipticModel E = EL.mapped(*emb);
  const Point S = S0.mapped(*emb), T = T0.mapped(*emb);
  std::mt19937_64 rng(random_seed().load() ^ 0x9e3779b97f4a7c15ULL);
  for (int attempt = 0; attempt < 200; ++attempt) {
    auto R1 = detail::random_point(E, rng);
    auto R2 = detail::random_point(E, rng);
    if (!R1 || !R2) continue;
    const Point SR = E.add(S, *R1), TR = E.add(T, *R2);
    if (SR.infinity || TR.infinity) continue;
    // g_S = f(S+R1)/f(R1) has divisor 3(S+R1) - 3(R1); same for g_T.
    auto g = [&](const Point& A, const Point& B, const Point& X) -> std::optional<Element> {
      auto fa = detail::miller3(E, A, X);
      auto fb = detail::miller3(E, B, X);
      if (!fa || !fb || fa->is_zero() || fb->is_zero()) return std::nullopt;
      return *fa / *fb;
    };
    auto n1 = g(SR, *R1, TR), n2 = g(SR, *R1, *R2), d1 = g(TR, *R2, SR), d2 = g(TR, *R2, *R1);
    if (!n1 || !n2 || !d1 || !d2) continue;
    const Element v = (*n1 / *n2) / (*d1 / *d2);
    if (!v.pow(3).is_one()) continue;
    auto back = emb->preimage(v);
    if (!back) fail(ErrorCode::Internal, "pairing value outside the torsion field");
    return *back;
  }
  fail(ErrorCode::Internal, "Miller pairing kept hitting degenerate auxiliary points");
}

/// E[3] over its minimal field of definition with a symplectic basis.
struct TorsionBasis {
  EllipticModel curve;     // over the base field k
  Field field;             // F_{q^m}
  unsigned m = 1;          // degree over k
  EllipticModel curve_ext; // curve over `field`
  std::vector<Point> points;  // all nine, O first
  Point S, T;
  Element zeta;

  /// a S + b T.
  Point combo(int a, int b) const { return curve_ext.add(curve_ext.mul(a, S), curve_ext.mul(b, T)); }
  /// Coordinates (a, b) with P = aS + bT.
  std::pair<int, int> coords(const Point& P) const {
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (combo(a, b) == P) return {a, b};
    fail(ErrorCode::NotOnCurve, "point is not 3-torsion");
  }
};

namespace detail {

inline unsigned torsion_degree(const EllipticModel& E) {
  const Poly psi = psi3(E);
  unsigned m = splitting_degree(psi);
  const Field k = E.field();
  const Field T = extension_of(k, m);
  const EllipticModel ET = E.base_change(T);
  const auto& a = ET.coeffs();
  for (const auto& x : distinct_roots(psi, T)) {
    const Element lin = a[1] * x + a[3];
    const Element rhs = x * x * x + a[2] * x * x + a[4] * x + a[6];
    if (poly_roots(Poly(T, {-rhs, lin, T.one()}), T).empty()) return 2 * m;
  }
  return m;
}

inline std::vector<Point> three_torsion_points(const EllipticModel& ET, const Poly& psi) {
  const Field T = ET.field();
  const auto& a = ET.coeffs();
  std::vector<Point> pts{Point::at_infinity()};
  for (const auto& x : distinct_roots(psi, T)) {
    const Element lin = a[1] * x + a[3];
    const Element rhs = x * x * x + a[2] * x * x + a[4] * x + a[6];
    for (const auto& y : distinct_roots(Poly(T, {-rhs, lin, T.one()}), T)) pts.push_back(Point::affine(x, y));
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace detail

/// Builds E[3] over the minimal extension of the curve's field and a basis
/// (S, T) with e_3(S, T) equal to the canonical cube root of unity.
inline TorsionBasis torsion3(const EllipticModel& E) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const TorsionBasis>> cache;
  const std::string key = E.field().to_string() + "|" + E.to_string();
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  TorsionBasis tb;
  tb.curve = E;
  tb.m = detail::torsion_degree(E);
  tb.field = extension_of(E.field(), tb.m);
  tb.curve_ext = E.base_change(tb.field);
  tb.points = detail::three_torsion_points(tb.curve_ext, embed(psi3(E), tb.field));
  if (tb.points.size() != 9) fail(ErrorCode::Internal, "expected nine 3-torsion points");
  tb.zeta = canonical_zeta3_in(E.field(), tb.field);
  tb.S = tb.points[1];
  const Point negS = tb.curve_ext.neg(tb.S);
  for (std::size_t i = 2; i < tb.points.size(); ++i) {
    if (tb.points[i] == negS) continue;
    tb.T = tb.points[i];
    break;
  }
  const Element e = weil_pairing_tangent(tb.curve_ext, tb.S, tb.T);
  if (e != tb.zeta) tb.T = tb.curve_ext.neg(tb.T);
  if (weil_pairing_tangent(tb.curve_ext, tb.S, tb.T) != tb.zeta) fail(ErrorCode::Internal, "basis does not reach the canonical root of unity");
  std::lock_guard lock(mu);
  cache.emplace(key, std::make_shared<const TorsionBasis>(tb));
  return tb;
}

/// Matrix of the |k|-power Frobenius on E[3] in the basis (S, T): columns are
/// the coordinates of phi(S) and phi(T).
inline Mat2F3 frobenius_matrix(const TorsionBasis& tb, unsigned power_of_p) {
  const Point fS = tb.S.frobenius(power_of_p), fT = tb.T.frobenius(power_of_p);
  auto [a, b] = tb.coords(fS);
  auto [c, d] = tb.coords(fT);
  return Mat2F3::of(a, c, b, d);
}

inline Mat2F3 frobenius_matrix(const TorsionBasis& tb) { return frobenius_matrix(tb, tb.curve.field().degree()); }

/// Matrix of a map E[3] -> E'[3] given by the images of S and T.
inline Mat2F3 matrix_of_images(const TorsionBasis& target, const Point& imS, const Point& imT) {
  auto [a, b] = target.coords(imS);
  auto [c, d] = target.coords(imT);
  return Mat2F3::of(a, c, b, d);
}

}  // namespace hesse3
