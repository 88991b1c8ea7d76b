#pragma once

// Brute-force reference computations shared by the tests. Nothing here
// calls the root finder or the torsion machinery under test unless noted.

#include <algorithm>
#include <map>
#include <ostream>
#include <random>
#include <vector>

#include "hesse3/hesse3.hpp"

namespace hesse3 {

inline void PrintTo(const Element& e, std::ostream* os) { *os << e.to_string(); }
inline void PrintTo(const Poly& p, std::ostream* os) { *os << p.to_string(); }
inline void PrintTo(const Point& p, std::ostream* os) { *os << p.to_string(); }
inline void PrintTo(const ProjPoint2& p, std::ostream* os) { *os << p.to_string(); }
inline void PrintTo(const Mat3& m, std::ostream* os) { *os << m.to_string(); }
inline void PrintTo(const Mat2F3& m, std::ostream* os) { *os << m.to_string(); }
inline void PrintTo(const PencilParam& p, std::ostream* os) { *os << p.to_string(); }
inline void PrintTo(const EllipticModel& E, std::ostream* os) { *os << E.to_string(); }
inline void PrintTo(const Field& f, std::ostream* os) { *os << f.to_string(); }

}  // namespace hesse3

namespace oracle {

using namespace hesse3;

inline Field F(std::uint32_t p, unsigned k = 1) { return field_create(p, k); }

inline Element rand_elt(const Field& f, std::mt19937_64& rng) {
  std::vector<std::uint32_t> c(f.degree());
  for (auto& x : c) x = static_cast<std::uint32_t>(rng() % f.characteristic());
  return f.from_coeffs(c);
}

inline Element rand_nonzero(const Field& f, std::mt19937_64& rng) {
  for (;;) {
    Element e = rand_elt(f, rng);
    if (!e.is_zero()) return e;
  }
}

inline Poly rand_poly(const Field& f, int deg, std::mt19937_64& rng) {
  std::vector<Element> c;
  for (int i = 0; i < deg; ++i) c.push_back(rand_elt(f, rng));
  c.push_back(rand_nonzero(f, rng));
  return Poly(f, c);
}

/// Roots with multiplicity by exhaustive evaluation and repeated division.
inline std::vector<Element> roots(const Poly& f0, const Field& where) {
  const Poly f = embed(f0, where);
  std::vector<Element> out;
  for (const auto& x : all_elements(where, 1u << 16)) {
    Poly g = f;
    const Poly lin(where, {-x, where.one()});
    while (g.degree() >= 1 && g(x).is_zero()) {
      out.push_back(x);
      g = g.exact_div(lin);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Points of the curve's cubic over F by direct evaluation.
inline std::vector<ProjPoint2> cubic_points(const TernaryCubic& C, const Field& where) {
  std::vector<ProjPoint2> out;
  const TernaryCubic D = C.field() == where ? C : C.embedded(where);
  for (const auto& P : all_points_p2(where, 1u << 16))
    if (D(P).is_zero()) out.push_back(P);
  return out;
}

inline std::size_t point_count(const EllipticModel& E, const Field& where) { return cubic_points(E.cubic(), where).size(); }

/// Nontrivial 3-torsion by scanning points over `where` with the group law.
inline std::vector<Point> order_three(const EllipticModel& E, const Field& where) {
  const EllipticModel EL = E.base_change(where);
  std::vector<Point> out;
  for (const auto& P : cubic_points(EL.cubic(), where)) {
    const Point Q = Point::from_proj(P);
    if (!Q.is_infinity() && EL.mul(3, Q).is_infinity()) out.push_back(Q);
  }
  return out;
}

/// prod_{i<j} (r_i - r_j)^2 * lc^(2d-2), roots taken in the splitting field.
inline Element disc_by_roots(const Poly& f) {
  const Field k = f.field();
  const Field L = extension_of(k, splitting_degree(f));
  const auto r = poly_roots(f, L);
  if (static_cast<int>(r.size()) != f.degree()) fail(ErrorCode::Internal, "oracle: roots missing");
  for (const auto& x : r)
    if (!embed(f, L)(x).is_zero()) fail(ErrorCode::Internal, "oracle: bad root");
  Element d = embed(f.lead(), L).pow(2 * f.degree() - 2);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) d *= (r[i] - r[j]) * (r[i] - r[j]);
  auto back = restrict_to(d, k);
  if (!back) fail(ErrorCode::Internal, "oracle: discriminant outside base field");
  return *back;
}

inline std::vector<EllipticModel> curves(const Field& f) { return all_curves(f); }

/// Random element of GL3 over f.
inline Mat3 rand_gl3(const Field& f, std::mt19937_64& rng) {
  for (;;) {
    Mat3 M = Mat3::zero(f);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M(i, j) = rand_elt(f, rng);
    if (!M.det().is_zero()) return M;
  }
}

}  // namespace oracle
