#pragma once

// The Hesse pencil tF + Hess F of a Weierstrass curve, its Weierstrass
// family, fibers, j as a function of t and the j-matching polynomials.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hesse3/cubic.hpp"
#include "hesse3/elliptic.hpp"
#include "hesse3/factor.hpp"

namespace hesse3 {

/// A point of P^1: a finite parameter t or infinity (the curve itself).
struct PencilParam {
  bool infinity = true;
  Element t;

  static PencilParam inf() { return {}; }
  static PencilParam finite(Element t) { return {false, std::move(t)}; }
  bool is_infinity() const { return infinity; }
  std::string to_string() const { return infinity ? "inf" : t.to_string(); }
  friend bool operator==(const PencilParam& a, const PencilParam& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.t == b.t;
  }
  friend bool operator<(const PencilParam& a, const PencilParam& b) {
    if (a.infinity || b.infinity) return !a.infinity && b.infinity;
    return a.t < b.t;
  }
};

/// num / den in k[t].
struct RationalFn {
  Poly num, den;

  /// Value at a parameter in k or an extension of k; nullopt at a pole.
  std::optional<Element> operator()(const PencilParam& p) const {
    if (p.infinity) {
      if (num.degree() > den.degree()) return std::nullopt;
      if (num.degree() < den.degree()) return den.field().zero();
      return num.lead() / den.lead();
    }
    const Poly n = embed(num, p.t.field()), d = embed(den, p.t.field());
    const Element dv = d(p.t);
    if (dv.is_zero()) return std::nullopt;
    return n(p.t) / dv;
  }
};

/// Cubic of the pencil member at t (Infinity gives the curve's own cubic).
/// For p >= 5 this is tF + Hess(F)/8, matching the parameter t in which
/// a_t, b_t and A(t) are written; in characteristic 2 it is tF + Hess(F)
/// with the shape-specific Hessian.
inline TernaryCubic pencil_cubic(const EllipticModel& E0, const PencilParam& param) {
  const Field L = param.infinity ? E0.field() : param.t.field();
  const EllipticModel E = E0.base_change(L);
  const TernaryCubic F = E.cubic();
  if (param.infinity) return F;
  TernaryCubic H;
  switch (E.shape()) {
    case Shape::ShortW: H = L.from_int(8).inverse() * hessian_classical(F); break;
    case Shape::Char2Ord: H = hessian_char2_ordinary(E.a(2), E.a(6)); break;
    case Shape::Char2SS: H = hessian_char2_supersingular(E.a(3), E.a(4), E.a(6)); break;
  }
  return param.t * F + H;
}

/// Weierstrass data of the whole pencil over k[t].
struct PencilWeierstrass {
  EllipticModel curve;
  Shape family = Shape::ShortW;
  // p >= 5: fiber coordinates = A(t) * (xi, eta, zeta), giving
  // eta^2 zeta = xi^3 + a_t xi zeta^2 + b_t zeta^3.
  Poly a_t, b_t, detA;
  std::array<std::array<Poly, 3>, 3> A;
  // Char2Ord: eta^2 zeta + b1 xi eta zeta = xi^3 + b2 xi^2 zeta + b6 zeta^3 (t != 1).
  Poly b1, b2, b6;
  // Char2SS: eta^2 zeta + xi eta zeta = xi^3 + b2 xi^2 zeta + b6 zeta^3 (t != 0).
  RationalFn b2_rat, b6_rat;
  // The fiber needing its own model: t = 1 (ordinary) or t = 0 (supersingular).
  std::optional<EllipticModel> special_model;
  Element special_t;
  // Parameters of singular fibers are the roots of this quartic.
  Poly singular_quartic;
  RationalFn j;
};

namespace detail {
inline Poly cpoly(const Element& e) { return Poly::constant(e); }
}  // namespace detail

inline PencilWeierstrass pencil_weierstrass(const EllipticModel& E) {
  using detail::cpoly;
  const Field k = E.field();
  const Poly t = Poly::x(k);
  auto c = [&](long long v) { return cpoly(k.from_int(v)); };
  PencilWeierstrass pw;
  pw.curve = E;
  pw.family = E.shape();
  switch (E.shape()) {
    case Shape::ShortW: {
      const Poly a = cpoly(E.a(4)), b = cpoly(E.a(6));
      const Poly t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t, t6 = t5 * t;
      pw.a_t = a * t4 - c(18) * b * t3 - c(18) * a * a * t2 + c(54) * a * b * t - (c(27) * a * a * a + c(243) * b * b);
      pw.b_t = b * t6 + c(4) * a * a * t5 - c(45) * a * b * t4 + c(270) * b * b * t3 + c(135) * a * a * b * t2 +
               (c(108) * a * a * a * a + c(486) * a * b * b) * t - (c(243) * a * a * a * b + c(1458) * b * b * b);
      pw.detA = t4 + c(18) * a * t2 - c(108) * b * t - c(27) * a * a;
      const Poly zero(k), one = c(1);
      pw.A = {{{t, zero, c(3) * a * t2 - c(27) * b * t - c(9) * a * a}, {zero, one, zero}, {c(-3), zero, t3 + c(9) * a * t - c(27) * b}}};
      const auto& M = pw.A;
      const Poly det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                       M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
      if (!(det == pw.detA)) fail(ErrorCode::Internal, "det A mismatch");
      const Poly lhs = c(4) * pow(pw.a_t, 3) + c(27) * pw.b_t * pw.b_t;
      const Poly rhs = (c(4) * a * a * a + c(27) * b * b) * pow(pw.detA, 3);
      if (!(lhs == rhs)) fail(ErrorCode::Internal, "discriminant identity failed");
      pw.singular_quartic = pw.detA;
      pw.j = RationalFn{c(6912) * pow(pw.a_t, 3), lhs};
      break;
    }
    case Shape::Char2Ord: {
      const Poly a2 = cpoly(E.a(2)), a6 = cpoly(E.a(6));
      const Poly t1 = t + c(1);
      const Poly quart = pow(t, 4) + pow(t, 3) + t * t + t + a6;
      pw.b1 = t1 * t1;
      pw.b2 = a2 * pow(t1, 4) + a6 * t * t1;
      pw.b6 = a6 * pow(quart, 3);
      pw.special_t = k.one();
      pw.special_model = EllipticModel::ss2(E.a(6), E.a(6) * E.a(6), E.a(6) * E.a(6) * (k.one() + E.a(2)));
      pw.singular_quartic = quart;
      pw.j = RationalFn{pow(pw.b1, 6), pw.b6};
      break;
    }
    case Shape::Char2SS: {
      const Element a3 = E.a(3), a4 = E.a(4), a6 = E.a(6);
      const Poly D = pow(t, 4) + cpoly(a3 * a3) * t + cpoly(a4 * a4);
      pw.b2_rat = RationalFn{pow(t, 3) + cpoly(a4) * t + cpoly(a3 * a3 + a6), cpoly(a3 * a3)};
      pw.b6_rat = RationalFn{pow(D, 3), cpoly(a3.pow(8))};
      pw.special_t = k.zero();
      // eta^2 zeta + a3^2 xi eta zeta + xi^3 + (a3^4 + a6 a3^2) xi^2 zeta + a3^4 a4^6 zeta^3
      if (!a4.is_zero()) {
        WCoeffs w;
        w.fill(k.zero());
        w[1] = a3 * a3;
        w[2] = a3.pow(4) + a6 * a3 * a3;
        w[6] = a3.pow(4) * a4.pow(6);
        pw.special_model = EllipticModel::from_general(w).curve;
      }
      pw.singular_quartic = D;
      pw.j = RationalFn{cpoly(a3.pow(8)), pow(D, 3)};
      break;
    }
  }
  return pw;
}

/// A cubic with a flex O brought to a Weierstrass shape: C(B v) is a nonzero
/// multiple of model.cubic()(v), and B maps model O to the given O.
struct WeierstrassReduction {
  EllipticModel model;
  Mat3 B;
};

inline WeierstrassReduction weierstrass_reduction(const TernaryCubic& C, const ProjPoint2& O) {
  const Field L = C.field();
  if (!C(O).is_zero()) fail(ErrorCode::NotOnCurve, "base point not on cubic");
  auto l = C.gradient(O);
  if (l[0].is_zero() && l[1].is_zero() && l[2].is_zero()) fail(ErrorCode::SingularPoint, "base point is singular");
  // Lines through O: kernel of v -> v . O.
  std::array<std::array<Element, 3>, 2> ker;
  {
    int piv = O.x().is_zero() ? (O.y().is_zero() ? 2 : 1) : 0;
    int o1 = (piv + 1) % 3, o2 = (piv + 2) % 3;
    std::array<Element, 3> v1{L.zero(), L.zero(), L.zero()}, v2 = v1;
    v1[o1] = L.one();
    v1[piv] = -O[o1] / O[piv];
    v2[o2] = L.one();
    v2[piv] = -O[o2] / O[piv];
    ker = {v1, v2};
  }
  auto proportional = [](const std::array<Element, 3>& u, const std::array<Element, 3>& v) {
    return (u[0] * v[1] - u[1] * v[0]).is_zero() && (u[0] * v[2] - u[2] * v[0]).is_zero() && (u[1] * v[2] - u[2] * v[1]).is_zero();
  };
  const std::array<Element, 3> m = proportional(ker[0], l) ? ker[1] : ker[0];
  std::array<Element, 3> n{L.zero(), L.zero(), L.zero()};
  for (int i = 0; i < 3; ++i)
    if (!O[i].is_zero()) {
      n[i] = L.one();
      break;
    }
  Mat3 R = Mat3::zero(L);
  for (int j = 0; j < 3; ++j) {
    R(0, j) = m[j];
    R(1, j) = n[j];
    R(2, j) = l[j];
  }
  const Mat3 Rinv = R.inverse();
  const TernaryCubic Cp = C.substitute(Rinv);
  if (!Cp.coeff({2, 1, 0}).is_zero() || !Cp.coeff({1, 2, 0}).is_zero() || !Cp.coeff({0, 3, 0}).is_zero())
    fail(ErrorCode::DegenerateConfiguration, "base point is not a flex");
  const Element c30 = Cp.coeff({3, 0, 0});
  const Element alpha = Cp.coeff({0, 2, 1});
  if (c30.is_zero() || alpha.is_zero()) fail(ErrorCode::SingularCurve, "cubic is singular");
  const Element beta = Cp.coeff({1, 1, 1}), gamma = Cp.coeff({0, 1, 2}), delta = Cp.coeff({2, 0, 1}), eps = Cp.coeff({1, 0, 2}),
                phi = Cp.coeff({0, 0, 3});
  const Element r = -c30 / alpha;
  const Element lambda = r, mu = r * r, kappa = alpha * r.pow(4);
  WCoeffs a;
  a.fill(L.zero());
  a[1] = beta * lambda * mu / kappa;
  a[3] = gamma * mu / kappa;
  a[2] = -delta * lambda * lambda / kappa;
  a[4] = -eps * lambda / kappa;
  a[6] = -phi / kappa;
  const auto norm = EllipticModel::from_general(a);
  const CurveIso iso{norm.curve, norm.curve, norm.u, norm.r, norm.s, norm.w};
  const Mat3 B = Rinv * Mat3::diagonal(lambda, mu, L.one()) * iso.matrix();
  // Sanity: the substituted cubic is proportional to the model's cubic.
  if (!C.substitute(B).proportional_to(norm.curve.cubic())) fail(ErrorCode::Internal, "Weierstrass reduction failed");
  return {norm.curve, B};
}

/// Smooth fiber with its Weierstrass model and a matrix B such that fiber
/// coordinates = B * model coordinates; or a singular fiber with a witness.
struct FiberResult {
  bool smooth = false;
  std::optional<EllipticModel> model;
  std::optional<Mat3> B;
  std::optional<ProjPoint2> witness;
};

namespace detail {

inline ProjPoint2 singular_witness(const TernaryCubic& C) {
  const Field L = C.field();
  for (unsigned d : {1u, 2u, 3u, 4u, 6u}) {
    if (L.degree() * d > kMaxDegree) break;
    const Field M = extension_of(L, d);
    if (auto s = cubic_is_singular(C, M)) return *s;
  }
  fail(ErrorCode::Internal, "singular fiber without a located singular point");
}

inline EllipticModel fiber_formula_model(const PencilWeierstrass& pw, const Element& t0) {
  const Field L = t0.field();
  auto ev = [&](const Poly& f) { return embed(f, L)(t0); };
  auto evr = [&](const RationalFn& f) { return *f(PencilParam::finite(t0)); };
  switch (pw.family) {
    case Shape::ShortW: return EllipticModel::shortw(ev(pw.a_t), ev(pw.b_t));
    case Shape::Char2Ord: {
      const Element b1 = ev(pw.b1);
      return EllipticModel::ord2(ev(pw.b2) / (b1 * b1), ev(pw.b6) / b1.pow(6));
    }
    case Shape::Char2SS: return EllipticModel::ord2(evr(pw.b2_rat), evr(pw.b6_rat));
  }
  fail(ErrorCode::Internal, "unknown shape");
}

}  // namespace detail

inline FiberResult fiber(const PencilWeierstrass& pw, const PencilParam& param) {
  FiberResult out;
  const EllipticModel& E = pw.curve;
  if (param.infinity) {
    out.smooth = true;
    out.model = E;
    out.B = Mat3::identity(E.field());
    return out;
  }
  const Field L = param.t.field();
  const Element& t0 = param.t;
  const TernaryCubic C = pencil_cubic(E, param);
  const bool special = pw.family != Shape::ShortW && embed(pw.special_t, L) == t0;
  const bool singular = special ? !pw.special_model.has_value() : embed(pw.singular_quartic, L)(t0).is_zero();
  if (singular) {
    out.witness = detail::singular_witness(C);
    return out;
  }
  const EllipticModel model = special ? pw.special_model->base_change(L) : detail::fiber_formula_model(pw, t0);
  out.smooth = true;
  out.model = model;
  if (pw.family == Shape::ShortW) {
    Mat3 A = Mat3::zero(L);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A(i, j) = embed(pw.A[i][j], L)(t0);
    out.B = A;
  } else {
    const ProjPoint2 O(L.zero(), L.one(), L.zero());
    const auto red = weierstrass_reduction(C, O);
    auto iso = isomorphism_over(red.model, model, L);
    if (!iso) fail(ErrorCode::Internal, "fiber model is not isomorphic to the reduced fiber");
    out.B = red.B * iso->matrix();
  }
  return out;
}

inline FiberResult fiber(const EllipticModel& E, const PencilParam& param) { return fiber(pencil_weierstrass(E), param); }

inline RationalFn j_of_pencil(const EllipticModel& E) { return pencil_weierstrass(E).j; }

/// Case-appropriate j-matching data for j' in the base field.
struct MatchingData {
  std::optional<Poly> G;             // roots are matching finite parameters
  bool includes_infinity = false;
  std::optional<Element> special_t;  // matching special parameter, if any
};

inline MatchingData matching_data(const PencilWeierstrass& pw, const Element& jp) {
  const EllipticModel& E = pw.curve;
  const Field k = E.field();
  const Element j0 = E.j_invariant();
  MatchingData md;
  md.includes_infinity = jp == j0;
  auto c = [&](long long v) { return detail::cpoly(k.from_int(v)); };
  switch (pw.family) {
    case Shape::ShortW: {
      if (jp.is_zero()) {
        md.G = pw.a_t;
      } else if (jp == k.from_int(1728)) {
        md.G = pw.b_t;
      } else {
        const Poly delta_w = c(-16) * (c(4) * pow(pw.a_t, 3) + c(27) * pw.b_t * pw.b_t);
        md.G = c(-1728) * pow(c(4) * pw.a_t, 3) - detail::cpoly(jp) * delta_w;
      }
      break;
    }
    case Shape::Char2Ord: {
      if (jp.is_zero()) {
        md.special_t = k.one();
      } else {
        md.G = pow(Poly::x(k) + c(1), 12) + detail::cpoly(jp * E.a(6)) * pow(pw.singular_quartic, 3);
      }
      break;
    }
    case Shape::Char2SS: {
      if (!jp.is_zero()) md.G = detail::cpoly(E.a(3).pow(8)) + detail::cpoly(jp) * pow(pw.singular_quartic, 3);
      break;
    }
  }
  return md;
}

/// Parameters in P^1(search) whose fiber is smooth with j = j'.
inline std::vector<PencilParam> matching_fibers(const PencilWeierstrass& pw, const Element& jp0, const Field& search) {
  const Field k = pw.curve.field();
  auto jp = restrict_to(jp0, k);
  if (!jp) fail(ErrorCode::FieldMismatch, "j' must lie in the base field");
  const MatchingData md = matching_data(pw, *jp);
  std::set<PencilParam> out;
  if (md.includes_infinity) out.insert(PencilParam::inf());
  if (md.special_t) out.insert(PencilParam::finite(embed(*md.special_t, search)));
  if (md.G && !md.G->is_zero()) {
    for (const auto& r : distinct_roots(*md.G, search)) {
      const PencilParam p = PencilParam::finite(r);
      if (embed(pw.singular_quartic, search)(r).is_zero()) continue;
      if (pw.family != Shape::ShortW && embed(pw.special_t, search) == r) {
        if (!pw.special_model || pw.special_model->j_invariant() != *jp) continue;
      }
      out.insert(p);
    }
  }
  return {out.begin(), out.end()};
}

inline std::vector<PencilParam> matching_fibers(const EllipticModel& E, const Element& jp, const Field& search) {
  return matching_fibers(pencil_weierstrass(E), jp, search);
}

/// Parameters in the search field with a singular fiber.
inline std::vector<PencilParam> singular_parameters(const PencilWeierstrass& pw, const Field& search) {
  std::vector<PencilParam> out;
  for (const auto& r : distinct_roots(pw.singular_quartic, search)) out.push_back(PencilParam::finite(r));
  return out;
}

inline std::vector<PencilParam> singular_parameters(const EllipticModel& E, const Field& search) {
  return singular_parameters(pencil_weierstrass(E), search);
}

/// All of P^1(F): finite parameters in element order, then infinity.
inline std::vector<PencilParam> projective_line(const Field& F, std::uint64_t bound = 1u << 20) {
  std::vector<PencilParam> out;
  for (const auto& e : all_elements(F, bound)) out.push_back(PencilParam::finite(e));
  out.push_back(PencilParam::inf());
  return out;
}

}  // namespace hesse3
