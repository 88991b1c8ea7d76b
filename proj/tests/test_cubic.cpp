#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace hesse3;
using oracle::F;

namespace {

// X^3, X^2Y, X^2Z, XY^2, XYZ, XZ^2, Y^3, Y^2Z, YZ^2, Z^3
TernaryCubic C(const Field& f, std::array<long long, 10> c) { return TernaryCubic::cubic_from_ints(f, c); }

TernaryCubic weier(const Field& f, long long a, long long b) { return C(f, {-1, 0, 0, 0, 0, -a, 0, 1, 0, -b}); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

/// det of second partials at P, without going through TernaryForm::partial.
Element hessian_at(const TernaryCubic& Fm, const ProjPoint2& P) {
  const Field f = Fm.field();
  const auto& mons = TernaryForm::monomials(3);
  Element H[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      H[i][j] = f.zero();
      for (std::size_t m = 0; m < mons.size(); ++m) {
        std::array<int, 3> e{static_cast<int>(mons[m][0]), static_cast<int>(mons[m][1]), static_cast<int>(mons[m][2])};
        long long k = e[i];
        e[i] -= 1;
        k *= e[j];
        e[j] -= 1;
        if (k == 0 || e[0] < 0 || e[1] < 0 || e[2] < 0) continue;
        H[i][j] += Fm[m] * f.from_int(k) * P[0].pow(e[0]) * P[1].pow(e[1]) * P[2].pow(e[2]);
      }
    }
  return H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1]) - H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0]) +
         H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0]);
}

/// Flex test by interpolating F along the tangent line at four parameter values.
bool flex_by_interpolation(const TernaryCubic& Fm, const ProjPoint2& P) {
  const Field f = Fm.field();
  const auto g = Fm.gradient(P);
  // direction on the tangent line, not proportional to P
  std::array<Element, 3> d;
  bool found = false;
  for (const auto& Q : all_points_p2(f)) {
    if (Q == P) continue;
    if ((g[0] * Q[0] + g[1] * Q[1] + g[2] * Q[2]).is_zero()) {
      d = {Q[0], Q[1], Q[2]};
      found = true;
      break;
    }
  }
  if (!found) ADD_FAILURE() << "no second point on the tangent";
  const auto el = all_elements(f);
  std::vector<Element> s(el.begin(), el.begin() + 4), v;
  for (const auto& si : s) v.push_back(Fm(P[0] + si * d[0], P[1] + si * d[1], P[2] + si * d[2]));
  // Newton interpolation of the cubic g(s) through 4 nodes, then read off coefficients.
  std::vector<Element> c = v;
  for (int k = 1; k < 4; ++k)
    for (int i = 3; i >= k; --i) c[i] = (c[i] - c[i - 1]) / (s[i] - s[i - k]);
  Poly g_s(f, {c[3]});
  for (int i = 2; i >= 0; --i) g_s = g_s * Poly(f, {-s[i], f.one()}) + Poly(f, {c[i]});
  return g_s.coeff(0).is_zero() && g_s.coeff(1).is_zero() && g_s.coeff(2).is_zero();
}

std::vector<TernaryCubic> random_smooth_cubics(const Field& f, int n, std::mt19937_64& rng) {
  std::vector<TernaryCubic> out;
  while (static_cast<int>(out.size()) < n) {
    std::array<Element, 10> c;
    for (auto& e : c) e = oracle::rand_elt(f, rng);
    const TernaryCubic Fm = TernaryCubic::cubic(f, c);
    if (Fm.is_zero()) continue;
    if (f.characteristic() != 2 && hessian_classical(Fm).is_zero()) continue;
    if (!cubic_is_singular(Fm, f) && !cubic_is_singular(Fm, extension_of(f, 2))) out.push_back(Fm);
  }
  return out;
}

TEST(Hessian, Fermat) {
  for (std::uint32_t p : {5u, 7u, 13u}) {
    const Field f = F(p);
    const TernaryCubic H = hessian_classical(C(f, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1}));
    EXPECT_EQ(H, C(f, {0, 0, 0, 0, 216, 0, 0, 0, 0, 0}));
  }
}

TEST(Hessian, ShortWeierstrass) {
  std::mt19937_64 rng(11);
  for (std::uint32_t p : {5u, 7u, 13u, 101u}) {
    const Field f = F(p);
    for (int i = 0; i < 10; ++i) {
      const long long a = static_cast<long long>(rng() % p), b = static_cast<long long>(rng() % p);
      const TernaryCubic expect = C(f, {0, 0, 24 * a, 24, 0, 72 * b, 0, 0, 0, -8 * a * a});
      EXPECT_EQ(hessian_classical(weier(f, a, b)), expect);
    }
  }
}

TEST(Hessian, CharTwoRejected) {
  EXPECT_EQ(code_of([] { hessian_classical(C(F(2), {1, 0, 0, 0, 0, 0, 1, 0, 0, 1})); }), ErrorCode::WrongCharacteristic);
  EXPECT_EQ(code_of([] { hessian_classical(C(F(2, 2), {0, 0, 0, 0, 1, 0, 0, 0, 0, 0})); }), ErrorCode::WrongCharacteristic);
}

TEST(Hessian, MatchesDeterminantOracle) {
  std::mt19937_64 rng(12);
  for (const Field f : {F(5), F(7), F(5, 2)}) {
    for (int n = 0; n < 6; ++n) {
      std::array<Element, 10> c;
      for (auto& e : c) e = oracle::rand_elt(f, rng);
      const TernaryCubic Fm = TernaryCubic::cubic(f, c);
      const TernaryCubic H = hessian_classical(Fm);
      for (const auto& P : all_points_p2(f)) ASSERT_EQ(H(P), hessian_at(Fm, P));
    }
  }
}

TEST(Hessian, Covariance) {
  // Hess(F o M) = det(M)^2 (Hess F) o M
  std::mt19937_64 rng(13);
  for (const Field f : {F(7), F(13), F(11, 2)}) {
    for (int n = 0; n < 20; ++n) {
      std::array<Element, 10> c;
      for (auto& e : c) e = oracle::rand_elt(f, rng);
      const TernaryCubic Fm = TernaryCubic::cubic(f, c);
      const Mat3 M = oracle::rand_gl3(f, rng);
      const Element d = M.det();
      EXPECT_EQ(hessian_classical(Fm.substitute(M)), (d * d) * hessian_classical(Fm).substitute(M));
    }
  }
}

TEST(HessianChar2, Ordinary) {
  const Field f = F(2);
  EXPECT_EQ(hessian_char2_ordinary(f.zero(), f.one()), C(f, {0, 1, 0, 1, 1, 1, 0, 1, 0, 0}));
  EXPECT_EQ(hessian_char2_ordinary(f.one(), f.one()), C(f, {1, 1, 1, 1, 1, 1, 0, 1, 0, 0}));
  EXPECT_EQ(code_of([&] { hessian_char2_ordinary(f.zero(), f.zero()); }), ErrorCode::SingularInput);
}

TEST(HessianChar2, Supersingular) {
  const Field f = F(2);
  EXPECT_EQ(hessian_char2_supersingular(f.one(), f.zero(), f.zero()), C(f, {0, 0, 0, 1, 1, 1, 0, 0, 0, 0}));
  EXPECT_EQ(hessian_char2_supersingular(f.one(), f.one(), f.zero()), C(f, {0, 0, 1, 1, 1, 1, 0, 0, 0, 1}));
  EXPECT_EQ(code_of([&] { hessian_char2_supersingular(f.zero(), f.one(), f.one()); }), ErrorCode::SingularInput);
}

TEST(IsFlex, Examples) {
  const Field f7 = F(7);
  const TernaryCubic fermat = C(f7, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1});
  EXPECT_TRUE(is_flex(fermat, ProjPoint2(f7.one(), -f7.one(), f7.zero())));
  const ProjPoint2 O(f7.zero(), f7.one(), f7.zero());
  EXPECT_TRUE(is_flex(weier(f7, 0, 2), O));
  EXPECT_TRUE(is_flex(weier(f7, 3, 5), O));
  // a point of y^2 = x^3 + 2 over F49 that is not 3-torsion
  const Field f49 = F(7, 2);
  const EllipticModel E = EllipticModel::shortw(f49.zero(), f49.from_int(2));
  const TernaryCubic W = E.cubic();
  int checked = 0;
  for (const auto& P : oracle::cubic_points(W, f49)) {
    const Point Q = Point::from_proj(P);
    if (E.mul(3, Q).is_infinity()) continue;
    EXPECT_FALSE(is_flex(W, P));
    EXPECT_FALSE(flex_by_interpolation(W, P));
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(IsFlex, Errors) {
  const Field f7 = F(7);
  const TernaryCubic W = weier(f7, 0, 2);
  EXPECT_EQ(code_of([&] { is_flex(W, ProjPoint2(f7.one(), f7.one(), f7.one())); }), ErrorCode::NotOnCurve);
  const TernaryCubic cusp = C(f7, {-1, 0, 0, 0, 0, 0, 0, 1, 0, 0});
  EXPECT_EQ(code_of([&] { is_flex(cusp, ProjPoint2(f7.zero(), f7.zero(), f7.one())); }), ErrorCode::SingularPoint);
}

TEST(IsFlex, HessianCriterionExhaustive) {
  // is_flex <=> Hess F (P) = 0 on smooth points, fields of order <= 49
  std::mt19937_64 rng(14);
  for (const Field f : {F(5), F(7), F(7, 2)}) {
    std::vector<TernaryCubic> corpus = random_smooth_cubics(f, f.degree() == 1 ? 8 : 3, rng);
    corpus.push_back(C(f, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1}));
    for (int n = 0; n < 4; ++n) {
      const long long a = static_cast<long long>(rng() % 7), b = static_cast<long long>(rng() % 7);
      if ((4 * a * a * a + 27 * b * b) % f.characteristic()) corpus.push_back(weier(f, a, b));
    }
    for (const auto& Fm : corpus) {
      const TernaryCubic H = hessian_classical(Fm);
      for (const auto& P : oracle::cubic_points(Fm, f)) {
        const bool flex = is_flex(Fm, P);
        ASSERT_EQ(flex, H(P).is_zero()) << Fm.to_string() << " at " << P.to_string();
        ASSERT_EQ(flex, flex_by_interpolation(Fm, P));
      }
    }
  }
}

TEST(IsFlex, CharTwoHessianCriterionExhaustive) {
  for (const Field f : {F(2), F(2, 2), F(2, 3)}) {
    const Field search = f.degree() == 1 ? F(2, 2) : f;  // interpolation needs four points
    for (const auto& E : all_curves(f)) {
      const TernaryCubic H = E.shape() == Shape::Char2Ord ? hessian_char2_ordinary(E.a(2), E.a(6)) : hessian_char2_supersingular(E.a(3), E.a(4), E.a(6));
      const TernaryCubic W = E.cubic().embedded(search), HL = H.embedded(search);
      for (const auto& P : oracle::cubic_points(W, search)) {
        const bool flex = is_flex(W, P);
        ASSERT_EQ(flex, HL(P).is_zero()) << E.to_string() << " at " << P.to_string();
        ASSERT_EQ(flex, flex_by_interpolation(W, P));
      }
    }
  }
}

TEST(FlexPoints, ShortWeierstrassF7) {
  const Field f7 = F(7);
  const auto flexes = flex_points(weier(f7, 0, 2), f7);
  std::set<ProjPoint2> got(flexes.begin(), flexes.end());
  std::set<ProjPoint2> expect{ProjPoint2(f7.zero(), f7.one(), f7.zero())};
  for (auto [x, y] : {std::pair{0, 3}, {0, 4}, {3, 1}, {3, 6}, {5, 1}, {5, 6}, {6, 1}, {6, 6}})
    expect.insert(ProjPoint2::affine(f7.from_int(x), f7.from_int(y)));
  EXPECT_EQ(got, expect);
  EXPECT_EQ(flexes.size(), 9u);
}

TEST(FlexPoints, CharTwoOrdinaryOverTorsionField) {
  for (const Field f : {F(2), F(2, 2)}) {
    for (const auto& E : all_curves(f)) {
      const TorsionBasis tb = torsion3(E);
      const auto flexes = flex_points(E.cubic(), tb.field);
      EXPECT_EQ(flexes.size(), 9u) << E.to_string();
      // brute force over the torsion field when it is small enough
      if (tb.field.order() && *tb.field.order() <= 256) {
        std::size_t n = 0;
        const TernaryCubic W = E.cubic().embedded(tb.field);
        for (const auto& P : oracle::cubic_points(W, tb.field)) n += is_flex(W, P);
        EXPECT_EQ(n, 9u);
      }
    }
  }
}

TEST(FlexPoints, Errors) {
  const Field f7 = F(7);
  EXPECT_EQ(code_of([&] { flex_points(C(f7, {-1, 0, 0, 0, 0, 0, 0, 1, 0, 0}), f7); }), ErrorCode::SingularInput);
  const Field f4 = F(2, 2);
  EXPECT_EQ(code_of([&] { flex_points(C(f4, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1}), f4); }), ErrorCode::UnsupportedShape);
}

TEST(FlexPoints, NineFlexesNoFourOnALine) {
  for (const Field f : {F(7), F(13)}) {
    for (const auto& E : all_curves(f)) {
      if (torsion3(E).m != 1) continue;
      const auto fl = flex_points(E.cubic(), f);
      ASSERT_EQ(fl.size(), 9u);
      for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = i + 1; j < 9; ++j) {
          int on = 0;
          for (std::size_t k = 0; k < 9; ++k) on += collinear(fl[i], fl[j], fl[k]);
          EXPECT_EQ(on, 3);
        }
    }
  }
}

TEST(Singular, Examples) {
  const Field f7 = F(7);
  EXPECT_FALSE(cubic_is_singular(C(f7, {1, 0, 0, 0, 0, 0, 1, 0, 0, 1}), f7));
  const auto s = cubic_is_singular(C(f7, {0, 0, 0, 0, 1, 0, 0, 0, 0, 0}), f7);
  ASSERT_TRUE(s);
  const std::set<ProjPoint2> vertices{ProjPoint2(f7.one(), f7.zero(), f7.zero()), ProjPoint2(f7.zero(), f7.one(), f7.zero()),
                                      ProjPoint2(f7.zero(), f7.zero(), f7.one())};
  EXPECT_TRUE(vertices.count(*s));
  const auto cusp = cubic_is_singular(C(f7, {-1, 0, 0, 0, 0, 0, 0, 1, 0, 0}), f7);
  ASSERT_TRUE(cusp);
  EXPECT_EQ(*cusp, ProjPoint2(f7.zero(), f7.zero(), f7.one()));
}

TEST(Singular, MatchesScan) {
  std::mt19937_64 rng(16);
  for (const Field f : {F(5), F(2, 2), F(7)}) {
    for (int n = 0; n < 60; ++n) {
      std::array<Element, 10> c;
      for (auto& e : c) e = oracle::rand_elt(f, rng);
      // force a singular point at (0:0:1) half the time
      if (n % 2) c[9] = c[8] = c[5] = f.zero();
      const TernaryCubic Fm = TernaryCubic::cubic(f, c);
      if (Fm.is_zero()) continue;
      bool any = false;
      for (const auto& P : all_points_p2(f)) {
        const auto g = Fm.gradient(P);
        if (Fm(P).is_zero() && g[0].is_zero() && g[1].is_zero() && g[2].is_zero()) any = true;
      }
      const auto s = cubic_is_singular(Fm, f);
      EXPECT_EQ(s.has_value(), any) << Fm.to_string();
    }
  }
}

TEST(Cubic, SubstituteComposes) {
  std::mt19937_64 rng(17);
  const Field f = F(7, 2);
  std::array<Element, 10> c;
  for (auto& e : c) e = oracle::rand_elt(f, rng);
  const TernaryCubic Fm = TernaryCubic::cubic(f, c);
  const Mat3 A = oracle::rand_gl3(f, rng), B = oracle::rand_gl3(f, rng);
  EXPECT_EQ(Fm.substitute(A).substitute(B), Fm.substitute(A * B));
  for (int i = 0; i < 20; ++i) {
    const ProjPoint2 P(oracle::rand_elt(f, rng), oracle::rand_elt(f, rng), f.one());
    EXPECT_EQ(Fm.substitute(A)(P), Fm(A.apply(std::array<Element, 3>{P.x(), P.y(), P.z()})[0], A.apply(std::array<Element, 3>{P.x(), P.y(), P.z()})[1],
                                      A.apply(std::array<Element, 3>{P.x(), P.y(), P.z()})[2]));
  }
}

}  // namespace
