#pragma once

// Points of the projective plane and 3x3 matrices acting on them.

#include <array>
#include <optional>
#include <string>

#include "hesse3/factor.hpp"
#include "hesse3/field.hpp"

namespace hesse3 {

/// Point of P^2 over a finite field. Stored in canonical form: the last
/// nonzero coordinate is 1, so `==` is projective equality.
class ProjPoint2 {
 public:
  ProjPoint2() = default;
  ProjPoint2(Element x, Element y, Element z) : c_{x, y, z} {
    if (x.is_zero() && y.is_zero() && z.is_zero()) fail(ErrorCode::DegenerateConfiguration, "(0:0:0) is not a projective point");
    canonicalize();
  }
  static ProjPoint2 affine(const Element& x, const Element& y) { return ProjPoint2(x, y, x.field().one()); }

  const Element& operator[](int i) const { return c_[i]; }
  const Element& x() const { return c_[0]; }
  const Element& y() const { return c_[1]; }
  const Element& z() const { return c_[2]; }
  Field field() const { return c_[0].field(); }

  ProjPoint2 embedded(const Field& target) const { return ProjPoint2(embed(c_[0], target), embed(c_[1], target), embed(c_[2], target)); }
  ProjPoint2 frobenius(unsigned times) const { return ProjPoint2(c_[0].frobenius(times), c_[1].frobenius(times), c_[2].frobenius(times)); }

  std::string to_string() const { return "(" + c_[0].to_string() + ":" + c_[1].to_string() + ":" + c_[2].to_string() + ")"; }

  friend bool operator==(const ProjPoint2& a, const ProjPoint2& b) { return a.c_ == b.c_; }
  friend auto operator<=>(const ProjPoint2& a, const ProjPoint2& b) {
    for (int i = 3; i-- > 0;) {
      if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  void canonicalize() {
    for (int i = 3; i-- > 0;) {
      if (!c_[i].is_zero()) {
        const Element inv = c_[i].inverse();
        for (auto& e : c_) e *= inv;
        return;
      }
    }
  }
  std::array<Element, 3> c_;
};

/// 3x3 matrix over a field, acting on column vectors.
class Mat3 {
 public:
  Mat3() = default;
  explicit Mat3(std::array<std::array<Element, 3>, 3> m) : m_(std::move(m)) {}

  static Mat3 identity(const Field& f) {
    Mat3 r = zero(f);
    for (int i = 0; i < 3; ++i) r.m_[i][i] = f.one();
    return r;
  }
  static Mat3 zero(const Field& f) {
    Mat3 r;
    for (auto& row : r.m_) row.fill(f.zero());
    return r;
  }
  static Mat3 diagonal(const Element& a, const Element& b, const Element& c) {
    Mat3 r = zero(a.field());
    r.m_[0][0] = a;
    r.m_[1][1] = b;
    r.m_[2][2] = c;
    return r;
  }
  /// Columns are the given vectors.
  static Mat3 from_columns(const std::array<std::array<Element, 3>, 3>& cols) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m_[i][j] = cols[j][i];
    return r;
  }

  Element& operator()(int i, int j) { return m_[i][j]; }
  const Element& operator()(int i, int j) const { return m_[i][j]; }
  Field field() const { return m_[0][0].field(); }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r = zero(a.field());
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) r.m_[i][j] += a.m_[i][k] * b.m_[k][j];
    return r;
  }
  friend Mat3 operator*(const Element& s, Mat3 a) {
    for (auto& row : a.m_)
      for (auto& e : row) e *= s;
    return a;
  }

  std::array<Element, 3> apply(const std::array<Element, 3>& v) const {
    std::array<Element, 3> out;
    for (int i = 0; i < 3; ++i) out[i] = m_[i][0] * v[0] + m_[i][1] * v[1] + m_[i][2] * v[2];
    return out;
  }
  ProjPoint2 apply(const ProjPoint2& p) const {
    auto v = apply(std::array<Element, 3>{p.x(), p.y(), p.z()});
    return ProjPoint2(v[0], v[1], v[2]);
  }

  Element det() const {
    return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) - m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
           m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
  }

  Mat3 adjugate() const {
    Mat3 r = zero(field());
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        r.m_[i][j] = m_[r0][c0] * m_[r1][c1] - m_[r0][c1] * m_[r1][c0];
      }
    }
    return r;
  }

  Mat3 inverse() const {
    const Element d = det();
    if (d.is_zero()) fail(ErrorCode::DegenerateConfiguration, "singular matrix");
    return d.inverse() * adjugate();
  }

  Mat3 transpose() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m_[i][j] = m_[j][i];
    return r;
  }

  Mat3 frobenius(unsigned times) const {
    Mat3 r = *this;
    for (auto& row : r.m_)
      for (auto& e : row) e = e.frobenius(times);
    return r;
  }

  Mat3 embedded(const Field& target) const {
    Mat3 r = *this;
    for (auto& row : r.m_)
      for (auto& e : row) e = embed(e, target);
    return r;
  }

  /// Scaled so the first nonzero entry (row-major) is 1.
  Mat3 normalized() const {
    for (const auto& row : m_)
      for (const auto& e : row)
        if (!e.is_zero()) return e.inverse() * *this;
    return *this;
  }

  /// Equality up to a nonzero scalar.
  bool projectively_equal(const Mat3& o) const { return normalized() == o.normalized(); }

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < 3; ++i) {
      s += i ? ", [" : "[";
      for (int j = 0; j < 3; ++j) s += (j ? ", " : "") + m_[i][j].to_string();
      s += "]";
    }
    return s + "]";
  }

  friend bool operator==(const Mat3& a, const Mat3& b) { return a.m_ == b.m_; }

 private:
  std::array<std::array<Element, 3>, 3> m_;
};

/// True if the three points lie on a common line.
inline bool collinear(const ProjPoint2& a, const ProjPoint2& b, const ProjPoint2& c) {
  return Mat3::from_columns({{{a.x(), a.y(), a.z()}, {b.x(), b.y(), b.z()}, {c.x(), c.y(), c.z()}}}).det().is_zero();
}

/// All points of P^2(F) in a deterministic order.
inline std::vector<ProjPoint2> all_points_p2(const Field& f, std::uint64_t bound = 4096) {
  const auto elems = all_elements(f, bound);
  std::vector<ProjPoint2> out;
  for (const auto& x : elems)
    for (const auto& y : elems) out.emplace_back(x, y, f.one());
  for (const auto& x : elems) out.emplace_back(x, f.one(), f.zero());
  out.emplace_back(f.one(), f.zero(), f.zero());
  return out;
}

}  // namespace hesse3
