#pragma once

// Finite fields F_{p^n} realised as F_p[x]/(m(x)) with a runtime modulus.
//
// Fields are interned: two Field handles compare equal iff they carry the
// same characteristic and modulus. Interned data is never released, so
// Elements may hold a raw pointer to it.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hesse3/error.hpp"

namespace hesse3 {

/// Largest absolute extension degree over F_p supported by Element storage.
inline constexpr unsigned kMaxDegree = 48;

/// Characteristics must stay below this bound so that n products of residues
/// can be accumulated in 64 bits before reduction.
inline constexpr std::uint32_t kMaxCharacteristic = 1u << 26;

using Coeffs = std::array<std::uint32_t, kMaxDegree>;

class Field;
class Element;

namespace detail {

struct FieldData {
  std::uint32_t p = 0;
  unsigned degree = 1;
  std::vector<std::uint32_t> modulus;  // monic, size degree+1; empty for prime fields
  std::vector<Coeffs> frob;            // frob[i] = x^(i*p) mod modulus
  double log2_order = 0.0;
  std::uint64_t serial = 0;
};

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod64(result, base, m);
    base = mulmod64(base, base, m);
    exp >>= 1;
  }
  return result;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// c = a * b mod (p, modulus); a, b reduced.
inline void mul_into(const FieldData& f, const Coeffs& a, const Coeffs& b, Coeffs& c) {
  const unsigned n = f.degree;
  const std::uint64_t p = f.p;
  if (n == 1) {
    c[0] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(a[0]) * b[0] % p);
    return;
  }
  std::array<std::uint64_t, 2 * kMaxDegree> prod{};
  for (unsigned i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (unsigned j = 0; j < n; ++j) prod[i + j] += static_cast<std::uint64_t>(a[i]) * b[j];
  }
  for (unsigned i = 0; i + 1 < 2 * n; ++i) prod[i] %= p;
  for (unsigned i = 2 * n - 2; i >= n; --i) {
    const std::uint64_t lead = prod[i];
    if (lead == 0) continue;
    const std::uint64_t neg = p - lead;
    for (unsigned j = 0; j < n; ++j) {
      if (f.modulus[j] != 0) prod[i - n + j] = (prod[i - n + j] + neg * f.modulus[j]) % p;
    }
    prod[i] = 0;
  }
  for (unsigned i = 0; i < n; ++i) c[i] = static_cast<std::uint32_t>(prod[i]);
  for (unsigned i = n; i < kMaxDegree; ++i) c[i] = 0;
}

// Inverse in F_p[x]/(m) by the extended Euclidean algorithm on dense vectors.
inline Coeffs inverse_of(const FieldData& f, const Coeffs& a) {
  const std::uint64_t p = f.p;
  Coeffs out{};
  if (f.degree == 1) {
    out[0] = static_cast<std::uint32_t>(powmod64(a[0], p - 2, p));
    return out;
  }
  using V = std::vector<std::uint64_t>;
  auto trim = [](V& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  V r0(f.modulus.begin(), f.modulus.end());
  V r1(a.begin(), a.begin() + f.degree);
  trim(r1);
  V s0{0}, s1{1};
  while (!r1.empty()) {
    // r0 = q*r1 + r
    V q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 0, 0);
    const std::uint64_t inv_lead = powmod64(r1.back(), p - 2, p);
    while (r0.size() >= r1.size() && !r0.empty()) {
      const std::size_t shift = r0.size() - r1.size();
      const std::uint64_t coef = r0.back() * inv_lead % p;
      q[shift] = coef;
      for (std::size_t i = 0; i < r1.size(); ++i) {
        r0[i + shift] = (r0[i + shift] + (p - coef) * r1[i]) % p;
      }
      trim(r0);
    }
    // s2 = s0 - q*s1
    V qs(q.size() + s1.size(), 0);
    for (std::size_t i = 0; i < q.size(); ++i) {
      for (std::size_t j = 0; j < s1.size(); ++j) qs[i + j] = (qs[i + j] + q[i] * s1[j]) % p;
    }
    V s2(std::max(s0.size(), qs.size()), 0);
    for (std::size_t i = 0; i < s2.size(); ++i) {
      const std::uint64_t x = i < s0.size() ? s0[i] : 0;
      const std::uint64_t y = i < qs.size() ? qs[i] : 0;
      s2[i] = (x + p - y) % p;
    }
    trim(s2);
    std::swap(r0, r1);
    std::swap(s0, s1);
    s1 = std::move(s2);
  }
  // r0 is the gcd, a nonzero constant when a != 0.
  if (r0.size() != 1) fail(ErrorCode::Internal, "modulus is not irreducible");
  const std::uint64_t scale = powmod64(r0[0], p - 2, p);
  for (std::size_t i = 0; i < s0.size() && i < f.degree; ++i) {
    out[i] = static_cast<std::uint32_t>(s0[i] * scale % p);
  }
  return out;
}

class FieldRegistry {
 public:
  static FieldRegistry& instance() {
    static FieldRegistry registry;
    return registry;
  }

  const FieldData* intern(std::uint32_t p, const std::vector<std::uint32_t>& modulus) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(p, modulus);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    auto data = std::make_unique<FieldData>();
    data->p = p;
    data->degree = modulus.empty() ? 1u : static_cast<unsigned>(modulus.size() - 1);
    data->modulus = modulus;
    data->log2_order = data->degree * std::log2(static_cast<double>(p));
    data->serial = storage_.size();
    build_frobenius(*data);
    const FieldData* raw = data.get();
    storage_.push_back(std::move(data));
    index_.emplace(std::move(key), raw);
    return raw;
  }

 private:
  static void build_frobenius(FieldData& f) {
    const unsigned n = f.degree;
    f.frob.assign(n, Coeffs{});
    if (n == 1) {
      f.frob[0][0] = 1;
      return;
    }
    Coeffs x{};
    x[1] = 1;
    // xp = x^p
    Coeffs xp{};
    xp[0] = 1;
    Coeffs base = x;
    for (std::uint64_t e = f.p; e > 0; e >>= 1) {
      if (e & 1) mul_into(f, xp, base, xp);
      mul_into(f, base, base, base);
    }
    Coeffs acc{};
    acc[0] = 1;
    for (unsigned i = 0; i < n; ++i) {
      f.frob[i] = acc;
      mul_into(f, acc, xp, acc);
    }
  }

  std::mutex mutex_;
  std::vector<std::unique_ptr<FieldData>> storage_;
  std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>, const FieldData*> index_;
};

}  // namespace detail

/// Handle to an interned finite field. Cheap to copy; immutable.
class Field {
 public:
  Field() = default;
  explicit Field(const detail::FieldData* data) : d_(data) {}

  /// The prime field F_p (p prime, p != 3). The modulus is left empty.
  static Field prime(std::uint32_t p) {
    validate_characteristic(p);
    return Field(detail::FieldRegistry::instance().intern(p, {}));
  }

  /// Interns F_p[x]/(modulus) without checking irreducibility. Use
  /// `field_create` for validated construction.
  static Field unchecked(std::uint32_t p, std::vector<std::uint32_t> modulus) {
    validate_characteristic(p);
    if (modulus.size() <= 2) return prime(p);
    return Field(detail::FieldRegistry::instance().intern(p, std::move(modulus)));
  }

  static void validate_characteristic(std::uint64_t p) {
    if (p == 3) fail(ErrorCode::CharacteristicThree, "characteristic 3 is not supported");
    if (!detail::is_prime(p)) fail(ErrorCode::InvalidField, "characteristic " + std::to_string(p) + " is not prime");
    if (p >= kMaxCharacteristic) fail(ErrorCode::InvalidField, "characteristic too large");
  }

  bool valid() const { return d_ != nullptr; }
  std::uint32_t characteristic() const { return d_->p; }
  unsigned degree() const { return d_->degree; }
  bool is_prime_field() const { return d_->degree == 1; }
  const std::vector<std::uint32_t>& modulus() const { return d_->modulus; }
  double log2_order() const { return d_->log2_order; }
  const detail::FieldData* data() const { return d_; }

  /// Field order when it fits in 64 bits.
  std::optional<std::uint64_t> order() const {
    if (d_->log2_order > 63.0) return std::nullopt;
    std::uint64_t q = 1;
    for (unsigned i = 0; i < d_->degree; ++i) q *= d_->p;
    return q;
  }

  /// Field order, or FieldTooLarge if it exceeds `bound`.
  std::uint64_t order_at_most(std::uint64_t bound) const {
    auto q = order();
    if (!q || *q > bound) fail(ErrorCode::FieldTooLarge, "field " + to_string() + " exceeds enumeration bound");
    return *q;
  }

  /// True if this field contains a copy of `sub` (same p, degree divides).
  bool extends(const Field& sub) const {
    return sub.characteristic() == characteristic() && degree() % sub.degree() == 0;
  }

  Element zero() const;
  Element one() const;
  Element from_int(long long v) const;
  Element from_coeffs(std::span<const std::uint32_t> coeffs) const;
  /// The residue class of x (the modulus root); equals 0 for prime fields.
  Element gen() const;
  /// Element whose base-p digits (c0 least significant) spell `index`.
  Element at(std::uint64_t index) const;

  /// Text form `p=<p>` or `p=<p>,deg=<k>,mod=<c0,...,1>`.
  std::string to_string() const {
    std::ostringstream os;
    os << "p=" << d_->p;
    if (d_->degree > 1) {
      os << ",deg=" << d_->degree << ",mod=";
      for (std::size_t i = 0; i < d_->modulus.size(); ++i) os << (i ? "," : "") << d_->modulus[i];
    }
    return os.str();
  }

  friend bool operator==(const Field& a, const Field& b) { return a.d_ == b.d_; }
  friend bool operator<(const Field& a, const Field& b) { return a.d_->serial < b.d_->serial; }

 private:
  const detail::FieldData* d_ = nullptr;
};

/// Element of a finite field; coefficients little-endian in the modulus root.
class Element {
 public:
  Element() = default;
  Element(const detail::FieldData* f, const Coeffs& c) : f_(f), c_(c) {}

  Field field() const { return Field(f_); }
  bool valid() const { return f_ != nullptr; }
  const Coeffs& coeffs() const { return c_; }
  std::uint32_t coeff(unsigned i) const { return c_[i]; }

  bool is_zero() const {
    for (unsigned i = 0; i < f_->degree; ++i)
      if (c_[i]) return false;
    return true;
  }
  bool is_one() const {
    if (c_[0] != 1) return false;
    for (unsigned i = 1; i < f_->degree; ++i)
      if (c_[i]) return false;
    return true;
  }
  /// True if the element lies in the prime subfield.
  bool in_prime_field() const {
    for (unsigned i = 1; i < f_->degree; ++i)
      if (c_[i]) return false;
    return true;
  }

  Element& operator+=(const Element& o) {
    check(o);
    for (unsigned i = 0; i < f_->degree; ++i) {
      std::uint32_t s = c_[i] + o.c_[i];
      c_[i] = s >= f_->p ? s - f_->p : s;
    }
    return *this;
  }
  Element& operator-=(const Element& o) {
    check(o);
    for (unsigned i = 0; i < f_->degree; ++i) c_[i] = c_[i] >= o.c_[i] ? c_[i] - o.c_[i] : c_[i] + f_->p - o.c_[i];
    return *this;
  }
  Element& operator*=(const Element& o) {
    check(o);
    detail::mul_into(*f_, c_, o.c_, c_);
    return *this;
  }
  Element& operator/=(const Element& o) { return *this *= o.inverse(); }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, const Element& b) { return a *= b; }
  friend Element operator/(Element a, const Element& b) { return a /= b; }
  Element operator-() const {
    Element r = *this;
    for (unsigned i = 0; i < f_->degree; ++i) r.c_[i] = c_[i] ? f_->p - c_[i] : 0;
    return r;
  }

  Element inverse() const {
    if (is_zero()) fail(ErrorCode::DivisionByZero, "inverse of zero");
    return Element(f_, detail::inverse_of(*f_, c_));
  }

  Element pow(unsigned __int128 e) const {
    Element result = field().one();
    Element base = *this;
    while (e > 0) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }

  /// Frobenius x -> x^(p^times), applied as an F_p-linear map.
  Element frobenius(unsigned times = 1) const {
    if (f_->degree == 1) return *this;
    times %= f_->degree;
    Element cur = *this;
    const std::uint64_t p = f_->p;
    for (unsigned t = 0; t < times; ++t) {
      std::array<std::uint64_t, kMaxDegree> acc{};
      for (unsigned i = 0; i < f_->degree; ++i) {
        const std::uint64_t ci = cur.c_[i];
        if (!ci) continue;
        const Coeffs& row = f_->frob[i];
        for (unsigned j = 0; j < f_->degree; ++j) acc[j] += ci * row[j];
      }
      for (unsigned j = 0; j < f_->degree; ++j) cur.c_[j] = static_cast<std::uint32_t>(acc[j] % p);
    }
    return cur;
  }

  /// Base-p index (c0 least significant) when it fits in 64 bits.
  std::optional<std::uint64_t> index() const {
    if (f_->log2_order > 63.0) return std::nullopt;
    std::uint64_t v = 0;
    for (unsigned i = f_->degree; i-- > 0;) v = v * f_->p + c_[i];
    return v;
  }

  /// Decimal integer for prime fields, comma-separated coefficients otherwise.
  std::string to_string() const {
    std::ostringstream os;
    for (unsigned i = 0; i < f_->degree; ++i) os << (i ? "," : "") << c_[i];
    return os.str();
  }

  friend bool operator==(const Element& a, const Element& b) {
    if (a.f_ != b.f_) return false;
    for (unsigned i = 0; i < a.f_->degree; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  /// Total order by base-p index, highest coefficient compared first.
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) {
    if (a.f_ != b.f_) return a.f_->serial <=> b.f_->serial;
    for (unsigned i = a.f_->degree; i-- > 0;) {
      if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
    }
    return std::strong_ordering::equal;
  }

 private:
  void check(const Element& o) const {
    if (f_ != o.f_) fail(ErrorCode::FieldMismatch, "operands live in different fields");
  }

  const detail::FieldData* f_ = nullptr;
  Coeffs c_{};
};

inline Element Field::zero() const { return Element(d_, Coeffs{}); }
inline Element Field::one() const {
  Coeffs c{};
  c[0] = 1;
  return Element(d_, c);
}
inline Element Field::from_int(long long v) const {
  long long r = v % static_cast<long long>(d_->p);
  if (r < 0) r += d_->p;
  Coeffs c{};
  c[0] = static_cast<std::uint32_t>(r);
  return Element(d_, c);
}
inline Element Field::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() > d_->degree) fail(ErrorCode::ParseError, "too many coefficients for " + to_string());
  Coeffs c{};
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] >= d_->p) fail(ErrorCode::ParseError, "coefficient out of range for " + to_string());
    c[i] = coeffs[i];
  }
  return Element(d_, c);
}
inline Element Field::gen() const {
  Coeffs c{};
  if (d_->degree > 1) c[1] = 1;
  return Element(d_, c);
}
inline Element Field::at(std::uint64_t index) const {
  Coeffs c{};
  for (unsigned i = 0; i < d_->degree; ++i) {
    c[i] = static_cast<std::uint32_t>(index % d_->p);
    index /= d_->p;
  }
  return Element(d_, c);
}

/// e^q for q a power of the characteristic dividing into the field degree.
inline Element frobenius(const Element& e, std::uint64_t q) {
  const std::uint32_t p = e.field().characteristic();
  unsigned times = 0;
  while (q > 1) {
    if (q % p != 0) fail(ErrorCode::InvalidField, "frobenius order is not a power of the characteristic");
    q /= p;
    ++times;
  }
  return e.frobenius(times);
}

/// All elements in index order; FieldTooLarge beyond `bound`.
inline std::vector<Element> all_elements(const Field& f, std::uint64_t bound = 1u << 20) {
  const std::uint64_t q = f.order_at_most(bound);
  std::vector<Element> out;
  out.reserve(q);
  for (std::uint64_t i = 0; i < q; ++i) out.push_back(f.at(i));
  return out;
}

}  // namespace hesse3
