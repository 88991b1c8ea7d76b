#pragma once

// Factorization of univariate polynomials over finite fields (squarefree,
// distinct-degree and Cantor-Zassenhaus equal-degree splitting), root finding
// in extension fields, validated field construction and field embeddings.

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "hesse3/field.hpp"
#include "hesse3/poly.hpp"

namespace hesse3 {

/// Seed for the randomized splitting steps. Results never depend on it; only
/// the path taken to reach them does.
inline std::atomic<std::uint64_t>& random_seed() {
  static std::atomic<std::uint64_t> seed{0};
  return seed;
}

namespace detail {

inline std::mt19937_64 rng_for(const Poly& f, std::uint64_t salt) {
  std::uint64_t h = random_seed().load() * 0x9e3779b97f4a7c15ULL + salt;
  h ^= static_cast<std::uint64_t>(f.degree() + 1) * 0xbf58476d1ce4e5b9ULL;
  for (std::size_t i = 0; i < f.coeffs().size() && i < 4; ++i) h = h * 31 + f.coeffs()[i].coeff(0);
  return std::mt19937_64(h);
}

inline Element random_element(const Field& f, std::mt19937_64& rng) {
  Coeffs c{};
  std::uniform_int_distribution<std::uint32_t> dist(0, f.characteristic() - 1);
  for (unsigned i = 0; i < f.degree(); ++i) c[i] = dist(rng);
  return Element(f.data(), c);
}

// g^(p^times) mod m using repeated p-th powers.
inline Poly pth_power_iter(Poly g, unsigned times, const Poly& m) {
  const std::uint32_t p = g.field().characteristic();
  for (unsigned i = 0; i < times; ++i) g = g.powmod(p, m);
  return g;
}

// p-th root of a polynomial whose derivative vanishes.
inline Poly pth_root(const Poly& f) {
  const Field F = f.field();
  const unsigned p = F.characteristic();
  std::vector<Element> out;
  for (int i = 0; i <= f.degree(); i += static_cast<int>(p)) out.push_back(f.coeff(i).frobenius(F.degree() - 1));
  return Poly(F, std::move(out));
}

}  // namespace detail

/// Squarefree decomposition f = lc * prod g_i^{m_i} with g_i monic,
/// squarefree and pairwise coprime.
inline std::vector<std::pair<Poly, unsigned>> squarefree_factorization(const Poly& f) {
  if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "squarefree factorization of zero");
  std::vector<std::pair<Poly, unsigned>> out;
  const unsigned p = f.field().characteristic();
  struct Frame {
    Poly poly;
    unsigned mult;
  };
  std::vector<Frame> stack{{f.monic(), 1}};
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    if (fr.poly.degree() < 1) continue;
    Poly c = gcd(fr.poly, fr.poly.derivative());
    Poly w = fr.poly.exact_div(c);
    unsigned i = 1;
    while (w.degree() >= 1) {
      Poly y = gcd(w, c);
      Poly z = w.exact_div(y);
      if (z.degree() >= 1) out.emplace_back(z.monic(), i * fr.mult);
      ++i;
      w = y;
      c = c.exact_div(y);
    }
    if (c.degree() >= 1) stack.push_back({detail::pth_root(c).monic(), fr.mult * p});
  }
  return out;
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs
/// (product of all irreducible factors of degree d, d).
inline std::vector<std::pair<Poly, unsigned>> distinct_degree_factorization(Poly f) {
  std::vector<std::pair<Poly, unsigned>> out;
  const Field F = f.field();
  const Poly x = Poly::x(F);
  Poly h = x % f;
  for (unsigned d = 1; f.degree() >= static_cast<int>(2 * d); ++d) {
    h = detail::pth_power_iter(h, F.degree(), f);
    Poly g = gcd(f, h - x);
    if (g.degree() >= 1) {
      out.emplace_back(g, d);
      f = f.exact_div(g);
      h = h % f;
    }
  }
  if (f.degree() >= 1) out.emplace_back(f.monic(), static_cast<unsigned>(f.degree()));
  return out;
}

/// Splits a monic squarefree product of irreducibles of degree d.
inline std::vector<Poly> equal_degree_factorization(const Poly& f, unsigned d) {
  std::vector<Poly> done;
  std::vector<Poly> todo{f.monic()};
  const Field F = f.field();
  const unsigned p = F.characteristic();
  const unsigned steps = F.degree() * d;
  auto rng = detail::rng_for(f, d);
  while (!todo.empty()) {
    Poly g = std::move(todo.back());
    todo.pop_back();
    if (g.degree() <= static_cast<int>(d)) {
      done.push_back(g);
      continue;
    }
    for (;;) {
      std::vector<Element> hc;
      for (int i = 0; i < g.degree(); ++i) hc.push_back(detail::random_element(F, rng));
      Poly h(F, hc);
      if (h.degree() < 1) continue;
      Poly probe(F);
      if (p == 2) {
        Poly acc = h % g, term = h % g;
        for (unsigned i = 1; i < steps; ++i) {
          term = (term * term) % g;
          acc += term;
        }
        probe = acc;
      } else {
        Poly acc = h % g, term = h % g;
        for (unsigned i = 1; i < steps; ++i) {
          term = term.powmod(p, g);
          acc = (acc * term) % g;
        }
        probe = acc.powmod((p - 1) / 2, g) - Poly::constant(F.one());
      }
      Poly s = gcd(g, probe);
      if (s.degree() >= 1 && s.degree() < g.degree()) {
        todo.push_back(g.exact_div(s).monic());
        todo.push_back(s);
        break;
      }
    }
  }
  return done;
}

/// Complete factorization into monic irreducibles with multiplicity.
inline std::vector<std::pair<Poly, unsigned>> factor(const Poly& f) {
  std::vector<std::pair<Poly, unsigned>> out;
  for (auto& [g, m] : squarefree_factorization(f)) {
    for (auto& [h, d] : distinct_degree_factorization(g)) {
      for (auto& irr : equal_degree_factorization(h, d)) out.emplace_back(irr, m);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
    return a.first.coeffs() < b.first.coeffs();
  });
  return out;
}

/// Rabin's irreducibility test.
inline bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) return false;
  if (f.degree() == 1) return true;
  const Poly m = f.monic();
  const Field F = f.field();
  const unsigned n = static_cast<unsigned>(m.degree());
  const Poly x = Poly::x(F);
  auto x_pow_qk = [&](unsigned k) { return detail::pth_power_iter(x % m, F.degree() * k, m); };
  if (!((x_pow_qk(n) - x) % m).is_zero()) return false;
  for (std::uint64_t r : detail::prime_factors(n)) {
    if (gcd(m, x_pow_qk(n / static_cast<unsigned>(r)) - x).degree() != 0) return false;
  }
  return true;
}

namespace detail {

inline Poly modulus_poly(const Field& prime, const std::vector<std::uint32_t>& mod) {
  std::vector<Element> c;
  for (auto v : mod) c.push_back(prime.from_int(v));
  return Poly(prime, std::move(c));
}

inline std::vector<std::uint32_t> default_modulus(std::uint32_t p, unsigned k) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, unsigned>, std::vector<std::uint32_t>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({p, k}); it != cache.end()) return it->second;
  }
  const Field Fp = Field::prime(p);
  std::vector<std::uint32_t> digits(k, 0);
  // Enumerate c_0 + c_1 p + ... in increasing order; c_0 = 0 is never irreducible.
  for (;;) {
    unsigned i = 0;
    while (i < k) {
      if (++digits[i] < p) break;
      digits[i] = 0;
      ++i;
    }
    if (i == k) fail(ErrorCode::Internal, "no irreducible polynomial found");
    if (digits[0] == 0) continue;
    std::vector<std::uint32_t> mod = digits;
    mod.push_back(1);
    if (is_irreducible(modulus_poly(Fp, mod))) {
      std::lock_guard lock(mu);
      cache[{p, k}] = mod;
      return mod;
    }
  }
}

}  // namespace detail

/// Validated field construction. With k > 1 and no modulus, the monic
/// irreducible of degree k with the smallest coefficient index
/// c_0 + c_1 p + ... + c_{k-1} p^{k-1} is used.
inline Field field_create(std::uint32_t p, unsigned k = 1, std::optional<std::vector<std::uint32_t>> modulus = std::nullopt) {
  Field::validate_characteristic(p);
  if (k == 0 || k > kMaxDegree) fail(ErrorCode::InvalidField, "extension degree out of range");
  if (k == 1) {
    if (modulus && modulus->size() != 2) fail(ErrorCode::InvalidField, "modulus degree does not match");
    return Field::prime(p);
  }
  std::vector<std::uint32_t> mod;
  if (modulus) {
    mod = *modulus;
    if (mod.size() != k + 1 || mod.back() != 1) fail(ErrorCode::InvalidField, "modulus must be monic of degree k");
    for (auto c : mod)
      if (c >= p) fail(ErrorCode::InvalidField, "modulus coefficient out of range");
    if (!is_irreducible(detail::modulus_poly(Field::prime(p), mod))) fail(ErrorCode::ReducibleModulus, "supplied modulus factors over F_p");
  } else {
    mod = detail::default_modulus(p, k);
  }
  return Field::unchecked(p, std::move(mod));
}

/// The canonical degree-m extension of `base` (absolute degree deg(base)*m).
inline Field extension_of(const Field& base, unsigned m) {
  if (m == 1) return base;
  if (base.degree() * m > kMaxDegree) fail(ErrorCode::ExtensionTooLarge, "extension degree exceeds storage limit");
  return field_create(base.characteristic(), base.degree() * m);
}

class Embedding;
inline std::shared_ptr<const Embedding> embedding(const Field& src, const Field& tgt, const std::vector<Field>& chain = {});

/// Roots of f lying in `where` (an extension of f's field), with multiplicity,
/// in ascending element order.
inline std::vector<Element> poly_roots(const Poly& f, const Field& where);

/// A field homomorphism src -> tgt fixed by the image of the modulus root.
class Embedding {
 public:
  Embedding(Field src, Field tgt, Element root) : src_(src), tgt_(tgt), root_(root) {
    Element acc = tgt.one();
    for (unsigned i = 0; i < src.degree(); ++i) {
      images_.push_back(acc);
      acc *= root;
    }
  }

  const Field& source() const { return src_; }
  const Field& target() const { return tgt_; }
  const Element& root() const { return root_; }

  Element operator()(const Element& e) const {
    if (e.field() != src_) fail(ErrorCode::FieldMismatch, "embedding applied to foreign element");
    Element out = tgt_.zero();
    for (unsigned i = 0; i < src_.degree(); ++i) {
      if (e.coeff(i)) out += images_[i] * tgt_.from_int(e.coeff(i));
    }
    return out;
  }

  Poly operator()(const Poly& f) const {
    std::vector<Element> c;
    for (const auto& e : f.coeffs()) c.push_back((*this)(e));
    return Poly(tgt_, std::move(c));
  }

  /// Preimage of e in the source field, if e lies in the image.
  std::optional<Element> preimage(const Element& e) const {
    // Solve sum_i c_i images_[i] = e over F_p.
    const unsigned n = src_.degree(), N = tgt_.degree();
    const std::uint64_t p = src_.characteristic();
    std::vector<std::vector<std::uint64_t>> rows(N, std::vector<std::uint64_t>(n + 1));
    for (unsigned r = 0; r < N; ++r) {
      for (unsigned c = 0; c < n; ++c) rows[r][c] = images_[c].coeff(r);
      rows[r][n] = e.coeff(r);
    }
    std::vector<int> pivot_col;
    unsigned rank = 0;
    for (unsigned c = 0; c < n && rank < N; ++c) {
      unsigned piv = rank;
      while (piv < N && rows[piv][c] == 0) ++piv;
      if (piv == N) continue;
      std::swap(rows[piv], rows[rank]);
      const std::uint64_t inv = detail::powmod64(rows[rank][c], p - 2, p);
      for (auto& v : rows[rank]) v = v * inv % p;
      for (unsigned r = 0; r < N; ++r) {
        if (r == rank || rows[r][c] == 0) continue;
        const std::uint64_t fct = rows[r][c];
        for (unsigned k = 0; k <= n; ++k) rows[r][k] = (rows[r][k] + (p - fct) * rows[rank][k]) % p;
      }
      pivot_col.push_back(static_cast<int>(c));
      ++rank;
    }
    for (unsigned r = rank; r < N; ++r)
      if (rows[r][n] != 0) return std::nullopt;
    Coeffs out{};
    for (unsigned r = 0; r < rank; ++r) out[pivot_col[r]] = static_cast<std::uint32_t>(rows[r][n]);
    return Element(src_.data(), out);
  }

 private:
  Field src_, tgt_;
  Element root_;
  std::vector<Element> images_;
};

/// Image of e under the canonical embedding into `target`.
inline Element embed(const Element& e, const Field& target) {
  if (e.field() == target) return e;
  return (*embedding(e.field(), target))(e);
}

inline Poly embed(const Poly& f, const Field& target) {
  if (f.field() == target) return f;
  return (*embedding(f.field(), target))(f);
}

namespace detail {

// One root of a polynomial that splits into distinct linear factors.
inline Element one_root_of_split(Poly g) {
  g = g.monic();
  const Field F = g.field();
  const unsigned p = F.characteristic();
  auto rng = rng_for(g, 0x5eed);
  while (g.degree() > 1) {
    Element c1 = random_element(F, rng);
    if (c1.is_zero()) c1 = F.one();
    Poly h(F, {random_element(F, rng), c1});
    Poly probe(F);
    const unsigned steps = F.degree();
    Poly term = h % g, acc = h % g;
    if (p == 2) {
      for (unsigned i = 1; i < steps; ++i) {
        term = (term * term) % g;
        acc += term;
      }
      probe = acc;
    } else {
      for (unsigned i = 1; i < steps; ++i) {
        term = term.powmod(p, g);
        acc = (acc * term) % g;
      }
      probe = acc.powmod((p - 1) / 2, g) - Poly::constant(F.one());
    }
    Poly s = gcd(g, probe);
    if (s.degree() >= 1 && s.degree() < g.degree()) {
      Poly other = g.exact_div(s);
      g = s.degree() <= other.degree() ? s : other.monic();
    }
  }
  return -g.coeff(0);
}

}  // namespace detail

inline std::vector<Element> poly_roots(const Poly& f, const Field& where) {
  if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "roots of the zero polynomial");
  const Field K = f.field();
  if (!where.extends(K)) fail(ErrorCode::NoEmbedding, "root field does not contain the coefficient field");
  const unsigned rel = where.degree() / K.degree();
  std::vector<Element> out;
  std::shared_ptr<const Embedding> emb = K == where ? nullptr : embedding(K, where);
  for (auto& [g, mult] : squarefree_factorization(f)) {
    for (auto& [h, d] : distinct_degree_factorization(g)) {
      if (rel % d != 0) continue;
      for (auto& irr : equal_degree_factorization(h, d)) {
        Poly lifted = emb ? (*emb)(irr) : irr;
        Element r = lifted.degree() == 1 ? -lifted.monic().coeff(0) : detail::one_root_of_split(lifted);
        for (unsigned i = 0; i < d; ++i) {
          for (unsigned m = 0; m < mult; ++m) out.push_back(r);
          r = r.frobenius(K.degree());
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Distinct roots only.
inline std::vector<Element> distinct_roots(const Poly& f, const Field& where) {
  auto r = poly_roots(f, where);
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

/// Smallest extension degree of f's field over which f splits completely.
inline unsigned splitting_degree(const Poly& f) {
  unsigned l = 1;
  for (auto& [g, m] : factor(f)) l = std::lcm(l, static_cast<unsigned>(g.degree()));
  return l;
}

namespace detail {

class EmbeddingCache {
 public:
  static EmbeddingCache& instance() {
    static EmbeddingCache c;
    return c;
  }
  using Key = std::tuple<std::uint64_t, std::uint64_t, std::vector<std::uint64_t>>;
  std::shared_ptr<const Embedding> find(const Key& k) {
    std::lock_guard lock(mu_);
    auto it = map_.find(k);
    return it == map_.end() ? nullptr : it->second;
  }
  void put(const Key& k, std::shared_ptr<const Embedding> e) {
    std::lock_guard lock(mu_);
    map_.emplace(k, std::move(e));
  }

 private:
  std::mutex mu_;
  std::map<Key, std::shared_ptr<const Embedding>> map_;
};

// Evaluates the coefficient polynomial of w (an element of src) at alpha.
inline Element evaluate_at_root(const Element& w, const Element& alpha) {
  const Field T = alpha.field();
  Element acc = T.zero();
  for (unsigned i = w.field().degree(); i-- > 0;) acc = acc * alpha + T.from_int(w.coeff(i));
  return acc;
}

}  // namespace detail

/// Embedding src -> tgt. Without a chain this is the canonical embedding
/// sending the modulus root to its smallest root in tgt. With a chain
/// [c_0, ..., c_r] of intermediate fields, the smallest root is chosen
/// among those making the square with embedding(c_r -> src, [c_0..c_{r-1}])
/// and embedding(c_r -> tgt, [c_0..c_{r-1}]) commute. Chain members not
/// contained in src are skipped.
inline std::shared_ptr<const Embedding> embedding(const Field& src, const Field& tgt, const std::vector<Field>& chain) {
  if (!tgt.extends(src)) fail(ErrorCode::NoEmbedding, "cannot embed " + src.to_string() + " into " + tgt.to_string());
  std::vector<Field> eff;
  for (const auto& c : chain)
    if (src.extends(c) && !c.is_prime_field()) eff.push_back(c);
  while (!eff.empty() && eff.back() == src) eff.pop_back();
  detail::EmbeddingCache::Key key{src.data()->serial, tgt.data()->serial, {}};
  for (const auto& c : eff) std::get<2>(key).push_back(c.data()->serial);
  if (auto hit = detail::EmbeddingCache::instance().find(key)) return hit;

  std::shared_ptr<const Embedding> result;
  if (src == tgt) {
    result = std::make_shared<Embedding>(src, tgt, src.gen());
  } else if (src.is_prime_field()) {
    result = std::make_shared<Embedding>(src, tgt, tgt.one());
  } else {
    const Field Fp = Field::prime(src.characteristic());
    auto roots = distinct_roots(detail::modulus_poly(Fp, src.modulus()), tgt);
    if (roots.empty()) fail(ErrorCode::NoEmbedding, "modulus has no root in target");
    if (eff.empty()) {
      result = std::make_shared<Embedding>(src, tgt, roots.front());
    } else {
      const Field c = eff.back();
      std::vector<Field> rest(eff.begin(), eff.end() - 1);
      auto e_cs = embedding(c, src, rest);
      auto e_ct = embedding(c, tgt, rest);
      const Element w = (*e_cs)(c.gen());
      const Element v = (*e_ct)(c.gen());
      for (const auto& alpha : roots) {
        if (detail::evaluate_at_root(w, alpha) == v) {
          result = std::make_shared<Embedding>(src, tgt, alpha);
          break;
        }
      }
      if (!result) fail(ErrorCode::Internal, "no compatible embedding");
    }
  }
  detail::EmbeddingCache::instance().put(key, result);
  return result;
}

/// Pulls an element of `big` back into `small` along the canonical
/// embedding, if it lies in the image.
inline std::optional<Element> restrict_to(const Element& e, const Field& small) {
  if (e.field() == small) return e;
  return embedding(small, e.field())->preimage(e);
}

/// Square root in the element's own field, if one exists.
inline std::optional<Element> sqrt(const Element& c) {
  const Field F = c.field();
  if (c.is_zero()) return F.zero();
  auto r = poly_roots(Poly(F, {-c, F.zero(), F.one()}), F);
  if (r.empty()) return std::nullopt;
  return r.front();
}

}  // namespace hesse3
