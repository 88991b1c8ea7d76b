#pragma once

// Text forms of fields, elements, curves and pencil parameters. Every
// to_string in the library re-parses to the same object.

#include <charconv>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hesse3/elliptic.hpp"
#include "hesse3/factor.hpp"
#include "hesse3/pencil.hpp"

namespace hesse3 {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline long long parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorCode::ParseError, "bad integer '" + std::string(s) + "' in " + std::string(what));
  return v;
}

/// Splits `k1=v1,k2=v2,...` where a value may itself contain commas: a
/// token without '=' continues the previous value.
inline std::vector<std::pair<std::string, std::string>> key_values(std::string_view s) {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto tok : split(s, ',')) {
    auto eq = tok.find('=');
    if (eq == std::string_view::npos) {
      if (out.empty()) fail(ErrorCode::ParseError, "expected key=value, got '" + std::string(tok) + "'");
      out.back().second += "," + std::string(tok);
    } else {
      out.emplace_back(std::string(trim(tok.substr(0, eq))), std::string(trim(tok.substr(eq + 1))));
    }
  }
  return out;
}

}  // namespace detail

/// `p=<prime>` or `p=<prime>,deg=<k>[,mod=<c0,...,1>]`.
inline Field parse_field(std::string_view text) {
  const auto kv = detail::key_values(text);
  if (kv.empty() || kv[0].first != "p") fail(ErrorCode::ParseError, "field spec must start with p=");
  const long long p = detail::parse_int(kv[0].second, "p");
  if (p < 2 || p > static_cast<long long>(kMaxCharacteristic) || !detail::is_prime(static_cast<std::uint64_t>(p)))
    fail(ErrorCode::InvalidField, "p must be a supported prime");
  unsigned k = 1;
  std::optional<std::vector<std::uint32_t>> mod;
  for (std::size_t i = 1; i < kv.size(); ++i) {
    const auto& [key, val] = kv[i];
    if (key == "deg" && i == 1) {
      const long long d = detail::parse_int(val, "deg");
      if (d < 1 || d > static_cast<long long>(kMaxDegree)) fail(ErrorCode::InvalidField, "deg out of range");
      k = static_cast<unsigned>(d);
    } else if (key == "mod" && i == 2) {
      std::vector<std::uint32_t> c;
      for (auto t : detail::split(val, ',')) {
        const long long v = detail::parse_int(t, "mod");
        if (v < 0 || v >= p) fail(ErrorCode::InvalidField, "modulus coefficient out of range");
        c.push_back(static_cast<std::uint32_t>(v));
      }
      mod = std::move(c);
    } else {
      fail(ErrorCode::ParseError, "unexpected key '" + key + "' in field spec");
    }
  }
  return field_create(static_cast<std::uint32_t>(p), k, mod);
}

/// Decimal integer, or coefficient vector c0,c1,... (little-endian).
inline Element parse_element(std::string_view text, const Field& f) {
  const auto toks = detail::split(text, ',');
  if (toks.size() == 1) {
    const long long v = detail::parse_int(toks[0], "element");
    if (f.is_prime_field() || (v >= 0 && v < static_cast<long long>(f.characteristic()))) return f.from_int(v);
    fail(ErrorCode::ParseError, "extension-field constants are written as coefficient vectors");
  }
  std::vector<std::uint32_t> c;
  for (auto t : toks) {
    const long long v = detail::parse_int(t, "element");
    if (v < 0 || v >= static_cast<long long>(f.characteristic())) fail(ErrorCode::ParseError, "coefficient out of range");
    c.push_back(static_cast<std::uint32_t>(v));
  }
  return f.from_coeffs(c);
}

/// `shortw:a=,b=` | `ord2:a2=,a6=` | `ss2:a3=,a4=,a6=`, and the general
/// `weier:a1=,a2=,a3=,a4=,a6=` which is normalized into one of them.
inline EllipticModel parse_curve(std::string_view text, const Field& f) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) fail(ErrorCode::ParseError, "curve spec needs a shape prefix");
  const std::string shape(detail::trim(text.substr(0, colon)));
  const auto kv = detail::key_values(text.substr(colon + 1));
  auto expect = [&](std::vector<std::string> names) {
    if (kv.size() != names.size()) fail(ErrorCode::ParseError, "wrong number of coefficients for " + shape);
    std::vector<Element> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (kv[i].first != names[i]) fail(ErrorCode::ParseError, "expected " + names[i] + "= in " + shape + " spec");
      out.push_back(parse_element(kv[i].second, f));
    }
    return out;
  };
  if (shape == "shortw") {
    auto c = expect({"a", "b"});
    return EllipticModel::shortw(c[0], c[1]);
  }
  if (shape == "ord2") {
    auto c = expect({"a2", "a6"});
    return EllipticModel::ord2(c[0], c[1]);
  }
  if (shape == "ss2") {
    auto c = expect({"a3", "a4", "a6"});
    return EllipticModel::ss2(c[0], c[1], c[2]);
  }
  if (shape == "weier") {
    auto c = expect({"a1", "a2", "a3", "a4", "a6"});
    WCoeffs a;
    a[0] = f.zero();
    a[5] = f.zero();
    a[1] = c[0], a[2] = c[1], a[3] = c[2], a[4] = c[3], a[6] = c[4];
    return EllipticModel::from_general(a).curve;
  }
  fail(ErrorCode::ParseError, "unknown curve shape '" + shape + "'");
}

inline PencilParam parse_param(std::string_view text, const Field& f) {
  if (detail::trim(text) == "inf") return PencilParam::inf();
  return PencilParam::finite(parse_element(text, f));
}

}  // namespace hesse3
