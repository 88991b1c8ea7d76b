#pragma once

// Command dispatch for the hesse3 tool. Kept in a header so tests can drive
// it in-process with captured streams.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "hesse3/hesse3.hpp"

namespace hesse3::cli {

using nlohmann::json;

inline json to_json(const Element& e) { return e.to_string(); }

inline json to_json(const Poly& p) {
  json a = json::array();
  for (const auto& c : p.coeffs()) a.push_back(c.to_string());
  return a;
}

inline json to_json(const RationalFn& f) { return {{"num", to_json(f.num)}, {"den", to_json(f.den)}}; }

inline json to_json(const Mat3& m) {
  json a = json::array();
  for (int i = 0; i < 3; ++i) a.push_back({m(i, 0).to_string(), m(i, 1).to_string(), m(i, 2).to_string()});
  return a;
}

inline json to_json(const Mat2F3& m) { return json::array({{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}); }

inline json to_json(const EllipticModel& E) { return {{"spec", E.to_string()}, {"field", E.field().to_string()}, {"shape", shape_name(E.shape())}}; }

inline json to_json(const CurveIso& c) {
  return {{"u", c.u.to_string()}, {"r", c.r.to_string()}, {"s", c.s.to_string()}, {"w", c.w.to_string()}};
}

inline json to_json(const PencilParam& p) { return p.to_string(); }

inline json to_json(const ProjPoint2& p) { return p.to_string(); }

inline json to_json(const Point& p) { return p.to_string(); }

inline json to_json(const FiberResult& fr) {
  json j{{"smooth", fr.smooth}};
  if (fr.model) {
    j["model"] = to_json(*fr.model);
    j["j_invariant"] = fr.model->j_invariant().to_string();
  }
  if (fr.B) j["B"] = to_json(*fr.B);
  if (fr.witness) j["singular_point"] = to_json(*fr.witness);
  return j;
}

inline json to_json(const PencilWeierstrass& pw) {
  json j{{"curve", to_json(pw.curve)},
         {"family", shape_name(pw.family)},
         {"singular_quartic", to_json(pw.singular_quartic)},
         {"j", to_json(pw.j)}};
  switch (pw.family) {
    case Shape::ShortW: {
      j["a_t"] = to_json(pw.a_t);
      j["b_t"] = to_json(pw.b_t);
      j["detA"] = to_json(pw.detA);
      json A = json::array();
      for (const auto& row : pw.A) A.push_back({to_json(row[0]), to_json(row[1]), to_json(row[2])});
      j["A"] = A;
      break;
    }
    case Shape::Char2Ord:
      j["b1"] = to_json(pw.b1);
      j["b2"] = to_json(pw.b2);
      j["b6"] = to_json(pw.b6);
      break;
    case Shape::Char2SS:
      j["b2"] = to_json(pw.b2_rat);
      j["b6"] = to_json(pw.b6_rat);
      break;
  }
  if (pw.family != Shape::ShortW) {
    j["special_t"] = pw.special_t.to_string();
    j["special_model"] = pw.special_model ? to_json(*pw.special_model) : json(nullptr);
  }
  return j;
}

/// Aligned `path  value` lines.
inline void render_pretty(const json& j, std::ostream& out) {
  std::vector<std::pair<std::string, std::string>> rows;
  auto walk = [&](auto&& self, const json& v, const std::string& path) -> void {
    if (v.is_object() && !v.empty()) {
      for (auto it = v.begin(); it != v.end(); ++it) self(self, it.value(), path.empty() ? it.key() : path + "." + it.key());
    } else if (v.is_array() && !v.empty() && std::any_of(v.begin(), v.end(), [](const json& e) { return e.is_object(); })) {
      for (std::size_t i = 0; i < v.size(); ++i) self(self, v[i], path + "[" + std::to_string(i) + "]");
    } else {
      rows.emplace_back(path, v.is_string() ? v.get<std::string>() : v.dump());
    }
  };
  walk(walk, j, "");
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.first.size());
  for (const auto& [k, v] : rows) out << std::left << std::setw(static_cast<int>(w + 2)) << k << v << "\n";
}

struct Options {
  std::string field, curve, other, t, j;
  bool json_out = false, pretty = false;
  std::uint64_t seed = 0;
  unsigned jobs = 1, max_ext = 24;
};

inline json command_info(const Field& k, const EllipticModel& E) {
  const auto pts = points_over(E, k);
  json pj = json::array();
  for (const auto& P : pts) pj.push_back(to_json(P));
  const TorsionBasis tb = torsion3(E);
  return {{"field", k.to_string()},
          {"curve", to_json(E)},
          {"discriminant", E.discriminant().to_string()},
          {"j_invariant", E.j_invariant().to_string()},
          {"point_count", pts.size()},
          {"points", pj},
          {"automorphisms_over_field", automorphisms(E, k).size()},
          {"torsion_field_degree", tb.m}};
}

inline json command_torsion(const EllipticModel& E) {
  const TorsionBasis tb = torsion3(E);
  json pts = json::array();
  for (const auto& P : tb.points) pts.push_back(to_json(P));
  return {{"curve", to_json(E)},
          {"torsion_field", tb.field.to_string()},
          {"degree", tb.m},
          {"points", pts},
          {"S", to_json(tb.S)},
          {"T", to_json(tb.T)},
          {"zeta3", tb.zeta.to_string()},
          {"frobenius_matrix", to_json(frobenius_matrix(tb))}};
}

inline json command_pairing(const EllipticModel& E) {
  const TorsionBasis tb = torsion3(E);
  const Element tan = weil_pairing_tangent(tb.curve_ext, tb.S, tb.T);
  const Element mil = weil_pairing_miller(tb.curve_ext, tb.S, tb.T);
  return {{"curve", to_json(E)},   {"torsion_field", tb.field.to_string()},
          {"S", to_json(tb.S)},    {"T", to_json(tb.T)},
          {"tangent", tan.to_string()}, {"miller", mil.to_string()},
          {"zeta3", tb.zeta.to_string()}, {"agree", tan == mil}};
}

inline json command_match_j(const Field& k, const EllipticModel& E, const Element& jp) {
  const PencilWeierstrass pw = pencil_weierstrass(E);
  const MatchingData md = matching_data(pw, jp);
  json params = json::array();
  for (const auto& p : matching_fibers(pw, jp, k)) params.push_back(to_json(p));
  json j{{"curve", to_json(E)}, {"j", jp.to_string()}, {"includes_infinity", md.includes_infinity}, {"parameters", params}};
  j["special_t"] = md.special_t ? json(md.special_t->to_string()) : json(nullptr);
  if (md.G && !md.G->is_zero()) {
    j["G"] = to_json(*md.G);
    j["G_degree"] = md.G->degree();
    j["G_splitting_degree"] = splitting_degree(*md.G);
  } else {
    j["G"] = nullptr;
  }
  return j;
}

inline json command_singular(const Field& k, const EllipticModel& E) {
  const PencilWeierstrass pw = pencil_weierstrass(E);
  json params = json::array();
  for (const auto& p : singular_parameters(pw, k)) {
    const FiberResult fr = fiber(pw, p);
    params.push_back({{"t", to_json(p)}, {"singular_point", fr.witness ? to_json(*fr.witness) : json(nullptr)}});
  }
  return {{"curve", to_json(E)},
          {"singular_quartic", to_json(pw.singular_quartic)},
          {"splitting_degree", splitting_degree(pw.singular_quartic)},
          {"parameters", params}};
}

inline json command_check(const EllipticModel& E, const EllipticModel& Ep, unsigned max_ext, bool& ok) {
  const TheoremReport rep = theorem_check(E, Ep);
  ok = rep.verdict;
  json j{{"curve", to_json(E)}, {"other", to_json(Ep)}, {"verdict", rep.verdict}};
  j["witness1"] = rep.witness1 ? to_json(*rep.witness1) : json(nullptr);
  j["witness2"] = rep.witness2 ? json{{"t", to_json(rep.witness2->first)}, {"iso", to_json(rep.witness2->second)}} : json(nullptr);
  if (rep.witness1) {
    // Realize the rational symplectic isomorphism over the closure and try to descend it.
    try {
      const Realization r = realize_symplectic(E, Ep, *rep.witness1, max_ext);
      const auto down = descend_pgl3(r.Phi, E.field());
      j["realization"] = {{"t", to_json(r.t0)}, {"field", r.field.to_string()}, {"Phi", to_json(r.Phi)}, {"descends", down.has_value()}};
      if (down) j["realization"]["Phi_base"] = to_json(*down);
      if (!r.t0.infinity)
        if (auto t = restrict_to(r.t0.t, E.field())) j["realization"]["t_base"] = t->to_string();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ExtensionTooLarge) throw;
      j["realization"] = {{"skipped", std::string(error_name(e.code()))}};
    }
  }
  return j;
}

inline json command_verify(const Field& k, unsigned jobs, bool& ok) {
  const VerifySummary s = exhaustive_verify(k, jobs);
  const auto curves = all_curves(k);
  json mis = json::array();
  for (auto [a, b] : s.mismatches) mis.push_back({curves[a].to_string(), curves[b].to_string()});
  ok = s.mismatches.empty();
  return {{"field", k.to_string()}, {"curves", s.curves}, {"pairs", s.pairs}, {"equivalences", s.equivalences},
          {"memberships", s.memberships}, {"mismatches", mis}, {"jobs", jobs}};
}

inline json error_json(const std::string& code, const std::string& msg) { return {{"error", {{"code", code}, {"message", msg}}}}; }

/// Parses argv, runs the command, writes the report. Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hesse pencils of elliptic curves over finite fields", "hesse3"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--field", o.field, "field spec, p=<p> or p=<p>,deg=<k>[,mod=<c0,...,1>]");
  app.add_option("--curve", o.curve, "curve spec, shortw:a=,b= | ord2:a2=,a6= | ss2:a3=,a4=,a6=");
  app.add_option("--other", o.other, "second curve spec (check)");
  app.add_option("--t", o.t, "pencil parameter, element or inf");
  app.add_option("--j", o.j, "target j-invariant");
  app.add_flag("--json", o.json_out, "JSON output (default)");
  app.add_flag("--pretty", o.pretty, "aligned text output");
  app.add_option("--seed", o.seed, "seed for randomized root finding");
  app.add_option("--jobs", o.jobs, "worker threads for verify")->check(CLI::PositiveNumber);
  app.add_option("--max-ext", o.max_ext, "largest extension degree for realizations")->check(CLI::PositiveNumber);
  const std::vector<std::string> names{"info", "pencil", "fiber", "torsion", "pairing", "match-j", "singular", "check", "verify"};
  for (const auto& n : names) app.add_subcommand(n);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json("UsageError", e.what()).dump() << "\n";
    return 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  auto need = [&](const std::string& v, const char* flag) {
    if (v.empty()) throw CLI::RequiredError(flag);
  };
  if (const char* env = std::getenv("HESSE3_SEED")) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::exception&) {
      err << error_json("UsageError", "HESSE3_SEED is not an unsigned integer").dump() << "\n";
      return 2;
    }
  }
  random_seed() = o.seed;

  json report;
  bool ok = true;
  try {
    need(o.field, "--field");
    if (cmd != "verify") need(o.curve, "--curve");
    if (cmd == "fiber") need(o.t, "--t");
    if (cmd == "match-j") need(o.j, "--j");
    if (cmd == "check") need(o.other, "--other");
  } catch (const CLI::ParseError& e) {
    err << error_json("UsageError", std::string(e.what()) + " (" + cmd + ")").dump() << "\n";
    return 2;
  }
  try {
    const Field k = parse_field(o.field);
    if (cmd == "verify") {
      report = command_verify(k, o.jobs, ok);
      report["max_ext"] = o.max_ext;
    } else {
      const EllipticModel E = parse_curve(o.curve, k);
      if (cmd == "info") report = command_info(k, E);
      else if (cmd == "pencil") report = to_json(pencil_weierstrass(E));
      else if (cmd == "fiber") {
        const PencilParam t = parse_param(o.t, k);
        report = to_json(fiber(E, t));
        report["t"] = to_json(t);
        report["curve"] = to_json(E);
      } else if (cmd == "torsion") report = command_torsion(E);
      else if (cmd == "pairing") report = command_pairing(E);
      else if (cmd == "match-j") report = command_match_j(k, E, parse_element(o.j, k));
      else if (cmd == "singular") report = command_singular(k, E);
      else if (cmd == "check") report = command_check(E, parse_curve(o.other, k), o.max_ext, ok);
    }
  } catch (const Error& e) {
    report = error_json(std::string(error_name(e.code())), e.what());
    report["seed"] = o.seed;
    out << report.dump() << "\n";
    return 1;
  }
  report["command"] = cmd;
  report["seed"] = o.seed;
  if (o.pretty && !o.json_out) render_pretty(report, out);
  else out << report.dump() << "\n";
  return ok ? 0 : 1;
}

}  // namespace hesse3::cli
