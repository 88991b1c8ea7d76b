#pragma once

// Isomorphisms of 3-torsion groups, projective maps through four points,
// realization of symplectic isomorphisms by the pencil, descent of
// projective maps, and the two-sided pencil membership check.

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "hesse3/elliptic.hpp"
#include "hesse3/pencil.hpp"
#include "hesse3/projective.hpp"
#include "hesse3/torsion.hpp"

namespace hesse3 {

/// Group isomorphism E[3] -> E'[3]; columns of `matrix` are the coordinates
/// of phi(S) and phi(T) in the target basis.
struct TorsionIso {
  TorsionBasis source, target;
  Mat2F3 matrix;

  Point operator()(const Point& P) const {
    auto [x, y] = source.coords(P);
    return target.combo(matrix(0, 0) * x + matrix(0, 1) * y, matrix(1, 0) * x + matrix(1, 1) * y);
  }
};

inline std::vector<TorsionIso> torsion_isos(const EllipticModel& E, const EllipticModel& Ep) {
  if (!(E.field() == Ep.field())) fail(ErrorCode::FieldMismatch, "curves over different fields");
  const TorsionBasis a = torsion3(E), b = torsion3(Ep);
  std::vector<TorsionIso> out;
  for (const auto& m : gl2_f3()) out.push_back({a, b, m});
  return out;
}

/// Pairing test on the generating pair; must agree with det = 1.
inline bool is_symplectic(const TorsionIso& phi) {
  const Point s = phi(phi.source.S), t = phi(phi.source.T);
  const bool by_pairing = weil_pairing_tangent(phi.target.curve_ext, s, t) == phi.target.zeta;
  if (by_pairing != (phi.matrix.det() == 1)) fail(ErrorCode::Internal, "pairing and determinant disagree");
  return by_pairing;
}

inline bool is_equivariant(const TorsionIso& phi) {
  return phi.matrix * frobenius_matrix(phi.source) == frobenius_matrix(phi.target) * phi.matrix;
}

/// The unique projective map with A(P_i) = Q_i, i = 1..4.
inline Mat3 pgl3_through_points(const std::array<ProjPoint2, 4>& P, const std::array<ProjPoint2, 4>& Q) {
  auto frame = [](const std::array<ProjPoint2, 4>& pts, const char* which) {
    for (int skip = 0; skip < 4; ++skip) {
      std::array<int, 3> idx{};
      int n = 0;
      for (int i = 0; i < 4; ++i)
        if (i != skip) idx[n++] = i;
      if (collinear(pts[idx[0]], pts[idx[1]], pts[idx[2]]))
        fail(ErrorCode::CollinearTriple, std::string(which) + " points " + std::to_string(idx[0] + 1) + "," + std::to_string(idx[1] + 1) + "," +
                                             std::to_string(idx[2] + 1) + " are collinear");
    }
    auto col = [](const ProjPoint2& p) { return std::array<Element, 3>{p.x(), p.y(), p.z()}; };
    const Mat3 M = Mat3::from_columns({col(pts[0]), col(pts[1]), col(pts[2])});
    const auto c = M.inverse().apply(col(pts[3]));
    return M * Mat3::diagonal(c[0], c[1], c[2]);
  };
  const Mat3 AP = frame(P, "source"), AQ = frame(Q, "target");
  return (AQ * AP.inverse()).normalized();
}

/// Dimension of the space of 3x3 matrices A with A P_i parallel to Q_i.
inline unsigned pgl3_solution_dimension(const std::array<ProjPoint2, 4>& P, const std::array<ProjPoint2, 4>& Q) {
  const Field f = P[0].field();
  // Unknown A entries a_{ij}, index 3i + j. (A P) x Q = 0 gives 3 equations per point.
  std::vector<std::vector<Element>> rows;
  for (int k = 0; k < 4; ++k) {
    for (int c = 0; c < 3; ++c) {
      // component c of (A P) x Q: (AP)_{c+1} Q_{c+2} - (AP)_{c+2} Q_{c+1}
      std::vector<Element> row(9, f.zero());
      const int i1 = (c + 1) % 3, i2 = (c + 2) % 3;
      for (int j = 0; j < 3; ++j) {
        row[3 * i1 + j] += P[k][j] * Q[k][i2];
        row[3 * i2 + j] -= P[k][j] * Q[k][i1];
      }
      rows.push_back(row);
    }
  }
  unsigned rank = 0;
  for (unsigned col = 0; col < 9 && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const Element inv = rows[rank][col].inverse();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col].is_zero()) continue;
      const Element fct = rows[r][col] * inv;
      for (unsigned k = 0; k < 9; ++k) rows[r][k] -= fct * rows[rank][k];
    }
    ++rank;
  }
  return 9 - rank;
}

/// A representative over k of a Frobenius-fixed projective class, if fixed.
inline std::optional<Mat3> descend_pgl3(const Mat3& M, const Field& k) {
  const Field L = M.field();
  if (!L.extends(k)) fail(ErrorCode::NoEmbedding, "matrix field does not contain the target field");
  if (M.det().is_zero()) fail(ErrorCode::DegenerateConfiguration, "singular matrix");
  const Mat3 N = M.normalized();
  if (!(N.frobenius(k.degree()) == N)) return std::nullopt;
  const auto emb = embedding(k, L);
  Mat3 out = Mat3::zero(k);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      auto v = emb->preimage(N(i, j));
      if (!v) fail(ErrorCode::Internal, "Frobenius-fixed entry outside the subfield");
      out(i, j) = *v;
    }
  return out;
}

/// A fiber parameter and a projective map Phi: fiber -> E' restricting to a
/// given symplectic isomorphism on E[3].
struct Realization {
  PencilParam t0;
  Mat3 Phi;           // over `field`, maps fiber coordinates to E' coordinates
  Field field;        // common field of definition
  CurveIso psi;       // Weierstrass fiber model -> E'
  Mat2F3 restriction; // matrix of Phi on E[3]
};

namespace detail {

inline unsigned aut_count_closure(const EllipticModel& E) {
  const Element j = E.j_invariant();
  const Field k = E.field();
  if (k.characteristic() == 2) return j.is_zero() ? 24 : 2;
  if (j.is_zero()) return 6;
  if (j == k.from_int(1728)) return 4;
  return 2;
}

struct RealizationContext {
  Field L;
  std::vector<Realization> all;
};

inline RealizationContext realize_all(const EllipticModel& E, const EllipticModel& Ep, unsigned max_ext) {
  const Field k = E.field();
  if (!(Ep.field() == k)) fail(ErrorCode::FieldMismatch, "curves over different fields");
  const TorsionBasis tb = torsion3(E), tbp = torsion3(Ep);
  const PencilWeierstrass pw = pencil_weierstrass(E);
  const MatchingData md = matching_data(pw, Ep.j_invariant());
  unsigned base = std::lcm(tb.m, tbp.m);
  if (md.G && !md.G->is_zero()) base = std::lcm(base, splitting_degree(*md.G));
  const unsigned need = aut_count_closure(Ep);
  const Field K2 = cyclotomic3_field(k);
  for (unsigned mult = 1; base * mult <= max_ext; ++mult) {
    const unsigned D = base * mult;
    if (k.degree() * D > kMaxDegree) break;
    const Field L = extension_of(k, D);
    const auto params = matching_fibers(pw, Ep.j_invariant(), L);
    const EllipticModel EpL = Ep.base_change(L);
    std::vector<std::pair<PencilParam, std::vector<CurveIso>>> isos;
    bool complete = true;
    for (const auto& p : params) {
      const FiberResult fr = fiber(pw, p);
      if (!fr.smooth) {
        complete = false;
        break;
      }
      auto all = isomorphisms_over(fr.model->base_change(L), EpL, L);
      if (all.size() != need) {
        complete = false;
        break;
      }
      isos.emplace_back(p, std::move(all));
    }
    if (!complete) continue;
    RealizationContext ctx{L, {}};
    const auto eS = embedding(tb.field, L, {k, K2});
    const auto eT = embedding(tbp.field, L, {k, K2});
    const ProjPoint2 S = tb.S.mapped(*eS).to_proj(L), T = tb.T.mapped(*eS).to_proj(L);
    // Basis of E'[3] brought into L, to read off coordinates.
    TorsionBasis tbpL = tbp;
    tbpL.field = L;
    tbpL.curve_ext = EpL;
    tbpL.S = tbp.S.mapped(*eT);
    tbpL.T = tbp.T.mapped(*eT);
    for (auto& [p, list] : isos) {
      const FiberResult fr = fiber(pw, p);
      const Mat3 B = fr.B->field() == L ? *fr.B : fr.B->embedded(L);
      for (const auto& psi : list) {
        const Mat3 Phi = (B * psi.matrix()).inverse().normalized();
        const Point imS = Point::from_proj(Phi.apply(S)), imT = Point::from_proj(Phi.apply(T));
        const Mat2F3 mat = matrix_of_images(tbpL, imS, imT);
        ctx.all.push_back({p, Phi, L, psi, mat});
      }
    }
    return ctx;
  }
  fail(ErrorCode::ExtensionTooLarge, "realization needs an extension of degree above " + std::to_string(max_ext));
}

}  // namespace detail

/// All realizations sigma o Psi_i o A_{t_i} of symplectic isomorphisms.
inline std::vector<Realization> all_realizations(const EllipticModel& E, const EllipticModel& Ep, unsigned max_ext = 24) {
  return detail::realize_all(E, Ep, max_ext).all;
}

inline Realization realize_symplectic(const EllipticModel& E, const EllipticModel& Ep, const Mat2F3& phi, unsigned max_ext = 24) {
  if (phi.det() != 1) fail(ErrorCode::NotSymplectic, "isomorphism does not respect the Weil pairing");
  for (auto& r : detail::realize_all(E, Ep, max_ext).all)
    if (r.restriction == phi) return r;
  fail(ErrorCode::Internal, "no realization found for a symplectic isomorphism");
}

inline Realization realize_symplectic(const TorsionIso& phi, unsigned max_ext = 24) {
  if (!is_symplectic(phi)) fail(ErrorCode::NotSymplectic, "isomorphism does not respect the Weil pairing");
  return realize_symplectic(phi.source.curve, phi.target.curve, phi.matrix, max_ext);
}

struct TheoremReport {
  std::optional<Mat2F3> witness1;
  std::optional<std::pair<PencilParam, CurveIso>> witness2;
  bool verdict = false;
};

inline TheoremReport theorem_check(const EllipticModel& E, const EllipticModel& Ep) {
  TheoremReport rep;
  for (const auto& phi : torsion_isos(E, Ep)) {
    if (is_symplectic(phi) && is_equivariant(phi)) {
      rep.witness1 = phi.matrix;
      break;
    }
  }
  const Field k = E.field();
  const PencilWeierstrass pw = pencil_weierstrass(E);
  const Element jp = Ep.j_invariant();
  // Infinity first, so that E itself is reported through its own fiber.
  std::vector<PencilParam> line{PencilParam::inf()};
  for (const auto& p : projective_line(k))
    if (!p.infinity) line.push_back(p);
  for (const auto& p : line) {
    const FiberResult fr = fiber(pw, p);
    if (!fr.smooth || fr.model->j_invariant() != jp) continue;
    if (auto iso = isomorphism_over(*fr.model, Ep, k)) {
      rep.witness2 = std::make_pair(p, *iso);
      break;
    }
  }
  rep.verdict = rep.witness1.has_value() == rep.witness2.has_value();
  return rep;
}

/// Every nonsingular curve in the normal-form shapes over F, in a fixed order.
inline std::vector<EllipticModel> all_curves(const Field& F, std::uint64_t bound = 64) {
  const auto elems = all_elements(F, bound);
  std::vector<EllipticModel> out;
  if (F.characteristic() != 2) {
    for (const auto& a : elems)
      for (const auto& b : elems)
        if (!(F.from_int(4) * a * a * a + F.from_int(27) * b * b).is_zero()) out.push_back(EllipticModel::shortw(a, b));
    return out;
  }
  for (const auto& a2 : elems)
    for (const auto& a6 : elems)
      if (!a6.is_zero()) out.push_back(EllipticModel::ord2(a2, a6));
  for (const auto& a3 : elems)
    for (const auto& a4 : elems)
      for (const auto& a6 : elems)
        if (!a3.is_zero()) out.push_back(EllipticModel::ss2(a3, a4, a6));
  return out;
}

struct VerifySummary {
  std::size_t curves = 0, pairs = 0, equivalences = 0, memberships = 0;
  std::vector<std::pair<std::size_t, std::size_t>> mismatches;
};

inline VerifySummary exhaustive_verify(const Field& F, unsigned jobs = 1, std::uint64_t bound = 64) {
  F.order_at_most(bound);
  const auto curves = all_curves(F, bound);
  const std::size_t n = curves.size();
  // Warm the torsion cache so workers only read it.
  for (const auto& E : curves) torsion3(E);
  std::vector<TheoremReport> reports(n * n);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(std::max(1u, jobs));
  auto work = [&](unsigned id) {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < n * n;) reports[i] = theorem_check(curves[i / n], curves[i % n]);
    } catch (...) {
      errors[id] = std::current_exception();
      next = n * n;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < std::max(1u, jobs); ++j) pool.emplace_back(work, j);
  work(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  VerifySummary s;
  s.curves = n;
  s.pairs = n * n;
  for (std::size_t i = 0; i < n * n; ++i) {
    if (reports[i].witness1) ++s.equivalences;
    if (reports[i].witness2) ++s.memberships;
    if (!reports[i].verdict) s.mismatches.emplace_back(i / n, i % n);
  }
  return s;
}

}  // namespace hesse3
