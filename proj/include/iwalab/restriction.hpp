#pragma once

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

#include "iwalab/hom.hpp"

namespace iwalab {

/// pi restricted to G', indexed by the elements of the materialized G'.
inline std::vector<i64> pi_on_gprime(const SubgroupMarking& mk) {
  std::vector<i64> out;
  for (Elem g : mk.sub.to_parent) out.push_back(mk.pi[g]);
  return out;
}

/// (res f)(chi') = f(ind chi').
inline HomElement res_natural(const HomElement& f, const MarkedTables& mt) {
  HomElement out{mt.Gp, pi_on_gprime(mt.mk), f.spec, f.kind, {}};
  for (int j = 0; j < mt.Gp->count(); ++j) out.values.push_back(f.at(mt.ind[j]));
  return out;
}

/// Where the correction series of res_hom stopped, next to the bound r0
/// (least r0 with G^(l^r0) inside G') and the last index r0 - 2 that bound
/// would give.
struct TruncationRecord {
  int r0 = 0;
  int stated_last_r = 0;
  /// per irreducible of G': number of correction terms r = 1..terms that were evaluated
  std::vector<int> terms;
  /// per irreducible of G': first r >= 1 with psi_l^(r-1) chi = 0
  std::vector<int> first_vanishing;
};

inline int exponent_bound_r0(const SubgroupMarking& mk) {
  int r0 = 0;
  for (Elem g = 0; g < mk.G().order(); ++g) r0 = std::max(r0, mk.m_index(g));
  return r0;
}

/// Res f (chi') = f(ind chi') + sum_{r >= 1} (Psi^r / l^r) f(psi_l^(r-1) chi),
/// chi the defect character of chi'. The series stops at the first r with
/// psi_l^(r-1) chi = 0. Each division must be exact: a term whose value is not
/// integral (beyond the denominators already present in f) raises NotDivisible.
inline HomElement res_hom(const HomElement& f, const MarkedTables& mt, TruncationRecord* record = nullptr) {
  if (f.kind != HomKind::Additive) raise(ErrorCode::OutOfModel, "Res applies to additive Hom elements");
  const CharacterTable& G = *mt.G;
  const i64 l = G.prime();
  int bound = 2;
  for (i64 e = G.group().exponent(); e > 1; e /= l) ++bound;
  HomElement out{mt.Gp, pi_on_gprime(mt.mk), f.spec, HomKind::Additive, {}};
  TruncationRecord rec;
  rec.r0 = exponent_bound_r0(mt.mk);
  rec.stated_last_r = rec.r0 - 2;
  for (int j = 0; j < mt.Gp->count(); ++j) {
    QGamma v = f.at(mt.ind[j]);
    std::vector<i64> cur = mt.defect[j];
    int r = 1;
    auto vanishes = [](const std::vector<i64>& c) { return std::all_of(c.begin(), c.end(), [](i64 x) { return x == 0; }); };
    while (!vanishes(cur)) {
      if (r > bound) raise(ErrorCode::NoTruncation, "psi_l powers of the defect character do not vanish");
      QGamma fv = f.at(cur);
      QGamma term = fv.map([&](const GammaElt& x) { return x.psi_pow(r); }).div_l_pow(r);
      if (term.abs_prec() < 1)
        raise(ErrorCode::PrecisionExhausted, "term r=" + std::to_string(r) + " at irreducible " + std::to_string(j) + " of G' has no precision left");
      if (term.den() > fv.den())
        raise(ErrorCode::NotDivisible, "term r=" + std::to_string(r) + " at irreducible " + std::to_string(j) + " of G' is not integral");
      v += term;
      // psi_l of a virtual character in coordinates
      std::vector<i64> next(G.count(), 0);
      for (int i = 0; i < G.count(); ++i) {
        if (!cur[i]) continue;
        const auto& c = G.adams_coords(i);
        for (int k = 0; k < G.count(); ++k) next[k] += cur[i] * c[k];
      }
      cur = std::move(next);
      ++r;
    }
    rec.terms.push_back(r - 1);
    rec.first_vanishing.push_back(r);
    out.values.push_back(v);
  }
  if (record) *record = std::move(rec);
  return out;
}

/// Res on trace elements: tau(g) -> sum_i tau'(g^(a^i)) for g in G', tau'(g^l) otherwise.
inline TraceElement res_trace(const TraceElement& t, const SubgroupMarking& mk) {
  const LGroup& G = mk.G();
  TraceElement out(mk.Gp_ptr(), t.prec());
  const auto& cls = G.classes();
  for (int k = 0; k < cls.count(); ++k) {
    i64 c = t.coeff(k);
    if (!c) continue;
    Elem g = cls.reps[k];
    if (mk.contains(g)) {
      for (Elem x : mk.a_orbit_terms(g)) out.add_element(mk.sub.from_parent[x], c);
    } else {
      out.add_element(mk.sub.from_parent[G.pow(g, mk.prime())], c);
    }
  }
  return out;
}

inline Fraction<TraceElement> res_trace(const Fraction<TraceElement>& t, const SubgroupMarking& mk) {
  return t.map([&](const TraceElement& x) { return res_trace(x, mk); });
}

/// Matrix over R[G'] of right multiplication by u on R[G] = sum_i R[G'] a^i:
/// a^i u = sum_j M[i][j] a^j.
inline std::vector<std::vector<GroupRingElement>> res_matrix(const GroupRingElement& u, const SubgroupMarking& mk) {
  const LGroup& G = mk.G();
  const int l = mk.index();
  std::vector<std::vector<GroupRingElement>> M(l, std::vector<GroupRingElement>(l, GroupRingElement(mk.Gp_ptr(), u.prec())));
  std::vector<Elem> tr(l), tr_inv(l);
  for (int i = 0; i < l; ++i) {
    tr[i] = mk.transversal(i);
    tr_inv[i] = G.inv(tr[i]);
  }
  for (int i = 0; i < l; ++i)
    for (Elem g = 0; g < G.order(); ++g) {
      if (!u.coeff(g)) continue;
      Elem x = G.mul(tr[i], g);
      int j = mk.coset[x];
      M[i][j].add(mk.sub.from_parent[G.mul(x, tr_inv[j])], u.coeff(g));
    }
  return M;
}

/// Restriction of scalars to K_1 of the commutative ring R[G'].
inline GroupRingElement det_res(const GroupRingElement& u, const SubgroupMarking& mk) {
  if (!mk.gprime_abelian) raise(ErrorCode::OutOfModel, "det over R[G'] needs an abelian G'");
  if (!u.is_unit()) raise(ErrorCode::NotAUnit, "restriction of a non-unit");
  return det_local(res_matrix(u, mk));
}

/// Det' of the restriction of scalars: chi' -> det of the block matrix rho_chi'(M[i][j]).
inline HomElement restrict_scalars(const GroupRingElement& u, const MarkedTables& mt, int M) {
  if (!u.is_unit()) raise(ErrorCode::NotAUnit, "restriction of a non-unit");
  const SubgroupMarking& mk = mt.mk;
  auto mat = res_matrix(u, mk);
  const int l = mk.index();
  auto pi = pi_on_gprime(mk);
  RingSpec s = spec_for(*mt.Gp, u.prec(), M);
  HomElement f{mt.Gp, pi, s, HomKind::Multiplicative, {}};
  const LGroup& Gp = mk.Gp();
  for (int c = 0; c < mt.Gp->count(); ++c) {
    auto rep = monomial_rep(*mt.Gp, c);
    const int d = mt.Gp->degree(c);
    std::vector<std::vector<GammaElt>> big(l * d, std::vector<GammaElt>(l * d, GammaElt(s)));
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j)
        for (Elem h = 0; h < Gp.order(); ++h) {
          i64 x = mat[i][j].coeff(h);
          if (!x) continue;
          for (int p = 0; p < d; ++p) {
            CycloScalar z = CycloScalar::root_of_unity(s.l, s.m, s.prec, rep[h].exponent[p]).scaled(x);
            big[i * d + p][j * d + rep[h].perm[p]] += GammaElt::from_cyclo(z, s.M, pi[h]);
          }
        }
    f.values.push_back(QGamma(det_local(big)));
  }
  return f;
}

/// One path comparison inside a diagram check.
struct PathComparison {
  std::string name;
  bool equal = false;
  /// absolute precision at which the two sides were compared
  int precision = 0;
  /// error code name when a side could not be evaluated
  std::string error;
  ErrorCode code = ErrorCode::OutOfModel;
  bool errored() const { return !error.empty(); }
};

struct SquareReport {
  std::vector<PathComparison> paths;
  TruncationRecord truncation;
  bool ok() const {
    return std::all_of(paths.begin(), paths.end(), [](const PathComparison& p) { return p.equal && !p.errored(); });
  }
  int precision() const {
    int p = 1 << 20;
    for (auto& x : paths) p = std::min(p, x.precision);
    return paths.empty() ? 0 : p;
  }
};

namespace detail {

inline PathComparison compare_hom(const std::string& name, const HomElement& a, const HomElement& b) {
  PathComparison c{name};
  c.precision = std::min(a.abs_prec(), b.abs_prec());
  if (c.precision < 1) {
    c.error = "PrecisionExhausted";
    c.code = ErrorCode::PrecisionExhausted;
    return c;
  }
  c.equal = hom_equal_at(a, b, c.precision);
  return c;
}

template <class F>
PathComparison guarded(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    PathComparison c{name};
    c.error = e.what();
    c.code = e.code();
    return c;
  }
}

} // namespace detail

/// Evaluates the restriction squares for a unit u of R[G]:
///  hom:   L'(res Det u) = Res(L Det u)
///  log:   Tr(LL u) = L(Det u) on G
///  trace: Tr'(Res LL u) = Res(Tr LL u)
///  k1:    Res(LL u) = LL'(res u) (compared after Tr')
inline SquareReport check_hd_square(const GroupRingElement& u, const MarkedTables& mt, int M) {
  SquareReport rep;
  const auto& pi = mt.mk.pi;
  HomElement det = det_hom(u, mt.G, pi, M);
  HomElement ldet = big_l(det);
  rep.paths.push_back(detail::guarded("hom", [&] {
    HomElement lhs = big_l(res_natural(det, mt));
    HomElement rhs = res_hom(ldet, mt, &rep.truncation);
    return detail::compare_hom("hom", lhs, rhs);
  }));
  Fraction<TraceElement> llu = trace_integral_log(u);
  rep.paths.push_back(detail::guarded("log", [&] { return detail::compare_hom("log", tr_hom(llu, mt.G, pi, M), ldet); }));
  auto pi_sub = pi_on_gprime(mt.mk);
  Fraction<TraceElement> res_llu = res_trace(llu, mt.mk);
  rep.paths.push_back(detail::guarded("trace", [&] {
    HomElement lhs = tr_hom(res_llu, mt.Gp, pi_sub, M);
    HomElement rhs = res_hom(tr_hom(llu, mt.G, pi, M), mt);
    return detail::compare_hom("trace", lhs, rhs);
  }));
  rep.paths.push_back(detail::guarded("k1", [&] {
    if (!mt.mk.gprime_abelian)
      return detail::compare_hom("k1", tr_hom(res_llu, mt.Gp, pi_sub, M), big_l(restrict_scalars(u, mt, M)));
    Fraction<GroupRingElement> lg = integral_log_unit(det_res(u, mt.mk));
    Fraction<TraceElement> rhs(tau(lg.numerator()), lg.den());
    PathComparison c{"k1"};
    c.precision = std::min(res_llu.abs_prec(), rhs.abs_prec());
    c.equal = c.precision >= 1 && equal_at(res_llu, rhs, c.precision);
    return c;
  }));
  return rep;
}

} // namespace iwalab
