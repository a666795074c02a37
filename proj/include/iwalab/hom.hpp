#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "iwalab/characters.hpp"
#include "iwalab/gamma.hpp"
#include "iwalab/group_ring.hpp"

namespace iwalab {

/// Verification state of a Hom-side property.
enum class Tri { Unknown, Verified, Failed };

inline std::string to_string(Tri t) {
  switch (t) {
  case Tri::Verified: return "verified";
  case Tri::Failed: return "failed";
  default: return "unknown";
  }
}

/// Multiplicative Hom elements (values are units, extended to virtual
/// characters by products) or additive ones (values in the fraction ring,
/// extended linearly).
enum class HomKind { Multiplicative, Additive };

/// Value map from the irreducible characters of a group to the Gamma-bar
/// algebra, together with the data needed to test its axioms.
struct HomElement {
  std::shared_ptr<const CharacterTable> table;
  std::vector<i64> pi; // pi on the table's group, into Z/l^M
  RingSpec spec;
  HomKind kind = HomKind::Additive;
  std::vector<QGamma> values;
  Tri galois_stable = Tri::Unknown;
  Tri twist_compatible = Tri::Unknown;
  Tri integral = Tri::Unknown;

  int count() const { return static_cast<int>(values.size()); }
  QGamma zero() const { return QGamma(GammaElt(spec)); }
  QGamma one() const { return QGamma(GammaElt::constant(spec, 1)); }

  /// Value at a virtual character given in irreducible coordinates.
  QGamma at(const std::vector<i64>& coords) const {
    if (kind == HomKind::Additive) {
      QGamma s = zero();
      for (int i = 0; i < count(); ++i)
        if (coords[i]) s += values[i].scaled(coords[i]);
      return s;
    }
    GammaElt p = GammaElt::constant(spec, 1);
    for (int i = 0; i < count(); ++i) {
      if (!coords[i]) continue;
      GammaElt v = values[i].to_integral();
      if (coords[i] < 0) v = v.inverse();
      p = p * v.pow(coords[i] < 0 ? -coords[i] : coords[i]);
    }
    return QGamma(p);
  }
  QGamma at_irr(int i) const { return values[i]; }

  /// Smallest absolute precision among the values.
  int abs_prec() const {
    int p = spec.prec;
    for (auto& v : values) p = std::min(p, v.abs_prec());
    return p;
  }
};

inline RingSpec spec_for(const CharacterTable& t, int prec, int M) { return RingSpec{t.prime(), prec, t.level(), M}; }

/// chi(g) pi(g) as an element of the Gamma-bar algebra.
inline GammaElt char_gamma(const CycloInt& v, i64 pi_g, const RingSpec& s) {
  return GammaElt::from_cyclo(v.truncated(s.prec), s.M, pi_g);
}

/// The constant Hom element with value 1 (multiplicative) or 0 (additive).
inline HomElement constant_hom(std::shared_ptr<const CharacterTable> t, std::vector<i64> pi, const RingSpec& s, HomKind kind) {
  HomElement f{std::move(t), std::move(pi), s, kind, {}};
  for (int i = 0; i < f.table->count(); ++i) f.values.push_back(kind == HomKind::Additive ? f.zero() : f.one());
  return f;
}

/// Tr(sum_k t_k tau(g_k))(chi) = sum_k t_k chi(g_k) pi(g_k).
inline HomElement tr_hom(const TraceElement& t, std::shared_ptr<const CharacterTable> tab, const std::vector<i64>& pi, int M) {
  RingSpec s = spec_for(*tab, t.prec(), M);
  HomElement f{tab, pi, s, HomKind::Additive, {}};
  const auto& cls = t.group().classes();
  for (int i = 0; i < tab->count(); ++i) {
    GammaElt v(s);
    for (int k = 0; k < cls.count(); ++k) {
      if (!t.coeff(k)) continue;
      Elem r = cls.reps[k];
      v += char_gamma(tab->value(i, r), pi[r], s).scaled(t.coeff(k));
    }
    f.values.push_back(QGamma(v));
  }
  return f;
}

/// Tr for trace elements of Gamma-bar x G (index j |G| + g): the Gamma-bar
/// factor is kept as a coefficient, chi ranges over the characters of G.
inline HomElement tr_hom_gamma(const TraceElement& t, std::shared_ptr<const CharacterTable> tab, const std::vector<i64>& pi, int M) {
  RingSpec s = spec_for(*tab, t.prec(), M);
  HomElement f{tab, pi, s, HomKind::Additive, {}};
  const int n = tab->group().order();
  const auto& cls = t.group().classes();
  for (int i = 0; i < tab->count(); ++i) {
    GammaElt v(s);
    for (int k = 0; k < cls.count(); ++k) {
      if (!t.coeff(k)) continue;
      Elem r = cls.reps[k];
      Elem g = r % n;
      i64 j = r / n;
      v += char_gamma(tab->value(i, g), pi[g] + j, s).scaled(t.coeff(k));
    }
    f.values.push_back(QGamma(v));
  }
  return f;
}

/// Monomial realization of an induced irreducible on the basis a^i (right action):
/// a^i g = h_i a^perm[i] with entry zeta^exponent[i] = lambda(h_i).
struct MonomialMatrix {
  std::vector<int> perm;
  std::vector<i64> exponent;
};

inline std::vector<MonomialMatrix> monomial_rep(const CharacterTable& t, int i) {
  const LGroup& G = t.group();
  const Irreducible& x = t.irr(i);
  std::vector<MonomialMatrix> out(G.order());
  if (x.degree == 1) {
    for (Elem g = 0; g < G.order(); ++g) out[g] = {{0}, {x.lin[g]}};
    return out;
  }
  const int l = x.degree;
  const i64 scale = ipow(t.prime(), t.level()) / t.sub_exponent();
  std::vector<Elem> tr(l);
  tr[0] = 0;
  for (int k = 1; k < l; ++k) tr[k] = G.mul(tr[k - 1], t.basis_a());
  for (Elem g = 0; g < G.order(); ++g) {
    MonomialMatrix m{std::vector<int>(l), std::vector<i64>(l)};
    for (int k = 0; k < l; ++k) {
      Elem tg = G.mul(tr[k], g);
      int j = t.basis_coset()[tg];
      Elem h = G.mul(tg, G.inv(tr[j]));
      m.perm[k] = j;
      m.exponent[k] = t.sub_value(x.sub_char, h) * scale;
    }
    out[g] = std::move(m);
  }
  return out;
}

/// Determinant over a commutative local ring by elimination with unit pivots.
template <class T>
T det_local(std::vector<std::vector<T>> a) {
  const std::size_t n = a.size();
  T det = T::one_like(a[0][0]);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && !a[p][c].is_unit()) ++p;
    if (p == n) raise(ErrorCode::NotAUnit, "matrix is not invertible over the local ring");
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det = det * a[c][c];
    T inv = a[c][c].inverse();
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c].is_zero()) continue;
      T f = a[r][c] * inv;
      for (std::size_t k = c; k < n; ++k) a[r][k] = a[r][k] - f * a[c][k];
    }
  }
  return det;
}

/// Det u (chi) = det( sum_g u_g rho_chi(g) pi(g) ).
inline HomElement det_hom(const GroupRingElement& u, std::shared_ptr<const CharacterTable> tab, const std::vector<i64>& pi, int M) {
  if (!u.is_unit()) raise(ErrorCode::NotAUnit, "Det of a non-unit");
  RingSpec s = spec_for(*tab, u.prec(), M);
  HomElement f{tab, pi, s, HomKind::Multiplicative, {}};
  const LGroup& G = tab->group();
  for (int i = 0; i < tab->count(); ++i) {
    auto rep = monomial_rep(*tab, i);
    const int d = tab->degree(i);
    std::vector<std::vector<GammaElt>> mat(d, std::vector<GammaElt>(d, GammaElt(s)));
    for (Elem g = 0; g < G.order(); ++g) {
      if (!u.coeff(g)) continue;
      for (int k = 0; k < d; ++k) {
        CycloScalar z = CycloScalar::root_of_unity(s.l, s.m, s.prec, rep[g].exponent[k]).scaled(u.coeff(g));
        mat[k][rep[g].perm[k]] += GammaElt::from_cyclo(z, s.M, pi[g]);
      }
    }
    f.values.push_back(QGamma(d == 1 ? mat[0][0] : det_local(mat)));
  }
  return f;
}

/// Outcome of the Hom-side axiom checks.
struct HomAxiomReport {
  bool galois = true;
  bool twist = true;
  bool integral = true;
  std::vector<std::string> failures;
  bool ok() const { return galois && twist && integral; }
};

/// Checks f(chi^sigma) = sigma f(chi), f(rho chi) = rho^sharp f(chi) for type-W rho,
/// and f(chi)^l = Psi f(psi_l chi) mod l (multiplicative) or integrality (additive).
inline HomAxiomReport hom_axioms(HomElement& f) {
  HomAxiomReport rep;
  const CharacterTable& t = *f.table;
  const i64 l = t.prime();
  const i64 cyc = ipow(l, t.level());
  auto agree = [](const QGamma& a, const QGamma& b) {
    int p = std::min(a.abs_prec(), b.abs_prec());
    return p < 1 || equal_at(a, b, p);
  };
  for (int i = 0; i < f.count(); ++i)
    for (i64 u = 2; u < cyc; ++u) {
      if (u % l == 0) continue;
      int j = t.galois_image(i, u);
      QGamma lhs = f.values[j];
      QGamma rhs = f.values[i].map([&](const GammaElt& x) { return x.galois(u); });
      if (!agree(lhs, rhs)) {
        rep.galois = false;
        rep.failures.push_back("Galois sigma_" + std::to_string(u) + " at irreducible " + std::to_string(i));
      }
    }
  for (i64 s = 0; s < f.spec.gamma_order(); ++s) {
    int rho = t.wtype_index(f.pi, f.spec.M, s);
    for (int i = 0; i < f.count(); ++i) {
      QGamma lhs = f.values[t.twist_index(rho, i)];
      QGamma rhs = f.values[i].map([&](const GammaElt& x) { return x.twist_sharp(s); });
      if (!agree(lhs, rhs)) {
        rep.twist = false;
        rep.failures.push_back("twist s=" + std::to_string(s) + " at irreducible " + std::to_string(i));
      }
    }
  }
  for (int i = 0; i < f.count(); ++i) {
    if (f.kind == HomKind::Additive) {
      if (!f.values[i].is_integral()) {
        rep.integral = false;
        rep.failures.push_back("non-integral value at irreducible " + std::to_string(i));
      }
      continue;
    }
    GammaElt lhs = f.values[i].to_integral().pow(l);
    GammaElt rhs = f.at(t.adams_coords(i)).to_integral().psi();
    if (!equal_at(lhs, rhs, 1)) {
      rep.integral = false;
      rep.failures.push_back("congruence f(chi)^l = Psi f(psi_l chi) mod l fails at irreducible " + std::to_string(i));
    }
  }
  f.galois_stable = rep.galois ? Tri::Verified : Tri::Failed;
  f.twist_compatible = rep.twist ? Tri::Verified : Tri::Failed;
  f.integral = rep.integral ? Tri::Verified : Tri::Failed;
  return rep;
}

/// (L f)(chi) = log f(chi) - (Psi / l) log f(psi_l chi), for multiplicative f.
inline HomElement big_l(const HomElement& f) {
  if (f.kind != HomKind::Multiplicative) raise(ErrorCode::OutOfModel, "L applies to multiplicative Hom elements");
  HomElement out{f.table, f.pi, f.spec, HomKind::Additive, {}};
  std::vector<QGamma> logs;
  for (auto& v : f.values) logs.push_back(plog(v.to_integral()));
  for (int i = 0; i < f.count(); ++i) {
    const auto& c = f.table->adams_coords(i);
    QGamma s = out.zero();
    for (int k = 0; k < f.count(); ++k)
      if (c[k]) s += logs[k].scaled(c[k]);
    out.values.push_back(logs[i] - psi(s).div_l_pow(1));
  }
  return out;
}

/// The combined form (1/l) log( f(chi)^l / Psi f(psi_l chi) ), used as an oracle for big_l.
inline HomElement big_l_combined(const HomElement& f) {
  HomElement out{f.table, f.pi, f.spec, HomKind::Additive, {}};
  const i64 l = f.table->prime();
  for (int i = 0; i < f.count(); ++i) {
    GammaElt num = f.values[i].to_integral().pow(l);
    GammaElt den = f.at(f.table->adams_coords(i)).to_integral().psi();
    out.values.push_back(plog(num * den.inverse()).div_l_pow(1));
  }
  return out;
}

/// Compares two additive Hom elements on every irreducible at precision p.
inline bool hom_equal_at(const HomElement& a, const HomElement& b, int p) {
  for (int i = 0; i < a.count(); ++i)
    if (!equal_at(a.values[i], b.values[i], p)) return false;
  return true;
}

/// The l-adic logarithm of a unit of a group ring, (1/l^s) log(u^(e l^s)) / e.
inline Fraction<GroupRingElement> ring_log(const GroupRingElement& u) { return unit_log(u); }

/// L'(y) = (1/l) log(y^l / Psi(y)) in a commutative group ring.
inline Fraction<GroupRingElement> integral_log_unit(const GroupRingElement& y) {
  if (!y.group().is_abelian()) raise(ErrorCode::OutOfModel, "integral_log_unit needs an abelian group");
  if (!y.is_unit()) raise(ErrorCode::NotAUnit, "integral logarithm of a non-unit");
  GroupRingElement q = y.pow(y.prime()) * y.psi().inverse();
  return unit_log(q).div_l_pow(1);
}

/// Trace-level integral logarithm tau(log u) - (1/l) Phi(tau(log u)).
inline Fraction<TraceElement> trace_integral_log(const GroupRingElement& u) {
  Fraction<GroupRingElement> lg = ring_log(u);
  Fraction<TraceElement> t(tau(lg.numerator()), lg.den());
  Fraction<TraceElement> phi = t.map([](const TraceElement& x) { return x.frobenius(); });
  return t - phi.div_l_pow(1);
}

/// Additive Hom element from a fractional trace element, Tr applied to the numerator.
inline HomElement tr_hom(const Fraction<TraceElement>& t, std::shared_ptr<const CharacterTable> tab, const std::vector<i64>& pi, int M) {
  HomElement f = tr_hom(t.numerator(), std::move(tab), pi, M);
  for (auto& v : f.values) v = v.div_l_pow(t.den());
  return f;
}

} // namespace iwalab
