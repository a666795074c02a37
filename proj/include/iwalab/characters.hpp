#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "iwalab/cyclo.hpp"
#include "iwalab/marking.hpp"

namespace iwalab {

/// Values of a function on the elements of a group, in Z[zeta_{l^m}].
using ClassFn = std::vector<CycloInt>;

/// One irreducible character, either linear or induced from a linear
/// character of an abelian index-l subgroup.
struct Irreducible {
  int degree = 1;
  ClassFn values;
  /// linear: values[g] = zeta^lin[g] (zeta = zeta_{l^m})
  std::vector<i64> lin;
  /// induced: index into the dual of the table's abelian subgroup
  int sub_char = -1;
};

/// Irreducible characters of a finite l-group all of whose irreducibles are
/// linear or induced from an abelian index-l subgroup.
class CharacterTable {
public:
  /// Builds the table at cyclotomic level m. When `hint` carries an abelian
  /// G' it is used for the induced characters; otherwise one is searched.
  static std::shared_ptr<const CharacterTable> build(std::shared_ptr<const LGroup> G, int m,
                                                     const SubgroupMarking* hint = nullptr) {
    auto t = std::shared_ptr<CharacterTable>(new CharacterTable());
    t->G_ = std::move(G);
    t->m_ = m;
    t->construct(hint);
    return t;
  }

  const LGroup& group() const { return *G_; }
  const std::shared_ptr<const LGroup>& group_ptr() const { return G_; }
  i64 prime() const { return G_->prime(); }
  int level() const { return m_; }
  int count() const { return static_cast<int>(irr_.size()); }
  const Irreducible& irr(int i) const { return irr_[i]; }
  int degree(int i) const { return irr_[i].degree; }
  const ClassFn& values(int i) const { return irr_[i].values; }
  CycloInt value(int i, Elem g) const { return irr_[i].values[g]; }
  bool is_linear(int i) const { return irr_[i].degree == 1; }

  /// The abelian index-l subgroup used for the induced characters (empty for abelian G).
  const std::vector<bool>& basis_gprime() const { return basis_gprime_; }
  Elem basis_a() const { return basis_a_; }
  const std::vector<int>& basis_coset() const { return basis_coset_; }
  /// exponent of G' as used by sub_char values
  i64 sub_exponent() const { return sub_dual_.exponent; }
  /// value exponent (mod sub_exponent) of sub-character k at a parent element of G'
  i64 sub_value(int k, Elem g) const { return sub_dual_.values[k][basis_sub_.from_parent[g]]; }

  CycloInt zero() const { return CycloInt(prime(), m_); }
  CycloInt root(i64 e) const { return CycloInt::root_of_unity(prime(), m_, e); }

  ClassFn zero_fn() const { return ClassFn(G_->order(), zero()); }

  /// sum_g f(g) conj(h(g)); exact.
  CycloInt raw_inner(const ClassFn& f, const ClassFn& h) const {
    CycloInt s = zero();
    const auto& cls = G_->classes();
    for (int k = 0; k < cls.count(); ++k) {
      Elem r = cls.reps[k];
      s += (f[r] * h[r].conj()).scaled(cls.size(k));
    }
    return s;
  }

  /// <f, h> = |G|^-1 sum_g f(g) conj(h(g)); NotVirtual when not an integer.
  i64 inner(const ClassFn& f, const ClassFn& h) const {
    CycloInt s = raw_inner(f, h);
    if (!s.is_rational() || s.rational_value() % G_->order() != 0)
      raise(ErrorCode::NotVirtual, "inner product is not an integer: " + s.str() + " / " + std::to_string(G_->order()));
    return s.rational_value() / G_->order();
  }

  /// Integer coordinates of a virtual character given by its values.
  std::vector<i64> decompose(const ClassFn& f) const {
    std::vector<i64> c(count());
    for (int i = 0; i < count(); ++i) c[i] = inner(f, irr_[i].values);
    if (evaluate(c) != f) raise(ErrorCode::NotVirtual, "function is not a virtual character of " + G_->name());
    return c;
  }

  ClassFn evaluate(const std::vector<i64>& coords) const {
    ClassFn f = zero_fn();
    for (int i = 0; i < count(); ++i) {
      if (!coords[i]) continue;
      for (Elem g = 0; g < G_->order(); ++g) f[g] += irr_[i].values[g].scaled(coords[i]);
    }
    return f;
  }

  std::vector<i64> unit_coords(int i) const {
    std::vector<i64> c(count(), 0);
    c[i] = 1;
    return c;
  }

  /// Index of the irreducible with the given values, -1 if none.
  int find(const ClassFn& f) const {
    auto it = by_key_.find(key(f));
    return it == by_key_.end() ? -1 : it->second;
  }

  /// chi_i^sigma_u
  int galois_image(int i, i64 u) const {
    ClassFn f(G_->order());
    for (Elem g = 0; g < G_->order(); ++g) f[g] = irr_[i].values[g].galois(u);
    int j = find(f);
    if (j < 0) raise(ErrorCode::IncompleteTable, "Galois conjugate of an irreducible is missing");
    return j;
  }

  /// rho * chi_i for a linear irreducible rho.
  int twist_index(int rho, int i) const {
    ClassFn f(G_->order());
    for (Elem g = 0; g < G_->order(); ++g) f[g] = irr_[rho].values[g] * irr_[i].values[g];
    int j = find(f);
    if (j < 0) raise(ErrorCode::IncompleteTable, "twist of an irreducible is missing");
    return j;
  }

  /// Coordinates of psi_k chi_i (cached for k = l).
  const std::vector<i64>& adams_coords(int i) const { return adams_l_[i]; }
  std::vector<i64> adams_coords(int i, i64 k) const { return decompose(adams(irr_[i].values, k)); }

  ClassFn adams(const ClassFn& f, i64 k) const {
    ClassFn out(G_->order());
    for (Elem g = 0; g < G_->order(); ++g) out[g] = f[G_->pow(g, k)];
    return out;
  }

  /// Linear irreducible with values zeta_{l^M}^{s pi(g)}; needs m >= M.
  int wtype_index(const std::vector<i64>& pi, int M, i64 s) const {
    if (m_ < M) raise(ErrorCode::OutOfModel, "cyclotomic level below the order of Gamma-bar");
    i64 step = ipow(prime(), m_ - M);
    ClassFn f(G_->order());
    for (Elem g = 0; g < G_->order(); ++g) f[g] = root(s * pi[g] * step);
    int j = find(f);
    if (j < 0) raise(ErrorCode::IncompleteTable, "type-W character is missing");
    return j;
  }

private:
  CharacterTable() = default;

  std::vector<i64> key(const ClassFn& f) const {
    std::vector<i64> k;
    for (Elem r : G_->classes().reps) k.insert(k.end(), f[r].coeffs().begin(), f[r].coeffs().end());
    return k;
  }

  void add(Irreducible x) {
    by_key_.emplace(key(x.values), count());
    irr_.push_back(std::move(x));
  }

  void construct(const SubgroupMarking* hint) {
    const LGroup& G = *G_;
    const i64 l = G.prime();
    const int n = G.order();
    const i64 top = ipow(l, m_);
    if (G.exponent() > top) raise(ErrorCode::OutOfModel, "cyclotomic level too small for the group exponent");

    // linear characters through G^ab
    QuotientGroup ab = materialize_quotient(G, G.commutator_subgroup(), G.name() + "^ab");
    AbelianDual dual = abelian_dual(ab.group);
    for (auto& lam : dual.values) {
      Irreducible x;
      x.lin.resize(n);
      x.values.resize(n);
      for (Elem g = 0; g < n; ++g) {
        x.lin[g] = lam[ab.projection[g]] * (top / dual.exponent);
        x.values[g] = root(x.lin[g]);
      }
      add(std::move(x));
    }

    if (!G.is_abelian()) {
      if (hint && hint->gprime_abelian && hint->group.get() == G_.get()) {
        basis_gprime_ = hint->gprime;
        basis_a_ = hint->a;
      } else {
        bool found = false;
        for (auto& mask : maximal_subgroups(G)) {
          auto sub = materialize_subgroup(G, mask, "sub");
          if (sub.group->is_abelian()) {
            basis_gprime_ = mask;
            basis_a_ = 0;
            while (mask[basis_a_]) ++basis_a_;
            found = true;
            break;
          }
        }
        if (!found) raise(ErrorCode::IncompleteTable, G.name() + " has no abelian subgroup of index l");
      }
      basis_sub_ = materialize_subgroup(G, basis_gprime_, G.name() + "'");
      sub_dual_ = abelian_dual(*basis_sub_.group);
      basis_coset_.assign(n, -1);
      Elem t = 0;
      for (int i = 0; i < l; ++i) {
        for (Elem h : basis_sub_.to_parent) basis_coset_[G.mul(t, h)] = i;
        t = G.mul(t, basis_a_);
      }
      const LGroup& S = *basis_sub_.group;
      std::map<std::vector<i64>, int> index_of;
      for (std::size_t k = 0; k < sub_dual_.values.size(); ++k) index_of.emplace(sub_dual_.values[k], static_cast<int>(k));
      std::vector<bool> done(sub_dual_.values.size(), false);
      for (std::size_t k = 0; k < sub_dual_.values.size(); ++k) {
        if (done[k]) continue;
        // orbit under conjugation by a: (chi^a)(h) = chi(a h a^-1)
        std::vector<int> orbit{static_cast<int>(k)};
        for (;;) {
          const auto& cur = sub_dual_.values[orbit.back()];
          std::vector<i64> nxt(S.order());
          for (Elem h = 0; h < S.order(); ++h) {
            Elem p = basis_sub_.to_parent[h];
            nxt[h] = cur[basis_sub_.from_parent[G.mul(G.mul(basis_a_, p), G.inv(basis_a_))]];
          }
          int j = index_of.at(nxt);
          if (j == orbit.front()) break;
          orbit.push_back(j);
        }
        for (int j : orbit) done[j] = true;
        if (orbit.size() == 1) continue;
        Irreducible x;
        x.degree = static_cast<int>(l);
        x.sub_char = static_cast<int>(k);
        x.values.assign(n, zero());
        const i64 scale = top / sub_dual_.exponent;
        for (Elem g = 0; g < n; ++g) {
          if (!basis_gprime_[g]) continue;
          Elem c = g;
          for (int i = 0; i < l; ++i) {
            x.values[g] += root(sub_dual_.values[k][basis_sub_.from_parent[c]] * scale);
            c = G.conj(c, basis_a_);
          }
        }
        add(std::move(x));
      }
    }

    i64 total = 0;
    for (auto& x : irr_) total += static_cast<i64>(x.degree) * x.degree;
    if (total != n)
      raise(ErrorCode::IncompleteTable, "sum of squared degrees is " + std::to_string(total) + ", |G| = " + std::to_string(n));
    adams_l_.resize(count());
    for (int i = 0; i < count(); ++i) adams_l_[i] = decompose(adams(irr_[i].values, l));
  }

  std::shared_ptr<const LGroup> G_;
  int m_ = 1;
  std::vector<Irreducible> irr_;
  std::map<std::vector<i64>, int> by_key_;
  std::vector<std::vector<i64>> adams_l_;
  std::vector<bool> basis_gprime_;
  Elem basis_a_ = 0;
  std::vector<int> basis_coset_;
  EmbeddedSubgroup basis_sub_;
  AbelianDual sub_dual_;
};

/// A virtual character: integer coordinates plus its values.
struct VirtualCharacter {
  std::shared_ptr<const CharacterTable> table;
  std::vector<i64> coords;
  ClassFn values;

  static VirtualCharacter from_coords(std::shared_ptr<const CharacterTable> t, std::vector<i64> c) {
    ClassFn v = t->evaluate(c);
    return {std::move(t), std::move(c), std::move(v)};
  }
  static VirtualCharacter from_values(std::shared_ptr<const CharacterTable> t, ClassFn v) {
    auto c = t->decompose(v);
    return {std::move(t), std::move(c), std::move(v)};
  }
  static VirtualCharacter irreducible(std::shared_ptr<const CharacterTable> t, int i) {
    return from_coords(t, t->unit_coords(i));
  }

  i64 degree() const { return values[0].rational_value(); }
  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](i64 c) { return c == 0; });
  }
  friend bool operator==(const VirtualCharacter& a, const VirtualCharacter& b) { return a.coords == b.coords; }
  friend VirtualCharacter operator+(const VirtualCharacter& a, const VirtualCharacter& b) {
    std::vector<i64> c(a.coords.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] + b.coords[i];
    return from_coords(a.table, c);
  }
  friend VirtualCharacter operator-(const VirtualCharacter& a, const VirtualCharacter& b) {
    std::vector<i64> c(a.coords.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] - b.coords[i];
    return from_coords(a.table, c);
  }
};

/// ind_{G'}^G f (g) = sum_i f'(a^-i g a^i), f' vanishing off G'.
inline ClassFn induce_fn(const ClassFn& f, const SubgroupMarking& mk, const CycloInt& zero) {
  const LGroup& G = mk.G();
  ClassFn out(G.order(), zero);
  for (Elem g = 0; g < G.order(); ++g) {
    if (!mk.contains(g)) continue;
    Elem c = g;
    for (int i = 0; i < mk.index(); ++i) {
      out[g] += f[mk.sub.from_parent[c]];
      c = G.conj(c, mk.a);
    }
  }
  return out;
}

inline ClassFn restrict_fn(const ClassFn& f, const SubgroupMarking& mk) {
  ClassFn out;
  for (Elem g : mk.sub.to_parent) out.push_back(f[g]);
  return out;
}

/// Character tables of G and G' at a common level, with induction data.
struct MarkedTables {
  SubgroupMarking mk;
  std::shared_ptr<const CharacterTable> G;
  std::shared_ptr<const CharacterTable> Gp;
  std::vector<std::vector<i64>> ind;    // per irreducible of G': coordinates of its induction
  std::vector<std::vector<i64>> defect; // per irreducible of G': coordinates of the defect character

  static MarkedTables build(const SubgroupMarking& mk, int m, std::shared_ptr<const CharacterTable> gtab = nullptr) {
    MarkedTables t;
    t.mk = mk;
    t.G = gtab ? std::move(gtab) : CharacterTable::build(mk.group, m, &mk);
    t.Gp = CharacterTable::build(mk.sub.group, m);
    for (int j = 0; j < t.Gp->count(); ++j) {
      t.ind.push_back(t.G->decompose(induce_fn(t.Gp->values(j), mk, t.G->zero())));
      t.defect.push_back(t.G->decompose(defect_fn(t, t.Gp->values(j))));
    }
    return t;
  }

  /// psi_l(ind f) - ind(psi_l f)
  static ClassFn defect_fn(const MarkedTables& t, const ClassFn& f) {
    ClassFn lhs = t.G->adams(induce_fn(f, t.mk, t.G->zero()), t.mk.prime());
    ClassFn rhs = induce_fn(t.Gp->adams(f, t.mk.prime()), t.mk, t.G->zero());
    for (std::size_t g = 0; g < lhs.size(); ++g) lhs[g] -= rhs[g];
    return lhs;
  }

  /// sum over t with m(g^t) = 1 of f(g^(l t)), t over the transversal.
  ClassFn defect_closed_form(const ClassFn& f) const {
    const LGroup& g = mk.G();
    ClassFn out = G->zero_fn();
    for (Elem x = 0; x < g.order(); ++x)
      for (int i = 0; i < mk.index(); ++i) {
        Elem t = mk.transversal(i);
        Elem xt = g.conj(x, t);
        if (mk.m_index(xt) != 1) continue;
        out[x] += f[mk.sub.from_parent[g.pow(xt, mk.prime())]];
      }
    return out;
  }

  /// Type-W pairs (irreducible of G, irreducible of G', s) for s in Z/l^M.
  struct WType {
    int on_G;
    int on_Gp;
    i64 s;
  };
  std::vector<WType> wtype() const {
    std::vector<WType> out;
    std::vector<i64> pi_sub;
    for (Elem g : mk.sub.to_parent) pi_sub.push_back(mk.pi[g]);
    for (i64 s = 0; s < mk.gamma_order(); ++s)
      out.push_back({G->wtype_index(mk.pi, mk.M, s), Gp->wtype_index(pi_sub, mk.M, s), s});
    return out;
  }
};

} // namespace iwalab
