#pragma once

#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "iwalab/group.hpp"

namespace iwalab {

/// All homomorphisms of an abelian group H into Z/e, e = exponent of H.
/// values[k][h] is the image of h under the k-th homomorphism; index 0 is trivial.
struct AbelianDual {
  i64 exponent = 1;
  std::vector<std::vector<i64>> values;

  /// Additive order of the k-th homomorphism.
  i64 order(std::size_t k) const {
    i64 g = exponent;
    for (i64 v : values[k]) g = std::gcd(g, v);
    return exponent / g;
  }
};

inline AbelianDual abelian_dual(const LGroup& H) {
  if (!H.is_abelian()) raise(ErrorCode::OutOfModel, "dual of a non-abelian group");
  const int n = H.order();
  AbelianDual d;
  d.exponent = H.exponent();
  const i64 e = d.exponent;
  std::vector<bool> all(n, true);
  std::vector<Elem> gens = H.generating_set(all);

  // homomorphisms on H_i = <g_1..g_i>, stored on the members of H_i
  std::vector<Elem> members{0};
  std::vector<bool> in(n, false);
  in[0] = true;
  std::vector<std::vector<i64>> homs{std::vector<i64>(n, 0)};
  for (Elem g : gens) {
    // o = [H_{i+1} : H_i], c = g^o in H_i
    int o = 1;
    Elem c = g;
    while (!in[c]) {
      c = H.mul(c, g);
      ++o;
    }
    std::vector<Elem> next;
    std::vector<Elem> gj{0};
    for (int j = 1; j < o; ++j) gj.push_back(H.mul(gj.back(), g));
    for (int j = 0; j < o; ++j)
      for (Elem h : members) next.push_back(H.mul(h, gj[j]));
    std::vector<std::vector<i64>> ext;
    for (auto& lam : homs) {
      i64 target = lam[c];
      // o * v = target (mod e)
      if (target % o != 0) raise(ErrorCode::OutOfModel, "character extension failed");
      i64 step = e / o;
      for (int t = 0; t < o; ++t) {
        i64 v = mod_reduce(target / o + t * step, e);
        std::vector<i64> nl = lam;
        for (int j = 0; j < o; ++j)
          for (Elem h : members) nl[H.mul(h, gj[j])] = mod_reduce(lam[h] + j * v, e);
        ext.push_back(std::move(nl));
      }
    }
    homs = std::move(ext);
    members = std::move(next);
    for (Elem x : members) in[x] = true;
  }
  d.values = std::move(homs);
  return d;
}

/// The data of an abelian (or general) index-l subgroup G' of G together with
/// the coset generator a and the map pi : G -> Z/l^M.
struct SubgroupMarking {
  std::shared_ptr<const LGroup> group;
  std::vector<bool> gprime;          // membership mask of G'
  std::vector<Elem> gprime_elems;    // sorted
  Elem a = 0;                        // generator of G / G'
  std::vector<int> coset;            // g in a^coset[g] G'
  EmbeddedSubgroup sub;              // G' materialized
  int M = 1;                         // Gamma-bar = Z/l^M
  std::vector<i64> pi;               // pi[g] in Z/l^M (exponent of gamma)
  bool pi_surjective = true;
  int pi_gprime_index = 1;           // [pi(G) : pi(G')], 1 or l
  bool gprime_abelian = true;

  const LGroup& G() const { return *group; }
  const LGroup& Gp() const { return *sub.group; }
  const std::shared_ptr<const LGroup>& Gp_ptr() const { return sub.group; }
  i64 prime() const { return group->prime(); }
  int index() const { return static_cast<int>(group->order() / sub.group->order()); }
  bool contains(Elem g) const { return gprime[g]; }
  i64 gamma_order() const { return ipow(prime(), M); }
  /// pi(G') has index l in pi(G) exactly when G' and ker pi are "transverse" enough;
  /// otherwise the identification of the smaller Gamma with pi(G') is non-canonical.
  bool pi_canonical() const { return pi_gprime_index == prime(); }

  Elem transversal(int i) const { return group->pow(a, i); }

  /// Least r with g^(l^r) in G'.
  int m_index(Elem g) const {
    int r = 0;
    while (!gprime[g]) {
      g = group->pow(g, prime());
      ++r;
    }
    return r;
  }

  /// g' g'^a ... g'^(a^(l-1)) with g^a = a^-1 g a.
  Elem hat_a_power(Elem g) const {
    if (!gprime[g]) raise(ErrorCode::NotInSubgroup, group->label(g) + " is not in G'");
    Elem r = 0, c = g;
    for (int i = 0; i < index(); ++i) {
      r = group->mul(r, c);
      c = group->conj(c, a);
    }
    return r;
  }

  /// Transfer G -> G' (G' abelian): prod_i t_i g t_{sigma(i)}^-1 over the transversal a^i.
  Elem transfer(Elem g) const {
    const LGroup& G = *group;
    const i64 l = index();
    Elem r = 0;
    for (int i = 0; i < l; ++i) {
      Elem ti = transversal(i);
      Elem tg = G.mul(ti, g);
      Elem rep = transversal(coset[tg]);
      Elem h = G.mul(tg, G.inv(rep));
      r = G.mul(r, h);
    }
    return r;
  }

  /// Sum of the A-conjugates g^(a^i), i = 0..l-1, as a list of elements.
  std::vector<Elem> a_orbit_terms(Elem g) const {
    std::vector<Elem> out;
    Elem c = g;
    for (int i = 0; i < index(); ++i) {
      out.push_back(c);
      c = group->conj(c, a);
    }
    return out;
  }
};

/// pi : G -> Z/l^M from the first linear character of maximal order.
inline void choose_pi(SubgroupMarking& mk, int M) {
  const LGroup& G = mk.G();
  const i64 l = G.prime();
  mk.M = M;
  QuotientGroup ab = materialize_quotient(G, G.commutator_subgroup(), G.name() + "^ab");
  AbelianDual dual = abelian_dual(ab.group);
  std::size_t best = 0;
  for (std::size_t k = 1; k < dual.values.size(); ++k)
    if (dual.order(k) > dual.order(best)) best = k;
  const i64 o = dual.order(best);
  const i64 gn = ipow(l, M);
  mk.pi.assign(G.order(), 0);
  for (Elem g = 0; g < G.order(); ++g) {
    // value in Z/o, then into Z/l^M
    i64 v = dual.values[best][ab.projection[g]] / (dual.exponent / o);
    mk.pi[g] = o <= gn ? mod_reduce(v * (gn / o), gn) : mod_reduce(v, gn);
  }
  mk.pi_surjective = o >= gn;
  auto image_size = [&](bool only_gprime) {
    std::vector<bool> seen(gn, false);
    i64 c = 0;
    for (Elem g = 0; g < G.order(); ++g)
      if ((!only_gprime || mk.gprime[g]) && !seen[mk.pi[g]]) {
        seen[mk.pi[g]] = true;
        ++c;
      }
    return c;
  };
  mk.pi_gprime_index = static_cast<int>(image_size(false) / image_size(true));
}

/// Builds a marking from a subgroup mask; a defaults to the smallest element outside G'.
inline SubgroupMarking make_marking(std::shared_ptr<const LGroup> G, const std::vector<bool>& gprime, int M = 2, Elem a = -1) {
  SubgroupMarking mk;
  mk.group = G;
  mk.gprime = gprime;
  const LGroup& g = *G;
  const i64 l = g.prime();
  for (Elem x = 0; x < g.order(); ++x)
    if (gprime[x]) mk.gprime_elems.push_back(x);
  if (static_cast<i64>(mk.gprime_elems.size()) * l != g.order()) raise(ErrorCode::NotInSubgroup, "G' does not have index l");
  if (g.closure(mk.gprime_elems) != gprime) raise(ErrorCode::NotInSubgroup, "G' is not a subgroup");
  if (!g.is_normal(gprime)) raise(ErrorCode::NotInSubgroup, "G' is not normal");
  if (a < 0) {
    a = 0;
    while (gprime[a]) ++a;
  }
  if (gprime[a]) raise(ErrorCode::NotInSubgroup, "a must lie outside G'");
  mk.a = a;
  mk.coset.assign(g.order(), -1);
  Elem t = 0;
  for (int i = 0; i < l; ++i) {
    for (Elem h : mk.gprime_elems) mk.coset[g.mul(t, h)] = i;
    t = g.mul(t, a);
  }
  mk.sub = materialize_subgroup(g, gprime, g.name() + "'");
  mk.gprime_abelian = mk.sub.group->is_abelian();
  choose_pi(mk, M);
  return mk;
}

inline SubgroupMarking make_marking(std::shared_ptr<const LGroup> G, const std::vector<Elem>& gprime_gens, int M, Elem a) {
  auto mask = G->closure(gprime_gens);
  return make_marking(std::move(G), mask, M, a);
}

/// Frattini subgroup G^l [G, G].
inline std::vector<bool> frattini(const LGroup& G) {
  std::vector<Elem> gens;
  auto comm = G.commutator_subgroup();
  for (Elem g = 0; g < G.order(); ++g) {
    if (comm[g]) gens.push_back(g);
    gens.push_back(G.pow(g, G.prime()));
  }
  return G.closure(gens);
}

/// Every index-l subgroup (all are normal, containing the Frattini subgroup).
inline std::vector<std::vector<bool>> maximal_subgroups(const LGroup& G) {
  const i64 l = G.prime();
  QuotientGroup q = materialize_quotient(G, frattini(G), G.name() + "/Phi");
  std::vector<bool> all(q.group.order(), true);
  std::vector<Elem> basis = q.group.generating_set(all);
  const int d = static_cast<int>(basis.size());
  // coordinates of quotient elements in the basis
  std::vector<std::vector<i64>> coords(q.group.order());
  const i64 count = ipow(l, d);
  for (i64 idx = 0; idx < count; ++idx) {
    std::vector<i64> c(d);
    i64 r = idx;
    Elem x = 0;
    for (int i = d - 1; i >= 0; --i) {
      c[i] = r % l;
      r /= l;
    }
    for (int i = 0; i < d; ++i) x = q.group.mul(x, q.group.pow(basis[i], c[i]));
    coords[x] = c;
  }
  std::vector<std::vector<bool>> out;
  for (i64 idx = 1; idx < count; ++idx) {
    std::vector<i64> w(d);
    i64 r = idx;
    for (int i = d - 1; i >= 0; --i) {
      w[i] = r % l;
      r /= l;
    }
    // functionals up to scalar: first nonzero entry is 1
    auto first = std::find_if(w.begin(), w.end(), [](i64 v) { return v != 0; });
    if (*first != 1) continue;
    std::vector<bool> mask(G.order());
    for (Elem g = 0; g < G.order(); ++g) {
      const auto& c = coords[q.projection[g]];
      i64 s = 0;
      for (int i = 0; i < d; ++i) s += w[i] * c[i];
      mask[g] = s % l == 0;
    }
    out.push_back(std::move(mask));
  }
  return out;
}

/// Every abelian index-l subgroup, each with the default transversal generator.
inline std::vector<SubgroupMarking> find_abelian_index_l(const std::shared_ptr<const LGroup>& G, int M = 2) {
  std::vector<SubgroupMarking> out;
  for (auto& mask : maximal_subgroups(*G)) {
    std::vector<Elem> elems;
    for (Elem g = 0; g < G->order(); ++g)
      if (mask[g]) elems.push_back(g);
    bool abelian = true;
    for (std::size_t i = 0; i < elems.size() && abelian; ++i)
      for (std::size_t j = i + 1; j < elems.size(); ++j)
        if (G->mul(elems[i], elems[j]) != G->mul(elems[j], elems[i])) {
          abelian = false;
          break;
        }
    if (abelian) out.push_back(make_marking(G, mask, M));
  }
  return out;
}

} // namespace iwalab
