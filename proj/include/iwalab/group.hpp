#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "iwalab/arith.hpp"

namespace iwalab {

/// Elements are canonical indices 0..order-1; 0 is the identity.
using Elem = int;

/// Partition of a group into conjugacy classes.
struct ConjClassSet {
  std::vector<std::vector<Elem>> classes; // each sorted, classes ordered by representative
  std::vector<Elem> reps;                 // smallest element of each class
  std::vector<int> class_of;              // element -> class index

  int count() const { return static_cast<int>(classes.size()); }
  int size(int c) const { return static_cast<int>(classes[c].size()); }
};

/// A finite l-group materialized as a full multiplication table.
class LGroup {
public:
  LGroup() = default;

  /// Builds a group from an explicit table; validates identity, inverses and
  /// (for small orders) associativity, and that the order is a power of l.
  static LGroup from_table(i64 l, std::string name, int n, std::vector<std::uint16_t> table,
                           std::vector<std::string> labels, std::vector<Elem> gens = {},
                           std::vector<std::string> gen_names = {}) {
    LGroup g;
    g.l_ = l;
    g.name_ = std::move(name);
    g.n_ = n;
    g.table_ = std::move(table);
    g.labels_ = std::move(labels);
    g.gens_ = std::move(gens);
    g.gen_names_ = std::move(gen_names);
    g.finalize();
    return g;
  }

  i64 prime() const { return l_; }
  const std::string& name() const { return name_; }
  int order() const { return n_; }
  int log_order() const { return log_exact(n_, l_); }

  Elem mul(Elem a, Elem b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  Elem pow(Elem g, i64 k) const {
    i64 o = order_[g];
    k = mod_reduce(k, o);
    Elem r = 0, b = g;
    while (k > 0) {
      if (k & 1) r = mul(r, b);
      b = mul(b, b);
      k >>= 1;
    }
    return r;
  }
  /// g^h = h^{-1} g h
  Elem conj(Elem g, Elem h) const { return mul(mul(inv(h), g), h); }
  /// [a, b] = a^{-1} b^{-1} a b
  Elem commutator(Elem a, Elem b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }

  int element_order(Elem g) const { return order_[g]; }
  int exponent() const { return *std::max_element(order_.begin(), order_.end()); }

  const std::string& label(Elem g) const { return labels_[g]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Elem>& generators() const { return gens_; }
  const std::vector<std::string>& generator_names() const { return gen_names_; }

  const ConjClassSet& classes() const { return classes_; }

  bool is_abelian() const {
    for (Elem a : gens_)
      for (Elem b : gens_)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  /// Membership mask of the subgroup generated by `gens`.
  std::vector<bool> closure(const std::vector<Elem>& gens) const {
    std::vector<bool> in(n_, false);
    std::vector<Elem> frontier{0};
    in[0] = true;
    while (!frontier.empty()) {
      Elem x = frontier.back();
      frontier.pop_back();
      for (Elem s : gens) {
        Elem y = mul(x, s);
        if (!in[y]) {
          in[y] = true;
          frontier.push_back(y);
        }
      }
    }
    return in;
  }

  /// Greedy generating set of the subgroup given as a mask.
  std::vector<Elem> generating_set(const std::vector<bool>& mask) const {
    std::vector<Elem> gens;
    std::vector<bool> cur(n_, false);
    cur[0] = true;
    // prefer elements of large order so fewer generators are picked
    std::vector<Elem> cand;
    for (Elem g = 0; g < n_; ++g)
      if (mask[g]) cand.push_back(g);
    std::stable_sort(cand.begin(), cand.end(), [&](Elem a, Elem b) { return order_[a] > order_[b]; });
    for (Elem g : cand) {
      if (cur[g]) continue;
      gens.push_back(g);
      cur = closure(gens);
    }
    return gens;
  }

  std::vector<bool> commutator_subgroup() const {
    std::vector<Elem> comms;
    std::vector<bool> seen(n_, false);
    for (Elem a = 0; a < n_; ++a)
      for (Elem b : gens_) {
        Elem c = commutator(a, b);
        if (!seen[c]) {
          seen[c] = true;
          comms.push_back(c);
        }
      }
    // normal closure of [gens, G] is [G, G]
    return closure(comms);
  }

  /// [H, K] for subgroups given as masks.
  std::vector<bool> commutator_of(const std::vector<bool>& H, const std::vector<bool>& K) const {
    std::vector<Elem> comms;
    std::vector<bool> seen(n_, false);
    for (Elem a = 0; a < n_; ++a) {
      if (!H[a]) continue;
      for (Elem b = 0; b < n_; ++b) {
        if (!K[b]) continue;
        Elem c = commutator(a, b);
        if (!seen[c]) {
          seen[c] = true;
          comms.push_back(c);
        }
      }
    }
    return closure(comms);
  }

  std::vector<bool> center() const {
    std::vector<bool> z(n_, false);
    for (Elem a = 0; a < n_; ++a) {
      bool central = true;
      for (Elem b : gens_)
        if (mul(a, b) != mul(b, a)) {
          central = false;
          break;
        }
      z[a] = central;
    }
    return z;
  }

  bool is_normal(const std::vector<bool>& H) const {
    for (Elem h = 0; h < n_; ++h) {
      if (!H[h]) continue;
      for (Elem g : gens_)
        if (!H[conj(h, g)]) return false;
    }
    return true;
  }

  /// Exhaustive associativity check (cubic; used in tests and for small tables).
  bool check_associative() const {
    for (Elem a = 0; a < n_; ++a)
      for (Elem b = 0; b < n_; ++b) {
        Elem ab = mul(a, b);
        for (Elem c = 0; c < n_; ++c)
          if (mul(ab, c) != mul(a, mul(b, c))) return false;
      }
    return true;
  }

private:
  void finalize() {
    if (log_exact(n_, l_) < 0) raise(ErrorCode::InconsistentPresentation, "order " + std::to_string(n_) + " is not a power of l");
    if (table_.size() != static_cast<std::size_t>(n_) * n_) raise(ErrorCode::InconsistentPresentation, "table has wrong size");
    for (Elem a = 0; a < n_; ++a)
      if (mul(0, a) != a || mul(a, 0) != a) raise(ErrorCode::InconsistentPresentation, "element 0 is not the identity");
    inv_.assign(n_, -1);
    for (Elem a = 0; a < n_; ++a) {
      int found = 0;
      for (Elem b = 0; b < n_; ++b)
        if (mul(a, b) == 0) {
          inv_[a] = b;
          ++found;
        }
      if (found != 1 || mul(inv_[a], a) != 0) raise(ErrorCode::InconsistentPresentation, "inverses are not unique");
    }
    if (n_ <= 243 && !check_associative()) raise(ErrorCode::InconsistentPresentation, "table is not associative");
    order_.assign(n_, 1);
    for (Elem a = 0; a < n_; ++a) {
      Elem x = a;
      while (x != 0) {
        x = mul(x, a);
        ++order_[a];
      }
    }
    if (labels_.size() != static_cast<std::size_t>(n_)) {
      labels_.resize(n_);
      for (Elem a = 0; a < n_; ++a) labels_[a] = a == 0 ? "1" : "e" + std::to_string(a);
    }
    if (gens_.empty()) {
      std::vector<bool> all(n_, true);
      gens_ = generating_set(all);
    }
    if (gen_names_.size() != gens_.size()) {
      gen_names_.clear();
      for (Elem g : gens_) gen_names_.push_back(labels_[g]);
    }
    if (closure(gens_) != std::vector<bool>(n_, true)) raise(ErrorCode::InconsistentPresentation, "generators do not generate");
    compute_classes();
  }

  void compute_classes() {
    classes_ = ConjClassSet{};
    classes_.class_of.assign(n_, -1);
    for (Elem a = 0; a < n_; ++a) {
      if (classes_.class_of[a] >= 0) continue;
      int id = classes_.count();
      std::vector<Elem> cls{a};
      classes_.class_of[a] = id;
      for (std::size_t i = 0; i < cls.size(); ++i)
        for (Elem g : gens_) {
          Elem c = conj(cls[i], g);
          if (classes_.class_of[c] < 0) {
            classes_.class_of[c] = id;
            cls.push_back(c);
          }
        }
      std::sort(cls.begin(), cls.end());
      classes_.reps.push_back(a);
      classes_.classes.push_back(std::move(cls));
    }
  }

  i64 l_ = 3;
  std::string name_;
  int n_ = 1;
  std::vector<std::uint16_t> table_{0};
  std::vector<Elem> inv_{0};
  std::vector<int> order_{1};
  std::vector<std::string> labels_{"1"};
  std::vector<Elem> gens_;
  std::vector<std::string> gen_names_;
  ConjClassSet classes_;
};

/// A subgroup materialized as its own LGroup, with the embedding.
struct EmbeddedSubgroup {
  std::shared_ptr<const LGroup> group;
  std::vector<Elem> to_parent;   // sub index -> parent index
  std::vector<Elem> from_parent; // parent index -> sub index, -1 outside
  std::vector<bool> mask;        // over the parent
};

inline EmbeddedSubgroup materialize_subgroup(const LGroup& G, const std::vector<bool>& mask, const std::string& name) {
  EmbeddedSubgroup s;
  s.mask = mask;
  s.from_parent.assign(G.order(), -1);
  for (Elem g = 0; g < G.order(); ++g)
    if (mask[g]) {
      s.from_parent[g] = static_cast<int>(s.to_parent.size());
      s.to_parent.push_back(g);
    }
  int n = static_cast<int>(s.to_parent.size());
  std::vector<std::uint16_t> table(static_cast<std::size_t>(n) * n);
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = G.label(s.to_parent[i]);
    for (int j = 0; j < n; ++j) {
      int p = s.from_parent[G.mul(s.to_parent[i], s.to_parent[j])];
      if (p < 0) raise(ErrorCode::NotInSubgroup, "subset is not closed under multiplication");
      table[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint16_t>(p);
    }
  }
  s.group = std::make_shared<const LGroup>(LGroup::from_table(G.prime(), name, n, std::move(table), std::move(labels)));
  return s;
}

/// G / N materialized, with the projection map.
struct QuotientGroup {
  LGroup group;
  std::vector<Elem> projection; // parent -> quotient
  std::vector<Elem> section;    // quotient -> smallest parent representative
};

inline QuotientGroup materialize_quotient(const LGroup& G, const std::vector<bool>& normal, const std::string& name) {
  if (!G.is_normal(normal)) raise(ErrorCode::NotInSubgroup, "quotient by a non-normal subgroup");
  QuotientGroup q;
  q.projection.assign(G.order(), -1);
  for (Elem g = 0; g < G.order(); ++g) {
    if (q.projection[g] >= 0) continue;
    int id = static_cast<int>(q.section.size());
    q.section.push_back(g);
    for (Elem h = 0; h < G.order(); ++h)
      if (normal[h]) q.projection[G.mul(g, h)] = id;
  }
  int n = static_cast<int>(q.section.size());
  std::vector<std::uint16_t> table(static_cast<std::size_t>(n) * n);
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = i == 0 ? "1" : G.label(q.section[i]);
    for (int j = 0; j < n; ++j)
      table[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint16_t>(q.projection[G.mul(q.section[i], q.section[j])]);
  }
  std::vector<Elem> gens;
  for (Elem g : G.generators()) {
    Elem p = q.projection[g];
    if (p != 0 && std::find(gens.begin(), gens.end(), p) == gens.end()) gens.push_back(p);
  }
  q.group = LGroup::from_table(G.prime(), name, n, std::move(table), std::move(labels), gens);
  return q;
}

/// A x B with index a * |B| + b.
inline LGroup direct_product(const LGroup& A, const LGroup& B, const std::string& name) {
  int na = A.order(), nb = B.order(), n = na * nb;
  std::vector<std::uint16_t> table(static_cast<std::size_t>(n) * n);
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) {
    int ai = i / nb, bi = i % nb;
    if (ai == 0) labels[i] = B.label(bi);
    else if (bi == 0) labels[i] = A.label(ai);
    else labels[i] = A.label(ai) + "*" + B.label(bi);
    for (int j = 0; j < n; ++j)
      table[static_cast<std::size_t>(i) * n + j] =
          static_cast<std::uint16_t>(A.mul(ai, j / nb) * nb + B.mul(bi, j % nb));
  }
  std::vector<Elem> gens;
  for (Elem a : A.generators()) gens.push_back(a * nb);
  for (Elem b : B.generators()) gens.push_back(b);
  return LGroup::from_table(A.prime(), name, n, std::move(table), std::move(labels), gens);
}

} // namespace iwalab
