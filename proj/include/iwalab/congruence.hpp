#pragma once

#include <algorithm>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "iwalab/deflation.hpp"
#include "iwalab/int_matrix.hpp"
#include "iwalab/restriction.hpp"
#include "iwalab/zmod_span.hpp"

namespace iwalab {

/// Cyclic group Z/n written multiplicatively, element j = gamma^j.
inline LGroup cyclic_group(i64 l, int n, const std::string& gen = "gamma") {
  std::vector<std::uint16_t> table(static_cast<std::size_t>(n) * n);
  std::vector<std::string> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = i == 0 ? "1" : (i == 1 ? gen : gen + "^" + std::to_string(i));
    for (int j = 0; j < n; ++j) table[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint16_t>((i + j) % n);
  }
  return LGroup::from_table(l, gen, n, std::move(table), std::move(labels), n > 1 ? std::vector<Elem>{1} : std::vector<Elem>{});
}

/// The ring R[Gbar x G'] = R[Gbar] (x) R[G'] with a acting on the G' factor.
/// Element (j, h) has index j * |G'| + h. With copies = 1 this is R[G'] itself.
struct ACoefficients {
  std::shared_ptr<const LGroup> ring_group;
  int copies = 1;
  int base_order = 0;
  /// conjugation by a on ring_group elements
  std::vector<Elem> a_perm;
  i64 l = 0;

  Elem join(int j, Elem h) const { return j * base_order + h; }
  int copy_of(Elem p) const { return p / base_order; }
  Elem base_of(Elem p) const { return p % base_order; }

  GroupRingElement conj_a(const GroupRingElement& x, int times = 1) const {
    return x.pushed(ring_group, [&](Elem g) {
      for (int t = 0; t < times; ++t) g = a_perm[g];
      return g;
    });
  }

  /// tr_A(x) = sum_i x^(a^i)
  GroupRingElement tr_a(const GroupRingElement& x) const {
    GroupRingElement out(ring_group, x.prec());
    for (Elem g = 0; g < ring_group->order(); ++g) {
      i64 c = x.coeff(g);
      if (!c) continue;
      Elem h = g;
      for (int i = 0; i < l; ++i) {
        out.add(h, c);
        h = a_perm[h];
      }
    }
    return out;
  }

  /// sum_j beta_j (j, 1) * x with x over G' (ring indices of copy 0)
  GroupRingElement tensor(const std::vector<i64>& beta, const GroupRingElement& x) const {
    GroupRingElement out(ring_group, x.prec());
    for (int j = 0; j < copies; ++j) {
      if (!beta[j]) continue;
      for (Elem h = 0; h < base_order; ++h)
        if (x.coeff(h)) out.add(join(j, h), mul_mod(beta[j], x.coeff(h), out.modulus()));
    }
    return out;
  }
};

/// R[G'] with the conjugation action of a.
inline ACoefficients a_coefficients(const SubgroupMarking& mk) {
  ACoefficients c;
  c.ring_group = mk.Gp_ptr();
  c.base_order = mk.Gp().order();
  c.l = mk.prime();
  for (Elem h = 0; h < c.base_order; ++h) c.a_perm.push_back(mk.sub.from_parent[mk.G().conj(mk.sub.to_parent[h], mk.a)]);
  return c;
}

/// R[Gbar] (x) R[G'] with Gbar = Z/l^M from the marking.
inline ACoefficients gamma_extension(const SubgroupMarking& mk) {
  ACoefficients base = a_coefficients(mk);
  const int n = static_cast<int>(mk.gamma_order());
  LGroup gbar = cyclic_group(mk.prime(), n);
  ACoefficients c;
  c.ring_group = std::make_shared<const LGroup>(direct_product(gbar, mk.Gp(), mk.Gp().name() + "[Gamma]"));
  c.copies = n;
  c.base_order = base.base_order;
  c.l = base.l;
  c.a_perm.resize(c.ring_group->order());
  for (int j = 0; j < n; ++j)
    for (Elem h = 0; h < c.base_order; ++h) c.a_perm[c.join(j, h)] = c.join(j, base.a_perm[h]);
  return c;
}

enum class IdealKind { AugA, AugBPrime, TraceT, LTrace, TraceBPrime };

inline std::string to_string(IdealKind k) {
  switch (k) {
    case IdealKind::AugA: return "aug_a";
    case IdealKind::AugBPrime: return "aug_b'";
    case IdealKind::TraceT: return "trace_T'";
    case IdealKind::LTrace: return "l_trace";
    case IdealKind::TraceBPrime: return "trace_b'";
  }
  return "?";
}

/// Outcome of a membership query with a readable certificate.
struct SpanCertificate {
  bool member = false;
  /// member: generator label -> coefficient
  std::vector<std::pair<std::string, i64>> terms;
  /// non-member: basis label -> weight of a functional vanishing on the span
  std::vector<std::pair<std::string, i64>> functional;
  std::string failing_coordinate;
  /// member: raw coefficients per Gbar copy, indexed like the generators
  std::vector<std::vector<i64>> raw;
  /// the certificate reproduces x when replayed
  bool replayed = false;
  int precision = 0;
};

/// Additive span of ideal generators inside R[H] (H = G for aug_a, G' otherwise),
/// realised over Z/l^N. Over the Gbar extension the span is R[Gbar] (x) span,
/// decided copy by copy.
class IdealSpan {
public:
  struct Generator {
    Elem h = 0;
    Elem c = -1;  // commutator element, -1 for trace generators
  };

  IdealSpan(IdealKind kind, const SubgroupMarking& mk, int N, int copies = 1) : kind_(kind), N_(N), copies_(copies) {
    const LGroup& G = mk.G();
    auto comm = G.commutator_subgroup();
    std::vector<Elem> cs;
    for (Elem c = 1; c < G.order(); ++c)
      if (comm[c]) cs.push_back(c);
    ACoefficients act = a_coefficients(mk);
    base_ = kind == IdealKind::AugA ? mk.group : mk.Gp_ptr();
    const LGroup& H = *base_;
    const i64 l = mk.prime();
    std::vector<std::vector<i64>> vecs;
    auto push = [&](const GroupRingElement& x, Generator g) {
      if (x.is_zero()) return;
      vecs.push_back(x.coeffs());
      gens_.push_back(g);
    };
    auto gp = [&](Elem g) { return mk.sub.from_parent[g]; };
    switch (kind) {
      case IdealKind::AugA:
        for (Elem g = 0; g < G.order(); ++g)
          for (Elem c : cs) {
            GroupRingElement x = GroupRingElement::basis(base_, N, G.mul(g, c)) - GroupRingElement::basis(base_, N, g);
            push(x, {g, c});
          }
        break;
      case IdealKind::AugBPrime:
      case IdealKind::TraceBPrime:
        for (Elem h = 0; h < H.order(); ++h)
          for (Elem c : cs) {
            GroupRingElement x = GroupRingElement::basis(base_, N, H.mul(h, gp(c))) - GroupRingElement::basis(base_, N, h);
            push(kind == IdealKind::TraceBPrime ? act.tr_a(x) : x, {h, gp(c)});
          }
        break;
      case IdealKind::TraceT:
      case IdealKind::LTrace:
        for (Elem h = 0; h < H.order(); ++h) {
          GroupRingElement x = act.tr_a(GroupRingElement::basis(base_, N, h));
          push(kind == IdealKind::LTrace ? x.scaled(l) : x, {h, -1});
        }
        break;
    }
    span_ = ZmodSpan(l, N, H.order(), std::move(vecs));
  }

  IdealKind kind() const { return kind_; }
  int prec() const { return N_; }
  int copies() const { return copies_; }
  const LGroup& base() const { return *base_; }
  const std::vector<Generator>& generators() const { return gens_; }
  const ZmodSpan& span() const { return span_; }
  /// log_l of the size of the span inside one copy
  int length() const { return span_.length(); }

  std::string label(std::size_t g) const {
    const LGroup& H = *base_;
    const Generator& x = gens_[g];
    switch (kind_) {
      case IdealKind::AugA:
      case IdealKind::AugBPrime: return H.label(x.h) + "*(" + H.label(x.c) + "-1)";
      case IdealKind::TraceBPrime: return "trA(" + H.label(x.h) + "*(" + H.label(x.c) + "-1))";
      case IdealKind::TraceT: return "trA(" + H.label(x.h) + ")";
      case IdealKind::LTrace: return "l*trA(" + H.label(x.h) + ")";
    }
    return "?";
  }

  SpanCertificate contains(const GroupRingElement& x) const {
    const int dim = base_->order();
    if (x.group().order() != dim * copies_) raise(ErrorCode::OutOfModel, "element lives over a different ring than the span");
    if (x.prec() < N_)
      raise(ErrorCode::PrecisionExhausted, "element known to l^" + std::to_string(x.prec()) + ", span needs l^" + std::to_string(N_));
    SpanCertificate cert;
    cert.precision = N_;
    cert.member = true;
    auto prefix = [&](int j) { return copies_ == 1 ? std::string() : (j == 0 ? std::string() : "gamma^" + std::to_string(j) + "*"); };
    for (int j = 0; j < copies_; ++j) {
      std::vector<i64> v(x.coeffs().begin() + j * dim, x.coeffs().begin() + (j + 1) * dim);
      Membership m = span_.contains(v);
      if (!m.member) {
        cert.member = false;
        cert.raw.clear();
        cert.terms.clear();
        cert.failing_coordinate = prefix(j) + base_->label(m.failing_coordinate);
        for (int k = 0; k < dim; ++k)
          if (m.functional[k]) cert.functional.emplace_back(prefix(j) + base_->label(k), m.functional[k]);
        return cert;
      }
      bool replay = span_.combine(m.coefficients) == reduce(v);
      cert.replayed = (j == 0 ? true : cert.replayed) && replay;
      for (std::size_t g = 0; g < m.coefficients.size(); ++g)
        if (m.coefficients[g]) cert.terms.emplace_back(prefix(j) + label(g), m.coefficients[g]);
      cert.raw.push_back(std::move(m.coefficients));
    }
    return cert;
  }

private:
  std::vector<i64> reduce(std::vector<i64> v) const {
    const i64 mod = ipow(span_.prime(), N_);
    for (auto& c : v) c = mod_reduce(c, mod);
    return v;
  }

  IdealKind kind_;
  int N_;
  int copies_;
  std::shared_ptr<const LGroup> base_;
  std::vector<Generator> gens_;
  ZmodSpan span_;
};

/// A lattice with an action of A = <a> of order l, a given by an integer matrix
/// acting on column vectors.
struct AModule {
  IntMatrix action;
  i64 order = 0;

  std::size_t rank() const { return action.rows(); }

  IntMatrix norm() const {
    IntMatrix n(rank(), rank()), p = IntMatrix::identity(rank());
    for (i64 i = 0; i < order; ++i) {
      n = n + p;
      p = action * p;
    }
    return n;
  }
};

/// Permutation lattice Z[X] for a permutation of X of order dividing l.
inline AModule permutation_module(const std::vector<int>& perm, i64 l) {
  AModule m{IntMatrix(perm.size(), perm.size()), l};
  for (std::size_t i = 0; i < perm.size(); ++i) m.action(perm[i], i) = 1;
  return m;
}

inline AModule trivial_module(std::size_t rank, i64 l) { return AModule{IntMatrix::identity(rank), l}; }

/// Tate cohomology of A in degree 0 (ker(a-1) / im N) or -1 (ker N / im(a-1)).
inline AbelianInvariants tate_cohomology(const AModule& M, int degree) {
  IntMatrix p = IntMatrix::identity(M.rank());
  for (i64 i = 0; i < M.order; ++i) p = M.action * p;
  if (!(p == IntMatrix::identity(M.rank()))) raise(ErrorCode::OutOfModel, "action order does not divide l");
  IntMatrix diff = M.action - IntMatrix::identity(M.rank());
  IntMatrix norm = M.norm();
  if (degree == 0) return subquotient_invariants(diff, norm);
  if (degree == -1) return subquotient_invariants(norm, diff);
  raise(ErrorCode::OutOfModel, "Tate cohomology is implemented in degrees 0 and -1");
}

inline std::string to_string(const AbelianInvariants& inv) {
  if (inv.is_trivial()) return "0";
  std::string s;
  for (auto& t : inv.torsion) s += (s.empty() ? "" : " + ") + std::string("Z/") + t.str();
  if (inv.free_rank) s += (s.empty() ? "" : " + ") + std::string("Z^") + std::to_string(inv.free_rank);
  return s;
}

/// One verified step of a congruence check.
struct LabStep {
  std::string name;
  bool ok = false;
  std::string detail;
  bool has_certificate = false;
  SpanCertificate certificate;
  int precision = 0;
};

struct LabReport {
  std::string check;
  std::vector<LabStep> steps;
  bool indeterminate = false;
  std::string reason;

  bool ok() const {
    return !indeterminate && std::all_of(steps.begin(), steps.end(), [](const LabStep& s) { return s.ok; });
  }
  const LabStep* failing() const {
    for (auto& s : steps)
      if (!s.ok) return &s;
    return nullptr;
  }
  const LabStep& step(const std::string& name) const {
    for (auto& s : steps)
      if (s.name == name) return s;
    raise(ErrorCode::OutOfModel, "no step named " + name);
  }
};

namespace detail {

inline LabStep membership_step(const std::string& name, const IdealSpan& span, const GroupRingElement& x) {
  LabStep s{name};
  s.certificate = span.contains(x.prec() > span.prec() ? x.reduced(span.prec()) : x);
  s.has_certificate = true;
  s.precision = span.prec();
  s.ok = s.certificate.member && s.certificate.replayed;
  s.detail = s.certificate.member ? std::to_string(s.certificate.terms.size()) + " generator terms in " + to_string(span.kind())
                                  : "not in " + to_string(span.kind()) + ", fails at " + s.certificate.failing_coordinate;
  return s;
}

inline LabStep exact_step(const std::string& name, bool ok, std::string detail, int prec) {
  LabStep s{name};
  s.ok = ok;
  s.detail = std::move(detail);
  s.precision = prec;
  return s;
}

template <class F>
LabReport run_lab(const std::string& check, F&& body) {
  LabReport r{check};
  try {
    body(r);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PrecisionExhausted) throw;
    r.indeterminate = true;
    r.reason = e.what();
  }
  return r;
}

inline std::vector<Elem> commutator_elements(const LGroup& G) {
  auto comm = G.commutator_subgroup();
  std::vector<Elem> out;
  for (Elem c = 0; c < G.order(); ++c)
    if (comm[c]) out.push_back(c);
  return out;
}

} // namespace detail

/// Image of the commutator ideal under trace restriction, with the supporting
/// group identities:
///  span:        res_trace(tau(g(c-1))) spans tr_A(b'), both inclusions certified
///  case_split:  g in G' gives tr_A(g(c-1)), g outside G' gives 0
///  hat_trivial: c^A-hat = 1 for c in [G,G]
///  commutator:  [b g1, b^i g2] = (g1^-1 g1^(b^i)) ((g2^-1)^b g2) in [G,G'], and [G,G] = [G,G']
///  tate:        H^-1(A, Z[G'/[G,G]]) = 0
inline LabReport check_trace_ideal_image(const SubgroupMarking& mk, int N) {
  return detail::run_lab("trace_image", [&](LabReport& rep) {
    if (!mk.gprime_abelian || mk.index() != mk.prime()) raise(ErrorCode::OutOfModel, "needs an abelian G' of index l");
    const LGroup& G = mk.G();
    const LGroup& Gp = mk.Gp();
    ACoefficients act = a_coefficients(mk);
    auto cs = detail::commutator_elements(G);
    IdealSpan target(IdealKind::TraceBPrime, mk, N);

    // images of tau(g(c-1)) under trace restriction
    std::vector<std::vector<i64>> images;
    int split_bad = 0, split_total = 0;
    std::string split_first;
    for (Elem g = 0; g < G.order(); ++g)
      for (Elem c : cs) {
        if (c == 0) continue;
        TraceElement t = TraceElement::of_element(mk.group, N, G.mul(g, c)) - TraceElement::of_element(mk.group, N, g);
        GroupRingElement img = lift_to_ring(res_trace(t, mk));
        GroupRingElement expect(mk.Gp_ptr(), N);
        if (mk.contains(g)) {
          Elem h = mk.sub.from_parent[g], hc = mk.sub.from_parent[G.mul(g, c)];
          expect = act.tr_a(GroupRingElement::basis(mk.Gp_ptr(), N, hc) - GroupRingElement::basis(mk.Gp_ptr(), N, h));
        }
        ++split_total;
        if (!(img == expect)) {
          if (!split_bad) split_first = G.label(g) + ", " + G.label(c);
          ++split_bad;
        }
        images.push_back(img.coeffs());
      }
    rep.steps.push_back(detail::exact_step("case_split", split_bad == 0,
                                           split_bad ? std::to_string(split_bad) + " mismatches, first at g, c = " + split_first
                                                     : std::to_string(split_total) + " pairs match",
                                           N));

    ZmodSpan source(mk.prime(), N, Gp.order(), images);
    int fwd_bad = 0;
    for (auto& v : images)
      if (!target.contains(GroupRingElement::from_coeffs(mk.Gp_ptr(), N, v)).member) ++fwd_bad;
    int back_bad = 0;
    for (auto& v : target.span().generators()) {
      Membership m = source.contains(v);
      if (!m.member || source.combine(m.coefficients) != v) ++back_bad;
    }
    LabStep span_step = detail::exact_step(
        "span", fwd_bad == 0 && back_bad == 0,
        std::to_string(images.size()) + " images certified in tr_A(b'), " + std::to_string(target.generators().size()) +
            " generators of tr_A(b') certified in the image span; failures " + std::to_string(fwd_bad) + "/" + std::to_string(back_bad) +
            "; length " + std::to_string(source.length()) + " vs " + std::to_string(target.length()),
        N);
    rep.steps.push_back(span_step);

    // Z[G'/[G,G]] quotient, shared by the intersection and Tate steps
    std::vector<bool> comm_sub(Gp.order(), false);
    for (Elem c : cs) comm_sub[mk.sub.from_parent[c]] = true;
    QuotientGroup q = materialize_quotient(Gp, comm_sub, Gp.name() + "/[G,G]");

    // b'^A ∩ T' against tr_A(b'). T' is free on the A-orbits of G', so over the
    // integers the intersection is the kernel of coset augmentation in orbit
    // coordinates. At level N the same comparison is made with double annihilators.
    {
      std::vector<int> orbit(Gp.order(), -1);
      int orbits = 0;
      for (Elem h = 0; h < Gp.order(); ++h) {
        if (orbit[h] >= 0) continue;
        for (Elem x = h; orbit[x] < 0; x = act.a_perm[x]) orbit[x] = orbits;
        ++orbits;
      }
      IntMatrix K(q.group.order(), orbits);
      // an orbit lies in one coset of [G,G], and its trace has augmentation l there
      for (Elem h = 0; h < Gp.order(); ++h) K(q.projection[h], orbit[h]) = mk.prime();
      std::vector<std::pair<int, int>> cols;
      for (Elem h = 0; h < Gp.order(); ++h)
        for (Elem c : cs)
          if (c != 0 && orbit[Gp.mul(h, mk.sub.from_parent[c])] != orbit[h]) cols.emplace_back(orbit[Gp.mul(h, mk.sub.from_parent[c])], orbit[h]);
      IntMatrix B(orbits, cols.size());
      for (std::size_t j = 0; j < cols.size(); ++j) {
        B(cols[j].first, j) += 1;
        B(cols[j].second, j) -= 1;
      }
      AbelianInvariants quot = subquotient_invariants(K, B);

      IdealSpan bp(IdealKind::AugBPrime, mk, N), tp(IdealKind::TraceT, mk, N);
      auto ann = bp.span().annihilator();
      for (auto& w : tp.span().annihilator()) ann.push_back(std::move(w));
      ZmodSpan meet(mk.prime(), N, Gp.order(), ZmodSpan(mk.prime(), N, Gp.order(), std::move(ann)).annihilator());
      bool level_eq = meet.contains_all(target.span()) && target.span().contains_all(meet);
      rep.steps.push_back(detail::exact_step("fixed_intersection", quot.is_trivial(),
                                             "over the integers (b'^A meet T') / tr_A(b') = " + to_string(quot) + "; mod l^" + std::to_string(N) +
                                                 (level_eq ? " equal" : " differ") + ", lengths " + std::to_string(meet.length()) + " vs " +
                                                 std::to_string(target.length()),
                                             N));
    }

    int hat_bad = 0;
    for (Elem c : cs)
      if (mk.hat_a_power(c) != 0) ++hat_bad;
    rep.steps.push_back(detail::exact_step("hat_trivial", hat_bad == 0, std::to_string(cs.size()) + " commutator elements, " + std::to_string(hat_bad) + " with c^A-hat != 1", N));

    auto ggp = G.commutator_of(std::vector<bool>(G.order(), true), mk.gprime);
    bool same = ggp == G.commutator_subgroup();
    long cases = 0, bad = 0;
    std::string first;
    for (Elem b = 0; b < G.order(); ++b) {
      if (mk.contains(b)) continue;
      for (int i = 0; i < mk.prime(); ++i) {
        Elem bi = G.pow(b, i);
        for (Elem g1 : mk.gprime_elems)
          for (Elem g2 : mk.gprime_elems) {
            ++cases;
            Elem lhs = G.commutator(G.mul(b, g1), G.mul(bi, g2));
            Elem lit = G.mul(G.mul(G.inv(g1), G.conj(G.inv(g2), b)), G.mul(G.conj(g1, bi), g2));
            Elem rhs = G.mul(G.mul(G.inv(g1), G.conj(g1, bi)), G.mul(G.conj(G.inv(g2), b), g2));
            if (lhs != lit || lhs != rhs || !ggp[lhs]) {
              if (!bad) first = G.label(b) + ", " + std::to_string(i) + ", " + G.label(g1) + ", " + G.label(g2);
              ++bad;
            }
          }
      }
    }
    rep.steps.push_back(detail::exact_step("commutator", bad == 0 && same,
                                           std::to_string(cases) + " cases, " + std::to_string(bad) + " failures" + (bad ? " (first b, i, g1, g2 = " + first + ")" : "") +
                                               (same ? "; [G,G] = [G,G']" : "; [G,G] != [G,G']"),
                                           0));

    // Z[G'/[G,G]] with a acting by conjugation
    std::vector<int> perm(q.group.order());
    for (Elem x = 0; x < q.group.order(); ++x) perm[x] = q.projection[act.a_perm[q.section[x]]];
    AModule lattice = permutation_module(perm, mk.prime());
    AbelianInvariants h1 = tate_cohomology(lattice, -1);
    AbelianInvariants h0 = tate_cohomology(lattice, 0);
    rep.steps.push_back(detail::exact_step("tate", h1.is_trivial(),
                                           "rank " + std::to_string(lattice.rank()) + ": H^-1 = " + to_string(h1) + ", H^0 = " + to_string(h0), 0));
  });
}

/// Enumeration of the maps m: Z/l -> A behind the expansion of (tr_A g')^l.
struct OrbitDecomposition {
  int maps = 0;
  int free_orbits = 0;
  /// sizes of the non-free orbits, indexed by j with stabilizer <(1, a^j)>
  std::vector<int> cyclic_orbit_size;
  std::vector<int> cyclic_orbit_count;
  bool sizes_partition = false;
  bool no_pure_a_stabilizer = false;
  bool free_sums_match = false;
  bool j0_matches = false;
  bool jn_matches = false;
  GroupRingElement total;
  /// sum over all free orbits; each is l * tr_A(g'^(sum m))
  GroupRingElement free_total;
  std::vector<GroupRingElement> free_reps;  // g'^(sum m) per free orbit
};

/// Reassembles (tr_A g')^l orbit by orbit under (z, a^i): m(x) -> m(x - z) a^i.
/// g is an element of G' in the indexing of the materialized subgroup.
inline OrbitDecomposition orbit_expansion(Elem g, const SubgroupMarking& mk, int N) {
  ACoefficients act = a_coefficients(mk);
  const LGroup& Gp = mk.Gp();
  const int l = static_cast<int>(mk.prime());
  const int n = static_cast<int>(ipow(l, l));
  std::vector<Elem> conj(l);
  conj[0] = g;
  for (int i = 1; i < l; ++i) conj[i] = act.a_perm[conj[i - 1]];
  auto digits = [&](int code) {
    std::vector<int> d(l);
    for (int z = 0; z < l; ++z, code /= l) d[z] = code % l;
    return d;
  };
  auto encode = [&](const std::vector<int>& d) {
    int code = 0;
    for (int z = l - 1; z >= 0; --z) code = code * l + d[z];
    return code;
  };
  auto act_on = [&](const std::vector<int>& m, int z0, int i) {
    std::vector<int> out(l);
    for (int x = 0; x < l; ++x) out[x] = (m[((x - z0) % l + l) % l] + i) % l;
    return out;
  };
  auto element = [&](const std::vector<int>& m) {
    Elem e = 0;
    for (int z = 0; z < l; ++z) e = Gp.mul(e, conj[m[z]]);
    return e;
  };

  OrbitDecomposition d;
  d.maps = n;
  d.total = GroupRingElement(mk.Gp_ptr(), N);
  d.free_total = GroupRingElement(mk.Gp_ptr(), N);
  d.cyclic_orbit_size.assign(l, 0);
  d.cyclic_orbit_count.assign(l, 0);
  d.no_pure_a_stabilizer = true;
  d.free_sums_match = true;
  bool j0 = true, jn = true;
  GroupRingElement tr_gl = act.tr_a(GroupRingElement::basis(mk.Gp_ptr(), N, Gp.pow(g, l)));
  GroupRingElement l_hat = GroupRingElement::basis(mk.Gp_ptr(), N, mk.sub.from_parent[mk.hat_a_power(mk.sub.to_parent[g])], l);
  std::vector<bool> seen(n, false);
  long covered = 0;
  for (int code = 0; code < n; ++code) {
    if (seen[code]) continue;
    auto m = digits(code);
    std::vector<int> orbit;
    for (int z0 = 0; z0 < l; ++z0)
      for (int i = 0; i < l; ++i) {
        int c = encode(act_on(m, z0, i));
        if (!seen[c]) {
          seen[c] = true;
          orbit.push_back(c);
        }
        if (i != 0 && z0 == 0 && c == code) d.no_pure_a_stabilizer = false;
      }
    covered += static_cast<long>(orbit.size());
    GroupRingElement sum(mk.Gp_ptr(), N);
    for (int c : orbit) sum.add(element(digits(c)), 1);
    d.total = d.total + sum;
    if (static_cast<int>(orbit.size()) == l * l) {
      ++d.free_orbits;
      Elem rep = element(m);
      d.free_reps.push_back(GroupRingElement::basis(mk.Gp_ptr(), N, rep));
      GroupRingElement expect = act.tr_a(GroupRingElement::basis(mk.Gp_ptr(), N, rep)).scaled(l);
      d.free_total = d.free_total + sum;
      if (!(sum == expect)) d.free_sums_match = false;
    } else {
      // stabilizer <(1, a^j)>: m(x - 1) + j = m(x)
      int j = -1;
      for (int jj = 0; jj < l && j < 0; ++jj)
        if (encode(act_on(m, 1, jj)) == code) j = jj;
      if (j < 0) {
        d.no_pure_a_stabilizer = false;
        continue;
      }
      ++d.cyclic_orbit_count[j];
      d.cyclic_orbit_size[j] = static_cast<int>(orbit.size());
      if (j == 0) j0 = j0 && sum == tr_gl;
      else jn = jn && sum == l_hat;
    }
  }
  d.sizes_partition = covered == n;
  d.j0_matches = j0 && d.cyclic_orbit_count[0] == 1;
  d.jn_matches = jn;
  for (int j = 0; j < l; ++j)
    if (d.cyclic_orbit_count[j] != 1 || d.cyclic_orbit_size[j] != l) d.jn_matches = false;
  return d;
}

/// (tr_A g')^l - tr_A(g'^l) + l g'^A-hat in l T', with the orbit expansion as a
/// second route to (tr_A g')^l. g is an element of G' in the materialized indexing.
inline LabReport check_trace_power_congruence(Elem g, const SubgroupMarking& mk, int N, const IdealSpan* l_trace = nullptr) {
  return detail::run_lab("trace_power", [&](LabReport& rep) {
    if (N < 2) raise(ErrorCode::PrecisionExhausted, "trace power congruence needs precision >= 2");
    ACoefficients act = a_coefficients(mk);
    const LGroup& Gp = mk.Gp();
    const i64 l = mk.prime();
    auto e = [&](Elem h) { return GroupRingElement::basis(mk.Gp_ptr(), N, h); };
    GroupRingElement direct = act.tr_a(e(g)).pow(l);
    OrbitDecomposition od = orbit_expansion(g, mk, N);
    rep.steps.push_back(detail::exact_step("dual_route", od.total == direct,
                                           std::to_string(od.maps) + " maps, " + std::to_string(od.free_orbits) + " free orbits", N));
    rep.steps.push_back(detail::exact_step("orbit_structure",
                                           od.sizes_partition && od.no_pure_a_stabilizer && od.free_sums_match && od.j0_matches && od.jn_matches,
                                           "partition " + std::to_string(od.sizes_partition) + ", free sums " + std::to_string(od.free_sums_match) +
                                               ", j=0 orbit " + std::to_string(od.j0_matches) + ", j!=0 orbits " + std::to_string(od.jn_matches),
                                           N));
    Elem hat = mk.sub.from_parent[mk.hat_a_power(mk.sub.to_parent[g])];
    GroupRingElement diff = direct - act.tr_a(e(Gp.pow(g, l))) + e(hat).scaled(l);
    if (l_trace) rep.steps.push_back(detail::membership_step("congruence", *l_trace, diff));
    else rep.steps.push_back(detail::membership_step("congruence", IdealSpan(IdealKind::LTrace, mk, N), diff));
  });
}

/// beta' = sum_t beta_t g'_t (c_t - 1) with beta_t in R[Gbar] (central coefficients).
struct BetaTerm {
  Elem g = 0;  // in G' (materialized indexing)
  Elem c = 0;  // in [G,G], G' indexing
  std::vector<i64> beta;  // coefficient of gamma^j
};

struct BetaPrime {
  std::vector<BetaTerm> terms;
  int prec = 0;
};

inline std::string describe(const BetaPrime& b, const SubgroupMarking& mk) {
  if (b.terms.empty()) return "0";
  std::string s;
  const LGroup& Gp = mk.Gp();
  for (auto& t : b.terms) {
    std::string coeff;
    for (std::size_t j = 0; j < t.beta.size(); ++j)
      if (t.beta[j]) coeff += (coeff.empty() ? "" : "+") + std::to_string(t.beta[j]) + (j ? "*gamma^" + std::to_string(j) : "");
    s += (s.empty() ? "" : " + ") + std::string("(") + (coeff.empty() ? "0" : coeff) + ")*" + Gp.label(t.g) + "*(" + Gp.label(t.c) + "-1)";
  }
  return s;
}

/// Psi on R[Gbar]: gamma^j -> gamma^(lj).
inline std::vector<i64> psi_gamma(const std::vector<i64>& beta, i64 l, i64 mod) {
  std::vector<i64> out(beta.size(), 0);
  const auto n = static_cast<i64>(beta.size());
  for (i64 j = 0; j < n; ++j) out[(j * l) % n] = mod_reduce(out[(j * l) % n] + beta[j], mod);
  return out;
}

/// Random beta' with 1 to 3 terms (g', c) drawn from the pairs with
/// tr_A(g'(c-1)) != 0; each Gbar coefficient is nonzero with probability 1/2
/// and then uniform. Empty when tr_A(b') = 0.
inline BetaPrime random_beta(const IdealSpan& trace_bprime, int copies, int N, std::mt19937_64& rng) {
  BetaPrime b;
  b.prec = N;
  const auto& pairs = trace_bprime.generators();
  if (pairs.empty()) return b;
  const auto mod = static_cast<std::uint64_t>(ipow(trace_bprime.span().prime(), N));
  const int terms = 1 + static_cast<int>(rng() % 3);
  for (int t = 0; t < terms; ++t) {
    const auto& p = pairs[rng() % pairs.size()];
    BetaTerm x{p.h, p.c, std::vector<i64>(copies, 0)};
    for (auto& v : x.beta)
      if (rng() % 2) v = static_cast<i64>(rng() % mod);
    b.terms.push_back(std::move(x));
  }
  return b;
}

inline BetaPrime random_beta(const SubgroupMarking& mk, int N, std::mt19937_64& rng) {
  return random_beta(IdealSpan(IdealKind::TraceBPrime, mk, N), static_cast<int>(mk.gamma_order()), N, rng);
}

inline GroupRingElement beta_element(const BetaPrime& b, const ACoefficients& ext) {
  GroupRingElement out(ext.ring_group, b.prec);
  const LGroup& Gp = *ext.ring_group;
  for (auto& t : b.terms) {
    GroupRingElement x = GroupRingElement::basis(ext.ring_group, b.prec, Gp.mul(t.g, t.c)) - GroupRingElement::basis(ext.ring_group, b.prec, t.g);
    out = out + ext.tensor(t.beta, x);
  }
  return out;
}

/// (tr_A beta')^l = Psi(tr_A beta') mod l T', verified step by step over R[Gbar x G']:
///  psi_commutes:   Psi tr_A beta' = tr_A Psi beta'
///  multinomial:    X^l = sum beta^l (tr_A(g'(c-1)))^l
///  frobenius:      ... = sum Psi(beta) ((tr_A g'c)^l - (tr_A g')^l)
///  psi_expansion:  Psi(X) = sum Psi(beta) (tr_A((g'c)^l) - tr_A(g'^l)) exactly
///  trace_power:    difference = sum Psi(beta)(-l (g'c)^A-hat + l g'^A-hat) mod l T'
///  hat_vanishes:   that sum is 0 since c^A-hat = 1
///  final:          X^l - Psi(X) in l T'
/// The first three congruences are mod l T'.
inline LabReport check_power_congruence(const BetaPrime& b, const SubgroupMarking& mk, const ACoefficients& ext, const IdealSpan& l_trace) {
  return detail::run_lab("power_congruence", [&](LabReport& rep) {
    const int N = b.prec;
    const i64 l = mk.prime();
    const i64 mod = ipow(l, N);
    const LGroup& H = *ext.ring_group;
    auto e = [&](Elem h) { return GroupRingElement::basis(ext.ring_group, N, h); };
    auto embed = [&](const std::vector<i64>& beta) { return ext.tensor(beta, e(0)); };
    GroupRingElement bp = beta_element(b, ext);
    GroupRingElement X = ext.tr_a(bp);
    rep.steps.push_back(detail::exact_step("psi_commutes", X.psi() == ext.tr_a(bp.psi()), "", N));

    GroupRingElement Xl = X.pow(l);
    GroupRingElement multi(ext.ring_group, N), frob(ext.ring_group, N), psi_exp(ext.ring_group, N), hat_part(ext.ring_group, N),
        power_part(ext.ring_group, N);
    for (auto& t : b.terms) {
      GroupRingElement beta = embed(t.beta);
      std::vector<i64> psib = psi_gamma(t.beta, l, mod);
      GroupRingElement pbeta = embed(psib);
      Elem gc = H.mul(t.g, t.c);
      GroupRingElement A = ext.tr_a(e(gc)), B = ext.tr_a(e(t.g));
      multi = multi + beta.pow(l) * (A - B).pow(l);
      frob = frob + pbeta * (A.pow(l) - B.pow(l));
      GroupRingElement trl = ext.tr_a(e(H.pow(gc, l))) - ext.tr_a(e(H.pow(t.g, l)));
      psi_exp = psi_exp + pbeta * trl;
      power_part = power_part + pbeta * (A.pow(l) - B.pow(l) - trl);
      Elem hat_gc = mk.sub.from_parent[mk.hat_a_power(mk.sub.to_parent[gc])];
      Elem hat_g = mk.sub.from_parent[mk.hat_a_power(mk.sub.to_parent[t.g])];
      hat_part = hat_part + pbeta * (e(hat_g) - e(hat_gc)).scaled(l);
    }
    rep.steps.push_back(detail::membership_step("multinomial", l_trace, Xl - multi));
    rep.steps.push_back(detail::membership_step("frobenius", l_trace, multi - frob));
    GroupRingElement psiX = X.psi();
    rep.steps.push_back(detail::exact_step("psi_expansion", psiX == psi_exp, "", N));
    rep.steps.push_back(detail::membership_step("trace_power", l_trace, power_part - hat_part));
    rep.steps.push_back(detail::exact_step("hat_vanishes", hat_part.is_zero(), "", N));
    rep.steps.push_back(detail::membership_step("final", l_trace, Xl - psiX));
  });
}

/// Recovers beta' from a certificate of y' - 1 in tr_A(b') over R[Gbar x G'].
inline BetaPrime beta_from_certificate(const SpanCertificate& cert, const IdealSpan& tb, int N) {
  BetaPrime b;
  b.prec = N;
  const auto& gens = tb.generators();
  std::vector<int> slot(gens.size(), -1);
  for (std::size_t j = 0; j < cert.raw.size(); ++j)
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (!cert.raw[j][g]) continue;
      if (slot[g] < 0) {
        slot[g] = static_cast<int>(b.terms.size());
        b.terms.push_back(BetaTerm{gens[g].h, gens[g].c, std::vector<i64>(tb.copies(), 0)});
      }
      b.terms[slot[g]].beta[j] = cert.raw[j][g];
    }
  return b;
}

/// Spans over R[Gbar x G'] used by the log pipeline, built once per marking.
struct PipelineContext {
  const SubgroupMarking* mk = nullptr;
  ACoefficients ext;
  int N = 0;
  IdealSpan trace_bprime;
  IdealSpan l_trace;

  PipelineContext(const SubgroupMarking& m, int prec)
      : mk(&m),
        ext(gamma_extension(m)),
        N(prec),
        trace_bprime(IdealKind::TraceBPrime, m, prec, static_cast<int>(m.gamma_order())),
        l_trace(IdealKind::LTrace, m, prec, static_cast<int>(m.gamma_order())) {}
};

/// y' in 1 + tr_A(b') over R[Gbar x G']:
///  precondition:  y' - 1 in tr_A(b'), which yields beta'
///  power_congruence steps for beta' (prefixed)
///  hypothesis:    y'^l Psi(y')^-1 - 1 in l T'
///  log_in_T:      L'(y') in T' at its absolute precision (at least 3)
inline LabReport check_log_pipeline(const GroupRingElement& y, const PipelineContext& ctx) {
  return detail::run_lab("log_pipeline", [&](LabReport& rep) {
    const SubgroupMarking& mk = *ctx.mk;
    const int N = ctx.N;
    const i64 l = mk.prime();
    GroupRingElement one = GroupRingElement::one_like(y);
    LabStep pre = detail::membership_step("precondition", ctx.trace_bprime, y - one);
    const bool admitted = pre.ok;
    SpanCertificate cert = pre.certificate;
    rep.steps.push_back(std::move(pre));
    if (!admitted) return;

    BetaPrime b = beta_from_certificate(cert, ctx.trace_bprime, N);
    LabReport pc = check_power_congruence(b, mk, ctx.ext, ctx.l_trace);
    if (pc.indeterminate) raise(ErrorCode::PrecisionExhausted, pc.reason);
    for (auto& s : pc.steps) {
      s.name = "power_congruence/" + s.name;
      rep.steps.push_back(std::move(s));
    }
    GroupRingElement q = y.pow(l) * y.psi().inverse();
    rep.steps.push_back(detail::membership_step("hypothesis", ctx.l_trace, q - one));

    Fraction<GroupRingElement> lg = integral_log_unit(y);
    const int p = lg.abs_prec();
    if (p < 3) raise(ErrorCode::PrecisionExhausted, "L'(y') known only to l^" + std::to_string(p));
    if (!lg.is_integral()) {
      rep.steps.push_back(detail::exact_step("log_in_T", false, "L'(y') has denominator l^" + std::to_string(lg.den()), p));
      return;
    }
    IdealSpan T(IdealKind::TraceT, mk, p, static_cast<int>(mk.gamma_order()));
    rep.steps.push_back(detail::membership_step("log_in_T", T, lg.to_integral()));
  });
}

/// y' = 1 + tr_A(beta') followed by the pipeline.
inline GroupRingElement pipeline_unit(const BetaPrime& b, const ACoefficients& ext) {
  GroupRingElement x = ext.tr_a(beta_element(b, ext));
  return GroupRingElement::one_like(x) + x;
}

/// Transfer on group rings: the linear extension of G^ab -> G', g -> ver(g).
inline GroupRingElement ver(const GroupRingElement& x, const SubgroupMarking& mk, const Deflation& ab) {
  return x.pushed(mk.Gp_ptr(), [&](Elem q) { return mk.sub.from_parent[mk.transfer(ab.section[q])]; });
}

/// w = det_res(u) * ver(defl u)^-1 with w - 1 in T', and w - 1 in b' when
/// defl u is a single group element.
inline LabReport check_res_ver(const GroupRingElement& u, const SubgroupMarking& mk, const Deflation& ab, const IdealSpan& trace_T,
                               const IdealSpan* aug_bprime = nullptr) {
  return detail::run_lab("res_ver", [&](LabReport& rep) {
    if (!u.is_unit()) raise(ErrorCode::NotAUnit, "res/ver needs a unit");
    GroupRingElement d = det_res(u, mk);
    GroupRingElement du = deflate(u, ab);
    GroupRingElement w = d * ver(du, mk, ab).inverse();
    GroupRingElement w1 = w - GroupRingElement::one_like(w);
    rep.steps.push_back(detail::membership_step("mod_T", trace_T, w1));
    bool normalized = du.support_size() == 1 && du.augmentation() == 1;
    if (normalized) {
      if (aug_bprime) rep.steps.push_back(detail::membership_step("mod_b", *aug_bprime, w1));
      else rep.steps.push_back(detail::membership_step("mod_b", IdealSpan(IdealKind::AugBPrime, mk, u.prec()), w1));
    }
  });
}

} // namespace iwalab
