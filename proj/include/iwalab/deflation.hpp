#pragma once

#include <memory>
#include <string>
#include <vector>

#include "iwalab/hom.hpp"

namespace iwalab {

/// A quotient map G -> G/N kept as a shared group so that ring and trace
/// elements over the quotient can be formed.
struct Deflation {
  std::shared_ptr<const LGroup> source;
  std::shared_ptr<const LGroup> target;
  std::vector<Elem> projection;
  std::vector<Elem> section;
};

inline Deflation make_deflation(std::shared_ptr<const LGroup> G, const std::vector<bool>& normal, const std::string& name) {
  QuotientGroup q = materialize_quotient(*G, normal, name);
  Deflation d;
  d.source = std::move(G);
  d.target = std::make_shared<const LGroup>(std::move(q.group));
  d.projection = std::move(q.projection);
  d.section = std::move(q.section);
  return d;
}

/// G -> G^ab
inline Deflation abelianization(std::shared_ptr<const LGroup> G) {
  auto comm = G->commutator_subgroup();
  std::string name = G->name() + "^ab";
  return make_deflation(std::move(G), comm, name);
}

inline GroupRingElement deflate(const GroupRingElement& x, const Deflation& d) {
  return x.pushed(d.target, [&](Elem g) { return d.projection[g]; });
}

inline TraceElement deflate(const TraceElement& t, const Deflation& d) {
  TraceElement out(d.target, t.prec());
  const auto& cls = t.group().classes();
  for (int k = 0; k < cls.count(); ++k)
    if (t.coeff(k)) out.add_element(d.projection[cls.reps[k]], t.coeff(k));
  return out;
}

/// pi pushed to the quotient; pi must be trivial on the kernel.
inline std::vector<i64> deflate_pi(const std::vector<i64>& pi, const Deflation& d) {
  std::vector<i64> out(d.target->order());
  for (Elem g = 0; g < d.source->order(); ++g) {
    Elem q = d.projection[g];
    if (g == d.section[q]) out[q] = pi[g];
    else if (pi[g] != pi[d.section[q]]) raise(ErrorCode::OutOfModel, "pi does not factor through the quotient");
  }
  return out;
}

/// (defl f)(chi-bar) = f(inflation of chi-bar), over the table of the quotient.
inline HomElement deflate(const HomElement& f, const Deflation& d, std::shared_ptr<const CharacterTable> qtab) {
  HomElement out{qtab, deflate_pi(f.pi, d), f.spec, f.kind, {}};
  const CharacterTable& t = *f.table;
  for (int i = 0; i < qtab->count(); ++i) {
    ClassFn infl(d.source->order());
    for (Elem g = 0; g < d.source->order(); ++g) infl[g] = qtab->value(i, d.projection[g]);
    out.values.push_back(f.at(t.decompose(infl)));
  }
  return out;
}

} // namespace iwalab
