#include <gtest/gtest.h>

#include <random>

#include "iwalab/catalog.hpp"
#include "iwalab/deflation.hpp"
#include "iwalab/restriction.hpp"

using namespace iwalab;

namespace {

MarkedTables tables(const std::string& name, i64 l, int M = 2) {
  auto e = catalog_group(name, l, M);
  int m = M;
  while (ipow(l, m) < e.group->exponent()) ++m;
  return MarkedTables::build(e.marking, m);
}

Elem by_label(const LGroup& G, const std::string& s) {
  for (Elem g = 0; g < G.order(); ++g)
    if (G.label(g) == s) return g;
  ADD_FAILURE() << "no element " << s;
  return 0;
}

} // namespace

TEST(ResNatural, ConstantOne) {
  auto mt = tables("heisenberg", 3);
  auto f = constant_hom(mt.G, mt.mk.pi, spec_for(*mt.G, 3, 2), HomKind::Multiplicative);
  for (auto& v : res_natural(f, mt).values) EXPECT_TRUE(v.to_integral().is_one());
}

TEST(ResNatural, TrOfClassElement) {
  auto mt = tables("modular_l3", 3);
  const LGroup& G = mt.mk.G();
  auto spec = spec_for(*mt.G, 3, 2);
  for (Elem g = 0; g < G.order(); ++g) {
    auto f = res_natural(tr_hom(TraceElement::of_element(mt.mk.group, 3, g), mt.G, mt.mk.pi, 2), mt);
    for (int j = 0; j < mt.Gp->count(); ++j) {
      GammaElt expect(spec);
      if (mt.mk.contains(g))
        for (Elem x : mt.mk.a_orbit_terms(g))
          expect += char_gamma(mt.Gp->value(j, mt.mk.sub.from_parent[x]), mt.mk.pi[g], spec);
      EXPECT_EQ(f.values[j].to_integral(), expect);
    }
  }
}

TEST(ResTrace, ClosedFormExamples) {
  auto e = catalog_group("heisenberg", 3);
  const LGroup& G = *e.group;
  const auto& mk = e.marking;
  Elem z = by_label(G, "z"), y = by_label(G, "y"), x = by_label(G, "x");
  auto rz = res_trace(TraceElement::of_element(e.group, 3, z), mk);
  EXPECT_EQ(rz, TraceElement::of_element(mk.Gp_ptr(), 3, mk.sub.from_parent[z], 3));
  auto rx = res_trace(TraceElement::of_element(e.group, 3, x), mk);
  EXPECT_EQ(rx, TraceElement::of_element(mk.Gp_ptr(), 3, mk.sub.from_parent[G.pow(x, 3)]));
  auto ry = res_trace(TraceElement::of_element(e.group, 3, y), mk);
  TraceElement expect(mk.Gp_ptr(), 3);
  for (auto lab : {"y", "y z", "y z^2"}) expect.add_element(mk.sub.from_parent[by_label(G, lab)], 1);
  EXPECT_EQ(ry, expect);
}

TEST(ResHom, TruncationRecordForIndexL) {
  auto mt = tables("heisenberg", 3);
  TruncationRecord rec;
  res_hom(tr_hom(TraceElement::of_element(mt.mk.group, 4, 1), mt.G, mt.mk.pi, 2), mt, &rec);
  EXPECT_EQ(rec.r0, 1);
  EXPECT_EQ(rec.stated_last_r, -1);
  bool some_term = false;
  for (std::size_t j = 0; j < rec.terms.size(); ++j) {
    EXPECT_LE(rec.terms[j], 1);
    some_term = some_term || rec.terms[j] == 1;
  }
  EXPECT_TRUE(some_term);
}

TEST(ResHom, TruncationMatchesFirstVanishing) {
  for (auto& [name, l] : std::vector<std::pair<std::string, i64>>{{"modular_l3", 3}, {"abelian(9,3)", 3}, {"wreath", 3}}) {
    auto mt = tables(name, l);
    TruncationRecord rec;
    res_hom(tr_hom(TraceElement::of_element(mt.mk.group, 5, 0), mt.G, mt.mk.pi, 2), mt, &rec);
    int logexp = 0;
    for (i64 e = mt.mk.G().exponent(); e > 1; e /= l) ++logexp;
    for (std::size_t j = 0; j < rec.terms.size(); ++j) {
      EXPECT_EQ(rec.first_vanishing[j], rec.terms[j] + 1);
      EXPECT_LE(rec.terms[j], logexp) << name;
    }
  }
}

TEST(ResHom, ExponentLDefectIsRegularDifference) {
  // exponent l: psi_l ind chi' = l chi'(1) 1_G and ind psi_l chi' = chi'(1) ind 1_G'
  auto mt = tables("elem_abelian(2)", 3);
  int triv_p = -1;
  for (int j = 0; j < mt.Gp->count(); ++j)
    if (mt.Gp->values(j) == ClassFn(mt.Gp->group().order(), CycloInt::integer(3, mt.Gp->level(), 1))) triv_p = j;
  ASSERT_GE(triv_p, 0);
  for (int j = 0; j < mt.Gp->count(); ++j)
    for (int i = 0; i < mt.G->count(); ++i) EXPECT_EQ(mt.defect[j][i], (i == 0 ? 3 : 0) - mt.ind[triv_p][i]);
}

TEST(ResHom, OutputSatisfiesAxioms) {
  auto mt = tables("modular_l3", 3);
  std::mt19937_64 rng(6);
  auto f = big_l(det_hom(random_unit(mt.mk.group, 5, rng), mt.G, mt.mk.pi, 2));
  auto r = res_hom(f, mt);
  EXPECT_TRUE(hom_axioms(r).ok());
}

TEST(TraceRestriction, DualRouteOnEveryClass) {
  for (auto& [name, l] : std::vector<std::pair<std::string, i64>>{{"heisenberg", 3}, {"modular_l3", 3}, {"wreath", 3}, {"abelian(9,3)", 3}}) {
    auto mt = tables(name, l);
    auto pi_sub = pi_on_gprime(mt.mk);
    const auto& cls = mt.mk.G().classes();
    for (int k = 0; k < cls.count(); ++k) {
      auto t = TraceElement::of_element(mt.mk.group, 4, cls.reps[k]);
      auto lhs = tr_hom(res_trace(t, mt.mk), mt.Gp, pi_sub, 2);
      auto rhs = res_hom(tr_hom(t, mt.G, mt.mk.pi, 2), mt);
      int p = std::min(lhs.abs_prec(), rhs.abs_prec());
      EXPECT_GE(p, 3);
      EXPECT_TRUE(hom_equal_at(lhs, rhs, p)) << name << " class " << k;
    }
  }
}

TEST(RestrictScalars, OneAndFrobeniusCompatibility) {
  for (auto& [name, l] : std::vector<std::pair<std::string, i64>>{{"heisenberg", 3}, {"modular_l3", 3}, {"wreath", 3}}) {
    auto mt = tables(name, l);
    auto one = restrict_scalars(GroupRingElement::basis(mt.mk.group, 3, 0), mt, 2);
    for (auto& v : one.values) EXPECT_TRUE(v.to_integral().is_one());
    std::mt19937_64 rng(8);
    for (int t = 0; t < 3; ++t) {
      auto u = random_unit(mt.mk.group, 4, rng);
      auto lhs = restrict_scalars(u, mt, 2);
      auto rhs = res_natural(det_hom(u, mt.G, mt.mk.pi, 2), mt);
      for (int j = 0; j < lhs.count(); ++j) EXPECT_EQ(lhs.values[j].to_integral(), rhs.values[j].to_integral()) << name;
    }
  }
}

TEST(RestrictScalars, GroupLikesAndTransversal) {
  auto mt = tables("heisenberg", 3);
  for (Elem g : {mt.mk.a, mt.mk.gprime_elems[4]}) {
    auto u = GroupRingElement::basis(mt.mk.group, 3, g);
    auto mat = res_matrix(u, mt.mk);
    // monomial: one nonzero group-like entry per row
    for (auto& row : mat) {
      int nz = 0;
      for (auto& x : row) nz += x.is_zero() ? 0 : 1;
      EXPECT_EQ(nz, 1);
    }
    auto lhs = restrict_scalars(u, mt, 2);
    auto rhs = res_natural(det_hom(u, mt.G, mt.mk.pi, 2), mt);
    for (int j = 0; j < lhs.count(); ++j) EXPECT_EQ(lhs.values[j].to_integral(), rhs.values[j].to_integral());
  }
  // a^l lies in G': a acts by the companion pattern a^i -> a^(i+1)
  auto mat = res_matrix(GroupRingElement::basis(mt.mk.group, 3, mt.mk.a), mt.mk);
  for (int i = 0; i < 3; ++i) EXPECT_FALSE(mat[i][(i + 1) % 3].is_zero());
}

TEST(RestrictScalars, DetResEvaluatesToRestriction) {
  auto mt = tables("heisenberg", 3);
  std::mt19937_64 rng(9);
  auto u = random_unit(mt.mk.group, 4, rng);
  auto y = det_res(u, mt.mk);
  auto f = restrict_scalars(u, mt, 2);
  auto g = det_hom(y, mt.Gp, pi_on_gprime(mt.mk), 2);
  for (int j = 0; j < f.count(); ++j) EXPECT_EQ(f.values[j].to_integral(), g.values[j].to_integral());
}

TEST(RestrictScalars, Multiplicative) {
  auto mt = tables("modular_l3", 3);
  std::mt19937_64 rng(10);
  auto u = random_unit(mt.mk.group, 4, rng), v = random_unit(mt.mk.group, 4, rng);
  EXPECT_EQ(det_res(u * v, mt.mk), det_res(u, mt.mk) * det_res(v, mt.mk));
}

TEST(HdSquare, OneGivesZeroOnBothPaths) {
  auto mt = tables("heisenberg", 3);
  auto rep = check_hd_square(GroupRingElement::basis(mt.mk.group, 6, 0), mt, 2);
  EXPECT_TRUE(rep.ok());
}

TEST(HdSquare, GroupLikes) {
  auto mt = tables("modular_l3", 3);
  for (Elem g = 0; g < mt.mk.G().order(); g += 4) {
    auto rep = check_hd_square(GroupRingElement::basis(mt.mk.group, 6, g), mt, 2);
    EXPECT_TRUE(rep.ok()) << g;
  }
}

TEST(HdSquare, RandomUnitsCommute) {
  for (auto& [name, l] : std::vector<std::pair<std::string, i64>>{{"heisenberg", 3}, {"modular_l3", 3}, {"wreath", 3}}) {
    auto mt = tables(name, l);
    std::mt19937_64 rng(12);
    for (int t = 0; t < 5; ++t) {
      auto rep = check_hd_square(random_unit(mt.mk.group, 6, rng), mt, 2);
      for (auto& p : rep.paths) {
        EXPECT_TRUE(p.equal) << name << " " << p.name << " " << p.error;
        EXPECT_GE(p.precision, 4) << name << " " << p.name;
      }
    }
  }
}

TEST(Deflation, CommutesWithTrAndL) {
  auto e = catalog_group("heisenberg", 3);
  auto mt = MarkedTables::build(e.marking, 2);
  auto d = abelianization(e.group);
  auto qtab = CharacterTable::build(d.target, 2);
  auto qpi = deflate_pi(e.marking.pi, d);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 5; ++t) {
    auto x = tau(random_element(e.group, 4, rng));
    auto lhs = deflate(tr_hom(x, mt.G, e.marking.pi, 2), d, qtab);
    auto rhs = tr_hom(deflate(x, d), qtab, qpi, 2);
    EXPECT_TRUE(hom_equal_at(lhs, rhs, 4));
    auto u = random_unit(e.group, 5, rng);
    auto l1 = deflate(big_l(det_hom(u, mt.G, e.marking.pi, 2)), d, qtab);
    auto l2 = big_l(det_hom(deflate(u, d), qtab, qpi, 2));
    EXPECT_TRUE(hom_equal_at(l1, l2, std::min(l1.abs_prec(), l2.abs_prec())));
  }
}

TEST(Deflation, TauOfElement) {
  auto e = catalog_group("modular_l3", 3);
  auto d = abelianization(e.group);
  for (Elem g = 0; g < e.group->order(); ++g)
    EXPECT_EQ(deflate(TraceElement::of_element(e.group, 2, g), d), TraceElement::of_element(d.target, 2, d.projection[g]));
}

TEST(Deflation, IdentityQuotientOfAbelianGroup) {
  auto e = catalog_group("abelian(9,3)", 3);
  std::vector<bool> trivial(e.group->order(), false);
  trivial[0] = true;
  auto d = make_deflation(e.group, trivial, "same");
  std::mt19937_64 rng(14);
  auto x = random_element(e.group, 3, rng);
  EXPECT_EQ(deflate(x, d).coeffs(), x.coeffs());
}
