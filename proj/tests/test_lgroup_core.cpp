#include <gtest/gtest.h>

#include "iwalab/catalog.hpp"

using namespace iwalab;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ConfigError;
}

Elem by_label(const LGroup& G, const std::string& s) {
  for (Elem g = 0; g < G.order(); ++g)
    if (G.label(g) == s) return g;
  ADD_FAILURE() << "no element " << s;
  return 0;
}

std::vector<CatalogEntry> small_catalog() {
  return {catalog_group("heisenberg", 3), catalog_group("modular_l3", 3), catalog_group("abelian(9)", 3),
          catalog_group("elem_abelian(2)", 3), catalog_group("wreath", 3), catalog_group("heisenberg", 5)};
}

} // namespace

TEST(BuildGroup, SingleGeneratorIsCyclic) {
  LGroup G = build_group("gen a order 3\n", 3);
  EXPECT_EQ(G.order(), 3);
  EXPECT_TRUE(G.is_abelian());
  EXPECT_EQ(G.exponent(), 3);
}

TEST(BuildGroup, HeisenbergPresentation) {
  LGroup G = build_group("gen x order 3\ngen y order 3\ngen z order 3\nrel [x,y] = z\ncentral z\n", 3);
  EXPECT_EQ(G.order(), 27);
  EXPECT_FALSE(G.is_abelian());
  EXPECT_TRUE(G.check_associative());
  EXPECT_EQ(G.exponent(), 3);
}

TEST(BuildGroup, CollapsingRelationIsRejected) {
  EXPECT_EQ(code_of([] { build_group("gen x order 3\ngen y order 3\nrel [x,y] = x\n", 3); }),
            ErrorCode::InconsistentPresentation);
}

TEST(BuildGroup, NonLPowerOrderIsRejected) {
  EXPECT_EQ(code_of([] { build_group("gen x order 6\n", 3); }), ErrorCode::InconsistentPresentation);
}

TEST(BuildGroup, SizeCap) {
  EXPECT_EQ(code_of([] { build_group("gen a order 3\ngen b order 3\n rel [a,b] = 1\n", 3, "", 3); }), ErrorCode::SizeCap);
  EXPECT_EQ(code_of([] { catalog_group("wreath", 5); }), ErrorCode::SizeCap);
}

TEST(BuildGroup, ParseErrors) {
  EXPECT_EQ(code_of([] { parse_presentation("gen x\n", 3); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_presentation("gen x order 3\nrel x = w\n", 3); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { parse_presentation("frobnicate\n", 3); }), ErrorCode::ParseError);
}

TEST(BuildGroup, WordSyntax) {
  LGroup G = build_group("gen x order 9\ngen y order 3\nrel x^y = x^4\n", 3);
  Elem x = by_label(G, "x"), y = by_label(G, "y");
  EXPECT_EQ(G.conj(x, y), G.pow(x, 4));
  EXPECT_EQ(G.order(), 27);
}

TEST(Catalog, HeisenbergThree) {
  auto e = catalog_group("heisenberg", 3);
  const LGroup& G = *e.group;
  EXPECT_EQ(G.order(), 27);
  EXPECT_EQ(G.exponent(), 3);
  EXPECT_EQ(G.classes().count(), 11);
  EXPECT_EQ(e.marking.Gp().order(), 9);
  EXPECT_TRUE(e.marking.Gp().is_abelian());
  EXPECT_EQ(e.marking.Gp().exponent(), 3);
  EXPECT_TRUE(e.marking.contains(by_label(G, "y")));
  EXPECT_TRUE(e.marking.contains(by_label(G, "z")));
  EXPECT_EQ(e.marking.a, by_label(G, "x"));
}

TEST(Catalog, ModularThreeHasCyclicGprime) {
  auto e = catalog_group("modular_l3", 3);
  EXPECT_EQ(e.group->order(), 27);
  EXPECT_EQ(e.group->exponent(), 9);
  EXPECT_EQ(e.marking.Gp().order(), 9);
  EXPECT_EQ(e.marking.Gp().exponent(), 9);
}

TEST(Catalog, HeisenbergFive) {
  auto e = catalog_group("heisenberg", 5);
  EXPECT_EQ(e.group->order(), 125);
  EXPECT_EQ(e.group->classes().count(), 25 + 4);
}

TEST(Catalog, AbelianNine) {
  auto e = catalog_group("abelian(9)", 3);
  EXPECT_EQ(e.marking.Gp().order(), 3);
  // A acts trivially
  for (Elem g : e.marking.gprime_elems) EXPECT_EQ(e.group->conj(g, e.marking.a), g);
}

TEST(Catalog, UnknownName) {
  EXPECT_EQ(code_of([] { catalog_group("dihedral", 3); }), ErrorCode::UnknownName);
  EXPECT_EQ(code_of([] { catalog_group("abelian(x)", 3); }), ErrorCode::UnknownName);
}

TEST(FindAbelianIndexL, Counts) {
  EXPECT_EQ(find_abelian_index_l(catalog_group("heisenberg", 3).group).size(), 4u);
  EXPECT_EQ(find_abelian_index_l(catalog_group("abelian(9)", 3).group).size(), 1u);
  EXPECT_EQ(find_abelian_index_l(catalog_group("elem_abelian(2)", 3).group).size(), 4u);
  for (auto& mk : find_abelian_index_l(catalog_group("heisenberg", 3).group)) {
    EXPECT_EQ(mk.Gp().order(), 9);
    EXPECT_EQ(mk.Gp().exponent(), 3);
  }
  // wreath: the base group is the only abelian maximal subgroup
  EXPECT_EQ(find_abelian_index_l(catalog_group("wreath", 3).group).size(), 1u);
}

TEST(Marking, MIndex) {
  auto e = catalog_group("heisenberg", 3);
  const auto& mk = e.marking;
  EXPECT_EQ(mk.m_index(by_label(*e.group, "y z")), 0);
  EXPECT_EQ(mk.m_index(by_label(*e.group, "x")), 1);
  for (auto& c : small_catalog())
    for (auto& m : find_abelian_index_l(c.group))
      for (Elem g = 0; g < c.group->order(); ++g) {
        EXPECT_LE(m.m_index(g), 1);
        for (Elem h : m.gprime_elems) EXPECT_EQ(m.m_index(c.group->mul(g, h)), m.m_index(g));
      }
}

TEST(Marking, HatAPower) {
  auto e = catalog_group("heisenberg", 3);
  const LGroup& G = *e.group;
  EXPECT_EQ(e.marking.hat_a_power(by_label(G, "y")), 0);
  Elem z = by_label(G, "z");
  EXPECT_EQ(e.marking.hat_a_power(z), G.pow(z, 3));
  EXPECT_EQ(code_of([&] { e.marking.hat_a_power(by_label(G, "x")); }), ErrorCode::NotInSubgroup);
}

TEST(Marking, CommutatorsHaveTrivialHatAPower) {
  for (auto& c : small_catalog()) {
    auto comm = c.group->commutator_subgroup();
    for (auto& m : find_abelian_index_l(c.group))
      for (Elem g = 0; g < c.group->order(); ++g)
        if (comm[g]) EXPECT_EQ(m.hat_a_power(g), 0) << c.group->name();
  }
}

TEST(Marking, CentralHatAPowerIsLthPower) {
  for (auto& c : small_catalog()) {
    auto Z = c.group->center();
    for (auto& m : find_abelian_index_l(c.group))
      for (Elem g : m.gprime_elems)
        if (Z[g]) EXPECT_EQ(m.hat_a_power(g), c.group->pow(g, c.group->prime()));
  }
}

TEST(Marking, TransferIsHomomorphism) {
  for (auto& c : small_catalog()) {
    const LGroup& G = *c.group;
    if (G.order() > 243) continue;
    for (auto& m : find_abelian_index_l(c.group))
      for (Elem g1 = 0; g1 < G.order(); ++g1)
        for (Elem g2 = 0; g2 < G.order(); ++g2)
          ASSERT_EQ(m.transfer(G.mul(g1, g2)), G.mul(m.transfer(g1), m.transfer(g2)));
  }
}

TEST(Marking, TransferValues) {
  for (auto& c : small_catalog()) {
    const LGroup& G = *c.group;
    auto comm = G.commutator_subgroup();
    auto Z = G.center();
    for (auto& m : find_abelian_index_l(c.group))
      for (Elem g = 0; g < G.order(); ++g) {
        Elem gl = G.pow(g, G.prime());
        if (m.contains(g) && Z[g]) EXPECT_EQ(m.transfer(g), gl);
        if (m.contains(g)) EXPECT_EQ(m.transfer(g), m.hat_a_power(g));
        // ver(g) = g^l c with c in [G, G]
        EXPECT_TRUE(comm[G.mul(G.inv(gl), m.transfer(g))]);
      }
  }
  auto e = catalog_group("heisenberg", 3);
  EXPECT_EQ(e.marking.transfer(by_label(*e.group, "y")), 0);
}

TEST(Marking, CommutatorIdentity) {
  // [b g1, b^i g2] in [G, G'] for g1, g2 in G', b outside G'
  for (auto& c : small_catalog()) {
    const LGroup& G = *c.group;
    if (G.order() > 125) continue;
    for (auto& m : find_abelian_index_l(c.group)) {
      auto GGp = G.commutator_of(std::vector<bool>(G.order(), true), m.gprime);
      for (Elem b = 0; b < G.order(); ++b) {
        if (m.contains(b)) continue;
        for (int i = 0; i < G.prime(); ++i)
          for (Elem g1 : m.gprime_elems)
            for (Elem g2 : m.gprime_elems)
              ASSERT_TRUE(GGp[G.commutator(G.mul(b, g1), G.mul(G.pow(b, i), g2))]);
      }
    }
  }
}

TEST(Groups, ClassSizesPartitionAndDivide) {
  for (auto& c : small_catalog()) {
    const auto& cls = c.group->classes();
    int total = 0;
    for (int k = 0; k < cls.count(); ++k) {
      total += cls.size(k);
      EXPECT_EQ(c.group->order() % cls.size(k), 0);
      EXPECT_GE(log_exact(cls.size(k), c.group->prime()), 0);
      for (Elem g : cls.classes[k])
        for (Elem h = 0; h < c.group->order(); ++h) EXPECT_EQ(cls.class_of[c.group->conj(g, h)], k);
    }
    EXPECT_EQ(total, c.group->order());
  }
}

TEST(Groups, HeisenbergYClass) {
  auto e = catalog_group("heisenberg", 3);
  const LGroup& G = *e.group;
  const auto& cls = G.classes();
  int k = cls.class_of[by_label(G, "y")];
  EXPECT_EQ(cls.class_of[by_label(G, "y z")], k);
  EXPECT_EQ(cls.class_of[by_label(G, "y z^2")], k);
  EXPECT_EQ(cls.size(k), 3);
}

TEST(Groups, QuotientAndProduct) {
  auto e = catalog_group("heisenberg", 3);
  auto q = materialize_quotient(*e.group, e.group->commutator_subgroup(), "ab");
  EXPECT_EQ(q.group.order(), 9);
  EXPECT_TRUE(q.group.is_abelian());
  for (Elem a = 0; a < 27; ++a)
    for (Elem b = 0; b < 27; ++b) EXPECT_EQ(q.projection[e.group->mul(a, b)], q.group.mul(q.projection[a], q.projection[b]));
  LGroup P = direct_product(*e.group, build_group("gen w order 3\n", 3), "hx3");
  EXPECT_EQ(P.order(), 81);
  EXPECT_FALSE(P.is_abelian());
}

TEST(Groups, PiIsHomomorphism) {
  for (auto& c : small_catalog())
    for (auto& m : find_abelian_index_l(c.group)) {
      const LGroup& G = *c.group;
      for (Elem a = 0; a < G.order(); ++a)
        for (Elem b : G.generators()) EXPECT_EQ(m.pi[G.mul(a, b)], mod_reduce(m.pi[a] + m.pi[b], m.gamma_order()));
      EXPECT_TRUE(m.pi_gprime_index == 1 || m.pi_gprime_index == G.prime());
    }
}

TEST(AbelianDual, CountsAndHomomorphism) {
  auto e = catalog_group("abelian(9,3)", 3);
  auto d = abelian_dual(*e.group);
  EXPECT_EQ(d.values.size(), 27u);
  EXPECT_EQ(d.exponent, 9);
  for (auto& lam : d.values)
    for (Elem a = 0; a < 27; ++a)
      for (Elem b = 0; b < 27; ++b) EXPECT_EQ(lam[e.group->mul(a, b)], mod_reduce(lam[a] + lam[b], 9));
}
