#include <gtest/gtest.h>

#include <random>

#include "iwalab/catalog.hpp"
#include "iwalab/congruence.hpp"

using namespace iwalab;

namespace {

Elem by_label(const LGroup& G, const std::string& s) {
  for (Elem g = 0; g < G.order(); ++g)
    if (G.label(g) == s) return g;
  ADD_FAILURE() << "no element " << s;
  return 0;
}

std::vector<std::pair<std::string, i64>> catalog_l3() {
  return {{"heisenberg", 3}, {"modular_l3", 3}, {"abelian(9)", 3}, {"abelian(9,3)", 3}, {"elem_abelian(2)", 3}, {"wreath", 3}};
}

GroupRingElement elt(const SubgroupMarking& mk, int N, const std::string& label, i64 c = 1) {
  return GroupRingElement::basis(mk.Gp_ptr(), N, mk.sub.from_parent[by_label(mk.G(), label)], c);
}

} // namespace

TEST(IdealSpan, AbelianCommutatorIdealIsZero) {
  auto e = catalog_group("abelian(9,3)", 3);
  IdealSpan a(IdealKind::AugA, e.marking, 4);
  EXPECT_TRUE(a.generators().empty());
  EXPECT_EQ(a.length(), 0);
  EXPECT_TRUE(a.contains(GroupRingElement(e.group, 4)).member);
}

TEST(IdealSpan, HeisenbergTraceGenerators) {
  auto e = catalog_group("heisenberg", 3);
  const auto& mk = e.marking;
  IdealSpan T(IdealKind::TraceT, mk, 4);
  auto one = elt(mk, 4, "1", 3);
  EXPECT_TRUE(T.contains(one).member);
  auto y = elt(mk, 4, "y") + elt(mk, 4, "y z") + elt(mk, 4, "y z^2");
  auto c = T.contains(y);
  EXPECT_TRUE(c.member);
  EXPECT_TRUE(c.replayed);
  // y alone is not A-stable
  auto bad = T.contains(elt(mk, 4, "y"));
  EXPECT_FALSE(bad.member);
  EXPECT_FALSE(bad.functional.empty());
  EXPECT_FALSE(bad.failing_coordinate.empty());
}

TEST(IdealSpan, BPrimeInsideA) {
  for (auto& [name, l] : catalog_l3()) {
    auto e = catalog_group(name, l);
    IdealSpan a(IdealKind::AugA, e.marking, 3), b(IdealKind::AugBPrime, e.marking, 3);
    for (std::size_t g = 0; g < b.generators().size(); ++g) {
      // push the G' generator into R[G]
      GroupRingElement x(e.group, 3);
      const auto& v = b.span().generators()[g];
      for (Elem h = 0; h < e.marking.Gp().order(); ++h) x.add(e.marking.sub.to_parent[h], v[h]);
      EXPECT_TRUE(a.contains(x).member) << name;
    }
  }
}

TEST(IdealSpan, MembershipExamples) {
  auto e = catalog_group("heisenberg", 3);
  const auto& mk = e.marking;
  IdealSpan lT(IdealKind::LTrace, mk, 4);
  EXPECT_TRUE(lT.contains(GroupRingElement(mk.Gp_ptr(), 4)).member);
  auto y = elt(mk, 4, "y") + elt(mk, 4, "y z") + elt(mk, 4, "y z^2");
  EXPECT_TRUE(lT.contains(y.scaled(3)).member);
  auto x = (elt(mk, 4, "1") + elt(mk, 4, "z") + elt(mk, 4, "z^2")).scaled(9);
  auto c = lT.contains(x);
  EXPECT_TRUE(c.member);
  EXPECT_TRUE(c.replayed);
  EXPECT_FALSE(lT.contains(y).member);
}

TEST(IdealSpan, LowPrecisionInputIsIndeterminate) {
  auto e = catalog_group("heisenberg", 3);
  IdealSpan T(IdealKind::TraceT, e.marking, 4);
  try {
    T.contains(GroupRingElement(e.marking.Gp_ptr(), 3));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::PrecisionExhausted);
  }
}

TEST(TateCohomology, TrivialActionOnFreeLattice) {
  for (std::size_t r : {1u, 3u}) {
    AModule m = trivial_module(r, 3);
    EXPECT_TRUE(tate_cohomology(m, -1).is_trivial());
    auto h0 = tate_cohomology(m, 0);
    ASSERT_EQ(h0.torsion.size(), r);
    for (auto& t : h0.torsion) EXPECT_EQ(t, 3);
  }
}

TEST(TateCohomology, RegularLatticeIsAcyclic) {
  for (i64 l : {3, 5}) {
    std::vector<int> perm;
    for (int i = 0; i < l; ++i) perm.push_back((i + 1) % l);
    AModule m = permutation_module(perm, l);
    EXPECT_TRUE(tate_cohomology(m, 0).is_trivial());
    EXPECT_TRUE(tate_cohomology(m, -1).is_trivial());
  }
}

TEST(TateCohomology, RejectsWrongOrder) {
  AModule m = permutation_module({1, 0}, 3);
  EXPECT_THROW(tate_cohomology(m, 0), Error);
}

TEST(TraceIdealImage, CatalogMarkings) {
  std::vector<std::pair<std::string, i64>> groups = catalog_l3();
  groups.emplace_back("heisenberg", 5);
  for (auto& [name, l] : groups) {
    auto e = catalog_group(name, l);
    auto r = check_trace_ideal_image(e.marking, 4);
    EXPECT_TRUE(r.ok()) << name << ": " << (r.failing() ? r.failing()->name + " " + r.failing()->detail : r.reason);
    EXPECT_EQ(r.steps.size(), 6u);
  }
}

TEST(TraceIdealImage, FixedIntersectionExactOnlyOverLattices) {
  // heisenberg(3): l^(N-1) times the two non-central coset sums lie in b' and T' mod l^N
  auto e = catalog_group("heisenberg", 3);
  auto r = check_trace_ideal_image(e.marking, 4);
  const LabStep& s = r.step("fixed_intersection");
  EXPECT_TRUE(s.ok);
  EXPECT_NE(s.detail.find("= 0;"), std::string::npos);
  EXPECT_NE(s.detail.find("differ, lengths 8 vs 6"), std::string::npos) << s.detail;
}

TEST(TraceIdealImage, AbelianIsZero) {
  auto e = catalog_group("abelian(9)", 3);
  auto r = check_trace_ideal_image(e.marking, 4);
  EXPECT_TRUE(r.ok());
  EXPECT_NE(r.step("span").detail.find("length 0 vs 0"), std::string::npos);
}

TEST(OrbitExpansion, StructureForL3) {
  auto e = catalog_group("heisenberg", 3);
  const auto& mk = e.marking;
  auto d = orbit_expansion(mk.sub.from_parent[by_label(mk.G(), "y")], mk, 4);
  EXPECT_EQ(d.maps, 27);
  EXPECT_EQ(d.free_orbits, 2);
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(d.cyclic_orbit_count[j], 1);
    EXPECT_EQ(d.cyclic_orbit_size[j], 3);
  }
  EXPECT_TRUE(d.sizes_partition);
  EXPECT_TRUE(d.no_pure_a_stabilizer);
  EXPECT_TRUE(d.free_sums_match);
  EXPECT_TRUE(d.j0_matches);
  EXPECT_TRUE(d.jn_matches);
}

TEST(OrbitExpansion, HeisenbergFive) {
  auto e = catalog_group("heisenberg", 5);
  const auto& mk = e.marking;
  auto d = orbit_expansion(1, mk, 4);
  EXPECT_EQ(d.maps, 3125);
  EXPECT_EQ(d.free_orbits, (3125 - 25) / 25);
  EXPECT_TRUE(d.sizes_partition && d.no_pure_a_stabilizer && d.free_sums_match && d.j0_matches && d.jn_matches);
}

TEST(TracePowerCongruence, HeisenbergY) {
  auto e = catalog_group("heisenberg", 3);
  const auto& mk = e.marking;
  const int N = 4;
  ACoefficients act = a_coefficients(mk);
  Elem y = mk.sub.from_parent[by_label(mk.G(), "y")];
  auto tr = act.tr_a(GroupRingElement::basis(mk.Gp_ptr(), N, y));
  auto lhs = tr.pow(3) - act.tr_a(GroupRingElement::basis(mk.Gp_ptr(), N, mk.Gp().pow(y, 3)));
  auto expect = (elt(mk, N, "1") + elt(mk, N, "z") + elt(mk, N, "z^2")).scaled(9) - elt(mk, N, "1", 3);
  EXPECT_EQ(lhs, expect);
  auto r = check_trace_power_congruence(y, mk, N);
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.step("congruence").certificate.member);
}

TEST(TracePowerCongruence, AbelianTrivialAction) {
  auto e = catalog_group("abelian(9,3)", 3);
  for (Elem g = 0; g < e.marking.Gp().order(); ++g) EXPECT_TRUE(check_trace_power_congruence(g, e.marking, 4).ok());
}

TEST(TracePowerCongruence, EveryElementEveryMarking) {
  for (auto& [name, l] : catalog_l3()) {
    auto e = catalog_group(name, l);
    IdealSpan lT(IdealKind::LTrace, e.marking, 4);
    for (Elem g = 0; g < e.marking.Gp().order(); ++g) {
      auto r = check_trace_power_congruence(g, e.marking, 4, &lT);
      EXPECT_TRUE(r.ok()) << name << " " << e.marking.Gp().label(g);
    }
  }
}

TEST(TracePowerCongruence, PerturbedDifferenceIsRejected) {
  auto e = catalog_group("heisenberg", 3);
  IdealSpan lT(IdealKind::LTrace, e.marking, 4);
  // dropping the l g'^A-hat term leaves -3 * 1, not in 3T'
  EXPECT_FALSE(lT.contains(elt(e.marking, 4, "1", 3)).member);
}

TEST(GammaExtension, LayoutAndAction) {
  auto e = catalog_group("heisenberg", 3);
  ACoefficients ext = gamma_extension(e.marking);
  EXPECT_EQ(ext.copies, 9);
  EXPECT_EQ(ext.ring_group->order(), 9 * 9);
  EXPECT_TRUE(ext.ring_group->is_abelian());
  // gamma^j * gamma^k = gamma^(j+k)
  EXPECT_EQ(ext.ring_group->mul(ext.join(4, 0), ext.join(7, 0)), ext.join(2, 0));
  // Psi on the Gbar factor
  EXPECT_EQ(ext.ring_group->pow(ext.join(1, 0), 3), ext.join(3, 0));
}

TEST(PowerCongruence, ZeroAndSingleTerm) {
  auto e = catalog_group("heisenberg", 3);
  const auto& mk = e.marking;
  ACoefficients ext = gamma_extension(mk);
  IdealSpan lT(IdealKind::LTrace, mk, 6, ext.copies);
  BetaPrime zero{{}, 6};
  EXPECT_TRUE(check_power_congruence(zero, mk, ext, lT).ok());
  BetaTerm t{mk.sub.from_parent[by_label(mk.G(), "y")], mk.sub.from_parent[by_label(mk.G(), "z")], std::vector<i64>(9, 0)};
  t.beta[0] = 1;
  auto r = check_power_congruence(BetaPrime{{t}, 6}, mk, ext, lT);
  EXPECT_TRUE(r.ok()) << (r.failing() ? r.failing()->name : "");
  EXPECT_TRUE(r.step("hat_vanishes").ok);
}

TEST(PowerCongruence, RandomBetaWithGammaCoefficients) {
  for (auto& name : {"heisenberg", "modular_l3", "wreath"}) {
    auto e = catalog_group(name, 3);
    const auto& mk = e.marking;
    ACoefficients ext = gamma_extension(mk);
    IdealSpan lT(IdealKind::LTrace, mk, 6, ext.copies);
    std::mt19937_64 rng(7);
    for (int k = 0; k < 5; ++k) {
      BetaPrime b = random_beta(mk, 6, rng);
      auto r = check_power_congruence(b, mk, ext, lT);
      EXPECT_TRUE(r.ok()) << name << " " << describe(b, mk) << " " << (r.failing() ? r.failing()->name : "");
    }
  }
}

TEST(LogPipeline, TrivialAndBasicUnit) {
  auto e = catalog_group("heisenberg", 3);
  const auto& mk = e.marking;
  PipelineContext ctx(mk, 6);
  auto one = GroupRingElement::basis(ctx.ext.ring_group, 6, 0);
  EXPECT_TRUE(check_log_pipeline(one, ctx).ok());
  BetaTerm t{mk.sub.from_parent[by_label(mk.G(), "y")], mk.sub.from_parent[by_label(mk.G(), "z")], std::vector<i64>(9, 0)};
  t.beta[0] = 1;
  auto y = pipeline_unit(BetaPrime{{t}, 6}, ctx.ext);
  auto r = check_log_pipeline(y, ctx);
  EXPECT_TRUE(r.ok()) << (r.failing() ? r.failing()->name + " " + r.failing()->detail : r.reason);
  EXPECT_TRUE(r.step("precondition").certificate.member);
  EXPECT_TRUE(r.step("log_in_T").certificate.member);
  EXPECT_GE(r.step("log_in_T").precision, 3);
}

TEST(LogPipeline, RejectsUnitOutsidePrecondition) {
  auto e = catalog_group("heisenberg", 3);
  const auto& mk = e.marking;
  PipelineContext ctx(mk, 6);
  auto y = GroupRingElement::basis(ctx.ext.ring_group, 6, 0) + GroupRingElement::basis(ctx.ext.ring_group, 6, mk.sub.from_parent[by_label(mk.G(), "y")], 3);
  auto r = check_log_pipeline(y, ctx);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.steps.size(), 1u);
  EXPECT_EQ(r.steps[0].name, "precondition");
}

TEST(LogPipeline, RandomBeta) {
  for (auto& name : {"heisenberg", "modular_l3"}) {
    auto e = catalog_group(name, 3);
    PipelineContext ctx(e.marking, 6);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 5; ++k) {
      BetaPrime b = random_beta(e.marking, 6, rng);
      auto r = check_log_pipeline(pipeline_unit(b, ctx.ext), ctx);
      EXPECT_TRUE(r.ok()) << name << " " << describe(b, e.marking) << " " << (r.failing() ? r.failing()->name + " " + r.failing()->detail : r.reason);
    }
  }
}

TEST(ResVer, OneAndGroupLikes) {
  for (auto& [name, l] : catalog_l3()) {
    auto e = catalog_group(name, l);
    const auto& mk = e.marking;
    Deflation ab = abelianization(mk.group);
    IdealSpan T(IdealKind::TraceT, mk, 4), b(IdealKind::AugBPrime, mk, 4);
    EXPECT_TRUE(check_res_ver(GroupRingElement::basis(mk.group, 4, 0), mk, ab, T, &b).ok());
    for (Elem g = 0; g < mk.G().order(); ++g) {
      auto r = check_res_ver(GroupRingElement::basis(mk.group, 4, g), mk, ab, T, &b);
      EXPECT_TRUE(r.ok()) << name << " " << mk.G().label(g);
      EXPECT_EQ(r.steps.size(), 2u);
    }
  }
}

TEST(ResVer, RandomUnits) {
  for (auto& [name, l] : catalog_l3()) {
    auto e = catalog_group(name, l);
    const auto& mk = e.marking;
    Deflation ab = abelianization(mk.group);
    IdealSpan T(IdealKind::TraceT, mk, 6);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) {
      auto u = random_unit(mk.group, 6, rng);
      auto r = check_res_ver(u, mk, ab, T);
      EXPECT_TRUE(r.ok()) << name << " " << (r.failing() ? r.failing()->detail : r.reason);
    }
  }
}

TEST(ResVer, NormalizedUnitsLieInBPrime) {
  for (auto& name : {"heisenberg", "modular_l3", "wreath"}) {
    auto e = catalog_group(name, 3);
    const auto& mk = e.marking;
    Deflation ab = abelianization(mk.group);
    IdealSpan T(IdealKind::TraceT, mk, 5), b(IdealKind::AugBPrime, mk, 5), a(IdealKind::AugA, mk, 5);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 10; ++k) {
      Elem g = static_cast<Elem>(rng() % mk.G().order());
      auto u = GroupRingElement::basis(mk.group, 5, g);
      for (std::size_t i = 0; i < a.generators().size(); ++i)
        if (rng() % 4 == 0) u = u + GroupRingElement::from_coeffs(mk.group, 5, a.span().generators()[i]).scaled(static_cast<i64>(rng() % 243));
      auto r = check_res_ver(u, mk, ab, T, &b);
      ASSERT_EQ(r.steps.size(), 2u);
      EXPECT_TRUE(r.ok()) << name << " " << (r.failing() ? r.failing()->name + " " + r.failing()->detail : r.reason);
    }
  }
}
