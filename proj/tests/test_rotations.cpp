#include <gtest/gtest.h>

#include "matchadapt/rotations.hpp"
#include "properties.hpp"
#include "support.hpp"

namespace matchadapt {
namespace {

using testing::example1;

RotationCycle cycle_of(const Instance& i, const testing::NamedPairs& named) {
  RotationCycle cycle;
  for (const auto& [a, b] : named) cycle.emplace_back(*i.find(a), *i.find(b));
  return canonicalize(cycle);
}

class Example1Poset : public ::testing::Test {
 protected:
  Example1Poset()
      : instance(example1()),
        phi1(cycle_of(instance, {{"m1", "w1"}, {"m2", "w2"}, {"m3", "w3"}})),
        phi2(cycle_of(instance, {{"w1", "m2"}, {"w2", "m3"}, {"w3", "m1"}})),
        phi3(cycle_of(instance, {{"m1", "w2"}, {"m2", "w3"}, {"m3", "w1"}})),
        phi4(cycle_of(instance, {{"w1", "m3"}, {"w2", "m1"}, {"w3", "m2"}})),
        poset(build_rotation_poset(instance)) {}

  RotationId id(const RotationCycle& c) const { return *poset.find(c); }

  RotationSet set_of(std::initializer_list<RotationCycle> cycles) const {
    RotationSet z(poset.size());
    for (const auto& c : cycles) z.insert(id(c));
    return z;
  }

  std::vector<RotationCycle> exposed(const StableTable& t) const {
    std::vector<RotationCycle> out;
    for (const Rotation& r : exposed_rotations(t)) out.push_back(r.cycle);
    std::sort(out.begin(), out.end());
    return out;
  }

  static std::vector<RotationCycle> sorted(std::vector<RotationCycle> v) {
    std::sort(v.begin(), v.end());
    return v;
  }

  Instance instance;
  RotationCycle phi1, phi2, phi3, phi4;
  RotationPoset poset;
};

TEST_F(Example1Poset, PhaseOneLeavesListsUnchanged) {
  const StableTable p0 = phase1(instance);
  for (AgentId a = 0; a < instance.size(); ++a) EXPECT_EQ(p0.list(a), instance.order(a));
}

TEST_F(Example1Poset, ExposedRotationsFollowEliminations) {
  const StableTable p0 = phase1(instance);
  EXPECT_EQ(exposed(p0), sorted({phi1, phi2}));
  EXPECT_EQ(exposed(eliminate(p0, poset.rotation(id(phi1)))), sorted({phi2, phi3}));
  EXPECT_EQ(exposed(eliminate(p0, poset.rotation(id(phi2)))), sorted({phi1, phi4}));
  EXPECT_THROW(eliminate(p0, poset.rotation(id(phi3))), RotationNotExposed);
}

TEST_F(Example1Poset, DualsAndPrecedence) {
  ASSERT_EQ(poset.size(), 4u);
  EXPECT_TRUE(poset.singular().empty());
  EXPECT_EQ(poset.rotation(id(phi1)).dual_id, id(phi4));
  EXPECT_EQ(poset.rotation(id(phi2)).dual_id, id(phi3));
  std::vector<std::pair<RotationId, RotationId>> expected{{id(phi1), id(phi3)}, {id(phi2), id(phi4)}};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(poset.precedence_edges(), expected);
}

TEST_F(Example1Poset, ClosedCompleteSubsetsAndMatchings) {
  const auto subsets = enumerate_closed_complete_subsets(poset);
  std::vector<RotationSet> expected{set_of({phi1, phi2}), set_of({phi1, phi3}), set_of({phi2, phi4})};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(subsets, expected);

  EXPECT_EQ(closed_set_to_matching(poset, set_of({phi1, phi2})), testing::example1_shift(instance));
  EXPECT_EQ(closed_set_to_matching(poset, set_of({phi1, phi3})), testing::example1_back(instance));
  EXPECT_EQ(closed_set_to_matching(poset, set_of({phi2, phi4})), testing::example1_identity(instance));
  EXPECT_EQ(matching_to_closed_set(poset, testing::example1_identity(instance)), set_of({phi2, phi4}));
  EXPECT_EQ(matching_to_closed_set(poset, testing::example1_back(instance)), set_of({phi1, phi3}));
  EXPECT_THROW(closed_set_to_matching(poset, set_of({phi3, phi2})), NotClosedComplete);
  EXPECT_THROW(closed_set_to_matching(poset, set_of({phi1})), NotClosedComplete);
}

TEST_F(Example1Poset, StablePairsAndRho) {
  EXPECT_EQ(poset.stable_pairs().size(), 9u);
  EXPECT_TRUE(poset.fixed_pairs().empty());
  const AgentId m1 = *instance.find("m1");
  EXPECT_EQ(rho_of(poset, m1, *instance.find("w2")), id(phi2));
  EXPECT_EQ(rho_of(poset, m1, *instance.find("w1")), id(phi4));
  EXPECT_FALSE(rho_of(poset, m1, *instance.find("m2")).has_value());
}

TEST(Rotations, TwoAgentInstance) {
  const Instance i = parse_instance("kind sr\na : b\nb : a\n");
  const StableTable p0 = phase1(i);
  EXPECT_EQ(p0.list(0), std::vector<AgentId>{1});
  EXPECT_TRUE(p0.terminal());
  const RotationPoset poset = build_rotation_poset(i);
  EXPECT_EQ(poset.size(), 0u);
  EXPECT_EQ(closed_set_to_matching(poset, RotationSet(0)).size(), 1u);
  EXPECT_EQ(poset.fixed_pairs(), poset.stable_pairs());
}

TEST(Rotations, OddCycleHasNoStableMatching) {
  const Instance i = parse_instance("kind sr\na : b c\nb : c a\nc : a b\nd :\n");
  EXPECT_TRUE(enumerate_stable_matchings(i, Notion::strict).empty());
  EXPECT_THROW(phase1(i), NoStableMatching);
  EXPECT_THROW(build_rotation_poset(i), NoStableMatching);
}

TEST(Rotations, TableCapIsEnforced) {
  std::uint64_t seed = 11;
  const Instance i = testing::solvable_random(10, Kind::roommates, 1.0, seed);
  PosetOptions options;
  options.table_cap = 1;
  const RotationPoset full = build_rotation_poset(i);
  if (full.tables_explored() > 1) EXPECT_THROW(build_rotation_poset(i, options), ResourceExhausted);
}

TEST(Rotations, TiesAreRejected) {
  const Instance i = parse_instance("kind sr\na : ( b c )\nb : a\nc : a\n");
  EXPECT_THROW(build_rotation_poset(i), InvalidNotion);
}

class RandomPosets : public ::testing::TestWithParam<int> {};

TEST_P(RandomPosets, BijectionAndInvariants) {
  const int n = GetParam();
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const double density = seed % 2 ? 1.0 : 0.7;
    const Instance i = random_instance(n, Kind::roommates, 0.0, density, 1000 * n + seed);
    const auto ctx = testing::make_context(i);
    for (const auto& f : testing::check_bijection(ctx)) ADD_FAILURE() << "seed " << seed << ": " << f;
    for (const auto& f : testing::check_invariants(ctx)) ADD_FAILURE() << "seed " << seed << ": " << f;
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, RandomPosets, ::testing::Values(4, 6, 8));

TEST(Rotations, MarriageInstancesHaveNoSingularRotations) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance i = random_instance(8, Kind::marriage, 0.0, 0.8, seed);
    const RotationPoset poset = build_rotation_poset(i);
    EXPECT_TRUE(poset.singular().empty());
    const auto ctx = testing::make_context(i);
    EXPECT_TRUE(testing::check_bijection(ctx).empty());
  }
}

}  // namespace
}  // namespace matchadapt
