#include <gtest/gtest.h>

#include "matchadapt/adapt_sr.hpp"
#include "support.hpp"

namespace matchadapt {
namespace {

using testing::example1;
using testing::example1_back;
using testing::example1_identity;
using testing::example1_shift;
using testing::pairs_of;

struct RandomQuery {
  Instance instance;
  AdaptQuery query;
};

// A random strict roommates instance with a stable M1 and random constraints.
RandomQuery random_query(int n, std::uint64_t seed) {
  RandomQuery out;
  std::uint64_t s = seed;
  out.instance = testing::solvable_random(n, Kind::roommates, seed % 3 ? 1.0 : 0.6, s);
  Rng rng(seed * 7919 + 1);
  const auto stable = enumerate_stable_matchings(out.instance, Notion::strict);
  out.query.m1 = stable[rng.below(stable.size())];
  auto pairs = out.instance.pairs();
  rng.shuffle(pairs);
  const std::size_t q = rng.below(3);
  const std::size_t p = rng.below(4);
  for (std::size_t i = 0; i < pairs.size() && out.query.forced.size() < q; ++i) out.query.forced.push_back(pairs[i]);
  // Forbidden pairs favour M1 so that the guess loop is exercised.
  auto m1_pairs = out.query.m1.pairs();
  rng.shuffle(m1_pairs);
  for (Pair e : m1_pairs)
    if (out.query.forbidden.size() < p / 2 + p % 2) out.query.forbidden.push_back(e);
  for (std::size_t i = q; i < pairs.size() && out.query.forbidden.size() < p; ++i)
    if (std::find(out.query.forbidden.begin(), out.query.forbidden.end(), pairs[i]) == out.query.forbidden.end())
      out.query.forbidden.push_back(pairs[i]);
  out.query.k = static_cast<long long>(rng.below(2 * n + 1));
  return out;
}

class Example1Adapt : public ::testing::Test {
 protected:
  Example1Adapt() : instance(example1()), poset(build_rotation_poset(instance)) {}

  RotationSet closed_of(const Matching& m) const { return matching_to_closed_set(poset, m); }

  Instance instance;
  RotationPoset poset;
};

TEST_F(Example1Adapt, IntegrateFollowsTheRule) {
  const RotationSet z24 = closed_of(example1_identity(instance));
  const RotationSet z12 = closed_of(example1_shift(instance));
  const AgentId m1 = *instance.find("m1");
  const RotationId phi1 = *poset.containing(m1, *instance.find("w1"));
  const RotationId phi4 = *poset.rotation(phi1).dual_id;
  EXPECT_EQ(integrate(poset, z24, phi1), z12);
  EXPECT_EQ(integrate(poset, z12, phi4), z24);
  EXPECT_EQ(integrate(poset, z12, phi1), z12);
}

TEST_F(Example1Adapt, ForcedPairWithinAndBeyondBudget) {
  AdaptQuery query;
  query.m1 = example1_identity(instance);
  query.forced = pairs_of(instance, {{"m1", "w2"}});
  query.k = 6;
  auto result = adapt(instance, query);
  ASSERT_TRUE(result.has_value());
  EXPECT_EQ(result->matching, example1_shift(instance));
  EXPECT_EQ(result->delta, 6u);
  query.k = 5;
  EXPECT_FALSE(adapt(instance, query).has_value());
}

TEST_F(Example1Adapt, NoConstraintsReturnsM1) {
  for (const Matching& m1 : {example1_identity(instance), example1_shift(instance), example1_back(instance)}) {
    AdaptQuery query;
    query.m1 = m1;
    auto result = adapt(instance, query);
    ASSERT_TRUE(result.has_value());
    EXPECT_EQ(result->matching, m1);
    EXPECT_EQ(result->delta, 0u);
  }
}

TEST_F(Example1Adapt, TrivialRejections) {
  AdaptQuery query;
  query.m1 = example1_identity(instance);
  query.k = 100;
  query.forced = pairs_of(instance, {{"m1", "w2"}});
  query.forbidden = query.forced;
  EXPECT_FALSE(adapt(instance, query).has_value());
  query.forbidden.clear();
  query.forced = pairs_of(instance, {{"m1", "w2"}, {"m2", "w2"}});
  EXPECT_FALSE(adapt(instance, query).has_value());
}

TEST_F(Example1Adapt, UnstableM1IsRejected) {
  AdaptQuery query;
  query.m1 = testing::matching_of(instance, {{"m1", "w2"}, {"m2", "w1"}, {"m3", "w3"}});
  EXPECT_THROW(adapt(instance, query), NotStable);
}

TEST_F(Example1Adapt, ForbiddenPairInM1DrivesTheGuess) {
  AdaptQuery query;
  query.m1 = example1_identity(instance);
  query.forbidden = pairs_of(instance, {{"m1", "w1"}});
  query.k = 6;
  AdaptStats stats;
  auto result = adapt(instance, query, {}, &stats);
  ASSERT_TRUE(result.has_value());
  EXPECT_EQ(result->delta, 6u);
  EXPECT_EQ(stats.guesses, 2u);
  ASSERT_EQ(result->guess.size(), 1u);
  EXPECT_EQ(result->guessed_pairs, query.forbidden);
  const AgentId d = result->guess.front();
  EXPECT_TRUE(instance.prefers(d, result->matching.partner(d), query.m1.partner(d)));
}

TEST_F(Example1Adapt, RankWindows) {
  const Matching m1 = example1_identity(instance);
  EXPECT_EQ(adapt_with_rank_windows(instance, m1, {}, 0)->matching, m1);

  RankWindow window{*instance.find("m1"), instance.find("w1"), instance.find("w3")};
  auto result = adapt_with_rank_windows(instance, m1, std::span(&window, 1), 6);
  ASSERT_TRUE(result.has_value());
  EXPECT_EQ(result->matching, example1_shift(instance));
  EXPECT_FALSE(adapt_with_rank_windows(instance, m1, std::span(&window, 1), 5).has_value());

  RankWindow impossible{*instance.find("m1"), instance.find("w1"), instance.find("w2")};
  EXPECT_THROW(adapt_with_rank_windows(instance, m1, std::span(&impossible, 1), 6), WindowUnsatisfiable);
}

TEST(AdaptSr, MatchesOracleOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const int n = 4 + 2 * static_cast<int>(seed % 3);
    const RandomQuery rq = random_query(n, seed);
    const auto expected = oracle_adapt(rq.instance, rq.query, Notion::strict);
    AdaptStats stats;
    const auto actual = adapt(rq.instance, rq.query, {}, &stats);
    ASSERT_EQ(expected.has_value(), actual.has_value()) << "seed " << seed;
    if (!actual) continue;
    EXPECT_EQ(actual->delta, expected->delta) << "seed " << seed;
    EXPECT_TRUE(is_stable(rq.instance, actual->matching, Notion::strict));
    for (Pair e : rq.query.forced) EXPECT_TRUE(actual->matching.contains(e));
    for (Pair e : rq.query.forbidden) EXPECT_FALSE(actual->matching.contains(e));
    EXPECT_LE(actual->delta, static_cast<std::size_t>(rq.query.k));
    EXPECT_EQ(stats.guesses, std::size_t{1} << stats.forbidden_in_m1);
  }
}

TEST(AdaptSr, ThreadCountDoesNotChangeTheResult) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const RandomQuery rq = random_query(8, seed);
    AdaptOptions threaded;
    threaded.threads = 4;
    const auto single = adapt(rq.instance, rq.query);
    const auto multi = adapt(rq.instance, rq.query, threaded);
    ASSERT_EQ(single.has_value(), multi.has_value());
    if (single) EXPECT_EQ(single->matching, multi->matching);
  }
}

TEST(AdaptSr, EndpointChoiceDoesNotChangeTheOptimum) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const RandomQuery rq = random_query(8, seed);
    AdaptOptions higher;
    higher.endpoint_rule = EndpointRule::higher_id;
    const auto lo = adapt(rq.instance, rq.query);
    const auto hi = adapt(rq.instance, rq.query, higher);
    ASSERT_EQ(lo.has_value(), hi.has_value()) << "seed " << seed;
    if (lo) EXPECT_EQ(lo->delta, hi->delta) << "seed " << seed;
  }
}

TEST(AdaptSr, IntegratedRotationsAreNecessary) {
  // Every rotation integrated by the winning run lies in the rotation set of
  // every valid matching that respects the winning guess.
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const RandomQuery rq = random_query(6, seed);
    const auto result = adapt(rq.instance, rq.query);
    if (!result) continue;
    const Completion c = complete_with_dummies(rq.instance, rq.query.m1);
    const RotationPoset poset = build_rotation_poset(c.instance);
    for (const Matching& n : enumerate_stable_matchings(c.instance, Notion::strict)) {
      const Matching restricted = restrict_to(n, rq.instance.size());
      bool valid = true;
      for (Pair e : rq.query.forced) valid = valid && restricted.contains(e);
      for (Pair e : rq.query.forbidden) valid = valid && !restricted.contains(e);
      for (std::size_t g = 0; g < result->guess.size(); ++g) {
        const AgentId d = result->guess[g];
        valid = valid && rq.instance.prefers(d, restricted.partner(d), rq.query.m1.partner(d));
      }
      if (!valid) continue;
      const RotationSet z = matching_to_closed_set(poset, n);
      for (RotationId r : result->integrated) EXPECT_TRUE(z.contains(r)) << "seed " << seed;
    }
  }
}

TEST(AdaptSr, RankWindowsMatchOracle) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    std::uint64_t s = seed;
    const Instance i = testing::solvable_random(8, Kind::roommates, 1.0, s);
    const auto stable = enumerate_stable_matchings(i, Notion::strict);
    Rng rng(seed);
    const Matching m1 = stable[rng.below(stable.size())];
    const AgentId a = static_cast<AgentId>(rng.below(i.size()));
    const auto& order = i.order(a);
    RankWindow w{a, std::nullopt, std::nullopt};
    if (rng.chance(0.7)) w.upper = order[rng.below(order.size())];
    if (rng.chance(0.7)) w.lower = order[rng.below(order.size())];
    if (w.upper && w.lower && !i.prefers(a, *w.upper, *w.lower)) std::swap(w.upper, w.lower);
    if (w.upper && w.upper == w.lower) w.lower.reset();
    const long long k = static_cast<long long>(rng.below(17));
    const auto expected = oracle_adapt_with_rank_windows(i, m1, std::span(&w, 1), k, Notion::strict);
    try {
      const auto actual = adapt_with_rank_windows(i, m1, std::span(&w, 1), k);
      ASSERT_EQ(expected.has_value(), actual.has_value()) << "seed " << seed;
      if (actual) EXPECT_EQ(actual->delta, expected->delta) << "seed " << seed;
    } catch (const WindowUnsatisfiable&) {
      EXPECT_FALSE(expected.has_value()) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace matchadapt
