#include <gtest/gtest.h>

#include "matchadapt/io.hpp"
#include "support.hpp"

namespace matchadapt {
namespace {

std::string data(const std::string& name) { return read_text_file(std::string(MATCHADAPT_TEST_DATA) + "/" + name); }

TEST(InstanceText, RoundTripsRandomInstances) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Kind kind = seed % 2 ? Kind::roommates : Kind::marriage;
    const Instance i = random_instance(3 + static_cast<int>(seed % 8), kind, 0.3, 0.7, seed);
    const std::string text = emit_instance(i, "seed " + std::to_string(seed));
    EXPECT_EQ(parse_instance(text), i) << text;
    EXPECT_EQ(emit_instance(parse_instance(text), "seed " + std::to_string(seed)), text);
  }
}

TEST(InstanceText, ReadsExample1File) {
  EXPECT_EQ(parse_instance(data("example1.pref")), testing::example1());
}

TEST(InstanceText, TieGroupsAndComments) {
  const Instance i = parse_instance("# header\nkind sr\na : (b c) # tie\nb : a c\nc : b a\n");
  ASSERT_EQ(i.prefs(0).size(), 1u);
  EXPECT_EQ(i.prefs(0).front().size(), 2u);
  EXPECT_FALSE(i.is_strict());
}

TEST(InstanceText, Errors) {
  EXPECT_THROW(parse_instance(data("malformed.pref")), ParseError);
  EXPECT_THROW(parse_instance("kind xx\n"), ParseError);
  EXPECT_THROW(parse_instance("a : b\n"), ParseError);
  EXPECT_THROW(parse_instance("kind sr\na : b\n"), ParseError);
  EXPECT_THROW(parse_instance("kind sr\na : b\nb : a\na : b\n"), ParseError);
  EXPECT_THROW(parse_instance("kind sr\na : b\nb :\n"), ValidationError);
  EXPECT_THROW(parse_instance("kind sr\na : b b\nb : a\n"), ValidationError);
}

TEST(MatchingText, RoundTrip) {
  const Instance i = testing::example1();
  const Matching m = parse_matching(i, data("example1_m1.txt"));
  EXPECT_EQ(m, testing::example1_identity(i));
  EXPECT_EQ(parse_matching(i, emit_matching(i, m)), m);
  EXPECT_THROW(parse_matching(i, "m1 zz\n"), ParseError);
  EXPECT_THROW(parse_matching(i, "m1 w1\nm1 w2\n"), ParseError);
}

TEST(QueryText, RoundTrip) {
  const Instance i = testing::example1();
  const AdaptQuery q = parse_query(i, data("example1.query"));
  EXPECT_EQ(q.m1, testing::example1_identity(i));
  EXPECT_EQ(q.forced, testing::pairs_of(i, {{"m1", "w2"}}));
  EXPECT_TRUE(q.forbidden.empty());
  EXPECT_EQ(q.k, 6);
  const AdaptQuery again = parse_query(i, emit_query(i, q));
  EXPECT_EQ(again.m1, q.m1);
  EXPECT_EQ(again.forced, q.forced);
  EXPECT_EQ(again.forbidden, q.forbidden);
  EXPECT_EQ(again.k, q.k);
  EXPECT_THROW(parse_query(i, "[m1]\nm1 w1\n"), ParseError);
}

TEST(GraphText, ParsesCountsAndEdges) {
  const Graph g = parse_graph(data("k3.edges"));
  EXPECT_EQ(g.vertices, 3);
  EXPECT_EQ(g.edges.size(), 3u);
  EXPECT_EQ(parse_graph(data("empty.edges")).vertices, 0);
  EXPECT_EQ(parse_graph("0 4\n").vertices, 5);
  EXPECT_THROW(parse_graph("0 0\n"), ParseError);
}

TEST(Dot, IsStableAcrossRuns) {
  const Instance i = testing::example1();
  const std::string first = rotations_dot(build_rotation_poset(i));
  EXPECT_EQ(first, rotations_dot(build_rotation_poset(i)));
  EXPECT_NE(first.find("digraph"), std::string::npos);
  EXPECT_NE(first.find("r0 -> r1"), std::string::npos);
  EXPECT_NE(first.find("style=dashed"), std::string::npos);
}

}  // namespace
}  // namespace matchadapt
