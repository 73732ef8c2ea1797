#include <gtest/gtest.h>

#include "homcount/errors.hpp"
#include "homcount/oracle.hpp"
#include "homcount/patterns.hpp"
#include "support.hpp"

using namespace homcount;
using namespace homcount::testing;

TEST(Oracle, Fig2) {
  const auto g = fig2_graph();
  EXPECT_EQ(brute_force_rooted(g, 0, make_cycle(3), 0), 2.0);
  EXPECT_EQ(brute_force_rooted(g, 0, make_path(3), 2), 8.0);
  EXPECT_EQ(brute_force_rooted_exact(g, make_path(3), 0), BigInt(7));
}

TEST(Oracle, MatchesNaiveEnumeration) {
  std::vector<RootedPattern> patterns;
  for (auto& p : enumerate_trees(5).patterns) patterns.push_back(p);
  for (auto& p : enumerate_cycles(5).patterns) patterns.push_back(p);
  patterns.push_back({make_graph(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}}), 3, "tri_pendant"});
  patterns.push_back({complete_graph(4), 0, "K4"});
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto g = random_features(random_graph(6, 0.55, 900 + s), 1, -1.0, 2.0, s);
    for (const auto& p : patterns) {
      const auto all = brute_force_all(g, 0, p);
      for (NodeId v = 0; v < 6; ++v) EXPECT_TRUE(close_rel(all[v], naive_hom(g, 0, p, v), 1e-12)) << p.name;
    }
  }
}

TEST(Oracle, ExactAgreesWithPlainDouble) {
  const auto g = random_graph(7, 0.5, 4);
  RootedPattern k4{complete_graph(4), 0, "K4"};
  const auto exact = brute_force_all_exact(g, k4);
  const auto approx = brute_force_all(g, 0, k4);
  for (NodeId v = 0; v < 7; ++v) EXPECT_EQ(exact[v], BigInt(static_cast<long long>(approx[v])));
}

TEST(Oracle, PatternOnTriangleHandCount) {
  // K3 with a pendant vertex into K4: 3 * 2 triangle completions times 3 pendant images.
  const auto k4 = complete_graph(4);
  RootedPattern p{make_graph(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}}), 0, "tri_pendant"};
  EXPECT_EQ(brute_force_rooted_exact(k4, p, 2), BigInt(18));
  p.root = 3;
  EXPECT_EQ(brute_force_rooted_exact(k4, p, 2), BigInt(18));
}

TEST(Oracle, Guards) {
  const auto g = complete_graph(12);
  OracleLimits tight;
  tight.max_maps = 100.0;
  EXPECT_THROW(brute_force_rooted(g, 0, make_cycle(4), 0, tight), SizeGuardError);
  tight.force = true;
  EXPECT_EQ(brute_force_rooted(g, 0, make_cycle(4), 0, tight), (std::pow(11.0, 4) + 11.0) / 12.0);
  EXPECT_THROW(brute_force_rooted(g, 0, make_cycle(3), 12), std::invalid_argument);
  RootedPattern disconnected{FeaturedGraph::build(2, {}), 0, "two"};
  EXPECT_THROW(brute_force_rooted(g, 0, disconnected, 0), std::invalid_argument);
}
