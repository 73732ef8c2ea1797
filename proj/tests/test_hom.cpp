#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "homcount/errors.hpp"
#include "homcount/hom.hpp"
#include "homcount/patterns.hpp"
#include "support.hpp"

using namespace homcount;
using namespace homcount::testing;

namespace {

std::vector<RootedPattern> small_patterns(std::size_t max_order) {
  std::vector<RootedPattern> out;
  for (auto kind : {FamilyKind::trees, FamilyKind::binary_trees, FamilyKind::cycles, FamilyKind::paths})
    for (auto& p : enumerate_family(kind, max_order).patterns) out.push_back(p);
  return out;
}

RootedPattern triangle_with_pendant(NodeId root) {
  return {make_graph(4, {{0, 1}, {1, 2}, {0, 2}, {0, 3}}), root, "tri_pendant"};
}

}  // namespace

TEST(Hom, Fig2Values) {
  const auto g = fig2_graph();
  const auto c3 = count_rooted(g, 0, make_cycle(3));
  const auto p3 = count_rooted(g, 0, make_path(3));
  EXPECT_EQ(c3[0], 2.0);
  EXPECT_EQ(c3[2], 2.0);
  EXPECT_EQ(p3[0], 7.0);
  EXPECT_EQ(p3[2], 8.0);
  EXPECT_EQ(count_graph_level(g, 0, make_cycle(3)), 12.0);
}

TEST(Hom, CompleteGraphK3) {
  const auto k3 = complete_graph(3);
  const std::vector<std::size_t> ks{3, 4};
  const auto c = count_cycles(k3, 0, ks);
  for (NodeId v = 0; v < 3; ++v) {
    EXPECT_EQ(c.at(3)[v], 2.0);
    EXPECT_EQ(c.at(4)[v], 6.0);
  }
}

TEST(Hom, CyclesOnCompleteGraphsClosedForm) {
  // Closed walks of length k at a vertex of K_n: ((n-1)^k + (-1)^k (n-1)) / n.
  const std::size_t n = 6;
  const auto g = complete_graph(n);
  std::vector<std::size_t> ks;
  for (std::size_t k = 2; k <= 12; ++k) ks.push_back(k);
  const auto c = count_cycles(g, 0, ks);
  for (auto k : ks) {
    const double expected = (std::pow(n - 1.0, k) + (k % 2 ? -1.0 : 1.0) * (n - 1.0)) / n;
    EXPECT_DOUBLE_EQ(c.at(k)[0], expected) << k;
  }
}

TEST(Hom, ClassifyShapes) {
  EXPECT_EQ(classify(make_path(1)), PatternShape::path);
  EXPECT_EQ(classify(make_path(4)), PatternShape::path);
  EXPECT_EQ(classify(make_cycle(5)), PatternShape::cycle);
  EXPECT_EQ(classify(RootedPattern{make_path(3).structure, 1, "mid"}), PatternShape::tree);
  EXPECT_EQ(classify(triangle_with_pendant(0)), PatternShape::general);
}

TEST(Hom, AgreesWithNaiveEnumerationPlain) {
  const auto patterns = small_patterns(5);
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto g = random_graph(6, 0.45, s);
    for (const auto& p : patterns) {
      const auto counts = count_rooted(g, 0, p);
      for (NodeId v = 0; v < g.num_nodes(); ++v) EXPECT_EQ(counts[v], naive_hom(g, 0, p, v)) << p.name;
    }
  }
}

TEST(Hom, AgreesWithNaiveEnumerationWeighted) {
  const auto patterns = small_patterns(5);
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto g = random_features(random_graph(6, 0.5, 50 + s), 2, -1.5, 2.0, s);
    for (std::size_t ch = 0; ch < 2; ++ch)
      for (const auto& p : patterns) {
        const auto counts = count_rooted(g, ch, p);
        for (NodeId v = 0; v < g.num_nodes(); ++v)
          EXPECT_TRUE(close_rel(counts[v], naive_hom(g, ch, p, v), 1e-9)) << p.name << " v=" << v;
      }
  }
}

TEST(Hom, TreeRootedAnywhereMatchesNaive) {
  const auto g = random_features(random_graph(6, 0.5, 3), 1, 0.2, 1.8, 9);
  for (const auto& t : enumerate_trees(5).patterns)
    for (NodeId r = 0; r < t.order(); ++r) {
      RootedPattern p{t.structure, r, t.name};
      const auto counts = count_rooted(g, 0, p);
      for (NodeId v = 0; v < g.num_nodes(); ++v) EXPECT_TRUE(close_rel(counts[v], naive_hom(g, 0, p, v), 1e-12));
    }
}

TEST(Hom, GeneralPatternFallback) {
  // Triangle with a pendant at the root: triangles through v times deg(v).
  const auto g = fig2_graph();
  const auto counts = count_rooted(g, 0, triangle_with_pendant(0));
  const auto c3 = count_rooted(g, 0, make_cycle(3));
  for (NodeId v = 0; v < 7; ++v) EXPECT_EQ(counts[v], c3[v] * static_cast<double>(g.degree(v)));
  EXPECT_EQ(counts[1], 20.0);
  EXPECT_EQ(counts[0], 4.0);
  // Rooted at the pendant: sum of triangle counts over the neighbors.
  const auto from_leaf = count_rooted(g, 0, triangle_with_pendant(3));
  for (NodeId v = 0; v < 7; ++v) {
    double s = 0;
    for (NodeId u : g.neighbors(v)) s += c3[u];
    EXPECT_EQ(from_leaf[v], s);
  }
}

TEST(Hom, GeneralPatternSizeGuard) {
  std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 6}};
  RootedPattern big{make_graph(7, edges), 0, "big"};
  const auto g = fig2_graph();
  EXPECT_THROW(count_rooted(g, 0, big), SizeGuardError);
  CountOptions force;
  force.force_oracle = true;
  const auto counts = count_rooted(g, 0, big, force);
  EXPECT_EQ(counts[3], naive_hom(g, 0, big, 3));
}

TEST(Hom, InputValidation) {
  const auto g = fig2_graph();
  const std::vector<std::size_t> bad{1};
  EXPECT_THROW(count_cycles(g, 0, bad), std::invalid_argument);
  EXPECT_THROW(count_paths(g, 0, 0), std::invalid_argument);
  EXPECT_THROW(count_tree(g, 0, make_cycle(3)), std::invalid_argument);
}

TEST(Hom, TwoCycleIsWeightedDegree) {
  const auto g = random_features(fig2_graph(), 1, 0.5, 2.0, 1);
  const std::vector<std::size_t> ks{2};
  const auto c2 = count_cycles(g, 0, ks).at(2);
  for (NodeId v = 0; v < 7; ++v) {
    double s = 0;
    for (NodeId u : g.neighbors(v)) s += g.feature(u, 0);
    EXPECT_NEAR(c2[v], g.feature(v, 0) * s, 1e-12);
  }
}

TEST(Hom, Example1StarAndEdgeAgree) {
  const auto star = example1_star();
  const auto edge = example1_edge();
  for (const auto& p : small_patterns(7)) {
    EXPECT_NEAR(count_rooted(star, 0, p)[0], count_rooted(edge, 0, p)[0], 1e-12) << p.name;
  }
}

TEST(Hom, EmptyGraphAndIsolatedNodes) {
  const auto g = FeaturedGraph::build(3, {});
  EXPECT_EQ(count_rooted(g, 0, make_path(1)), (HomCountVector{1, 1, 1}));
  EXPECT_EQ(count_rooted(g, 0, make_path(3)), (HomCountVector{0, 0, 0}));
  EXPECT_EQ(count_rooted(g, 0, make_cycle(4)), (HomCountVector{0, 0, 0}));
}

TEST(Hom, TraceIdentityAgainstEigenvalues) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto g = random_features(random_graph(8, 0.5, 200 + s), 1, 0.1, 2.0, s);
    const std::size_t n = g.num_nodes();
    // diag(sqrt w) A diag(sqrt w) is similar to A diag(w).
    Eigen::MatrixXd s_mat = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : g.edges()) {
      const double x = std::sqrt(g.feature(e.u, 0) * g.feature(e.v, 0));
      s_mat(e.u, e.v) = s_mat(e.v, e.u) = x;
    }
    const Eigen::VectorXd lambda = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s_mat).eigenvalues();
    for (std::size_t k = 3; k <= 10; ++k) {
      const double expected = lambda.array().pow(static_cast<double>(k)).sum();
      EXPECT_TRUE(close_rel(count_graph_level(g, 0, make_cycle(k)), expected, 1e-9)) << k;
    }
  }
}

TEST(Hom, IsomorphismInvariance) {
  const auto patterns = small_patterns(6);
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto g = random_features(random_graph(9, 0.4, 300 + s), 1, -1.0, 1.0, s);
    const auto perm = random_permutation(9, s);
    const auto h = permute(g, perm);
    for (const auto& p : patterns) {
      const auto a = count_rooted(g, 0, p);
      const auto b = count_rooted(h, 0, p);
      for (NodeId v = 0; v < 9; ++v) EXPECT_TRUE(close_rel(a[v], b[perm[v]], 1e-12)) << p.name;
    }
  }
}

TEST(HomExact, MatchesDoubleOnSmallCounts) {
  const auto g = random_graph(8, 0.4, 77);
  for (const auto& p : small_patterns(6)) {
    const auto exact = count_rooted_exact(g, p);
    const auto approx = count_rooted(g, 0, p);
    for (NodeId v = 0; v < 8; ++v) EXPECT_EQ(exact[v], BigInt(static_cast<long long>(approx[v]))) << p.name;
  }
}

TEST(HomExact, BeyondSixtyFourBits) {
  // Walks from a vertex of K_20: paths 19^(k-1), closed walks by the closed form.
  const auto g = complete_graph(20);
  const auto paths = count_paths_exact(g, 30);
  EXPECT_EQ(paths.at(30)[0], boost::multiprecision::pow(BigInt(19), 29));
  const std::vector<std::size_t> ks{30};
  const auto cycles = count_cycles_exact(g, ks);
  EXPECT_EQ(cycles.at(30)[5], (boost::multiprecision::pow(BigInt(19), 30) + 19) / 20);
  EXPECT_EQ(count_graph_level_exact(g, make_cycle(30)), boost::multiprecision::pow(BigInt(19), 30) + 19);
}

TEST(HomExact, TreeOnStar) {
  // Star pattern K_{1,3} rooted at its centre on a vertex of degree d: d^3.
  const auto star = tree_from_level_sequence({0, 1, 1, 1});
  const auto g = fig2_graph();
  const auto counts = count_tree_exact(g, star);
  for (NodeId v = 0; v < 7; ++v) EXPECT_EQ(counts[v], BigInt(g.degree(v) * g.degree(v) * g.degree(v)));
}
