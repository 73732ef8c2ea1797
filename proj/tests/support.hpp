#pragma once

// Shared fixtures and an independent brute-force counter for the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "homcount/graph.hpp"
#include "homcount/patterns.hpp"

namespace homcount::testing {

inline FeaturedGraph make_graph(std::size_t n, const std::vector<Edge>& edges) {
  return FeaturedGraph::build(n, edges);
}

inline FeaturedGraph with_weights(const FeaturedGraph& g, const std::vector<double>& w) {
  DenseMatrix f(g.num_nodes(), 1);
  for (std::size_t v = 0; v < w.size(); ++v) f(v, 0) = w[v];
  return g.with_features(std::move(f));
}

// Seven-node example graph with degrees (2,5,2,2,3,1,1).
inline FeaturedGraph fig2_graph() {
  return make_graph(7, {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {1, 4}, {1, 6}, {2, 4}, {4, 5}});
}

// Star v0 with two leaves of weight 1/2, versus a single edge of weight 1.
inline FeaturedGraph example1_star() {
  return with_weights(make_graph(3, {{0, 1}, {0, 2}}), {1.0, 0.5, 0.5});
}
inline FeaturedGraph example1_edge() { return with_weights(make_graph(2, {{0, 1}}), {1.0, 1.0}); }

inline FeaturedGraph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  return make_graph(n, edges);
}

inline FeaturedGraph random_graph(std::size_t n, double p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (coin(gen)) edges.push_back({u, v});
  return make_graph(n, edges);
}

inline FeaturedGraph random_features(const FeaturedGraph& g, std::size_t channels, double lo, double hi,
                                     std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  DenseMatrix f(g.num_nodes(), channels);
  for (std::size_t v = 0; v < g.num_nodes(); ++v)
    for (std::size_t c = 0; c < channels; ++c) f(v, c) = dist(gen);
  return g.with_features(std::move(f));
}

inline std::vector<NodeId> random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  std::mt19937_64 gen(seed);
  std::shuffle(perm.begin(), perm.end(), gen);
  return perm;
}

// Tries every one of the n^k maps V(F) -> V(G) with root -> v.
inline double naive_hom(const FeaturedGraph& g, std::size_t channel, const RootedPattern& p, NodeId v) {
  const std::size_t k = p.order();
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> image(k, 0);
  image[p.root] = v;
  double total = 0.0;
  while (true) {
    bool ok = true;
    for (const Edge& e : p.structure.edges())
      if (!g.adjacent(image[e.u], image[e.v])) {
        ok = false;
        break;
      }
    if (ok) {
      double w = 1.0;
      for (NodeId x : image) w *= g.feature(x, channel);
      total += w;
    }
    std::size_t i = 0;
    for (; i < k; ++i) {
      if (i == p.root) continue;
      if (++image[i] < n) break;
      image[i] = 0;
    }
    if (i == k) break;
  }
  return total;
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("homcount_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace homcount::testing
