#include "homcount/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "homcount/errors.hpp"

namespace homcount {

FeaturedGraph FeaturedGraph::build(std::size_t n, std::span<const Edge> edges,
                                   std::optional<DenseMatrix> features, std::string name) {
  FeaturedGraph g;
  g.name_ = std::move(name);
  g.neighbors_.resize(n);
  g.edges_.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n)
      throw DataError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                      ") has an endpoint outside [0," + std::to_string(n) + ")");
    if (e.u == e.v) throw DataError("self-loop at node " + std::to_string(e.u));
    g.edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
  }
  std::sort(g.edges_.begin(), g.edges_.end());
  if (auto dup = std::adjacent_find(g.edges_.begin(), g.edges_.end()); dup != g.edges_.end())
    throw DataError("duplicate edge (" + std::to_string(dup->u) + "," +
                    std::to_string(dup->v) + ")");
  for (const Edge& e : g.edges_) {
    g.neighbors_[e.u].push_back(e.v);
    g.neighbors_[e.v].push_back(e.u);
  }
  for (auto& nb : g.neighbors_) std::sort(nb.begin(), nb.end());

  if (features) {
    if (features->rows() != n)
      throw DataError("feature matrix has " + std::to_string(features->rows()) +
                      " rows, expected " + std::to_string(n));
    if (features->cols() == 0) throw DataError("feature matrix has no columns");
    g.features_ = std::move(*features);
  } else {
    g.features_ = DenseMatrix(n, 1, 1.0);
  }
  return g;
}

bool FeaturedGraph::adjacent(NodeId u, NodeId v) const {
  const auto& nb = neighbors_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

DenseMatrix FeaturedGraph::adjacency_matrix() const {
  const std::size_t n = num_nodes();
  DenseMatrix a(n, n);
  for (const Edge& e : edges_) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

std::vector<double> FeaturedGraph::channel(std::size_t channel) const {
  if (channel >= num_channels())
    throw std::invalid_argument("channel " + std::to_string(channel) + " out of range (m = " +
                                std::to_string(num_channels()) + ")");
  return features_.column(channel);
}

bool FeaturedGraph::is_plain() const {
  return features_.cols() == 1 &&
         std::all_of(features_.data().begin(), features_.data().end(),
                     [](double x) { return x == 1.0; });
}

FeaturedGraph FeaturedGraph::plain() const {
  return with_features(DenseMatrix(num_nodes(), 1, 1.0));
}

FeaturedGraph FeaturedGraph::single_channel(std::size_t ch) const {
  return with_features(DenseMatrix(num_nodes(), 1, channel(ch)));
}

FeaturedGraph FeaturedGraph::with_features(DenseMatrix features) const {
  if (features.rows() != num_nodes() || features.cols() == 0)
    throw DataError("replacement feature matrix has the wrong shape");
  FeaturedGraph g = *this;
  g.features_ = std::move(features);
  return g;
}

FeaturedGraph FeaturedGraph::renamed(std::string name) const {
  FeaturedGraph g = *this;
  g.name_ = std::move(name);
  return g;
}

RootedGraph::RootedGraph(FeaturedGraph g, NodeId r) : graph(std::move(g)), root(r) {
  if (root >= graph.num_nodes()) throw std::invalid_argument("root outside the graph");
}

FeaturedGraph preprocess_zero_features(const FeaturedGraph& g, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  DenseMatrix f = g.features();
  for (double& x : f.data())
    if (x == 0.0) x = epsilon;
  return g.with_features(std::move(f));
}

FeaturedGraph permute(const FeaturedGraph& g, std::span<const NodeId> perm) {
  const std::size_t n = g.num_nodes();
  if (perm.size() != n) throw std::invalid_argument("permutation has the wrong length");
  std::vector<bool> seen(n, false);
  for (NodeId p : perm) {
    if (p >= n || seen[p]) throw std::invalid_argument("permutation is not a bijection");
    seen[p] = true;
  }
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) edges.push_back({perm[e.u], perm[e.v]});
  DenseMatrix f(n, g.num_channels());
  for (NodeId v = 0; v < n; ++v)
    for (std::size_t c = 0; c < g.num_channels(); ++c) f(perm[v], c) = g.feature(v, c);
  return FeaturedGraph::build(n, edges, std::move(f), g.name());
}

}  // namespace homcount
