#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homcount/matrix.hpp"

namespace homcount {

using NodeId = std::size_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph with m >= 1 real feature channels per node.
///
/// Immutable after construction. Edges are stored normalised (u < v) and
/// sorted; neighbor lists are sorted ascending.
class FeaturedGraph {
 public:
  FeaturedGraph() = default;

  /// Validates and builds a graph. Without a feature matrix every node gets a
  /// single feature equal to 1 (a plain graph). Throws DataError on
  /// out-of-range endpoints, self-loops, duplicate edges or a feature matrix
  /// whose row count differs from n.
  static FeaturedGraph build(std::size_t n, std::span<const Edge> edges,
                             std::optional<DenseMatrix> features = std::nullopt,
                             std::string name = {});

  std::size_t num_nodes() const { return neighbors_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_channels() const { return features_.cols(); }
  const std::string& name() const { return name_; }

  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const NodeId> neighbors(NodeId v) const { return neighbors_[v]; }
  std::size_t degree(NodeId v) const { return neighbors_[v].size(); }
  bool adjacent(NodeId u, NodeId v) const;

  /// Dense 0/1 adjacency matrix A^G.
  DenseMatrix adjacency_matrix() const;

  const DenseMatrix& features() const { return features_; }
  double feature(NodeId v, std::size_t channel) const { return features_(v, channel); }
  /// One feature channel as a length-n weight vector.
  std::vector<double> channel(std::size_t channel) const;

  /// True when m = 1 and every feature equals 1.
  bool is_plain() const;

  /// Same structure with the all-ones single channel.
  FeaturedGraph plain() const;
  /// Same structure restricted to one feature channel.
  FeaturedGraph single_channel(std::size_t channel) const;
  /// Same structure with replaced features (must have n rows, >= 1 column).
  FeaturedGraph with_features(DenseMatrix features) const;
  FeaturedGraph renamed(std::string name) const;

  bool operator==(const FeaturedGraph& other) const {
    return edges_ == other.edges_ && neighbors_.size() == other.neighbors_.size() &&
           features_ == other.features_;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> neighbors_;
  DenseMatrix features_;
  std::string name_;
};

struct RootedGraph {
  FeaturedGraph graph;
  NodeId root = 0;

  RootedGraph(FeaturedGraph g, NodeId r);
};

/// Replaces every feature entry equal to zero by `epsilon` (> 0).
FeaturedGraph preprocess_zero_features(const FeaturedGraph& g, double epsilon = 0.01);

/// Relabels nodes: node v of `g` becomes node perm[v]. Features travel with
/// their node. Throws std::invalid_argument if perm is not a bijection.
FeaturedGraph permute(const FeaturedGraph& g, std::span<const NodeId> perm);

/// Stable 1-WL coloring of the plain structure (features ignored).
struct WlColoring {
  std::vector<std::size_t> colors;
  std::size_t num_colors = 0;
  std::size_t rounds = 0;
};

WlColoring wl_refine(const FeaturedGraph& g);

}  // namespace homcount
