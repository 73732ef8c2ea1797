#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "homcount/graph.hpp"

namespace homcount {

/// Extra community with its own edge densities (pattern-like datasets).
struct PatternBlock {
  double p_intra = 0.5;
  double q_inter = 0.5;
  bool operator==(const PatternBlock&) const = default;
};

/// Stochastic block model generator settings.
struct SbmSpec {
  std::size_t num_graphs = 200;
  std::size_t min_nodes = 40;
  std::size_t max_nodes = 60;
  std::size_t num_communities = 6;
  double p_intra = 0.55;
  double q_inter = 0.25;
  std::optional<PatternBlock> pattern_block;
  std::uint64_t seed = 7;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  bool operator==(const SbmSpec&) const = default;
};

/// 200 graphs, 40..60 nodes, 6 communities, p = 0.55, q = 0.25, seed 7.
SbmSpec default_cluster_spec();
/// 200 graphs, 44..60 nodes, 5 background communities (0.5, 0.35) plus a
/// pattern block (0.5, 0.5), seed 7.
SbmSpec default_pattern_spec();

struct LabeledDataset {
  std::string name;
  std::size_t num_classes = 0;
  std::vector<FeaturedGraph> graphs;
  std::vector<std::vector<int>> labels;
  /// "cluster" or "pattern" for generated data, empty otherwise.
  std::string kind;
  std::optional<SbmSpec> spec;

  std::size_t total_nodes() const;
  /// Labels of all graphs, concatenated in graph order.
  std::vector<int> flat_labels() const;
  /// Throws DataError if labels do not match the graphs or exceed num_classes.
  void validate() const;
  bool operator==(const LabeledDataset& o) const {
    return name == o.name && num_classes == o.num_classes && graphs == o.graphs &&
           labels == o.labels && kind == o.kind && spec == o.spec;
  }
};

/// Communities of even size (remainder to the front); one random node per
/// community carries feature value community+1, all others 0.
LabeledDataset gen_cluster_like(const SbmSpec& spec);
/// Background communities plus a pattern block labelled 1; features are
/// uniform noise from {1, 2, 3}.
LabeledDataset gen_pattern_like(const SbmSpec& spec);

/// Directory layout: meta.json, graph_<i>.edges, graph_<i>.features.csv,
/// graph_<i>.labels.
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& dir);
LabeledDataset load_dataset(const std::filesystem::path& dir);

/// `u v` per line, 0-indexed; blank lines and `#` comments ignored.
std::vector<Edge> read_edge_list(std::istream& in);
void write_edge_list(const FeaturedGraph& g, std::ostream& out);
/// CSV, one row per node; a first row with non-numeric cells is a header.
DenseMatrix read_feature_csv(std::istream& in);
void write_feature_csv(const DenseMatrix& features, std::ostream& out);
/// One integer class per line.
std::vector<int> read_labels(std::istream& in);
void write_labels(const std::vector<int>& labels, std::ostream& out);

/// Loads a graph from an edge list and optional feature CSV. Without
/// features the node count is `nodes` if given, else 1 + the largest endpoint.
FeaturedGraph load_graph(const std::filesystem::path& edges,
                         const std::optional<std::filesystem::path>& features = std::nullopt,
                         std::optional<std::size_t> nodes = std::nullopt);
std::vector<int> load_labels(const std::filesystem::path& file);

}  // namespace homcount
