#include "homcount/data.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "homcount/embedding_io.hpp"
#include "homcount/errors.hpp"
#include "homcount/rng.hpp"

namespace homcount {

namespace {

using json = nlohmann::json;

std::vector<std::size_t> block_sizes(std::size_t n, std::size_t blocks) {
  std::vector<std::size_t> sizes(blocks, n / blocks);
  for (std::size_t b = 0; b < n % blocks; ++b) ++sizes[b];
  return sizes;
}

std::vector<int> block_of_node(const std::vector<std::size_t>& sizes) {
  std::vector<int> block;
  for (std::size_t b = 0; b < sizes.size(); ++b) block.insert(block.end(), sizes[b], static_cast<int>(b));
  return block;
}

void check_probability_pair(double p, double q, const char* what) {
  if (!(q >= 0.0 && q <= p && p <= 1.0))
    throw std::invalid_argument(std::string(what) + ": need 0 <= q <= p <= 1");
}

// Edges drawn in lexicographic (u, v) order, one uniform draw per pair.
template <typename Prob>
std::vector<Edge> sample_edges(Rng& rng, std::size_t n, Prob&& prob) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (rng.uniform01() < prob(u, v)) edges.push_back({u, v});
  return edges;
}

json spec_to_json(const SbmSpec& s) {
  json j{{"num_graphs", s.num_graphs},   {"min_nodes", s.min_nodes}, {"max_nodes", s.max_nodes},
         {"num_communities", s.num_communities}, {"p_intra", s.p_intra}, {"q_inter", s.q_inter},
         {"seed", s.seed}};
  if (s.pattern_block)
    j["pattern_block"] = {{"p_intra", s.pattern_block->p_intra}, {"q_inter", s.pattern_block->q_inter}};
  return j;
}

SbmSpec spec_from_json(const json& j) {
  SbmSpec s;
  s.num_graphs = j.at("num_graphs").get<std::size_t>();
  s.min_nodes = j.at("min_nodes").get<std::size_t>();
  s.max_nodes = j.at("max_nodes").get<std::size_t>();
  s.num_communities = j.at("num_communities").get<std::size_t>();
  s.p_intra = j.at("p_intra").get<double>();
  s.q_inter = j.at("q_inter").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("pattern_block"))
    s.pattern_block = PatternBlock{j["pattern_block"].at("p_intra").get<double>(),
                                   j["pattern_block"].at("q_inter").get<double>()};
  return s;
}

std::string graph_file(std::size_t i, const char* suffix) {
  return "graph_" + std::to_string(i) + suffix;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

bool is_comment_or_blank(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

}  // namespace

void SbmSpec::validate() const {
  if (num_graphs == 0) throw std::invalid_argument("SBM spec: num_graphs must be positive");
  if (num_communities == 0) throw std::invalid_argument("SBM spec: num_communities must be positive");
  if (min_nodes > max_nodes) throw std::invalid_argument("SBM spec: empty node-count range");
  const std::size_t blocks = num_communities + (pattern_block ? 1 : 0);
  if (min_nodes < blocks)
    throw std::invalid_argument("SBM spec: need at least one node per block (min_nodes >= " +
                                std::to_string(blocks) + ")");
  check_probability_pair(p_intra, q_inter, "SBM spec");
  if (pattern_block) check_probability_pair(pattern_block->p_intra, pattern_block->q_inter, "pattern block");
}

SbmSpec default_cluster_spec() { return SbmSpec{}; }

SbmSpec default_pattern_spec() {
  SbmSpec s;
  s.min_nodes = 44;
  s.max_nodes = 60;
  s.num_communities = 5;
  s.p_intra = 0.5;
  s.q_inter = 0.35;
  s.pattern_block = PatternBlock{0.5, 0.5};
  return s;
}

std::size_t LabeledDataset::total_nodes() const {
  std::size_t n = 0;
  for (const auto& g : graphs) n += g.num_nodes();
  return n;
}

std::vector<int> LabeledDataset::flat_labels() const {
  std::vector<int> out;
  for (const auto& l : labels) out.insert(out.end(), l.begin(), l.end());
  return out;
}

void LabeledDataset::validate() const {
  if (graphs.size() != labels.size())
    throw DataError("dataset has " + std::to_string(graphs.size()) + " graphs but " +
                    std::to_string(labels.size()) + " label vectors");
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (labels[i].size() != graphs[i].num_nodes())
      throw DataError("graph " + std::to_string(i) + " has " + std::to_string(graphs[i].num_nodes()) +
                      " nodes but " + std::to_string(labels[i].size()) + " labels");
    for (int y : labels[i])
      if (y < 0 || static_cast<std::size_t>(y) >= num_classes)
        throw DataError("label " + std::to_string(y) + " outside [0," + std::to_string(num_classes) + ")");
  }
}

LabeledDataset gen_cluster_like(const SbmSpec& spec) {
  spec.validate();
  if (spec.pattern_block) throw std::invalid_argument("cluster-like datasets take no pattern block");
  LabeledDataset ds;
  ds.name = "cluster-like";
  ds.kind = "cluster";
  ds.num_classes = spec.num_communities;
  ds.spec = spec;
  for (std::size_t i = 0; i < spec.num_graphs; ++i) {
    Rng rng = Rng::substream(spec.seed, i);
    const std::size_t n = rng.between(spec.min_nodes, spec.max_nodes);
    const auto sizes = block_sizes(n, spec.num_communities);
    const auto block = block_of_node(sizes);
    const auto edges = sample_edges(rng, n, [&](NodeId u, NodeId v) {
      return block[u] == block[v] ? spec.p_intra : spec.q_inter;
    });
    DenseMatrix features(n, 1, 0.0);
    std::size_t start = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      features(start + rng.below(sizes[c]), 0) = static_cast<double>(c + 1);
      start += sizes[c];
    }
    ds.graphs.push_back(FeaturedGraph::build(n, edges, std::move(features), "graph_" + std::to_string(i)));
    ds.labels.push_back(block);
  }
  return ds;
}

LabeledDataset gen_pattern_like(const SbmSpec& spec) {
  spec.validate();
  if (!spec.pattern_block) throw std::invalid_argument("pattern-like datasets need a pattern block");
  const PatternBlock pb = *spec.pattern_block;
  const int pattern = static_cast<int>(spec.num_communities);
  LabeledDataset ds;
  ds.name = "pattern-like";
  ds.kind = "pattern";
  ds.num_classes = 2;
  ds.spec = spec;
  for (std::size_t i = 0; i < spec.num_graphs; ++i) {
    Rng rng = Rng::substream(spec.seed, i);
    const std::size_t n = rng.between(spec.min_nodes, spec.max_nodes);
    const auto block = block_of_node(block_sizes(n, spec.num_communities + 1));
    const auto edges = sample_edges(rng, n, [&](NodeId u, NodeId v) {
      const bool pu = block[u] == pattern, pv = block[v] == pattern;
      if (pu && pv) return pb.p_intra;
      if (pu || pv) return pb.q_inter;
      return block[u] == block[v] ? spec.p_intra : spec.q_inter;
    });
    DenseMatrix features(n, 1);
    for (NodeId v = 0; v < n; ++v) features(v, 0) = static_cast<double>(1 + rng.below(3));
    std::vector<int> labels(n);
    for (NodeId v = 0; v < n; ++v) labels[v] = block[v] == pattern ? 1 : 0;
    ds.graphs.push_back(FeaturedGraph::build(n, edges, std::move(features), "graph_" + std::to_string(i)));
    ds.labels.push_back(std::move(labels));
  }
  return ds;
}

std::vector<Edge> read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream fields(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra) || u < 0 || v < 0)
      throw DataError("edge list line " + std::to_string(line_no) + ": expected 'u v', got '" + line + "'");
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }
  return edges;
}

void write_edge_list(const FeaturedGraph& g, std::ostream& out) {
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

DenseMatrix read_feature_csv(std::istream& in) {
  std::vector<double> data;
  std::size_t cols = 0, rows = 0;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (is_comment_or_blank(line)) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (first) {
      first = false;
      bool numeric = true;
      for (const auto& c : cells) {
        try {
          parse_double(c);
        } catch (const DataError&) {
          numeric = false;
        }
      }
      if (!numeric) continue;  // header row
    }
    if (rows == 0) cols = cells.size();
    if (cells.size() != cols)
      throw DataError("feature CSV row " + std::to_string(rows + 1) + " has " + std::to_string(cells.size()) +
                      " columns, expected " + std::to_string(cols));
    for (const auto& c : cells) data.push_back(parse_double(c));
    ++rows;
  }
  return DenseMatrix(rows, cols, std::move(data));
}

void write_feature_csv(const DenseMatrix& features, std::ostream& out) {
  for (std::size_t c = 0; c < features.cols(); ++c) out << (c ? "," : "") << 'f' << c;
  out << '\n';
  for (std::size_t r = 0; r < features.rows(); ++r) {
    for (std::size_t c = 0; c < features.cols(); ++c) out << (c ? "," : "") << format_double(features(r, c));
    out << '\n';
  }
}

std::vector<int> read_labels(std::istream& in) {
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream fields(line);
    long long y = -1;
    std::string extra;
    if (!(fields >> y) || (fields >> extra) || y < 0)
      throw DataError("label line " + std::to_string(line_no) + ": expected a non-negative integer");
    labels.push_back(static_cast<int>(y));
  }
  return labels;
}

void write_labels(const std::vector<int>& labels, std::ostream& out) {
  for (int y : labels) out << y << '\n';
}

FeaturedGraph load_graph(const std::filesystem::path& edges_path,
                         const std::optional<std::filesystem::path>& features_path,
                         std::optional<std::size_t> nodes) {
  auto in = open_input(edges_path);
  const auto edges = read_edge_list(in);
  std::optional<DenseMatrix> features;
  if (features_path) {
    auto fin = open_input(*features_path);
    features = read_feature_csv(fin);
  }
  std::size_t n = 0;
  if (features) {
    n = features->rows();
  } else if (nodes) {
    n = *nodes;
  } else {
    for (const Edge& e : edges) n = std::max({n, e.u + 1, e.v + 1});
  }
  return FeaturedGraph::build(n, edges, std::move(features), edges_path.stem().string());
}

std::vector<int> load_labels(const std::filesystem::path& file) {
  auto in = open_input(file);
  return read_labels(in);
}

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& dir) {
  ds.validate();
  std::filesystem::create_directories(dir);
  json meta{{"name", ds.name}, {"num_classes", ds.num_classes}, {"num_graphs", ds.graphs.size()}};
  if (!ds.kind.empty()) meta["kind"] = ds.kind;
  if (ds.spec) meta["spec"] = spec_to_json(*ds.spec);
  open_output(dir / "meta.json") << meta.dump(2) << '\n';
  for (std::size_t i = 0; i < ds.graphs.size(); ++i) {
    auto edges = open_output(dir / graph_file(i, ".edges"));
    write_edge_list(ds.graphs[i], edges);
    auto features = open_output(dir / graph_file(i, ".features.csv"));
    write_feature_csv(ds.graphs[i].features(), features);
    auto labels = open_output(dir / graph_file(i, ".labels"));
    write_labels(ds.labels[i], labels);
  }
}

LabeledDataset load_dataset(const std::filesystem::path& dir) {
  json meta;
  try {
    meta = json::parse(open_input(dir / "meta.json"));
  } catch (const json::exception& e) {
    throw DataError("bad meta.json in " + dir.string() + ": " + e.what());
  }
  LabeledDataset ds;
  std::size_t count = 0;
  try {
    ds.name = meta.at("name").get<std::string>();
    ds.num_classes = meta.at("num_classes").get<std::size_t>();
    count = meta.at("num_graphs").get<std::size_t>();
    ds.kind = meta.value("kind", std::string{});
    if (meta.contains("spec")) ds.spec = spec_from_json(meta["spec"]);
  } catch (const json::exception& e) {
    throw DataError("bad meta.json in " + dir.string() + ": " + e.what());
  }

  std::size_t on_disk = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.starts_with("graph_") && name.ends_with(".labels")) ++on_disk;
  }
  if (on_disk != count)
    throw DataError("meta.json declares " + std::to_string(count) + " graphs but " + std::to_string(on_disk) +
                    " label files exist");

  for (std::size_t i = 0; i < count; ++i) {
    const auto edges_path = dir / graph_file(i, ".edges");
    const auto features_path = dir / graph_file(i, ".features.csv");
    if (!std::filesystem::exists(edges_path)) throw DataError("missing " + edges_path.string());
    auto labels = load_labels(dir / graph_file(i, ".labels"));
    std::optional<std::filesystem::path> features;
    if (std::filesystem::exists(features_path)) features = features_path;
    auto g = load_graph(edges_path, features, labels.size());
    if (g.num_nodes() != labels.size())
      throw DataError("graph " + std::to_string(i) + ": " + std::to_string(g.num_nodes()) + " feature rows but " +
                      std::to_string(labels.size()) + " labels");
    ds.graphs.push_back(g.renamed("graph_" + std::to_string(i)));
    ds.labels.push_back(std::move(labels));
  }
  ds.validate();
  return ds;
}

}  // namespace homcount
