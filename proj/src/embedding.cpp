#include "homcount/embedding.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>

#include "homcount/parallel.hpp"

namespace homcount {

namespace {

// One unit of work: a batch of family patterns on one channel. Path and
// cycle patterns share a single walk iteration per channel.
struct Task {
  std::size_t channel = 0;
  PatternShape shape = PatternShape::tree;
  std::vector<std::size_t> patterns;
};

std::vector<Task> plan_tasks(const PatternFamily& family, std::size_t channels) {
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < channels; ++c) {
    std::optional<std::size_t> path_task, cycle_task;
    for (std::size_t i = 0; i < family.size(); ++i) {
      const PatternShape shape = classify(family.patterns[i]);
      std::optional<std::size_t>* shared = shape == PatternShape::path    ? &path_task
                                           : shape == PatternShape::cycle ? &cycle_task
                                                                          : nullptr;
      if (shared && *shared) {
        tasks[**shared].patterns.push_back(i);
        continue;
      }
      if (shared) *shared = tasks.size();
      tasks.push_back({c, shape, {i}});
    }
  }
  return tasks;
}

std::vector<HomCountVector> run_task(const FeaturedGraph& g, const PatternFamily& family,
                                     const Task& task, const CountOptions& options) {
  std::vector<HomCountVector> out;
  if (task.shape == PatternShape::path) {
    std::size_t max_k = 0;
    for (std::size_t i : task.patterns) max_k = std::max(max_k, family.patterns[i].order());
    auto counts = count_paths(g, task.channel, max_k);
    for (std::size_t i : task.patterns) out.push_back(counts.at(family.patterns[i].order()));
  } else if (task.shape == PatternShape::cycle) {
    std::vector<std::size_t> ks;
    for (std::size_t i : task.patterns) ks.push_back(family.patterns[i].order());
    auto counts = count_cycles(g, task.channel, ks);
    for (std::size_t k : ks) out.push_back(counts.at(k));
  } else {
    for (std::size_t i : task.patterns)
      out.push_back(count_rooted(g, task.channel, family.patterns[i], options));
  }
  return out;
}

std::string column_label(const RootedPattern& p, std::size_t channel) {
  return p.name + ":ch" + std::to_string(channel);
}

std::size_t total_rows(std::span<const FeaturedGraph> graphs) {
  std::size_t rows = 0;
  for (const auto& g : graphs) rows += g.num_nodes();
  return rows;
}

EmbeddingMatrix select_columns(const EmbeddingMatrix& e, const std::vector<bool>& keep) {
  EmbeddingMatrix out;
  std::vector<std::size_t> cols;
  for (std::size_t c = 0; c < e.cols(); ++c)
    if (keep[c]) cols.push_back(c);
  out.values = DenseMatrix(e.rows(), cols.size());
  for (std::size_t r = 0; r < e.rows(); ++r)
    for (std::size_t j = 0; j < cols.size(); ++j) out.values(r, j) = e.values(r, cols[j]);
  for (std::size_t c : cols) out.labels.push_back(e.labels[c]);
  out.source = e.source;
  out.partial = e.partial;
  return out;
}

const RootedPattern& resolve_pattern(const std::string& name, const PatternFamily& family,
                                     std::optional<RootedPattern>& storage) {
  if (const RootedPattern* p = family.find(name)) return *p;
  storage = pattern_from_name(name);
  return *storage;
}

double signed_log1p(double x) { return std::copysign(std::log1p(std::abs(x)), x); }

}  // namespace

EmbeddingMatrix embed_graphs(std::span<const FeaturedGraph> graphs, const PatternFamily& family,
                             bool tensor, const EmbedOptions& options) {
  if (family.empty()) throw std::invalid_argument("cannot embed with an empty pattern family");
  if (graphs.empty()) throw std::invalid_argument("no graphs to embed");
  std::size_t channels = 1;
  if (tensor) {
    channels = graphs.front().num_channels();
    for (const auto& g : graphs)
      if (g.num_channels() != channels)
        throw std::invalid_argument("tensor embedding needs the same channel count on every graph");
  }

  const std::size_t width = family.size();
  EmbeddingMatrix e;
  e.values = DenseMatrix(total_rows(graphs), width * channels);
  for (std::size_t c = 0; c < channels; ++c)
    for (const auto& p : family.patterns) e.labels.push_back(column_label(p, c));
  e.source = std::string(tensor ? "tensor " : "") + std::string(to_string(family.kind)) + ":" +
             std::to_string(family.max_order);
  if (graphs.size() == 1 && !graphs.front().name().empty())
    e.source = graphs.front().name() + " " + e.source;

  std::vector<std::size_t> offsets{0};
  for (const auto& g : graphs) offsets.push_back(offsets.back() + g.num_nodes());

  const auto tasks = plan_tasks(family, channels);
  std::vector<char> done(tasks.size(), 0);
  parallel_for(tasks.size(), options.threads, [&](std::size_t t) {
    if (options.deadline && std::chrono::steady_clock::now() >= *options.deadline) return;
    const Task& task = tasks[t];
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      const auto cols = run_task(graphs[gi], family, task, options.count);
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const std::size_t col = task.channel * width + task.patterns[j];
        for (std::size_t v = 0; v < cols[j].size(); ++v) e.values(offsets[gi] + v, col) = cols[j][v];
      }
    }
    done[t] = 1;
  });

  if (std::all_of(done.begin(), done.end(), [](char d) { return d != 0; })) return e;
  std::vector<bool> keep(e.cols(), false);
  for (std::size_t t = 0; t < tasks.size(); ++t)
    if (done[t])
      for (std::size_t i : tasks[t].patterns) keep[tasks[t].channel * width + i] = true;
  e.partial = true;
  return select_columns(e, keep);
}

EmbeddingMatrix embed_plain(const FeaturedGraph& g, const PatternFamily& family,
                            const EmbedOptions& options) {
  return embed_graphs(std::span(&g, 1), family, false, options);
}

EmbeddingMatrix embed_tensor(const FeaturedGraph& g, const PatternFamily& family,
                             const EmbedOptions& options) {
  return embed_graphs(std::span(&g, 1), family, true, options);
}

EmbeddingMatrix append_raw_features(const EmbeddingMatrix& e, std::span<const FeaturedGraph> graphs) {
  if (total_rows(graphs) != e.rows())
    throw std::invalid_argument("embedding has " + std::to_string(e.rows()) +
                                " rows but the graphs have " + std::to_string(total_rows(graphs)) + " nodes");
  const std::size_t m = graphs.empty() ? 0 : graphs.front().num_channels();
  for (const auto& g : graphs)
    if (g.num_channels() != m) throw std::invalid_argument("graphs disagree on feature count");
  EmbeddingMatrix out;
  out.values = DenseMatrix(e.rows(), e.cols() + m);
  std::size_t r = 0;
  for (const auto& g : graphs)
    for (NodeId v = 0; v < g.num_nodes(); ++v, ++r) {
      for (std::size_t c = 0; c < e.cols(); ++c) out.values(r, c) = e.values(r, c);
      for (std::size_t j = 0; j < m; ++j) out.values(r, e.cols() + j) = g.feature(v, j);
    }
  out.labels = e.labels;
  for (std::size_t j = 0; j < m; ++j) out.labels.push_back("rawfeat:" + std::to_string(j));
  out.source = e.source.empty() ? "features" : e.source + " + features";
  out.partial = e.partial;
  return out;
}

EmbeddingMatrix append_raw_features(const EmbeddingMatrix& e, const FeaturedGraph& g) {
  return append_raw_features(e, std::span(&g, 1));
}

EmbeddingMatrix concat_ensemble(std::span<const EmbeddingMatrix> parts) {
  EmbeddingMatrix out;
  if (parts.empty()) return out;
  std::size_t rows = 0, cols = 0;
  bool have_rows = false;
  std::set<std::string> seen;
  for (const auto& p : parts) {
    if (p.cols() == 0) continue;
    if (have_rows && p.rows() != rows) throw std::invalid_argument("ensemble members have different row counts");
    rows = p.rows();
    have_rows = true;
    cols += p.cols();
    for (const auto& l : p.labels)
      if (!seen.insert(l).second) throw std::invalid_argument("duplicate column label '" + l + "' in ensemble");
  }
  if (!have_rows) return parts.front();
  out.values = DenseMatrix(rows, cols);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    if (p.cols() == 0) continue;
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < p.cols(); ++c) out.values(r, offset + c) = p.values(r, c);
    offset += p.cols();
    out.labels.insert(out.labels.end(), p.labels.begin(), p.labels.end());
    out.source += (out.source.empty() ? "" : " + ") + p.source;
    out.partial = out.partial || p.partial;
  }
  return out;
}

EmbeddingMatrix log_scale(const EmbeddingMatrix& e) {
  EmbeddingMatrix out = e;
  for (double& x : out.values.data()) x = signed_log1p(x);
  for (auto& l : out.labels) l = "log:" + l;
  return out;
}

EmbeddingMatrix density(const EmbeddingMatrix& e, std::span<const FeaturedGraph> graphs,
                        const PatternFamily& family) {
  if (total_rows(graphs) != e.rows()) throw std::invalid_argument("embedding rows do not match the graphs");
  std::vector<double> exponents(e.cols());
  for (std::size_t c = 0; c < e.cols(); ++c) {
    const ColumnLabel label = parse_column_label(e.labels[c]);
    if (label.raw_feature || !label.transforms.empty())
      throw std::invalid_argument("density needs raw count columns, got '" + e.labels[c] + "'");
    std::optional<RootedPattern> storage;
    exponents[c] = static_cast<double>(resolve_pattern(label.pattern, family, storage).order()) - 1.0;
  }
  EmbeddingMatrix out = e;
  std::size_t r = 0;
  for (const auto& g : graphs) {
    const double n = static_cast<double>(g.num_nodes());
    for (NodeId v = 0; v < g.num_nodes(); ++v, ++r)
      for (std::size_t c = 0; c < e.cols(); ++c) out.values(r, c) /= std::pow(n, exponents[c]);
  }
  for (auto& l : out.labels) l = "dens:" + l;
  return out;
}

EmbeddingMatrix density(const EmbeddingMatrix& e, const FeaturedGraph& g, const PatternFamily& family) {
  return density(e, std::span(&g, 1), family);
}

ColumnLabel parse_column_label(std::string_view label) {
  ColumnLabel out;
  std::string_view rest = label;
  for (;;) {
    if (rest.starts_with("log:")) {
      out.transforms.emplace_back("log");
      rest.remove_prefix(4);
    } else if (rest.starts_with("dens:")) {
      out.transforms.emplace_back("dens");
      rest.remove_prefix(5);
    } else {
      break;
    }
  }
  if (rest.starts_with("rawfeat:")) {
    const std::string digits(rest.substr(8));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed column label '" + std::string(label) + "'");
    out.raw_feature = std::stoul(digits);
    return out;
  }
  const auto pos = rest.rfind(":ch");
  if (pos == std::string_view::npos || pos == 0 || pos + 3 == rest.size())
    throw std::invalid_argument("malformed column label '" + std::string(label) + "'");
  const std::string digits(rest.substr(pos + 3));
  if (digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("malformed column label '" + std::string(label) + "'");
  out.pattern = std::string(rest.substr(0, pos));
  out.channel = std::stoul(digits);
  return out;
}

std::string format_column_label(const ColumnLabel& label) {
  std::string out;
  for (const auto& t : label.transforms) out += t + ":";
  if (label.raw_feature) return out + "rawfeat:" + std::to_string(*label.raw_feature);
  return out + label.pattern + ":ch" + std::to_string(label.channel);
}

std::vector<double> recompute_column(std::string_view text, const FeaturedGraph& g,
                                     const PatternFamily& family, const CountOptions& options) {
  const ColumnLabel label = parse_column_label(text);
  std::vector<double> col;
  double exponent = 0.0;
  if (label.raw_feature) {
    col = g.channel(*label.raw_feature);
  } else {
    std::optional<RootedPattern> storage;
    const RootedPattern& p = resolve_pattern(label.pattern, family, storage);
    col = count_rooted(g, label.channel, p, options);
    exponent = static_cast<double>(p.order()) - 1.0;
  }
  for (auto it = label.transforms.rbegin(); it != label.transforms.rend(); ++it) {
    if (*it == "log") {
      for (double& x : col) x = signed_log1p(x);
    } else {
      const double denom = std::pow(static_cast<double>(g.num_nodes()), exponent);
      for (double& x : col) x /= denom;
    }
  }
  return col;
}

}  // namespace homcount
