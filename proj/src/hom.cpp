#include "homcount/hom.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "homcount/errors.hpp"
#include "homcount/oracle.hpp"

namespace homcount {

namespace {

// Closed-walk iteration from each source v: y <- M y with M = A diag(w),
// recording y[v] after each requested number of steps.
template <typename T>
std::map<std::size_t, std::vector<T>> cycles_kernel(const FeaturedGraph& g, const std::vector<T>& w,
                                                    std::span<const std::size_t> ks) {
  std::map<std::size_t, std::vector<T>> out;
  std::size_t max_k = 0;
  for (std::size_t k : ks) {
    if (k < 2) throw std::invalid_argument("cycle length must be at least 2, got " + std::to_string(k));
    max_k = std::max(max_k, k);
    out[k].assign(g.num_nodes(), T(0));
  }
  const std::size_t n = g.num_nodes();
  std::vector<T> y(n), next(n);
  for (NodeId source = 0; source < n; ++source) {
    std::fill(y.begin(), y.end(), T(0));
    y[source] = T(1);
    for (std::size_t step = 1; step <= max_k; ++step) {
      for (NodeId a = 0; a < n; ++a) {
        T acc(0);
        for (NodeId b : g.neighbors(a)) acc += w[b] * y[b];
        next[a] = std::move(acc);
      }
      std::swap(y, next);
      if (auto it = out.find(step); it != out.end()) it->second[source] = y[source];
    }
  }
  return out;
}

template <typename T>
std::map<std::size_t, std::vector<T>> paths_kernel(const FeaturedGraph& g, const std::vector<T>& w,
                                                   std::size_t max_k) {
  if (max_k < 1) throw std::invalid_argument("max_k must be at least 1");
  const std::size_t n = g.num_nodes();
  std::map<std::size_t, std::vector<T>> out;
  out[1] = w;
  for (std::size_t k = 2; k <= max_k; ++k) {
    const auto& prev = out[k - 1];
    std::vector<T> cur(n);
    for (NodeId v = 0; v < n; ++v) {
      T acc(0);
      for (NodeId u : g.neighbors(v)) acc += prev[u];
      cur[v] = acc * w[v];
    }
    out[k] = std::move(cur);
  }
  return out;
}

// Post-order DP over the pattern tree. Every pattern vertex starts with the
// weight vector (singleton counts); finishing child t multiplies its parent
// entrywise by A^G H_t.
template <typename T>
std::vector<T> tree_kernel(const FeaturedGraph& g, const std::vector<T>& w,
                           const RootedPattern& pattern) {
  const FeaturedGraph& t = pattern.structure;
  if (!is_tree(t)) throw std::invalid_argument("pattern '" + pattern.name + "' is not a tree");
  const std::size_t k = t.num_nodes();
  const std::size_t n = g.num_nodes();

  std::vector<NodeId> parent(k, k), postorder;
  postorder.reserve(k);
  // Iterative DFS, children in ascending index order.
  std::vector<std::pair<NodeId, std::size_t>> stack{{pattern.root, 0}};
  parent[pattern.root] = pattern.root;
  while (!stack.empty()) {
    auto& [v, next_child] = stack.back();
    const auto nb = t.neighbors(v);
    while (next_child < nb.size() && nb[next_child] == parent[v]) ++next_child;
    if (next_child == nb.size()) {
      postorder.push_back(v);
      stack.pop_back();
      continue;
    }
    const NodeId child = nb[next_child++];
    parent[child] = v;
    stack.emplace_back(child, 0);
  }

  std::vector<std::vector<T>> h(k);
  for (NodeId x : postorder) {
    if (h[x].empty()) h[x] = w;
    if (x == pattern.root) break;
    const NodeId p = parent[x];
    if (h[p].empty()) h[p] = w;
    for (NodeId v = 0; v < n; ++v) {
      T acc(0);
      for (NodeId u : g.neighbors(v)) acc += h[x][u];
      h[p][v] *= acc;
    }
    std::vector<T>().swap(h[x]);
  }
  return h[pattern.root];
}

std::vector<BigInt> unit_weights(const FeaturedGraph& g) {
  return std::vector<BigInt>(g.num_nodes(), BigInt(1));
}

bool is_cycle(const FeaturedGraph& f) {
  if (f.num_nodes() < 3 || f.num_edges() != f.num_nodes()) return false;
  for (NodeId v = 0; v < f.num_nodes(); ++v)
    if (f.degree(v) != 2) return false;
  return is_connected(f);
}

void check_guard(const RootedPattern& pattern, const CountOptions& options) {
  if (pattern.order() > options.oracle_max_order && !options.force_oracle)
    throw SizeGuardError("pattern '" + pattern.name + "' has " + std::to_string(pattern.order()) +
                         " vertices; brute-force counting is limited to " +
                         std::to_string(options.oracle_max_order) + " unless forced");
}

}  // namespace

PatternShape classify(const RootedPattern& pattern) {
  const FeaturedGraph& f = pattern.structure;
  if (is_tree(f)) {
    bool path = f.num_nodes() == 1 || f.degree(pattern.root) == 1;
    for (NodeId v = 0; path && v < f.num_nodes(); ++v) path = f.degree(v) <= 2;
    return path ? PatternShape::path : PatternShape::tree;
  }
  return is_cycle(f) ? PatternShape::cycle : PatternShape::general;
}

std::map<std::size_t, HomCountVector> count_cycles(const FeaturedGraph& g, std::size_t channel,
                                                   std::span<const std::size_t> ks) {
  return cycles_kernel(g, g.channel(channel), ks);
}

std::map<std::size_t, HomCountVector> count_paths(const FeaturedGraph& g, std::size_t channel,
                                                  std::size_t max_k) {
  return paths_kernel(g, g.channel(channel), max_k);
}

HomCountVector count_tree(const FeaturedGraph& g, std::size_t channel, const RootedPattern& pattern) {
  return tree_kernel(g, g.channel(channel), pattern);
}

HomCountVector count_rooted(const FeaturedGraph& g, std::size_t channel,
                            const RootedPattern& pattern, const CountOptions& options) {
  const std::size_t k = pattern.order();
  switch (classify(pattern)) {
    case PatternShape::path: return count_paths(g, channel, k).at(k);
    case PatternShape::cycle: return count_cycles(g, channel, std::span(&k, 1)).at(k);
    case PatternShape::tree: return count_tree(g, channel, pattern);
    case PatternShape::general: break;
  }
  check_guard(pattern, options);
  return brute_force_all(g, channel, pattern, {.force = options.force_oracle});
}

double count_graph_level(const FeaturedGraph& g, std::size_t channel,
                         const RootedPattern& pattern, const CountOptions& options) {
  double total = 0.0;
  for (double x : count_rooted(g, channel, pattern, options)) total += x;
  return total;
}

std::map<std::size_t, ExactCountVector> count_cycles_exact(const FeaturedGraph& g,
                                                           std::span<const std::size_t> ks) {
  return cycles_kernel(g, unit_weights(g), ks);
}

std::map<std::size_t, ExactCountVector> count_paths_exact(const FeaturedGraph& g, std::size_t max_k) {
  return paths_kernel(g, unit_weights(g), max_k);
}

ExactCountVector count_tree_exact(const FeaturedGraph& g, const RootedPattern& pattern) {
  return tree_kernel(g, unit_weights(g), pattern);
}

ExactCountVector count_rooted_exact(const FeaturedGraph& g, const RootedPattern& pattern,
                                    const CountOptions& options) {
  const std::size_t k = pattern.order();
  switch (classify(pattern)) {
    case PatternShape::path: return count_paths_exact(g, k).at(k);
    case PatternShape::cycle: return count_cycles_exact(g, std::span(&k, 1)).at(k);
    case PatternShape::tree: return count_tree_exact(g, pattern);
    case PatternShape::general: break;
  }
  check_guard(pattern, options);
  return brute_force_all_exact(g, pattern, {.force = options.force_oracle});
}

BigInt count_graph_level_exact(const FeaturedGraph& g, const RootedPattern& pattern,
                               const CountOptions& options) {
  BigInt total = 0;
  for (const auto& x : count_rooted_exact(g, pattern, options)) total += x;
  return total;
}

}  // namespace homcount
