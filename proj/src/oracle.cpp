#include "homcount/oracle.hpp"

#include <cmath>
#include <string>

#include "homcount/errors.hpp"

namespace homcount {

namespace {

struct SearchPlan {
  std::vector<NodeId> order;                     // pattern vertices, BFS from root
  std::vector<NodeId> anchor;                    // BFS parent (already placed)
  std::vector<std::vector<NodeId>> back_edges;   // other placed neighbors to check
};

SearchPlan plan_search(const RootedPattern& pattern) {
  const FeaturedGraph& f = pattern.structure;
  const std::size_t k = f.num_nodes();
  if (pattern.root >= k) throw std::invalid_argument("pattern root out of range");
  if (!is_connected(f)) throw std::invalid_argument("pattern '" + pattern.name + "' is disconnected");
  SearchPlan plan;
  std::vector<std::size_t> position(k, k);
  std::vector<NodeId> parent(k, k);
  plan.order.push_back(pattern.root);
  position[pattern.root] = 0;
  for (std::size_t head = 0; head < plan.order.size(); ++head)
    for (NodeId u : f.neighbors(plan.order[head]))
      if (position[u] == k) {
        position[u] = plan.order.size();
        parent[u] = plan.order[head];
        plan.order.push_back(u);
      }
  plan.anchor.resize(k);
  plan.back_edges.resize(k);
  for (std::size_t i = 1; i < k; ++i) {
    const NodeId x = plan.order[i];
    plan.anchor[i] = parent[x];
    for (NodeId y : f.neighbors(x))
      if (position[y] < i && y != parent[x]) plan.back_edges[i].push_back(y);
  }
  return plan;
}

void check_limits(const FeaturedGraph& g, const RootedPattern& pattern, const OracleLimits& limits) {
  const double maps = std::pow(static_cast<double>(g.num_nodes()),
                               static_cast<double>(pattern.order()) - 1.0);
  if (maps > limits.max_maps && !limits.force)
    throw SizeGuardError("brute force for pattern '" + pattern.name + "' would try " +
                         std::to_string(maps) + " maps");
}

// Depth-first over the plan; image[x] is the target of pattern vertex x.
template <typename T>
T enumerate(const FeaturedGraph& g, const std::vector<T>& w, const SearchPlan& plan,
            std::vector<NodeId>& image, std::size_t i, const T& weight) {
  if (i == plan.order.size()) return weight;
  const NodeId x = plan.order[i];
  T total(0);
  for (NodeId target : g.neighbors(image[plan.anchor[i]])) {
    bool ok = true;
    for (NodeId y : plan.back_edges[i])
      if (!g.adjacent(target, image[y])) {
        ok = false;
        break;
      }
    if (!ok) continue;
    image[x] = target;
    total += enumerate(g, w, plan, image, i + 1, T(weight * w[target]));
  }
  return total;
}

template <typename T>
T rooted(const FeaturedGraph& g, const std::vector<T>& w, const RootedPattern& pattern,
         const SearchPlan& plan, NodeId v) {
  if (v >= g.num_nodes()) throw std::invalid_argument("target node out of range");
  std::vector<NodeId> image(pattern.order(), 0);
  image[pattern.root] = v;
  return enumerate(g, w, plan, image, 1, w[v]);
}

}  // namespace

double brute_force_rooted(const FeaturedGraph& g, std::size_t channel, const RootedPattern& pattern,
                          NodeId v, const OracleLimits& limits) {
  check_limits(g, pattern, limits);
  return rooted(g, g.channel(channel), pattern, plan_search(pattern), v);
}

HomCountVector brute_force_all(const FeaturedGraph& g, std::size_t channel,
                               const RootedPattern& pattern, const OracleLimits& limits) {
  check_limits(g, pattern, limits);
  const auto plan = plan_search(pattern);
  const auto w = g.channel(channel);
  HomCountVector out(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) out[v] = rooted(g, w, pattern, plan, v);
  return out;
}

BigInt brute_force_rooted_exact(const FeaturedGraph& g, const RootedPattern& pattern, NodeId v,
                                const OracleLimits& limits) {
  check_limits(g, pattern, limits);
  const std::vector<BigInt> w(g.num_nodes(), BigInt(1));
  return rooted(g, w, pattern, plan_search(pattern), v);
}

ExactCountVector brute_force_all_exact(const FeaturedGraph& g, const RootedPattern& pattern,
                                       const OracleLimits& limits) {
  check_limits(g, pattern, limits);
  const auto plan = plan_search(pattern);
  const std::vector<BigInt> w(g.num_nodes(), BigInt(1));
  ExactCountVector out(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) out[v] = rooted(g, w, pattern, plan, v);
  return out;
}

}  // namespace homcount
