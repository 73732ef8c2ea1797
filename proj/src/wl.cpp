#include <algorithm>
#include <map>
#include <vector>

#include "homcount/graph.hpp"

namespace homcount {

WlColoring wl_refine(const FeaturedGraph& g) {
  const std::size_t n = g.num_nodes();
  WlColoring out;
  out.colors.assign(n, 0);
  out.num_colors = n == 0 ? 0 : 1;

  using Signature = std::pair<std::size_t, std::vector<std::size_t>>;
  std::vector<Signature> sigs(n);
  for (;;) {
    for (NodeId v = 0; v < n; ++v) {
      sigs[v].first = out.colors[v];
      auto& nb = sigs[v].second;
      nb.clear();
      for (NodeId u : g.neighbors(v)) nb.push_back(out.colors[u]);
      std::sort(nb.begin(), nb.end());
    }
    // Ids follow the sorted signature order, which does not depend on node labels.
    std::map<Signature, std::size_t> ids;
    for (const auto& s : sigs) ids.emplace(s, 0);
    std::size_t next = 0;
    for (auto& [sig, id] : ids) id = next++;

    std::vector<std::size_t> refined(n);
    for (NodeId v = 0; v < n; ++v) refined[v] = ids.at(sigs[v]);
    const bool stable = ids.size() == out.num_colors;
    out.colors = std::move(refined);
    out.num_colors = ids.size();
    ++out.rounds;
    if (stable) break;
  }
  return out;
}

}  // namespace homcount
