#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "homcount/graph.hpp"
#include "homcount/patterns.hpp"

namespace homcount {

/// Entry v holds hom(F, r, G, v) for one pattern and one feature channel.
using HomCountVector = std::vector<double>;

using BigInt = boost::multiprecision::cpp_int;
/// Exact structural counts (every weight taken as 1).
using ExactCountVector = std::vector<BigInt>;

/// How count_rooted will evaluate a pattern.
enum class PatternShape {
  path,   ///< path rooted at an endpoint (includes the singleton)
  cycle,  ///< cycle on >= 3 vertices, any root
  tree,   ///< any other tree
  general ///< anything else; brute-force fallback
};

PatternShape classify(const RootedPattern& pattern);

struct CountOptions {
  /// Patterns with more vertices than this are refused by the brute-force
  /// fallback unless `force_oracle` is set.
  std::size_t oracle_max_order = 6;
  bool force_oracle = false;
};

/// Weighted rooted cycle counts, entry v of result[k] = (M^k)_vv with
/// M = A^G diag(w). All requested lengths come out of one walk iteration.
std::map<std::size_t, HomCountVector> count_cycles(const FeaturedGraph& g, std::size_t channel,
                                                   std::span<const std::size_t> ks);

/// Weighted rooted path counts for P1 .. P_max_k (root at an endpoint).
std::map<std::size_t, HomCountVector> count_paths(const FeaturedGraph& g, std::size_t channel,
                                                  std::size_t max_k);

/// Weighted rooted tree counts via post-order dynamic programming over the
/// pattern. Throws std::invalid_argument if the pattern is not a tree.
HomCountVector count_tree(const FeaturedGraph& g, std::size_t channel,
                          const RootedPattern& pattern);

/// Dispatches to the cheapest exact algorithm for the pattern's shape.
HomCountVector count_rooted(const FeaturedGraph& g, std::size_t channel,
                            const RootedPattern& pattern, const CountOptions& options = {});

/// Sum of count_rooted over all nodes (unrooted homomorphism count).
double count_graph_level(const FeaturedGraph& g, std::size_t channel,
                         const RootedPattern& pattern, const CountOptions& options = {});

std::map<std::size_t, ExactCountVector> count_cycles_exact(const FeaturedGraph& g,
                                                           std::span<const std::size_t> ks);
std::map<std::size_t, ExactCountVector> count_paths_exact(const FeaturedGraph& g, std::size_t max_k);
ExactCountVector count_tree_exact(const FeaturedGraph& g, const RootedPattern& pattern);
ExactCountVector count_rooted_exact(const FeaturedGraph& g, const RootedPattern& pattern,
                                    const CountOptions& options = {});
BigInt count_graph_level_exact(const FeaturedGraph& g, const RootedPattern& pattern,
                               const CountOptions& options = {});

}  // namespace homcount
