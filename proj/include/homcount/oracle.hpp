#pragma once

#include <cstddef>

#include "homcount/graph.hpp"
#include "homcount/hom.hpp"
#include "homcount/patterns.hpp"

namespace homcount {

struct OracleLimits {
  /// Refuse when |V(G)|^(|V(F)|-1) exceeds this many candidate maps.
  double max_maps = 1e10;
  bool force = false;
};

/// Brute-force weighted rooted homomorphism count: sums, over all
/// edge-preserving maps with root -> v, the product of the images' weights.
double brute_force_rooted(const FeaturedGraph& g, std::size_t channel, const RootedPattern& pattern,
                          NodeId v, const OracleLimits& limits = {});
HomCountVector brute_force_all(const FeaturedGraph& g, std::size_t channel,
                               const RootedPattern& pattern, const OracleLimits& limits = {});

/// Same enumeration in exact integer arithmetic with every weight equal to 1.
BigInt brute_force_rooted_exact(const FeaturedGraph& g, const RootedPattern& pattern, NodeId v,
                                const OracleLimits& limits = {});
ExactCountVector brute_force_all_exact(const FeaturedGraph& g, const RootedPattern& pattern,
                                       const OracleLimits& limits = {});

}  // namespace homcount
