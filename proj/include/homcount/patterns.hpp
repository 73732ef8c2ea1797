#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "homcount/graph.hpp"

namespace homcount {

/// A connected plain left-hand graph with a distinguished root.
struct RootedPattern {
  FeaturedGraph structure;
  NodeId root = 0;
  std::string name;

  std::size_t order() const { return structure.num_nodes(); }
};

enum class FamilyKind { trees, binary_trees, cycles, paths, custom };

std::string_view to_string(FamilyKind kind);
/// Accepts "trees", "binary-trees"/"btrees", "cycles", "paths", "custom".
FamilyKind parse_family_kind(std::string_view text);

/// Ordered list of pairwise non-isomorphic rooted patterns.
struct PatternFamily {
  FamilyKind kind = FamilyKind::custom;
  std::size_t max_order = 0;
  std::vector<RootedPattern> patterns;

  std::size_t size() const { return patterns.size(); }
  bool empty() const { return patterns.empty(); }
  /// Pattern with the given name, or nullptr.
  const RootedPattern* find(std::string_view name) const;
};

/// One representative per free tree of order <= max_order, rooted at a
/// centroid. Orders above 12 are allowed but produce a warning on stderr.
PatternFamily enumerate_trees(std::size_t max_order);
/// Full binary trees (children unordered) with at most max_order nodes.
PatternFamily enumerate_binary_trees(std::size_t max_order);
/// C3 .. C_max_order rooted at node 0.
PatternFamily enumerate_cycles(std::size_t max_order);
/// P1 .. P_max_order rooted at the endpoint node 0.
PatternFamily enumerate_paths(std::size_t max_order);
PatternFamily enumerate_family(FamilyKind kind, std::size_t max_order);

/// Reads a custom family: blocks of `name`, `root <i>`, `edges u-v,...`,
/// separated by blank lines; `#` starts a comment line.
PatternFamily parse_custom_family(std::istream& in);
PatternFamily parse_custom_family(const std::filesystem::path& file);

/// Rebuilds a built-in pattern from its canonical name (`C5`, `P4`,
/// `tree5:01221`, `btree3:011`). Throws std::invalid_argument otherwise.
RootedPattern pattern_from_name(std::string_view name);

RootedPattern make_cycle(std::size_t k);
RootedPattern make_path(std::size_t k);
/// Builds a rooted tree from a level sequence (root at depth 0, preorder).
RootedPattern tree_from_level_sequence(const std::vector<int>& levels, std::string name = {});

/// Canonical level sequence of the tree `t` rooted at `root`: preorder depths
/// with subtrees ordered by decreasing sequence.
std::vector<int> canonical_level_sequence(const FeaturedGraph& t, NodeId root);
std::string encode_level_sequence(const std::vector<int>& levels);
std::vector<int> decode_level_sequence(std::string_view code);

bool is_connected(const FeaturedGraph& g);
bool is_tree(const FeaturedGraph& g);

/// Code identifying a pattern up to rooted isomorphism.
std::string rooted_canonical_code(const RootedPattern& p);

}  // namespace homcount
