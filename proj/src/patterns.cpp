#include "homcount/patterns.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "homcount/errors.hpp"

namespace homcount {

namespace {

constexpr std::size_t kSoftMaxTreeOrder = 12;
constexpr std::string_view kDigits = "0123456789abcdefghijklmnopqrstuvwxyz";

std::size_t parse_size(std::string_view text, std::string_view what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Beyer-Hedetniemi successor enumeration of rooted trees as level sequences
// (root at depth 0). Calls visit for every rooted tree on k vertices.
void for_each_rooted_tree(std::size_t k, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> levels(k);
  std::iota(levels.begin(), levels.end(), 0);
  for (;;) {
    visit(levels);
    std::size_t p = k;
    for (std::size_t i = k; i-- > 1;) {
      if (levels[i] > 1) {
        p = i;
        break;
      }
    }
    if (p == k) return;
    std::size_t q = p;
    while (q-- > 0)
      if (levels[q] == levels[p] - 1) break;
    const std::size_t shift = p - q;
    for (std::size_t i = p; i < k; ++i) levels[i] = levels[i - shift];
  }
}

std::vector<NodeId> centroids(const FeaturedGraph& t) {
  const std::size_t n = t.num_nodes();
  if (n <= 2) {
    std::vector<NodeId> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }
  // Subtree sizes from an arbitrary root (0) via iterative DFS order.
  std::vector<NodeId> order, parent(n, n);
  std::vector<NodeId> stack{0};
  parent[0] = 0;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (NodeId u : t.neighbors(v))
      if (parent[u] == n) {
        parent[u] = v;
        stack.push_back(u);
      }
  }
  std::vector<std::size_t> size(n, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (*it != 0) size[parent[*it]] += size[*it];
  std::vector<std::size_t> heaviest(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    std::size_t worst = n - size[v];
    for (NodeId u : t.neighbors(v))
      if (u != 0 && parent[u] == v) worst = std::max(worst, size[u]);
    heaviest[v] = worst;
  }
  const std::size_t best = *std::min_element(heaviest.begin(), heaviest.end());
  std::vector<NodeId> out;
  for (NodeId v = 0; v < n; ++v)
    if (heaviest[v] == best) out.push_back(v);
  return out;
}

void append_subtree(const FeaturedGraph& t, NodeId v, NodeId parent, int depth,
                    std::vector<int>& out) {
  std::vector<std::vector<int>> children;
  for (NodeId u : t.neighbors(v)) {
    if (u == parent) continue;
    children.emplace_back();
    append_subtree(t, u, v, depth + 1, children.back());
  }
  std::sort(children.begin(), children.end(), std::greater<>());
  out.push_back(depth);
  for (const auto& c : children) out.insert(out.end(), c.begin(), c.end());
}

std::vector<int> free_tree_code(const FeaturedGraph& t) {
  std::vector<int> best;
  for (NodeId c : centroids(t)) best = std::max(best, canonical_level_sequence(t, c));
  return best;
}

PatternFamily sorted_family(FamilyKind kind, std::size_t max_order,
                            std::map<std::pair<std::size_t, std::vector<int>>, std::string> codes) {
  PatternFamily family;
  family.kind = kind;
  family.max_order = max_order;
  for (const auto& [key, name] : codes)
    family.patterns.push_back(tree_from_level_sequence(key.second, name));
  return family;
}

// Rooted color refinement used to prune the permutation search in
// rooted_canonical_code. Colors are canonical (sorted-signature ids).
std::vector<std::size_t> rooted_refinement(const FeaturedGraph& g, NodeId root) {
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> colors(n);
  for (NodeId v = 0; v < n; ++v) colors[v] = v == root ? 0 : 1;
  std::size_t count = n > 1 ? 2 : 1;
  using Signature = std::pair<std::size_t, std::vector<std::size_t>>;
  for (;;) {
    std::vector<Signature> sigs(n);
    for (NodeId v = 0; v < n; ++v) {
      sigs[v].first = colors[v];
      for (NodeId u : g.neighbors(v)) sigs[v].second.push_back(colors[u]);
      std::sort(sigs[v].second.begin(), sigs[v].second.end());
    }
    std::map<Signature, std::size_t> ids;
    for (const auto& s : sigs) ids.emplace(s, 0);
    std::size_t next = 0;
    for (auto& [s, id] : ids) id = next++;
    for (NodeId v = 0; v < n; ++v) colors[v] = ids.at(sigs[v]);
    if (ids.size() == count) return colors;
    count = ids.size();
  }
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::trees: return "trees";
    case FamilyKind::binary_trees: return "binary-trees";
    case FamilyKind::cycles: return "cycles";
    case FamilyKind::paths: return "paths";
    case FamilyKind::custom: return "custom";
  }
  return "custom";
}

FamilyKind parse_family_kind(std::string_view text) {
  if (text == "trees") return FamilyKind::trees;
  if (text == "binary-trees" || text == "btrees" || text == "binary_trees")
    return FamilyKind::binary_trees;
  if (text == "cycles") return FamilyKind::cycles;
  if (text == "paths") return FamilyKind::paths;
  if (text == "custom") return FamilyKind::custom;
  throw std::invalid_argument("unknown family kind '" + std::string(text) + "'");
}

const RootedPattern* PatternFamily::find(std::string_view name) const {
  for (const auto& p : patterns)
    if (p.name == name) return &p;
  return nullptr;
}

std::string encode_level_sequence(const std::vector<int>& levels) {
  const bool compact = std::all_of(levels.begin(), levels.end(),
                                   [](int l) { return l >= 0 && l < 36; });
  std::string out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (compact) {
      out.push_back(kDigits[static_cast<std::size_t>(levels[i])]);
    } else {
      if (i) out.push_back('.');
      out += std::to_string(levels[i]);
    }
  }
  return out;
}

std::vector<int> decode_level_sequence(std::string_view code) {
  std::vector<int> levels;
  if (code.find('.') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= code.size()) {
      const auto end = std::min(code.find('.', start), code.size());
      levels.push_back(static_cast<int>(parse_size(code.substr(start, end - start), "level")));
      start = end + 1;
    }
    return levels;
  }
  for (char c : code) {
    const auto pos = kDigits.find(c);
    if (pos == std::string_view::npos)
      throw std::invalid_argument("invalid level sequence character '" + std::string(1, c) + "'");
    levels.push_back(static_cast<int>(pos));
  }
  return levels;
}

std::vector<int> canonical_level_sequence(const FeaturedGraph& t, NodeId root) {
  std::vector<int> out;
  out.reserve(t.num_nodes());
  append_subtree(t, root, t.num_nodes(), 0, out);
  return out;
}

RootedPattern tree_from_level_sequence(const std::vector<int>& levels, std::string name) {
  if (levels.empty() || levels[0] != 0)
    throw std::invalid_argument("level sequence must start with the root at depth 0");
  std::vector<Edge> edges;
  std::vector<NodeId> last_at_depth{0};
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const int d = levels[i];
    if (d < 1 || static_cast<std::size_t>(d) > last_at_depth.size())
      throw std::invalid_argument("level sequence is not a valid preorder");
    edges.push_back({last_at_depth[static_cast<std::size_t>(d - 1)], i});
    last_at_depth.resize(static_cast<std::size_t>(d));
    last_at_depth.push_back(i);
  }
  return {FeaturedGraph::build(levels.size(), edges, std::nullopt, name), 0, name};
}

RootedPattern make_cycle(std::size_t k) {
  if (k < 3) throw std::invalid_argument("a cycle needs at least 3 vertices");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < k; ++i) edges.push_back({i, (i + 1) % k});
  std::string name = "C" + std::to_string(k);
  return {FeaturedGraph::build(k, edges, std::nullopt, name), 0, name};
}

RootedPattern make_path(std::size_t k) {
  if (k < 1) throw std::invalid_argument("a path needs at least 1 vertex");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < k; ++i) edges.push_back({i, i + 1});
  std::string name = "P" + std::to_string(k);
  return {FeaturedGraph::build(k, edges, std::nullopt, name), 0, name};
}

PatternFamily enumerate_trees(std::size_t max_order) {
  if (max_order < 1) throw std::invalid_argument("max_order must be at least 1");
  if (max_order > kSoftMaxTreeOrder)
    std::cerr << "warning: enumerating free trees up to order " << max_order
              << " (family size grows exponentially)\n";
  std::map<std::pair<std::size_t, std::vector<int>>, std::string> codes;
  for (std::size_t k = 1; k <= max_order; ++k) {
    for_each_rooted_tree(k, [&](const std::vector<int>& levels) {
      const auto tree = tree_from_level_sequence(levels);
      auto code = free_tree_code(tree.structure);
      const std::string name = "tree" + std::to_string(k) + ":" + encode_level_sequence(code);
      codes.emplace(std::pair{k, std::move(code)}, name);
    });
  }
  return sorted_family(FamilyKind::trees, max_order, std::move(codes));
}

PatternFamily enumerate_binary_trees(std::size_t max_order) {
  if (max_order < 1) throw std::invalid_argument("max_order must be at least 1");
  std::vector<std::set<std::vector<int>>> by_order(max_order + 1);
  by_order[1].insert({0});
  for (std::size_t n = 3; n <= max_order; n += 2) {
    for (std::size_t a = 1; a + 1 < n; a += 2) {
      const std::size_t b = n - 1 - a;
      if (b < a) break;
      for (const auto& left : by_order[a])
        for (const auto& right : by_order[b]) {
          std::vector<int> l = left, r = right;
          for (int& x : l) ++x;
          for (int& x : r) ++x;
          if (l < r) std::swap(l, r);
          std::vector<int> seq{0};
          seq.insert(seq.end(), l.begin(), l.end());
          seq.insert(seq.end(), r.begin(), r.end());
          by_order[n].insert(std::move(seq));
        }
    }
  }
  std::map<std::pair<std::size_t, std::vector<int>>, std::string> codes;
  for (std::size_t n = 1; n <= max_order; ++n)
    for (const auto& seq : by_order[n])
      codes.emplace(std::pair{n, seq}, "btree" + std::to_string(n) + ":" + encode_level_sequence(seq));
  return sorted_family(FamilyKind::binary_trees, max_order, std::move(codes));
}

PatternFamily enumerate_cycles(std::size_t max_order) {
  if (max_order < 3) throw std::invalid_argument("cycle families need max_order >= 3");
  PatternFamily family{FamilyKind::cycles, max_order, {}};
  for (std::size_t k = 3; k <= max_order; ++k) family.patterns.push_back(make_cycle(k));
  return family;
}

PatternFamily enumerate_paths(std::size_t max_order) {
  if (max_order < 1) throw std::invalid_argument("max_order must be at least 1");
  PatternFamily family{FamilyKind::paths, max_order, {}};
  for (std::size_t k = 1; k <= max_order; ++k) family.patterns.push_back(make_path(k));
  return family;
}

PatternFamily enumerate_family(FamilyKind kind, std::size_t max_order) {
  switch (kind) {
    case FamilyKind::trees: return enumerate_trees(max_order);
    case FamilyKind::binary_trees: return enumerate_binary_trees(max_order);
    case FamilyKind::cycles: return enumerate_cycles(max_order);
    case FamilyKind::paths: return enumerate_paths(max_order);
    case FamilyKind::custom: break;
  }
  throw std::invalid_argument("custom families are read from a file");
}

bool is_connected(const FeaturedGraph& g) {
  const std::size_t n = g.num_nodes();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u : g.neighbors(v))
      if (!seen[u]) {
        seen[u] = true;
        ++reached;
        stack.push_back(u);
      }
  }
  return reached == n;
}

bool is_tree(const FeaturedGraph& g) {
  return g.num_nodes() >= 1 && g.num_edges() + 1 == g.num_nodes() && is_connected(g);
}

std::string rooted_canonical_code(const RootedPattern& p) {
  const FeaturedGraph& g = p.structure;
  if (is_tree(g)) return "T" + encode_level_sequence(canonical_level_sequence(g, p.root));

  // Search over vertex orderings that list color classes in canonical color
  // order; the lexicographically smallest adjacency string is the code.
  const std::size_t n = g.num_nodes();
  const auto colors = rooted_refinement(g, p.root);
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return colors[a] < colors[b]; });
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  double orderings = 1;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && colors[order[j]] == colors[order[i]]) ++j;
    cells.emplace_back(i, j);
    for (std::size_t f = 2; f <= j - i; ++f) orderings *= static_cast<double>(f);
    i = j;
  }
  if (orderings > 5e6)
    throw SizeGuardError("pattern '" + p.name + "' is too symmetric for canonical-code search");

  std::string best;
  std::string current(n * (n - 1) / 2, '0');
  std::function<void(std::size_t)> search = [&](std::size_t cell) {
    if (cell == cells.size()) {
      std::size_t pos = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          current[pos++] = g.adjacent(order[i], order[j]) ? '1' : '0';
      if (best.empty() || current < best) best = current;
      return;
    }
    auto [lo, hi] = cells[cell];
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(lo), order.begin() + static_cast<std::ptrdiff_t>(hi));
    do {
      search(cell + 1);
    } while (std::next_permutation(order.begin() + static_cast<std::ptrdiff_t>(lo),
                                   order.begin() + static_cast<std::ptrdiff_t>(hi)));
  };
  search(0);
  std::string code = "G" + std::to_string(n) + ":";
  for (NodeId v : order) code += std::to_string(colors[v]) + ",";
  return code + best;
}

PatternFamily parse_custom_family(std::istream& in) {
  PatternFamily family{FamilyKind::custom, 0, {}};
  std::set<std::string> codes;

  struct Block {
    std::string name;
    std::optional<std::size_t> root;
    std::vector<Edge> edges;
    bool has_edges = false;
    std::size_t line = 0;
  };
  std::optional<Block> block;

  auto finish = [&] {
    if (!block) return;
    const Block b = std::move(*block);
    block.reset();
    const std::string where = "pattern '" + b.name + "' (line " + std::to_string(b.line) + ")";
    if (!b.root) throw DataError(where + ": missing 'root' line");
    if (!b.has_edges) throw DataError(where + ": missing 'edges' line");
    std::size_t n = 1;
    for (const Edge& e : b.edges) n = std::max({n, e.u + 1, e.v + 1});
    if (*b.root >= n) throw DataError(where + ": root " + std::to_string(*b.root) + " out of range");
    RootedPattern p{FeaturedGraph::build(n, b.edges, std::nullopt, b.name), *b.root, b.name};
    if (!is_connected(p.structure)) throw DataError(where + ": pattern is disconnected");
    if (family.find(p.name)) throw DataError(where + ": duplicate pattern name");
    if (!codes.insert(rooted_canonical_code(p)).second)
      throw DataError(where + ": rooted-isomorphic to an earlier pattern");
    family.max_order = std::max(family.max_order, p.order());
    family.patterns.push_back(std::move(p));
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (!line.empty() && line.front() == '#') continue;
    if (line.empty()) {
      finish();
      continue;
    }
    if (!block) {
      block = Block{std::string(line), std::nullopt, {}, false, line_no};
      continue;
    }
    const auto space = line.find_first_of(" \t");
    const std::string_view key = line.substr(0, space);
    const std::string_view rest = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
    try {
      if (key == "root") {
        block->root = parse_size(rest, "root");
      } else if (key == "edges") {
        block->has_edges = true;
        std::size_t start = 0;
        while (start < rest.size()) {
          const auto end = std::min(rest.find(',', start), rest.size());
          const auto item = trim(rest.substr(start, end - start));
          start = end + 1;
          if (item.empty()) continue;
          const auto dash = item.find('-');
          if (dash == std::string_view::npos) throw std::invalid_argument("edge '" + std::string(item) + "' lacks '-'");
          block->edges.push_back({parse_size(trim(item.substr(0, dash)), "vertex"),
                                  parse_size(trim(item.substr(dash + 1)), "vertex")});
        }
      } else {
        throw std::invalid_argument("unexpected line '" + std::string(line) + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  finish();
  if (family.empty()) throw DataError("custom family file contains no patterns");
  return family;
}

PatternFamily parse_custom_family(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open pattern file " + file.string());
  return parse_custom_family(in);
}

RootedPattern pattern_from_name(std::string_view name) {
  auto fail = [&] { return std::invalid_argument("not a built-in pattern name: '" + std::string(name) + "'"); };
  if (name.size() >= 2 && (name[0] == 'C' || name[0] == 'P') &&
      std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const std::size_t k = parse_size(name.substr(1), "pattern order");
    return name[0] == 'C' ? make_cycle(k) : make_path(k);
  }
  for (std::string_view prefix : {std::string_view("btree"), std::string_view("tree")}) {
    if (name.substr(0, prefix.size()) != prefix) continue;
    const auto colon = name.find(':');
    if (colon == std::string_view::npos) throw fail();
    const std::size_t k = parse_size(name.substr(prefix.size(), colon - prefix.size()), "pattern order");
    const auto levels = decode_level_sequence(name.substr(colon + 1));
    if (levels.size() != k) throw fail();
    auto p = tree_from_level_sequence(levels, std::string(name));
    if (canonical_level_sequence(p.structure, p.root) != levels) throw fail();
    return p;
  }
  throw fail();
}

}  // namespace homcount
