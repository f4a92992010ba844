#pragma once

// Mention heads: the "highest" node of a span in the dependency tree.

#include <algorithm>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corefud/error.hpp"
#include "corefud/model.hpp"

namespace corefud {

struct HeadChoice {
  NodeIndex head = kNoNode;
  std::vector<NodeIndex> candidates;  // treelet roots of the span
  HeadRule rule = HeadRule::HighestNode;
};

// Nodes of `nodes` whose tree parent lies outside the set or is absent.
inline std::vector<NodeIndex> treelet_roots(const NodeTable& table,
                                            std::span<const NodeIndex> nodes) {
  std::vector<NodeIndex> roots;
  for (NodeIndex n : nodes) {
    NodeIndex p = table.tree_parent(n);
    if (p == kNoNode || !std::binary_search(nodes.begin(), nodes.end(), p)) roots.push_back(n);
  }
  return roots;
}

// Distance to the tree root following tree_parent; nullopt on a cycle.
inline std::optional<int> tree_depth(const NodeTable& table, NodeIndex n) {
  int depth = 0;
  const auto limit = static_cast<int>(table.size());
  while ((n = table.tree_parent(n)) != kNoNode) {
    if (++depth > limit) return std::nullopt;
  }
  return depth;
}

// Head of the mention spanning `nodes` (sorted). A `provided` 1-based index
// from the opening bracket wins when it is in range; otherwise the treelet
// root with the smallest depth, preferring surface words, then the earliest.
inline HeadChoice find_head(const NodeTable& table, std::span<const NodeIndex> nodes,
                            std::optional<int> provided = std::nullopt,
                            Diagnostics* warnings = nullptr, std::string_view source = {}) {
  HeadChoice out;
  if (nodes.empty()) return out;
  if (provided) {
    if (*provided >= 1 && static_cast<std::size_t>(*provided) <= nodes.size()) {
      out.head = nodes[static_cast<std::size_t>(*provided - 1)];
      out.candidates = {out.head};
      out.rule = HeadRule::Provided;
      return out;
    }
    warn(warnings, std::string(source), table.token_of(nodes.front()).line_no(),
         "head index " + std::to_string(*provided) + " outside a mention of " +
             std::to_string(nodes.size()) + " nodes; computing the head from the tree");
  }

  out.candidates = treelet_roots(table, nodes);
  if (out.candidates.empty()) {
    // Every node has its parent inside the span: the tree has a cycle.
    warn(warnings, std::string(source), table.token_of(nodes.front()).line_no(),
         "dependency cycle inside a mention; using its first node as head");
    out.head = nodes.front();
    out.candidates = {out.head};
    return out;
  }
  struct Key {
    int depth;
    bool empty;
    NodeIndex position;
    bool operator<(const Key& o) const {
      if (depth != o.depth) return depth < o.depth;
      if (empty != o.empty) return !empty;
      return position < o.position;
    }
  };
  std::optional<Key> best;
  for (NodeIndex c : out.candidates) {
    auto d = tree_depth(table, c);
    if (!d) {
      warn(warnings, std::string(source), table.token_of(c).line_no(),
           "dependency cycle above a mention node; using the mention's first node as head");
      out.head = nodes.front();
      return out;
    }
    Key k{*d, table[c].is_empty, c};
    if (!best || k < *best) best = k;
  }
  out.head = best->position;
  return out;
}

// Head of an existing mention, honoring a numeric head field it carries.
inline HeadChoice find_head(const NodeTable& table, const Mention& m,
                            Diagnostics* warnings = nullptr) {
  std::optional<int> provided;
  if (m.fields.size() >= 2) {
    if (auto v = detail::parse_int(m.fields[1]); v && *v >= 1) provided = v;
  }
  return find_head(table, m.nodes, provided, warnings);
}

// UPOS of the head plus those of its `flat*` children inside the mention.
inline std::set<std::string, std::less<>> head_upos_set(const NodeTable& table, const Mention& m) {
  std::set<std::string, std::less<>> out;
  if (m.head == kNoNode) return out;
  out.emplace(table[m.head].upos);
  for (NodeIndex n : m.nodes) {
    const Node& node = table[n];
    if (node.parent == m.head && node.deprel.starts_with("flat")) out.emplace(node.upos);
  }
  return out;
}

}  // namespace corefud
