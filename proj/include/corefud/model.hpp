#pragma once

// The semantic coreference layer of a document: nodes in global word order,
// mentions as node sets and entities as clusters of mentions.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corefud/conllu.hpp"
#include "corefud/error.hpp"

namespace corefud {

// Index of a node in its document's word order.
using NodeIndex = std::int32_t;
inline constexpr NodeIndex kNoNode = -1;

struct Node {
  NodeIndex position = 0;
  std::uint32_t sentence = 0;
  std::uint32_t token = 0;  // index into Sentence::tokens
  TokenId id;
  bool is_empty = false;
  std::string_view form;
  std::string_view lemma;
  std::string_view upos;
  std::string_view deprel;
  std::string_view gender;  // FEATS `Gender`, empty when absent
  NodeIndex parent = kNoNode;
  std::vector<NodeIndex> enhanced_parents;
};

// Immutable node table of one document. Keeps the text it views alive.
class NodeTable {
 public:
  explicit NodeTable(std::shared_ptr<const Document> doc) : doc_(std::move(doc)) {
    build();
  }

  const Document& document() const { return *doc_; }
  const std::shared_ptr<const Document>& document_ptr() const { return doc_; }
  std::size_t size() const { return nodes_.size(); }
  const Node& operator[](NodeIndex i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t surface_words() const { return surface_words_; }

  // Parent used for head finding: the basic-tree parent for words, the first
  // enhanced parent for empty nodes.
  NodeIndex tree_parent(NodeIndex i) const {
    const Node& n = (*this)[i];
    if (!n.is_empty) return n.parent;
    return n.enhanced_parents.empty() ? kNoNode : n.enhanced_parents.front();
  }

  NodeIndex position_of(std::uint32_t sentence, std::uint32_t token) const {
    return token_to_node_[sentence][token];
  }

  const RawToken& token_of(NodeIndex i) const {
    const Node& n = (*this)[i];
    return doc_->sentences[n.sentence].tokens[n.token];
  }

  // Same sentences with the same token ids (words and empty nodes).
  bool same_universe(const NodeTable& other) const {
    if (nodes_.size() != other.nodes_.size()) return false;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].sentence != other.nodes_[i].sentence || !(nodes_[i].id == other.nodes_[i].id)) {
        return false;
      }
    }
    return true;
  }

 private:
  void build() {
    token_to_node_.resize(doc_->sentences.size());
    for (std::uint32_t si = 0; si < doc_->sentences.size(); ++si) {
      const auto& sent = doc_->sentences[si];
      token_to_node_[si].assign(sent.tokens.size(), kNoNode);
      for (std::size_t ti : sent.node_order()) {
        const RawToken& t = sent.tokens[ti];
        Node n;
        n.position = static_cast<NodeIndex>(nodes_.size());
        n.sentence = si;
        n.token = static_cast<std::uint32_t>(ti);
        n.id = t.id();
        n.is_empty = t.id().is_empty();
        n.form = t.form();
        n.lemma = t.lemma();
        n.upos = t.upos();
        n.deprel = t.deprel();
        n.gender = t.feature("Gender").value_or(std::string_view());
        token_to_node_[si][ti] = n.position;
        if (!n.is_empty) ++surface_words_;
        nodes_.push_back(std::move(n));
      }
    }
    // Resolve tree references inside each sentence.
    for (std::uint32_t si = 0; si < doc_->sentences.size(); ++si) {
      const auto& sent = doc_->sentences[si];
      std::map<std::pair<int, int>, NodeIndex> by_id;
      for (std::size_t ti = 0; ti < sent.tokens.size(); ++ti) {
        if (token_to_node_[si][ti] != kNoNode) {
          by_id[sent.tokens[ti].id().order_key()] = token_to_node_[si][ti];
        }
      }
      for (std::size_t ti = 0; ti < sent.tokens.size(); ++ti) {
        NodeIndex pos = token_to_node_[si][ti];
        if (pos == kNoNode) continue;
        Node& n = nodes_[static_cast<std::size_t>(pos)];
        const RawToken& t = sent.tokens[ti];
        if (!n.is_empty) {
          if (auto h = t.head(); h && *h > 0) {
            if (auto it = by_id.find({*h, 0}); it != by_id.end()) n.parent = it->second;
          }
        }
        for (const auto& [pid, rel] : t.deps()) {
          if (pid.major == 0 && pid.is_word()) continue;
          if (auto it = by_id.find(pid.order_key()); it != by_id.end()) {
            n.enhanced_parents.push_back(it->second);
          }
        }
      }
    }
  }

  std::shared_ptr<const Document> doc_;
  std::vector<Node> nodes_;
  std::vector<std::vector<NodeIndex>> token_to_node_;
  std::size_t surface_words_ = 0;
};

enum class HeadRule : std::uint8_t { Provided, HighestNode };

struct Mention {
  std::vector<NodeIndex> nodes;  // sorted, unique
  NodeIndex head = kNoNode;
  HeadRule head_rule = HeadRule::HighestNode;
  std::size_t entity = 0;
  // Opening-bracket fields after the eid (entity type, head index, ...).
  std::vector<std::string> fields;

  NodeIndex first() const { return nodes.front(); }
  NodeIndex last() const { return nodes.back(); }
  bool is_discontinuous() const {
    return !nodes.empty() &&
           static_cast<std::size_t>(nodes.back() - nodes.front()) + 1 != nodes.size();
  }
  bool is_zero(const NodeTable& t) const {
    return !nodes.empty() &&
           std::all_of(nodes.begin(), nodes.end(), [&](NodeIndex n) { return t[n].is_empty; });
  }
  bool contains_empty(const NodeTable& t) const {
    return std::any_of(nodes.begin(), nodes.end(), [&](NodeIndex n) { return t[n].is_empty; });
  }
  bool contains(NodeIndex n) const { return std::binary_search(nodes.begin(), nodes.end(), n); }
};

struct Entity {
  std::string eid;
  std::vector<std::size_t> mentions;  // indices into CorefLayer::mentions, in span order

  bool is_singleton() const { return mentions.size() == 1; }
};

struct CorefLayer {
  std::vector<Mention> mentions;
  std::vector<Entity> entities;
};

inline bool span_less(const Mention& a, const Mention& b) {
  if (a.first() != b.first()) return a.first() < b.first();
  if (a.last() != b.last()) return a.last() < b.last();
  return a.nodes < b.nodes;
}

// Puts mentions in (first node, last node, node list, eid) order, entities in
// order of their first mention, and rebuilds the entity mention lists. Empty
// entities are dropped.
inline void normalize(CorefLayer& layer) {
  std::vector<std::size_t> order(layer.mentions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Mention& ma = layer.mentions[a];
    const Mention& mb = layer.mentions[b];
    if (ma.nodes != mb.nodes) return span_less(ma, mb);
    return layer.entities[ma.entity].eid < layer.entities[mb.entity].eid;
  });

  std::vector<std::size_t> entity_rank(layer.entities.size(), SIZE_MAX);
  std::vector<Entity> entities;
  std::vector<Mention> mentions;
  mentions.reserve(order.size());
  for (std::size_t idx : order) {
    Mention m = std::move(layer.mentions[idx]);
    std::size_t& rank = entity_rank[m.entity];
    if (rank == SIZE_MAX) {
      rank = entities.size();
      entities.push_back(Entity{std::move(layer.entities[m.entity].eid), {}});
    }
    m.entity = rank;
    entities[rank].mentions.push_back(mentions.size());
    mentions.push_back(std::move(m));
  }
  layer.mentions = std::move(mentions);
  layer.entities = std::move(entities);
}

}  // namespace corefud
