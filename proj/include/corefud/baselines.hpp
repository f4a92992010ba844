#pragma once

// Rule-based coreference predictors: proper nouns sharing a lemma, and
// pronouns linked to the nearest preceding noun of the same gender.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corefud/document.hpp"
#include "corefud/transforms.hpp"

namespace corefud {

namespace detail {

// Returns an eid of the form `eN` not used in `layer`.
class EidAllocator {
 public:
  explicit EidAllocator(const CorefLayer& layer) {
    for (const auto& e : layer.entities) {
      used_.insert(e.eid);
      if (e.eid.size() > 1 && e.eid[0] == 'e') {
        if (auto n = parse_int(std::string_view(e.eid).substr(1))) next_ = std::max(next_, *n + 1);
      }
    }
  }
  std::string next() {
    std::string eid;
    do {
      eid = "e" + std::to_string(next_++);
    } while (used_.count(eid));
    used_.insert(eid);
    return eid;
  }

 private:
  std::set<std::string> used_;
  int next_ = 1;
};

inline Mention single_node_mention(NodeIndex n, std::size_t entity) {
  Mention m;
  m.nodes = {n};
  m.head = n;
  m.entity = entity;
  return m;
}

// First entity (in mention order) having a mention headed by each node.
inline std::unordered_map<NodeIndex, std::size_t> entity_by_head(const CorefLayer& layer) {
  std::unordered_map<NodeIndex, std::size_t> out;
  for (const auto& m : layer.mentions) out.try_emplace(m.head, m.entity);
  return out;
}

}  // namespace detail

// Puts all PROPN words sharing a lemma (seen at least twice) into one entity.
// Words already heading a mention pull their entities together under the
// smallest eid; the others join as one-word mentions. Lemma `_` is ignored.
inline CorefDocument propn_lemma_merge(const CorefDocument& doc, bool enabled = true) {
  if (!enabled) return doc;
  const NodeTable& table = doc.table();
  std::map<std::string_view, std::vector<NodeIndex>> by_lemma;
  for (const Node& n : table.nodes()) {
    if (!n.is_empty && n.upos == "PROPN" && !n.lemma.empty() && n.lemma != "_") {
      by_lemma[n.lemma].push_back(n.position);
    }
  }
  std::vector<std::vector<NodeIndex>> groups;
  for (auto& [lemma, nodes] : by_lemma) {
    if (nodes.size() >= 2) groups.push_back(std::move(nodes));
  }
  if (groups.empty()) return doc;
  std::sort(groups.begin(), groups.end());  // by first occurrence

  CorefLayer layer = doc.layer;
  detail::EidAllocator eids(layer);
  bool changed = false;
  for (const auto& group : groups) {
    auto heads = detail::entity_by_head(layer);
    std::vector<std::size_t> entities;
    std::vector<NodeIndex> uncovered;
    for (NodeIndex n : group) {
      auto it = heads.find(n);
      if (it == heads.end()) {
        uncovered.push_back(n);
      } else {
        entities.push_back(it->second);
      }
    }
    std::size_t target;
    if (entities.empty()) {
      target = layer.entities.size();
      layer.entities.push_back(Entity{eids.next(), {}});
    } else {
      target = *std::min_element(entities.begin(), entities.end(), [&](std::size_t a, std::size_t b) {
        return layer.entities[a].eid < layer.entities[b].eid;
      });
      for (auto& m : layer.mentions) {
        if (m.entity != target &&
            std::find(entities.begin(), entities.end(), m.entity) != entities.end()) {
          m.entity = target;
          changed = true;
        }
      }
    }
    for (NodeIndex n : uncovered) layer.mentions.push_back(detail::single_node_mention(n, target));
    changed |= !uncovered.empty();
  }
  return detail::finish_rewrite(doc, std::move(layer), changed);
}

// Links every PRON word with a Gender feature to the nearest preceding NOUN
// with the same Gender value. The pronoun becomes a one-word mention of the
// noun's entity (created for the noun when it has none). Empty nodes never
// act as antecedents; pronouns already heading a mention are left alone.
inline CorefDocument pronoun_gender_link(const CorefDocument& doc) {
  const NodeTable& table = doc.table();
  CorefLayer layer = doc.layer;
  detail::EidAllocator eids(layer);
  auto heads = detail::entity_by_head(layer);
  std::unordered_map<std::string_view, NodeIndex> last_noun;
  bool changed = false;
  for (const Node& n : table.nodes()) {
    if (n.is_empty || n.gender.empty()) continue;
    if (n.upos == "NOUN") {
      last_noun[n.gender] = n.position;
      continue;
    }
    if (n.upos != "PRON" || heads.count(n.position)) continue;
    auto it = last_noun.find(n.gender);
    if (it == last_noun.end()) continue;
    const NodeIndex noun = it->second;
    std::size_t entity;
    if (auto h = heads.find(noun); h != heads.end()) {
      entity = h->second;
    } else {
      entity = layer.entities.size();
      layer.entities.push_back(Entity{eids.next(), {}});
      layer.mentions.push_back(detail::single_node_mention(noun, entity));
      heads.emplace(noun, entity);
    }
    layer.mentions.push_back(detail::single_node_mention(n.position, entity));
    heads.emplace(n.position, entity);
    changed = true;
  }
  return detail::finish_rewrite(doc, std::move(layer), changed);
}

struct BaselineOptions {
  bool pronoun_gender = false;
  bool propn_lemma = true;
};

// Post-processing of predictions: heads only, same-span entities merged,
// then optionally proper nouns by lemma. With `pronoun_gender` the pronoun
// rule runs first.
inline CorefDocument run_baseline(const CorefDocument& doc, const BaselineOptions& opts) {
  CorefDocument out = opts.pronoun_gender ? pronoun_gender_link(doc) : doc;
  out = reduce_to_head(out);
  out = merge_same_span_entities(out);
  return propn_lemma_merge(out, opts.propn_lemma);
}

}  // namespace corefud
