#pragma once

// Rewrites of the coreference layer: head reductions, same-span merging,
// singleton removal and head-UPOS filtering. Each one is idempotent and keeps
// the node universe; a document is marked modified only if it changed.

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corefud/align.hpp"
#include "corefud/document.hpp"
#include "corefud/heads.hpp"

namespace corefud {

enum class TransformKind : std::uint8_t {
  ReduceToHead,
  MergeSameSpan,
  ConservativeHeadReduce,
  RemoveSingletons,
};

namespace detail {

// Replaces a mention's nodes with its head alone, updating a numeric head field.
inline bool reduce_mention_to_head(Mention& m) {
  if (m.nodes.size() == 1 && m.nodes.front() == m.head) return false;
  m.nodes = {m.head};
  if (m.fields.size() >= 2 && is_number(m.fields[1])) m.fields[1] = "1";
  return true;
}

inline CorefDocument finish_rewrite(const CorefDocument& in, CorefLayer layer, bool changed) {
  CorefDocument out = in;
  if (!changed) return out;
  normalize(layer);
  out.layer = std::move(layer);
  out.modified = true;
  return out;
}

}  // namespace detail

// Every mention becomes its head node. Spans may coincide afterwards.
inline CorefDocument reduce_to_head(const CorefDocument& doc) {
  CorefLayer layer = doc.layer;
  bool changed = false;
  for (auto& m : layer.mentions) changed |= detail::reduce_mention_to_head(m);
  return detail::finish_rewrite(doc, std::move(layer), changed);
}

// Unions (transitively) the entities of mentions with identical node sets and
// drops the duplicate mentions. A merged entity keeps the smallest eid.
inline CorefDocument merge_same_span_entities(const CorefDocument& doc) {
  const CorefLayer& in = doc.layer;
  detail::DisjointSets sets(in.entities.size());
  std::map<std::vector<NodeIndex>, std::size_t> first_with_span;
  bool duplicates = false;
  for (const auto& m : in.mentions) {
    auto [it, inserted] = first_with_span.try_emplace(m.nodes, m.entity);
    if (!inserted) {
      sets.unite(it->second, m.entity);
      duplicates = true;
    }
  }
  if (!duplicates) return doc;

  CorefLayer layer;
  std::unordered_map<std::size_t, std::size_t> new_entity;  // set root -> new index
  for (std::size_t e = 0; e < in.entities.size(); ++e) {
    const std::size_t root = sets.find(e);
    auto [it, inserted] = new_entity.try_emplace(root, layer.entities.size());
    if (inserted) {
      layer.entities.push_back(Entity{in.entities[e].eid, {}});
    } else if (in.entities[e].eid < layer.entities[it->second].eid) {
      layer.entities[it->second].eid = in.entities[e].eid;
    }
  }
  std::map<std::pair<std::size_t, std::vector<NodeIndex>>, bool> seen;
  for (const auto& m : in.mentions) {
    const std::size_t e = new_entity[sets.find(m.entity)];
    if (!seen.try_emplace({e, m.nodes}, true).second) continue;
    Mention copy = m;
    copy.entity = e;
    layer.mentions.push_back(std::move(copy));
  }
  return detail::finish_rewrite(doc, std::move(layer), true);
}

// Groups mentions by head. In a group of one the mention is reduced to its
// head; in a larger group the largest span (earliest on ties) stays intact and
// the others are reduced.
inline CorefDocument conservative_head_reduce(const CorefDocument& doc) {
  CorefLayer layer = doc.layer;
  std::unordered_map<NodeIndex, std::vector<std::size_t>> by_head;
  for (std::size_t i = 0; i < layer.mentions.size(); ++i) {
    by_head[layer.mentions[i].head].push_back(i);
  }
  bool changed = false;
  for (auto& [head, group] : by_head) {
    std::size_t keep = SIZE_MAX;
    if (group.size() > 1) {
      keep = group.front();
      for (std::size_t i : group) {
        const Mention& cand = layer.mentions[i];
        const Mention& best = layer.mentions[keep];
        if (cand.nodes.size() > best.nodes.size() ||
            (cand.nodes.size() == best.nodes.size() && span_less(cand, best))) {
          keep = i;
        }
      }
    }
    for (std::size_t i : group) {
      if (i != keep) changed |= detail::reduce_mention_to_head(layer.mentions[i]);
    }
  }
  return detail::finish_rewrite(doc, std::move(layer), changed);
}

// Drops entities of exactly one mention.
inline CorefDocument remove_singletons(const CorefDocument& doc) {
  const CorefLayer& in = doc.layer;
  bool any = std::any_of(in.entities.begin(), in.entities.end(),
                         [](const Entity& e) { return e.is_singleton(); });
  if (!any) return doc;
  CorefLayer layer;
  layer.entities = in.entities;
  for (const auto& m : in.mentions) {
    if (!in.entities[m.entity].is_singleton()) layer.mentions.push_back(m);
  }
  return detail::finish_rewrite(doc, std::move(layer), true);
}

// Keeps only entities with a mention whose head UPOS set contains `upos`.
inline CorefDocument filter_by_head_upos(const CorefDocument& doc, std::string_view upos) {
  const CorefLayer& in = doc.layer;
  std::vector<char> keep(in.entities.size(), 0);
  for (const auto& m : in.mentions) {
    if (!keep[m.entity] && head_upos_set(doc.table(), m).count(upos)) keep[m.entity] = 1;
  }
  if (std::all_of(keep.begin(), keep.end(), [](char k) { return k != 0; })) return doc;
  CorefLayer layer;
  layer.entities = in.entities;
  for (const auto& m : in.mentions) {
    if (keep[m.entity]) layer.mentions.push_back(m);
  }
  return detail::finish_rewrite(doc, std::move(layer), true);
}

inline CorefDocument apply_transform(const CorefDocument& doc, TransformKind kind) {
  switch (kind) {
    case TransformKind::ReduceToHead: return reduce_to_head(doc);
    case TransformKind::MergeSameSpan: return merge_same_span_entities(doc);
    case TransformKind::ConservativeHeadReduce: return conservative_head_reduce(doc);
    case TransformKind::RemoveSingletons: return remove_singletons(doc);
  }
  return doc;
}

inline std::optional<TransformKind> parse_transform(std::string_view name) {
  if (name == "reduce-to-head") return TransformKind::ReduceToHead;
  if (name == "merge-same-span") return TransformKind::MergeSameSpan;
  if (name == "conservative-head-reduce") return TransformKind::ConservativeHeadReduce;
  if (name == "remove-singletons") return TransformKind::RemoveSingletons;
  return std::nullopt;
}

}  // namespace corefud
