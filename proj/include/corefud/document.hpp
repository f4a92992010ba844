#pragma once

// Reconstruction of the coreference layer from Entity brackets, and the
// reverse encoding used when writing modified documents.

#include <algorithm>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corefud/conllu.hpp"
#include "corefud/error.hpp"
#include "corefud/heads.hpp"
#include "corefud/model.hpp"

namespace corefud {

// A document with its node table and coreference layer. Copies share the
// node table; transforms produce new layers.
struct CorefDocument {
  std::string id;
  std::shared_ptr<const NodeTable> nodes;
  CorefLayer layer;
  bool modified = false;  // layer differs from the Entity annotation in the text

  const NodeTable& table() const { return *nodes; }
};

// Reconstructs mentions and entities from the Entity brackets of `doc`.
// Parts `[1/n]`..`[n/n]` of one eid join the earliest open mention of that
// eid waiting for the part. Throws ParseError on inconsistent parts.
inline CorefDocument build_coref_layer(std::shared_ptr<const Document> doc,
                                       std::string_view source = {},
                                       Diagnostics* warnings = nullptr) {
  CorefDocument out;
  out.id = doc->id;
  out.nodes = std::make_shared<const NodeTable>(std::move(doc));
  const NodeTable& table = *out.nodes;
  CorefLayer& layer = out.layer;

  struct Pending {
    std::string eid;
    std::vector<NodeIndex> nodes;
    std::vector<std::string> fields;
    std::optional<int> head_index;
    int count = 1;       // number of parts
    int next_part = 1;   // next part expected to open
    bool part_open = false;
    std::size_t line = 0;
  };
  std::vector<std::unique_ptr<Pending>> pending;
  std::unordered_map<std::string, std::pair<Pending*, NodeIndex>> open_by_key;
  std::unordered_map<std::string, std::size_t> entity_by_eid;

  auto finish = [&](Pending& p) {
    Mention m;
    m.nodes = std::move(p.nodes);
    std::sort(m.nodes.begin(), m.nodes.end());
    m.nodes.erase(std::unique(m.nodes.begin(), m.nodes.end()), m.nodes.end());
    m.fields = std::move(p.fields);
    auto [it, inserted] = entity_by_eid.try_emplace(p.eid, layer.entities.size());
    if (inserted) layer.entities.push_back(Entity{p.eid, {}});
    m.entity = it->second;
    HeadChoice hc = find_head(table, m.nodes, p.head_index, warnings, source);
    m.head = hc.head;
    m.head_rule = hc.rule;
    layer.mentions.push_back(std::move(m));
  };

  const Document& text = table.document();
  for (const Node& node : table.nodes()) {
    const RawToken& tok = text.sentences[node.sentence].tokens[node.token];
    for (const auto& b : tok.entity()) {
      if (b.kind == EntityBracket::Kind::OpenClose && !b.part) {
        Pending p{b.eid, {node.position}, b.extra_fields, b.head_index(), 1, 1, false, tok.line_no()};
        finish(p);
        continue;
      }
      if (b.kind == EntityBracket::Kind::Close) {
        auto it = open_by_key.find(b.key());
        if (it == open_by_key.end()) {
          throw ParseError(std::string(source), tok.line_no(),
                           "closing bracket without matching opening for eid '" + b.eid + "'");
        }
        auto [p, start] = it->second;
        open_by_key.erase(it);
        for (NodeIndex n = start; n <= node.position; ++n) p->nodes.push_back(n);
        p->part_open = false;
        if (p->next_part > p->count) {
          finish(*p);
          std::erase_if(pending, [&](const auto& q) { return q.get() == p; });
        }
        continue;
      }
      // Opening bracket (possibly a one-node part).
      Pending* target = nullptr;
      if (!b.part) {
        pending.push_back(std::make_unique<Pending>(
            Pending{b.eid, {}, b.extra_fields, b.head_index(), 1, 1, false, tok.line_no()}));
        target = pending.back().get();
      } else if (b.part->index == 1) {
        pending.push_back(std::make_unique<Pending>(Pending{
            b.eid, {}, b.extra_fields, b.head_index(), b.part->count, 1, false, tok.line_no()}));
        target = pending.back().get();
      } else {
        for (auto& q : pending) {
          if (q->eid == b.eid && q->count == b.part->count && q->next_part == b.part->index &&
              !q->part_open) {
            target = q.get();
            break;
          }
        }
        if (target == nullptr) {
          throw ParseError(std::string(source), tok.line_no(),
                           "part " + std::to_string(b.part->index) + "/" +
                               std::to_string(b.part->count) + " of eid '" + b.eid +
                               "' does not continue an open discontinuous mention");
        }
      }
      target->next_part++;
      if (b.kind == EntityBracket::Kind::OpenClose) {
        target->nodes.push_back(node.position);
        if (target->next_part > target->count) {
          finish(*target);
          std::erase_if(pending, [&](const auto& q) { return q.get() == target; });
        }
      } else {
        target->part_open = true;
        auto [it, inserted] = open_by_key.try_emplace(b.key(), target, node.position);
        if (!inserted) {
          throw ParseError(std::string(source), tok.line_no(),
                           "eid '" + b.key() + "' opened again while still open");
        }
      }
    }
  }
  if (!open_by_key.empty()) {
    const auto& [key, rec] = *open_by_key.begin();
    throw ParseError(std::string(source), rec.first->line,
                     "unbalanced Entity bracket: '" + key + "' is never closed (document '" +
                         out.id + "')");
  }
  if (!pending.empty()) {
    const Pending& p = *pending.front();
    throw ParseError(std::string(source), p.line,
                     "discontinuous mention of eid '" + p.eid + "' is missing part " +
                         std::to_string(p.next_part) + "/" + std::to_string(p.count));
  }
  normalize(layer);
  return out;
}

// Coref documents of a treebank; they keep the treebank alive.
inline std::vector<CorefDocument> build_coref_layers(std::shared_ptr<const Treebank> tb,
                                                     Diagnostics* warnings = nullptr) {
  std::vector<CorefDocument> out;
  out.reserve(tb->documents.size());
  for (const auto& doc : tb->documents) {
    out.push_back(build_coref_layer(std::shared_ptr<const Document>(tb, &doc), tb->source, warnings));
  }
  return out;
}

// Positions of a document's nodes in word order, as (sentence, token id).
inline std::vector<std::pair<std::uint32_t, TokenId>> word_order(const NodeTable& table) {
  std::vector<std::pair<std::uint32_t, TokenId>> out;
  out.reserve(table.size());
  for (const Node& n : table.nodes()) out.emplace_back(n.sentence, n.id);
  return out;
}

// Brackets that encode `layer` on each node, in the order closings,
// one-node mentions, openings. Throws SerializationError for mentions
// without nodes or for two multi-node spans of one eid that would be open
// at the same time.
inline std::vector<std::vector<EntityBracket>> encode_brackets(const NodeTable& table,
                                                               const CorefLayer& layer) {
  struct Item {
    EntityBracket bracket;
    NodeIndex start;
    NodeIndex end;
  };
  std::vector<std::vector<Item>> closes(table.size()), singles(table.size()), opens(table.size());

  // eid -> list of [start, end] runs already placed, for the overlap check.
  std::unordered_map<std::string, std::vector<std::pair<NodeIndex, NodeIndex>>> runs_by_key;

  for (const Mention& m : layer.mentions) {
    if (m.nodes.empty()) throw SerializationError("mention without nodes cannot be written");
    const std::string& eid = layer.entities[m.entity].eid;
    std::vector<std::pair<NodeIndex, NodeIndex>> runs;
    for (NodeIndex n : m.nodes) {
      if (!runs.empty() && runs.back().second + 1 == n) {
        runs.back().second = n;
      } else {
        runs.emplace_back(n, n);
      }
    }
    std::vector<std::string> fields = m.fields;
    if (fields.size() >= 2 && detail::is_number(fields[1])) {
      auto it = std::lower_bound(m.nodes.begin(), m.nodes.end(), m.head);
      fields[1] = std::to_string(it - m.nodes.begin() + 1);
    }
    const int count = static_cast<int>(runs.size());
    for (int i = 0; i < count; ++i) {
      auto [start, end] = runs[static_cast<std::size_t>(i)];
      EntityBracket open;
      open.eid = eid;
      if (count > 1) open.part = EntityBracket::Part{i + 1, count};
      if (i == 0) open.extra_fields = fields;
      if (start == end) {
        open.kind = EntityBracket::Kind::OpenClose;
        singles[static_cast<std::size_t>(start)].push_back({open, start, end});
        continue;
      }
      auto& placed = runs_by_key[open.key()];
      for (auto [s, e] : placed) {
        if (start <= e && s <= end) {
          throw SerializationError("overlapping multi-node spans of eid '" + open.key() +
                                   "' cannot be encoded as brackets");
        }
      }
      placed.emplace_back(start, end);
      open.kind = EntityBracket::Kind::Open;
      EntityBracket close;
      close.kind = EntityBracket::Kind::Close;
      close.eid = eid;
      close.part = open.part;
      opens[static_cast<std::size_t>(start)].push_back({std::move(open), start, end});
      closes[static_cast<std::size_t>(end)].push_back({std::move(close), start, end});
    }
  }

  std::vector<std::vector<EntityBracket>> out(table.size());
  for (std::size_t n = 0; n < table.size(); ++n) {
    // Inner spans close first, outer spans open first.
    std::stable_sort(closes[n].begin(), closes[n].end(),
                     [](const Item& a, const Item& b) { return a.start > b.start; });
    std::stable_sort(opens[n].begin(), opens[n].end(),
                     [](const Item& a, const Item& b) { return a.end > b.end; });
    for (auto* list : {&closes[n], &singles[n], &opens[n]}) {
      for (auto& item : *list) out[n].push_back(std::move(item.bracket));
    }
  }
  return out;
}

// Text of `doc` with Entity attributes rewritten from its layer. Unmodified
// documents are returned unchanged.
inline Document to_text(const CorefDocument& doc) {
  Document text = doc.table().document();
  if (!doc.modified) return text;
  auto brackets = encode_brackets(doc.table(), doc.layer);
  for (const Node& n : doc.table().nodes()) {
    RawToken& tok = text.sentences[n.sentence].tokens[n.token];
    auto& mine = brackets[static_cast<std::size_t>(n.position)];
    if (mine.empty() && !tok.has_entity()) continue;
    if (mine == tok.entity() && tok.has_entity()) continue;
    tok.set_entity(mine);
  }
  return text;
}

// Treebank text for a sequence of coref documents, reusing the file-level
// layout (line endings, leading blank lines) of `layout` when given.
inline Treebank to_treebank(const std::vector<CorefDocument>& docs,
                            const Treebank* layout = nullptr) {
  Treebank tb;
  if (layout != nullptr) {
    tb.source = layout->source;
    tb.leading_blank_lines = layout->leading_blank_lines;
    tb.crlf = layout->crlf;
    tb.final_newline = layout->final_newline;
  }
  for (const auto& d : docs) tb.documents.push_back(to_text(d));
  return tb;
}

}  // namespace corefud
