#pragma once

// Document builders and random generators shared by the test suites.

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "corefud/corefud.hpp"

namespace corefud::test {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// One token line. `id` is "3", "3.1" or "3-4".
struct Row {
  std::string id;
  std::string form = "_";
  std::string lemma = "_";
  std::string upos = "_";
  std::string feats = "_";
  std::string head = "_";
  std::string deprel = "_";
  std::string deps = "_";
  std::string misc = "_";
};

inline std::string row_line(const Row& r) {
  return r.id + "\t" + r.form + "\t" + r.lemma + "\t" + r.upos + "\t_\t" + r.feats + "\t" + r.head +
         "\t" + r.deprel + "\t" + r.deps + "\t" + r.misc;
}

inline std::string sentence_text(const std::string& sent_id, const std::vector<Row>& rows) {
  std::string out = "# sent_id = " + sent_id + "\n";
  for (const auto& r : rows) out += row_line(r) + "\n";
  return out + "\n";
}

// Parses `text` and keeps the treebank alive through the returned documents.
inline std::vector<CorefDocument> load(const std::string& text, Diagnostics* warnings = nullptr) {
  auto tb = std::make_shared<const Treebank>(parse_conllu(text, "test", warnings));
  return build_coref_layers(tb, warnings);
}

inline CorefDocument load_one(const std::string& text) { return load(text).at(0); }

struct MentionSpec {
  std::string eid;
  std::vector<NodeIndex> nodes;
};

// `base` with its layer replaced by `specs`; heads come from the tree.
inline CorefDocument with_layer(const CorefDocument& base, const std::vector<MentionSpec>& specs) {
  CorefDocument out = base;
  out.layer = {};
  std::map<std::string, std::size_t> entity_of;
  for (const auto& s : specs) {
    auto [it, fresh] = entity_of.emplace(s.eid, out.layer.entities.size());
    if (fresh) out.layer.entities.push_back(Entity{s.eid, {}});
    Mention m;
    m.nodes = s.nodes;
    std::sort(m.nodes.begin(), m.nodes.end());
    m.nodes.erase(std::unique(m.nodes.begin(), m.nodes.end()), m.nodes.end());
    m.head = find_head(base.table(), m.nodes).head;
    m.entity = it->second;
    out.layer.entities[it->second].mentions.push_back(out.layer.mentions.size());
    out.layer.mentions.push_back(std::move(m));
  }
  normalize(out.layer);
  out.modified = true;
  return out;
}

// Entities as sorted lists of sorted node lists, for comparisons.
using EntityView = std::set<std::vector<std::vector<NodeIndex>>>;

inline EntityView entities_of(const CorefLayer& layer) {
  EntityView out;
  for (const auto& e : layer.entities) {
    std::vector<std::vector<NodeIndex>> ms;
    for (std::size_t m : e.mentions) ms.push_back(layer.mentions[m].nodes);
    std::sort(ms.begin(), ms.end());
    out.insert(ms);
  }
  return out;
}

struct PlainOptions {
  int sentences = 2;
  int min_words = 3;
  int max_words = 8;
  double empty_prob = 0.0;  // chance of an empty node after each word
};

inline const std::vector<std::string>& upos_tags() {
  static const std::vector<std::string> tags{"NOUN", "PRON", "PROPN", "DET", "ADJ",
                                             "VERB", "ADV",  "NUM",   "ADP"};
  return tags;
}

// A random document without Entity annotation. Each sentence is a random
// tree; empty nodes hang off the preceding word in the enhanced graph.
inline std::string random_plain_document(std::mt19937& rng, const PlainOptions& opts,
                                         const std::string& doc_id = "d1") {
  std::string out = "# newdoc id = " + doc_id + "\n";
  std::uniform_real_distribution<double> coin(0, 1);
  for (int s = 0; s < opts.sentences; ++s) {
    const int n = std::uniform_int_distribution<int>(opts.min_words, opts.max_words)(rng);
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> parent(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t i = 1; i < order.size(); ++i) {
      parent[static_cast<std::size_t>(order[i])] =
          order[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];
    }
    std::vector<Row> rows;
    for (int w = 1; w <= n; ++w) {
      Row r;
      r.id = std::to_string(w);
      r.form = "w" + std::to_string(w);
      r.upos = upos_tags()[std::uniform_int_distribution<std::size_t>(0, upos_tags().size() - 1)(rng)];
      r.lemma = r.upos == "PROPN" ? "name" + std::to_string(rng() % 3) : r.form;
      r.head = std::to_string(parent[static_cast<std::size_t>(w)]);
      r.deprel = parent[static_cast<std::size_t>(w)] == 0 ? "root" : (coin(rng) < 0.2 ? "flat" : "dep");
      if (coin(rng) < 0.6) r.feats = std::string("Gender=") + (coin(rng) < 0.5 ? "Masc" : "Fem");
      rows.push_back(r);
      if (coin(rng) < opts.empty_prob) {
        Row e;
        e.id = std::to_string(w) + ".1";
        e.upos = "PRON";
        e.deps = std::to_string(w) + ":nsubj";
        rows.push_back(e);
      }
    }
    out += sentence_text(doc_id + "-" + std::to_string(s + 1), rows);
  }
  return out;
}

struct LayerOptions {
  int max_mentions = 10;
  int max_entities = 4;
  int max_length = 4;
  double gap_prob = 0.15;  // chance of a discontinuous mention
};

// Random mentions over the nodes of `table`: contiguous runs or, with
// `gap_prob`, two runs. Node sets are distinct.
inline std::vector<MentionSpec> random_mentions(std::mt19937& rng, const NodeTable& table,
                                                const LayerOptions& opts) {
  std::vector<MentionSpec> out;
  const int n = static_cast<int>(table.size());
  if (n == 0) return out;
  const int count = std::uniform_int_distribution<int>(0, opts.max_mentions)(rng);
  const int entities = std::uniform_int_distribution<int>(1, opts.max_entities)(rng);
  std::set<std::vector<NodeIndex>> seen;
  std::uniform_real_distribution<double> coin(0, 1);
  for (int attempt = 0; attempt < count * 4 && static_cast<int>(out.size()) < count; ++attempt) {
    auto run = [&](int from) {
      const int len = std::uniform_int_distribution<int>(1, opts.max_length)(rng);
      std::vector<NodeIndex> v;
      for (int i = from; i < std::min(n, from + len); ++i) v.push_back(i);
      return v;
    };
    const int start = std::uniform_int_distribution<int>(0, n - 1)(rng);
    std::vector<NodeIndex> nodes = run(start);
    if (coin(rng) < opts.gap_prob) {
      const int second = static_cast<int>(nodes.back()) + 2;
      if (second < n) {
        auto more = run(second);
        nodes.insert(nodes.end(), more.begin(), more.end());
      }
    }
    if (!seen.insert(nodes).second) continue;
    out.push_back({"e" + std::to_string(std::uniform_int_distribution<int>(1, entities)(rng)), nodes});
  }
  return out;
}

// A response derived from `key`: mentions kept, trimmed, moved to another
// entity, dropped, or added at random.
inline std::vector<MentionSpec> perturb(std::mt19937& rng, const NodeTable& table,
                                        const std::vector<MentionSpec>& key, const LayerOptions& opts) {
  std::vector<MentionSpec> out;
  std::set<std::vector<NodeIndex>> seen;
  std::uniform_real_distribution<double> coin(0, 1);
  const int entities = opts.max_entities;
  auto push = [&](MentionSpec m) {
    if (m.nodes.empty() || !seen.insert(m.nodes).second) return;
    out.push_back(std::move(m));
  };
  for (const auto& m : key) {
    const double r = coin(rng);
    if (r < 0.15) continue;
    MentionSpec copy = m;
    if (r < 0.35 && copy.nodes.size() > 1) {
      copy.nodes.erase(copy.nodes.begin() + static_cast<long>(rng() % copy.nodes.size()));
    } else if (r < 0.45) {
      const NodeIndex extra = copy.nodes.back() + 1;
      if (static_cast<std::size_t>(extra) < table.size()) copy.nodes.push_back(extra);
    }
    if (coin(rng) < 0.25) {
      copy.eid = "e" + std::to_string(std::uniform_int_distribution<int>(1, entities)(rng));
    }
    push(std::move(copy));
  }
  LayerOptions extra = opts;
  extra.max_mentions = 2;
  for (auto& m : random_mentions(rng, table, extra)) push(std::move(m));
  if (static_cast<int>(out.size()) > opts.max_mentions) out.resize(static_cast<std::size_t>(opts.max_mentions));
  return out;
}

// Drops mentions whose extent overlaps an earlier one of the same eid, so
// that the layer can be written as brackets.
inline std::vector<MentionSpec> encodable(const std::vector<MentionSpec>& specs) {
  std::vector<MentionSpec> out;
  for (const auto& s : specs) {
    const bool clash = std::any_of(out.begin(), out.end(), [&](const MentionSpec& o) {
      return o.eid == s.eid && s.nodes.front() <= o.nodes.back() && o.nodes.front() <= s.nodes.back();
    });
    if (!clash) out.push_back(s);
  }
  return out;
}

// Number of distinct eids.
inline int entity_count(const std::vector<MentionSpec>& ms) {
  std::set<std::string> ids;
  for (const auto& m : ms) ids.insert(m.eid);
  return static_cast<int>(ids.size());
}

}  // namespace corefud::test
