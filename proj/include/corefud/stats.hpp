#pragma once

// Corpus statistics on entities and mentions.

#include <algorithm>
#include <array>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corefud/document.hpp"
#include "corefud/heads.hpp"

namespace corefud {

struct EntityStats {
  std::size_t entities = 0;
  std::size_t words = 0;  // surface words, the per-1k denominator
  std::size_t max_length = 0;
  std::size_t total_mentions = 0;
  std::array<std::size_t, 5> length_counts{};  // 1, 2, 3, 4, 5+

  double per_1k() const { return words ? 1000.0 * static_cast<double>(entities) / static_cast<double>(words) : 0; }
  double avg_length() const {
    return entities ? static_cast<double>(total_mentions) / static_cast<double>(entities) : 0;
  }
  double length_percent(std::size_t bucket) const {
    return entities ? 100.0 * static_cast<double>(length_counts[bucket]) / static_cast<double>(entities) : 0;
  }
  EntityStats& operator+=(const EntityStats& o) {
    entities += o.entities;
    words += o.words;
    max_length = std::max(max_length, o.max_length);
    total_mentions += o.total_mentions;
    for (std::size_t i = 0; i < length_counts.size(); ++i) length_counts[i] += o.length_counts[i];
    return *this;
  }
};

// Mention length counts surface words only, so zeros have length 0.
struct MentionStats {
  std::size_t mentions = 0;
  std::size_t words = 0;
  std::size_t max_length = 0;
  std::size_t total_length = 0;
  std::array<std::size_t, 6> length_counts{};  // 0, 1, 2, 3, 4, 5+

  double per_1k() const { return words ? 1000.0 * static_cast<double>(mentions) / static_cast<double>(words) : 0; }
  double avg_length() const {
    return mentions ? static_cast<double>(total_length) / static_cast<double>(mentions) : 0;
  }
  double length_percent(std::size_t bucket) const {
    return mentions ? 100.0 * static_cast<double>(length_counts[bucket]) / static_cast<double>(mentions) : 0;
  }
  MentionStats& operator+=(const MentionStats& o) {
    mentions += o.mentions;
    words += o.words;
    max_length = std::max(max_length, o.max_length);
    total_length += o.total_length;
    for (std::size_t i = 0; i < length_counts.size(); ++i) length_counts[i] += o.length_counts[i];
    return *this;
  }
};

inline constexpr std::array<std::string_view, 9> kHeadUposColumns = {
    "NOUN", "PRON", "PROPN", "DET", "ADJ", "VERB", "ADV", "NUM", "other"};

// Mention types (flags may overlap) and head UPOS distribution.
struct MentionDetailStats {
  std::size_t mentions = 0;
  std::size_t with_empty = 0;
  std::size_t with_gap = 0;
  std::size_t non_tree = 0;
  std::array<std::size_t, kHeadUposColumns.size()> head_upos{};

  double percent(std::size_t n) const {
    return mentions ? 100.0 * static_cast<double>(n) / static_cast<double>(mentions) : 0;
  }
  MentionDetailStats& operator+=(const MentionDetailStats& o) {
    mentions += o.mentions;
    with_empty += o.with_empty;
    with_gap += o.with_gap;
    non_tree += o.non_tree;
    for (std::size_t i = 0; i < head_upos.size(); ++i) head_upos[i] += o.head_upos[i];
    return *this;
  }
};

inline EntityStats entity_stats(const CorefDocument& doc) {
  EntityStats s;
  s.words = doc.table().surface_words();
  for (const auto& e : doc.layer.entities) {
    const std::size_t len = e.mentions.size();
    if (len == 0) continue;
    ++s.entities;
    s.total_mentions += len;
    s.max_length = std::max(s.max_length, len);
    ++s.length_counts[std::min<std::size_t>(len, 5) - 1];
  }
  return s;
}

inline std::size_t surface_length(const NodeTable& table, const Mention& m) {
  return static_cast<std::size_t>(
      std::count_if(m.nodes.begin(), m.nodes.end(), [&](NodeIndex n) { return !table[n].is_empty; }));
}

inline MentionStats mention_stats(const CorefDocument& doc, bool include_singletons) {
  MentionStats s;
  s.words = doc.table().surface_words();
  for (const auto& m : doc.layer.mentions) {
    if (!include_singletons && doc.layer.entities[m.entity].is_singleton()) continue;
    const std::size_t len = surface_length(doc.table(), m);
    ++s.mentions;
    s.total_length += len;
    s.max_length = std::max(s.max_length, len);
    ++s.length_counts[std::min<std::size_t>(len, 5)];
  }
  return s;
}

inline bool is_non_treelet(const NodeTable& table, const Mention& m) {
  return treelet_roots(table, m.nodes).size() >= 2;
}

inline MentionDetailStats mention_detail_stats(const CorefDocument& doc) {
  MentionDetailStats s;
  const NodeTable& table = doc.table();
  for (const auto& m : doc.layer.mentions) {
    ++s.mentions;
    if (m.contains_empty(table)) ++s.with_empty;
    if (m.is_discontinuous()) ++s.with_gap;
    if (is_non_treelet(table, m)) ++s.non_tree;
    std::size_t col = kHeadUposColumns.size() - 1;
    if (m.head != kNoNode) {
      for (std::size_t i = 0; i + 1 < kHeadUposColumns.size(); ++i) {
        if (table[m.head].upos == kHeadUposColumns[i]) col = i;
      }
    }
    ++s.head_upos[col];
  }
  return s;
}

template <class Stats, class Fn>
Stats sum_over(std::span<const CorefDocument> docs, Fn&& fn) {
  Stats total;
  for (const auto& d : docs) total += fn(d);
  return total;
}

inline EntityStats entity_stats(std::span<const CorefDocument> docs) {
  return sum_over<EntityStats>(docs, [](const CorefDocument& d) { return entity_stats(d); });
}
inline MentionStats mention_stats(std::span<const CorefDocument> docs, bool include_singletons) {
  return sum_over<MentionStats>(
      docs, [&](const CorefDocument& d) { return mention_stats(d, include_singletons); });
}
inline MentionDetailStats mention_detail_stats(std::span<const CorefDocument> docs) {
  return sum_over<MentionDetailStats>(docs,
                                      [](const CorefDocument& d) { return mention_detail_stats(d); });
}

// Table rendering. Columns follow the order: counts, per-1k, max/avg length,
// then the percentage distribution.
namespace detail {

inline std::string fmt(double v, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline std::string render_table(const std::vector<std::string>& header,
                                const std::vector<std::vector<std::string>>& rows, bool tsv) {
  std::string out;
  if (tsv) {
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "\t" : "") + cells[i];
      out += "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::size_t pad = width[i] - cells[i].size();
      if (i == 0) {
        out += cells[i] + std::string(pad, ' ');
      } else {
        out += "  " + std::string(pad, ' ') + cells[i];
      }
    }
    out += "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

}  // namespace detail

inline std::string render_entity_stats(const std::vector<std::pair<std::string, EntityStats>>& rows,
                                       bool tsv) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& [name, s] : rows) {
    cells.push_back({name, std::to_string(s.entities), detail::fmt(s.per_1k(), 0),
                     std::to_string(s.max_length), detail::fmt(s.avg_length(), 1),
                     detail::fmt(s.length_percent(0), 1), detail::fmt(s.length_percent(1), 1),
                     detail::fmt(s.length_percent(2), 1), detail::fmt(s.length_percent(3), 1),
                     detail::fmt(s.length_percent(4), 1)});
  }
  return detail::render_table({"system", "entities", "per1k", "max_len", "avg_len", "len1%", "len2%",
                               "len3%", "len4%", "len5+%"},
                              cells, tsv);
}

inline std::string render_mention_stats(const std::vector<std::pair<std::string, MentionStats>>& rows,
                                        bool tsv) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& [name, s] : rows) {
    std::vector<std::string> r{name, std::to_string(s.mentions), detail::fmt(s.per_1k(), 0),
                               std::to_string(s.max_length), detail::fmt(s.avg_length(), 1)};
    for (std::size_t b = 0; b < s.length_counts.size(); ++b) r.push_back(detail::fmt(s.length_percent(b), 1));
    cells.push_back(std::move(r));
  }
  return detail::render_table({"system", "mentions", "per1k", "max_len", "avg_len", "len0%", "len1%",
                               "len2%", "len3%", "len4%", "len5+%"},
                              cells, tsv);
}

inline std::string render_mention_detail_stats(
    const std::vector<std::pair<std::string, MentionDetailStats>>& rows, bool tsv) {
  std::vector<std::string> header{"system", "w/empty%", "w/gap%", "non-tree%"};
  for (auto u : kHeadUposColumns) header.push_back(std::string(u) + "%");
  std::vector<std::vector<std::string>> cells;
  for (const auto& [name, s] : rows) {
    std::vector<std::string> r{name, detail::fmt(s.percent(s.with_empty), 1),
                               detail::fmt(s.percent(s.with_gap), 1),
                               detail::fmt(s.percent(s.non_tree), 1)};
    for (std::size_t u : s.head_upos) r.push_back(detail::fmt(s.percent(u), 1));
    cells.push_back(std::move(r));
  }
  return detail::render_table(header, cells, tsv);
}

}  // namespace corefud
