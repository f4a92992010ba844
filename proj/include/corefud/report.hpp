#pragma once

// Text, JSON and TSV renderings of a ScoreReport.

#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "corefud/evaluate.hpp"

namespace corefud {

inline constexpr int kReportSchema = 1;

inline std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", as_percent(fraction));
  return buf;
}

inline std::string variant_label(const ScoreReport& r) {
  return std::string(to_string(r.policy)) + ", " +
         (r.keep_singletons ? "with singletons" : "no singletons");
}

// CoNLL F1 of the report: the macro average with several datasets, the only
// dataset otherwise.
inline std::optional<PRF> headline_conll(const ScoreReport& r) {
  if (r.datasets.empty()) return std::nullopt;
  const MetricScores& s = r.datasets.size() > 1 ? r.macro : r.datasets.front().scores;
  auto it = s.find(Metric::Conll);
  if (it == s.end()) return std::nullopt;
  return it->second;
}

inline std::string render_text(const ScoreReport& r) {
  std::string out;
  auto block = [&](const std::string& title, const MetricScores& scores, const ScoreCounts* counts,
                   const char* indent) {
    out += indent + title + "\n";
    for (Metric m : r.metrics) {
      const PRF& p = scores.at(m);
      char line[160];
      std::snprintf(line, sizeof line, "%s  %-6s recall %6s  precision %6s  F1 %6s", indent,
                    metric_name(m), format_percent(p.recall).c_str(),
                    format_percent(p.precision).c_str(), format_percent(p.f1).c_str());
      out += line;
      if (m == Metric::Zero && counts != nullptr) {
        const auto& z = counts->zero;
        out += "  (tp " + std::to_string(z.tp) + ", wl " + std::to_string(z.wl) + ", fp " +
               std::to_string(z.fp) + ", fn " + std::to_string(z.fn) + ")";
      }
      out += "\n";
    }
  };
  out += "variant: " + variant_label(r);
  if (r.upos_filter) out += ", head UPOS " + *r.upos_filter;
  out += "\n";
  for (const auto& ds : r.datasets) {
    block("dataset " + ds.name, ds.scores, &ds.counts, "");
    for (const auto& d : ds.documents) block("document " + d.id, d.scores, &d.counts, "  ");
  }
  if (r.datasets.size() > 1) block("macro average", r.macro, nullptr, "");
  if (auto c = headline_conll(r)) {
    out += "CoNLL F1 (" + variant_label(r) + "): " + format_percent(c->f1) + "\n";
  }
  return out;
}

inline nlohmann::ordered_json scores_json(const std::vector<Metric>& metrics, const MetricScores& s,
                                          const ScoreCounts* counts) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (Metric m : metrics) {
    const PRF& p = s.at(m);
    nlohmann::ordered_json entry = {{"r", as_percent(p.recall)},
                                    {"p", as_percent(p.precision)},
                                    {"f1", as_percent(p.f1)}};
    if (m == Metric::Zero && counts != nullptr) {
      entry["counts"] = {{"tp", counts->zero.tp},
                         {"wl", counts->zero.wl},
                         {"fp", counts->zero.fp},
                         {"fn", counts->zero.fn}};
    }
    j[metric_name(m)] = std::move(entry);
  }
  return j;
}

inline nlohmann::ordered_json render_json(const ScoreReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["variant"] = {{"match", to_string(r.policy)}, {"singletons", r.keep_singletons}};
  if (r.upos_filter) j["variant"]["upos_filter"] = *r.upos_filter;
  j["datasets"] = nlohmann::ordered_json::object();
  for (const auto& ds : r.datasets) {
    j["datasets"][ds.name] = scores_json(r.metrics, ds.scores, &ds.counts);
    if (!ds.documents.empty()) {
      auto& docs = j["documents"][ds.name];
      for (const auto& d : ds.documents) docs[d.id] = scores_json(r.metrics, d.scores, &d.counts);
    }
  }
  j["macro"] = r.datasets.empty() ? nlohmann::ordered_json::object()
                                  : scores_json(r.metrics, r.macro, nullptr);
  return j;
}

// One header row and one row for `system`: F1 per metric and dataset (plus
// the macro average when there are several datasets).
inline std::string render_tsv(const ScoreReport& r, const std::string& system, bool header = true) {
  std::vector<std::pair<std::string, const MetricScores*>> cols;
  for (const auto& ds : r.datasets) cols.emplace_back(ds.name, &ds.scores);
  if (r.datasets.size() > 1) cols.emplace_back("macro", &r.macro);
  std::string head = "system", row = system;
  for (Metric m : r.metrics) {
    for (const auto& [name, scores] : cols) {
      head += "\t" + std::string(metric_name(m)) + ":" + name;
      row += "\t" + format_percent(scores->at(m).f1);
    }
  }
  return (header ? head + "\n" : std::string()) + row + "\n";
}

}  // namespace corefud
