#pragma once

// Scoring of response treebanks against key treebanks: per-document counts,
// summed per dataset, macro-averaged over datasets.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "corefud/align.hpp"
#include "corefud/document.hpp"
#include "corefud/error.hpp"
#include "corefud/metrics.hpp"
#include "corefud/transforms.hpp"

namespace corefud {

enum class Metric : std::uint8_t { Muc, BCubed, CeafE, Conll, Blanc, Lea, Mor, Zero };

inline constexpr Metric kAllMetrics[] = {Metric::Muc,   Metric::BCubed, Metric::CeafE,
                                         Metric::Conll, Metric::Blanc,  Metric::Lea,
                                         Metric::Mor,   Metric::Zero};

inline const char* metric_name(Metric m) {
  switch (m) {
    case Metric::Muc: return "muc";
    case Metric::BCubed: return "bcub";
    case Metric::CeafE: return "ceafe";
    case Metric::Conll: return "conll";
    case Metric::Blanc: return "blanc";
    case Metric::Lea: return "lea";
    case Metric::Mor: return "mor";
    case Metric::Zero: return "zero";
  }
  return "?";
}

inline std::optional<Metric> parse_metric(std::string_view name) {
  for (Metric m : kAllMetrics) {
    if (name == metric_name(m)) return m;
  }
  return std::nullopt;
}

struct EvaluateOptions {
  MatchPolicy policy = MatchPolicy::Partial;
  bool keep_singletons = false;
  std::vector<Metric> metrics{std::begin(kAllMetrics), std::end(kAllMetrics)};
  std::optional<std::string> upos_filter;
  unsigned jobs = 0;  // 0: hardware concurrency
  bool per_document = false;

  bool wants(Metric m) const {
    if (std::find(metrics.begin(), metrics.end(), m) != metrics.end()) return true;
    if (m == Metric::Muc || m == Metric::BCubed || m == Metric::CeafE) {
      return std::find(metrics.begin(), metrics.end(), Metric::Conll) != metrics.end();
    }
    return false;
  }
};

// Additive counts of every metric for some set of documents.
struct ScoreCounts {
  RatioCounts muc, b_cubed, ceaf_e, lea, mor;
  BlancCounts blanc;
  ZeroScoreCounts zero;

  ScoreCounts& operator+=(const ScoreCounts& o) {
    muc += o.muc;
    b_cubed += o.b_cubed;
    ceaf_e += o.ceaf_e;
    lea += o.lea;
    mor += o.mor;
    blanc += o.blanc;
    zero += o.zero;
    return *this;
  }

  PRF score(Metric m) const {
    switch (m) {
      case Metric::Muc: return muc.prf();
      case Metric::BCubed: return b_cubed.prf();
      case Metric::CeafE: return ceaf_e.prf();
      case Metric::Conll: return conll(muc.prf(), b_cubed.prf(), ceaf_e.prf());
      case Metric::Blanc: return blanc.prf();
      case Metric::Lea: return lea.prf();
      case Metric::Mor: return mor.prf();
      case Metric::Zero: return zero.prf();
    }
    return {};
  }
};

using MetricScores = std::map<Metric, PRF>;

struct DocumentScores {
  std::string id;
  ScoreCounts counts;
  MetricScores scores;
};

struct DatasetScores {
  std::string name;
  ScoreCounts counts;
  MetricScores scores;
  std::vector<DocumentScores> documents;  // filled with EvaluateOptions::per_document
};

struct ScoreReport {
  MatchPolicy policy = MatchPolicy::Partial;
  bool keep_singletons = false;
  std::optional<std::string> upos_filter;
  std::vector<Metric> metrics;
  std::vector<DatasetScores> datasets;
  MetricScores macro;  // unweighted mean over datasets
  Diagnostics warnings;
};

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Rethrows the first
// exception (by index) after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::jthread> threads;
  for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

// Applies the filtering and head reduction a scoring variant asks for.
inline CorefDocument prepare_for_scoring(const CorefDocument& doc, const EvaluateOptions& opts) {
  CorefDocument out = doc;
  if (opts.upos_filter) out = filter_by_head_upos(out, *opts.upos_filter);
  if (!opts.keep_singletons) out = remove_singletons(out);
  if (opts.policy == MatchPolicy::Head) out = conservative_head_reduce(out);
  return out;
}

// Counts for one key/response document pair sharing a node universe.
inline ScoreCounts score_document(const CorefDocument& key_doc, const CorefDocument& resp_doc,
                                  const EvaluateOptions& opts) {
  if (!key_doc.table().same_universe(resp_doc.table())) {
    throw PairingError("document '" + key_doc.id +
                       "': response tokens or empty nodes differ from the key");
  }
  const CorefDocument key = prepare_for_scoring(key_doc, opts);
  const CorefDocument resp = prepare_for_scoring(resp_doc, opts);
  ScoreCounts c;

  const bool entity_metrics = opts.wants(Metric::Muc) || opts.wants(Metric::BCubed) ||
                              opts.wants(Metric::CeafE) || opts.wants(Metric::Blanc) ||
                              opts.wants(Metric::Lea);
  if (entity_metrics) {
    const MatchPolicy align_policy =
        opts.policy == MatchPolicy::Exact ? MatchPolicy::Exact : MatchPolicy::Partial;
    const auto alignment = align_mentions(key.layer.mentions, resp.layer.mentions, align_policy);
    const auto clusters = relabel(key.layer, resp.layer, alignment);
    if (opts.wants(Metric::Muc)) c.muc = muc_counts(clusters.key, clusters.resp);
    if (opts.wants(Metric::BCubed)) c.b_cubed = b_cubed_counts(clusters.key, clusters.resp);
    if (opts.wants(Metric::CeafE)) c.ceaf_e = ceaf_e_counts(clusters.key, clusters.resp);
    if (opts.wants(Metric::Blanc)) c.blanc = blanc_counts(clusters.key, clusters.resp);
    if (opts.wants(Metric::Lea)) c.lea = lea_counts(clusters.key, clusters.resp);
  }
  if (opts.wants(Metric::Mor)) c.mor = mor_counts(key.layer.mentions, resp.layer.mentions);
  if (opts.wants(Metric::Zero)) c.zero = zero_score_counts(key.table(), key.layer, resp.layer);
  return c;
}

inline MetricScores scores_for(const ScoreCounts& c, const EvaluateOptions& opts) {
  MetricScores out;
  for (Metric m : opts.metrics) out[m] = c.score(m);
  return out;
}

struct DatasetInput {
  std::string name;
  std::shared_ptr<const Treebank> key;
  std::shared_ptr<const Treebank> response;
};

// Scores every dataset. Documents pair by id (in order among equal ids); a
// key document without a response is scored against an empty response with
// a warning, a response document without a key is a PairingError.
inline ScoreReport evaluate(const std::vector<DatasetInput>& datasets, const EvaluateOptions& opts) {
  ScoreReport report;
  report.policy = opts.policy;
  report.keep_singletons = opts.keep_singletons;
  report.upos_filter = opts.upos_filter;
  report.metrics = opts.metrics;

  for (const auto& ds : datasets) {
    const Treebank& key = *ds.key;
    const Treebank& resp = *ds.response;
    std::unordered_map<std::string, std::deque<std::size_t>> resp_by_id;
    for (std::size_t i = 0; i < resp.documents.size(); ++i) {
      resp_by_id[resp.documents[i].id].push_back(i);
    }
    std::vector<std::optional<std::size_t>> partner(key.documents.size());
    for (std::size_t i = 0; i < key.documents.size(); ++i) {
      auto it = resp_by_id.find(key.documents[i].id);
      if (it != resp_by_id.end() && !it->second.empty()) {
        partner[i] = it->second.front();
        it->second.pop_front();
      } else {
        report.warnings.push_back({resp.source, 0,
                                   "document '" + key.documents[i].id +
                                       "' missing from the response; scored as empty"});
      }
    }
    for (const auto& [id, left] : resp_by_id) {
      if (!left.empty()) {
        throw PairingError(resp.source + ": document '" + id + "' does not occur in the key " +
                           key.source);
      }
    }

    std::vector<DocumentScores> per_doc(key.documents.size());
    std::vector<Diagnostics> doc_warnings(key.documents.size());
    parallel_for(key.documents.size(), opts.jobs, [&](std::size_t i) {
      Diagnostics* sink = &doc_warnings[i];
      CorefDocument key_doc = build_coref_layer(
          std::shared_ptr<const Document>(ds.key, &key.documents[i]), key.source, sink);
      CorefDocument resp_doc;
      if (partner[i]) {
        resp_doc = build_coref_layer(
            std::shared_ptr<const Document>(ds.response, &resp.documents[*partner[i]]),
            resp.source, sink);
      } else {
        resp_doc.id = key_doc.id;
        resp_doc.nodes = key_doc.nodes;
      }
      per_doc[i].id = key_doc.id;
      per_doc[i].counts = score_document(key_doc, resp_doc, opts);
      if (opts.per_document) per_doc[i].scores = scores_for(per_doc[i].counts, opts);
    });

    DatasetScores scores;
    scores.name = ds.name;
    for (std::size_t i = 0; i < per_doc.size(); ++i) {
      scores.counts += per_doc[i].counts;
      for (auto& w : doc_warnings[i]) report.warnings.push_back(std::move(w));
    }
    scores.scores = scores_for(scores.counts, opts);
    if (opts.per_document) scores.documents = std::move(per_doc);
    report.datasets.push_back(std::move(scores));
  }

  if (!report.datasets.empty()) {
    const double n = static_cast<double>(report.datasets.size());
    for (Metric m : opts.metrics) {
      PRF sum;
      for (const auto& ds : report.datasets) {
        const PRF& p = ds.scores.at(m);
        sum.recall += p.recall;
        sum.precision += p.precision;
        sum.f1 += p.f1;
      }
      report.macro[m] = PRF{sum.recall / n, sum.precision / n, sum.f1 / n};
    }
  }
  return report;
}

// Percent with two decimals, as printed in reports.
inline double as_percent(double fraction) { return std::round(fraction * 10000.0) / 100.0; }

}  // namespace corefud
