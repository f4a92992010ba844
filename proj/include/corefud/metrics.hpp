#pragma once

// Coreference metrics over aligned key and response clusterings.
//
// Every metric is computed from additive counts so that documents can be
// scored independently and summed per dataset.

#include <algorithm>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corefud/align.hpp"
#include "corefud/assignment.hpp"
#include "corefud/model.hpp"

namespace corefud {

struct PRF {
  double recall = 0;
  double precision = 0;
  double f1 = 0;

  static PRF from(double recall, double precision) {
    PRF p{recall, precision, 0};
    if (recall + precision > 0) p.f1 = 2 * recall * precision / (recall + precision);
    return p;
  }
  friend bool operator==(const PRF&, const PRF&) = default;
};

inline double safe_ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }

// Numerators and denominators of recall and precision.
struct RatioCounts {
  double recall_num = 0;
  double recall_den = 0;
  double precision_num = 0;
  double precision_den = 0;

  PRF prf() const {
    return PRF::from(safe_ratio(recall_num, recall_den), safe_ratio(precision_num, precision_den));
  }
  RatioCounts& operator+=(const RatioCounts& o) {
    recall_num += o.recall_num;
    recall_den += o.recall_den;
    precision_num += o.precision_num;
    precision_den += o.precision_den;
    return *this;
  }
};

// Coreference and non-coreference link counts for BLANC.
struct BlancCounts {
  double coref_key = 0, coref_resp = 0, coref_common = 0;
  double non_key = 0, non_resp = 0, non_common = 0;

  // Mean of the coreference-link and non-coreference-link scores. A link
  // class empty on both sides is left out; empty on one side it scores 0.
  PRF prf() const {
    double r = 0, p = 0, f = 0;
    int classes = 0;
    auto add = [&](double key, double resp, double common) {
      if (key == 0 && resp == 0) return;
      PRF c = PRF::from(safe_ratio(common, key), safe_ratio(common, resp));
      r += c.recall;
      p += c.precision;
      f += c.f1;
      ++classes;
    };
    add(coref_key, coref_resp, coref_common);
    add(non_key, non_resp, non_common);
    if (classes == 0) return {};
    return PRF{r / classes, p / classes, f / classes};
  }
  BlancCounts& operator+=(const BlancCounts& o) {
    coref_key += o.coref_key;
    coref_resp += o.coref_resp;
    coref_common += o.coref_common;
    non_key += o.non_key;
    non_resp += o.non_resp;
    non_common += o.non_common;
    return *this;
  }
};

struct ZeroScoreCounts {
  std::int64_t tp = 0, wl = 0, fp = 0, fn = 0;

  PRF prf() const {
    return PRF::from(safe_ratio(static_cast<double>(tp), static_cast<double>(tp + wl + fn)),
                     safe_ratio(static_cast<double>(tp), static_cast<double>(tp + wl + fp)));
  }
  ZeroScoreCounts& operator+=(const ZeroScoreCounts& o) {
    tp += o.tp;
    wl += o.wl;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const ZeroScoreCounts&, const ZeroScoreCounts&) = default;
};

// Entities as lists of mention ids. Aligned response mentions carry the id of
// their key mention; the rest get ids of their own.
struct Clustering {
  std::vector<std::vector<std::size_t>> clusters;
  std::size_t universe = 0;  // ids are < universe

  std::size_t mention_count() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.size();
    return n;
  }
};

struct AlignedClusterings {
  Clustering key;
  Clustering resp;
};

// Key mention i gets id i; response mention j gets its key's id when
// aligned, else key.mentions.size() + j.
inline AlignedClusterings relabel(const CorefLayer& key, const CorefLayer& resp,
                                  const MentionAlignment& alignment) {
  AlignedClusterings out;
  const std::size_t n_key = key.mentions.size();
  out.key.universe = out.resp.universe = n_key + resp.mentions.size();
  std::vector<std::size_t> resp_id(resp.mentions.size());
  for (std::size_t j = 0; j < resp_id.size(); ++j) resp_id[j] = n_key + j;
  for (auto [k, r] : alignment.pairs) resp_id[r] = k;
  for (const auto& e : key.entities) out.key.clusters.emplace_back(e.mentions.begin(), e.mentions.end());
  for (const auto& e : resp.entities) {
    auto& c = out.resp.clusters.emplace_back();
    for (std::size_t m : e.mentions) c.push_back(resp_id[m]);
  }
  return out;
}

namespace detail {

inline std::vector<std::int64_t> cluster_of(const Clustering& c) {
  std::vector<std::int64_t> out(c.universe, -1);
  for (std::size_t i = 0; i < c.clusters.size(); ++i) {
    for (std::size_t m : c.clusters[i]) out[m] = static_cast<std::int64_t>(i);
  }
  return out;
}

// |A ∩ B| for every pair of clusters with a nonempty intersection, per row.
inline std::vector<std::vector<std::pair<std::size_t, std::size_t>>> intersections(
    const Clustering& rows, const std::vector<std::int64_t>& col_of) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out(rows.clusters.size());
  std::unordered_map<std::size_t, std::size_t> counts;
  for (std::size_t i = 0; i < rows.clusters.size(); ++i) {
    counts.clear();
    for (std::size_t m : rows.clusters[i]) {
      if (col_of[m] >= 0) ++counts[static_cast<std::size_t>(col_of[m])];
    }
    out[i].assign(counts.begin(), counts.end());
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

inline double pairs_of(double n) { return n * (n - 1) / 2; }

inline void muc_side(const Clustering& a, const Clustering& b, double& num, double& den) {
  const auto b_of = cluster_of(b);
  for (const auto& cluster : a.clusters) {
    if (cluster.size() < 2) continue;
    std::vector<std::int64_t> seen;
    std::size_t parts = 0;
    for (std::size_t m : cluster) {
      if (b_of[m] < 0) {
        ++parts;
      } else {
        seen.push_back(b_of[m]);
      }
    }
    std::sort(seen.begin(), seen.end());
    parts += static_cast<std::size_t>(std::unique(seen.begin(), seen.end()) - seen.begin());
    num += static_cast<double>(cluster.size() - parts);
    den += static_cast<double>(cluster.size() - 1);
  }
}

inline void b_cubed_side(const Clustering& a, const Clustering& b, double& num, double& den) {
  const auto inter = intersections(a, cluster_of(b));
  for (std::size_t i = 0; i < a.clusters.size(); ++i) {
    const double size = static_cast<double>(a.clusters[i].size());
    if (size == 0) continue;
    double sum = 0;
    for (auto [j, n] : inter[i]) sum += static_cast<double>(n) * static_cast<double>(n);
    num += sum / size;
    den += size;
  }
}

inline void lea_side(const Clustering& a, const Clustering& b, double& num, double& den) {
  const auto b_of = cluster_of(b);
  const auto inter = intersections(a, b_of);
  for (std::size_t i = 0; i < a.clusters.size(); ++i) {
    const auto& cluster = a.clusters[i];
    const double size = static_cast<double>(cluster.size());
    if (cluster.empty()) continue;
    double resolution = 0;
    if (cluster.size() == 1) {
      // A singleton's self-link is resolved when the other side also has it
      // as a singleton.
      const std::int64_t j = b_of[cluster.front()];
      if (j >= 0 && b.clusters[static_cast<std::size_t>(j)].size() == 1) resolution = 1;
    } else {
      double common = 0;
      for (auto [j, n] : inter[i]) common += pairs_of(static_cast<double>(n));
      resolution = common / pairs_of(size);
    }
    num += size * resolution;
    den += size;
  }
}

}  // namespace detail

inline RatioCounts muc_counts(const Clustering& key, const Clustering& resp) {
  RatioCounts c;
  detail::muc_side(key, resp, c.recall_num, c.recall_den);
  detail::muc_side(resp, key, c.precision_num, c.precision_den);
  return c;
}

inline RatioCounts b_cubed_counts(const Clustering& key, const Clustering& resp) {
  RatioCounts c;
  detail::b_cubed_side(key, resp, c.recall_num, c.recall_den);
  detail::b_cubed_side(resp, key, c.precision_num, c.precision_den);
  return c;
}

inline RatioCounts lea_counts(const Clustering& key, const Clustering& resp) {
  RatioCounts c;
  detail::lea_side(key, resp, c.recall_num, c.recall_den);
  detail::lea_side(resp, key, c.precision_num, c.precision_den);
  return c;
}

// CEAF with the entity similarity phi4(K, R) = 2|K ∩ R| / (|K| + |R|) and an
// optimal one-to-one entity alignment.
inline RatioCounts ceaf_e_counts(const Clustering& key, const Clustering& resp) {
  RatioCounts c;
  c.recall_den = static_cast<double>(key.clusters.size());
  c.precision_den = static_cast<double>(resp.clusters.size());
  const auto inter = detail::intersections(key, detail::cluster_of(resp));

  // Split into connected components of overlapping entities.
  const std::size_t nk = key.clusters.size();
  detail::DisjointSets sets(nk + resp.clusters.size());
  for (std::size_t i = 0; i < nk; ++i) {
    for (auto [j, n] : inter[i]) sets.unite(i, nk + j);
  }
  std::unordered_map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> comps;
  for (std::size_t i = 0; i < nk; ++i) {
    if (!inter[i].empty()) comps[sets.find(i)].first.push_back(i);
  }
  for (std::size_t j = 0; j < resp.clusters.size(); ++j) {
    auto it = comps.find(sets.find(nk + j));
    if (it != comps.end()) it->second.second.push_back(j);
  }
  std::vector<std::size_t> roots;
  for (const auto& [root, members] : comps) roots.push_back(root);
  std::sort(roots.begin(), roots.end());

  double total = 0;
  for (std::size_t root : roots) {
    const auto& [rows, cols] = comps[root];
    std::unordered_map<std::size_t, std::size_t> col_pos;
    for (std::size_t x = 0; x < cols.size(); ++x) col_pos[cols[x]] = x;
    WeightMatrix<double> w(rows.size(), cols.size(), 0.0);
    for (std::size_t x = 0; x < rows.size(); ++x) {
      const double ks = static_cast<double>(key.clusters[rows[x]].size());
      for (auto [j, n] : inter[rows[x]]) {
        const double rs = static_cast<double>(resp.clusters[j].size());
        w(x, col_pos[j]) = 2.0 * static_cast<double>(n) / (ks + rs);
      }
    }
    const auto assigned = max_weight_assignment(w);
    for (std::size_t x = 0; x < assigned.size(); ++x) {
      if (assigned[x] >= 0) total += w(x, static_cast<std::size_t>(assigned[x]));
    }
  }
  c.recall_num = c.precision_num = total;
  return c;
}

inline BlancCounts blanc_counts(const Clustering& key, const Clustering& resp) {
  BlancCounts c;
  const auto resp_of = detail::cluster_of(resp);
  const auto key_of = detail::cluster_of(key);
  const auto inter = detail::intersections(key, resp_of);
  double n_key = 0, n_resp = 0;
  for (const auto& k : key.clusters) {
    c.coref_key += detail::pairs_of(static_cast<double>(k.size()));
    n_key += static_cast<double>(k.size());
  }
  for (const auto& r : resp.clusters) {
    c.coref_resp += detail::pairs_of(static_cast<double>(r.size()));
    n_resp += static_cast<double>(r.size());
  }
  for (const auto& row : inter) {
    for (auto [j, n] : row) c.coref_common += detail::pairs_of(static_cast<double>(n));
  }
  c.non_key = detail::pairs_of(n_key) - c.coref_key;
  c.non_resp = detail::pairs_of(n_resp) - c.coref_resp;

  // Non-coreference links shared by both sides: pairs of mentions present on
  // both sides that are split in the key and in the response.
  double shared = 0, same_key = 0, same_resp = 0;
  for (const auto& k : key.clusters) {
    double in_both = 0;
    for (std::size_t m : k) in_both += resp_of[m] >= 0 ? 1 : 0;
    shared += in_both;
    same_key += detail::pairs_of(in_both);
  }
  for (const auto& r : resp.clusters) {
    double in_both = 0;
    for (std::size_t m : r) in_both += key_of[m] >= 0 ? 1 : 0;
    same_resp += detail::pairs_of(in_both);
  }
  c.non_common = detail::pairs_of(shared) - same_key - same_resp + c.coref_common;
  return c;
}

inline PRF muc(const Clustering& key, const Clustering& resp) { return muc_counts(key, resp).prf(); }
inline PRF b_cubed(const Clustering& key, const Clustering& resp) {
  return b_cubed_counts(key, resp).prf();
}
inline PRF ceaf_e(const Clustering& key, const Clustering& resp) {
  return ceaf_e_counts(key, resp).prf();
}
inline PRF blanc(const Clustering& key, const Clustering& resp) {
  return blanc_counts(key, resp).prf();
}
inline PRF lea(const Clustering& key, const Clustering& resp) { return lea_counts(key, resp).prf(); }

// Unweighted mean of the MUC, B-cubed and CEAF-e scores.
inline PRF conll(const PRF& muc_score, const PRF& b_cubed_score, const PRF& ceaf_e_score) {
  return PRF{(muc_score.recall + b_cubed_score.recall + ceaf_e_score.recall) / 3,
             (muc_score.precision + b_cubed_score.precision + ceaf_e_score.precision) / 3,
             (muc_score.f1 + b_cubed_score.f1 + ceaf_e_score.f1) / 3};
}

// Mention overlap ratio: shared nodes under the overlap-maximizing mention
// alignment, over all key (recall) or response (precision) mention sizes.
inline RatioCounts mor_counts(std::span<const Mention> key, std::span<const Mention> resp) {
  RatioCounts c;
  for (const auto& m : key) c.recall_den += static_cast<double>(m.nodes.size());
  for (const auto& m : resp) c.precision_den += static_cast<double>(m.nodes.size());
  for (auto [k, r] : align_by_overlap(key, resp)) {
    c.recall_num += static_cast<double>(overlap(key[k].nodes, resp[r].nodes));
  }
  c.precision_num = c.recall_num;
  return c;
}

inline PRF mor(std::span<const Mention> key, std::span<const Mention> resp) {
  return mor_counts(key, resp).prf();
}

// Anaphor-decomposable score over zero mentions (all nodes empty). Key and
// response must share their node universe; zero counterparts are found by
// identical node sets.
inline ZeroScoreCounts zero_score_counts(const NodeTable& table, const CorefLayer& key,
                                         const CorefLayer& resp) {
  ZeroScoreCounts c;
  auto zeros = [&](const CorefLayer& layer) {
    std::vector<Mention> out;
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < layer.mentions.size(); ++i) {
      if (layer.mentions[i].is_zero(table)) {
        out.push_back(layer.mentions[i]);
        index.push_back(i);
      }
    }
    return std::pair{std::move(out), std::move(index)};
  };
  auto position_in_entity = [](const CorefLayer& layer, std::size_t m) {
    const auto& ms = layer.entities[layer.mentions[m].entity].mentions;
    return static_cast<std::size_t>(std::find(ms.begin(), ms.end(), m) - ms.begin());
  };

  auto [key_zeros, key_index] = zeros(key);
  auto [resp_zeros, resp_index] = zeros(resp);
  const auto pairs = align_mentions(key_zeros, resp_zeros, MatchPolicy::Exact).pairs;
  std::vector<std::int64_t> key_to_resp(key_zeros.size(), -1), resp_to_key(resp_zeros.size(), -1);
  for (auto [k, r] : pairs) {
    key_to_resp[k] = static_cast<std::int64_t>(resp_index[r]);
    resp_to_key[r] = static_cast<std::int64_t>(key_index[k]);
  }

  for (std::size_t z = 0; z < key_zeros.size(); ++z) {
    const std::size_t km = key_index[z];
    const std::size_t kpos = position_in_entity(key, km);
    if (kpos == 0) continue;  // not anaphoric
    if (key_to_resp[z] < 0) {
      ++c.fn;
      continue;
    }
    const auto rm = static_cast<std::size_t>(key_to_resp[z]);
    const std::size_t rpos = position_in_entity(resp, rm);
    if (rpos == 0) {
      ++c.fn;
      continue;
    }
    std::vector<NodeIndex> resp_before;
    const auto& resp_entity = resp.entities[resp.mentions[rm].entity].mentions;
    for (std::size_t i = 0; i < rpos; ++i) {
      const auto& ns = resp.mentions[resp_entity[i]].nodes;
      resp_before.insert(resp_before.end(), ns.begin(), ns.end());
    }
    std::sort(resp_before.begin(), resp_before.end());
    bool linked = false;
    const auto& key_entity = key.entities[key.mentions[km].entity].mentions;
    for (std::size_t i = 0; i < kpos && !linked; ++i) {
      for (NodeIndex n : key.mentions[key_entity[i]].nodes) {
        if (std::binary_search(resp_before.begin(), resp_before.end(), n)) {
          linked = true;
          break;
        }
      }
    }
    ++(linked ? c.tp : c.wl);
  }

  for (std::size_t z = 0; z < resp_zeros.size(); ++z) {
    if (position_in_entity(resp, resp_index[z]) == 0) continue;
    if (resp_to_key[z] < 0 ||
        position_in_entity(key, static_cast<std::size_t>(resp_to_key[z])) == 0) {
      ++c.fp;
    }
  }
  return c;
}

}  // namespace corefud
