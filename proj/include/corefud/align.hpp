#pragma once

// One-to-one alignment of key and response mentions.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corefud/assignment.hpp"
#include "corefud/model.hpp"

namespace corefud {

// HEAD is applied as a document transform before alignment and then aligns
// like PARTIAL.
enum class MatchPolicy : std::uint8_t { Exact, Partial, Head };

inline const char* to_string(MatchPolicy p) {
  switch (p) {
    case MatchPolicy::Exact: return "exact";
    case MatchPolicy::Partial: return "partial";
    case MatchPolicy::Head: return "head";
  }
  return "?";
}

struct MentionAlignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (key index, response index)
  MatchPolicy policy = MatchPolicy::Partial;
};

inline std::size_t overlap(std::span<const NodeIndex> a, std::span<const NodeIndex> b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

// EXACT: equal node sets. PARTIAL/HEAD: every response node is in the key
// and the key head is among them.
inline bool matches(const Mention& key, const Mention& resp, MatchPolicy policy) {
  if (policy == MatchPolicy::Exact) return key.nodes == resp.nodes;
  return resp.contains(key.head) &&
         std::includes(key.nodes.begin(), key.nodes.end(), resp.nodes.begin(), resp.nodes.end());
}

namespace detail {

struct CandidateEdge {
  std::size_t key;
  std::size_t resp;
  std::int64_t overlap;
  std::int64_t size;  // |K| + |R|
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Rank of each mention in span order, making results independent of the
// order mentions were passed in.
inline std::vector<std::size_t> span_ranks(std::span<const Mention> ms) {
  std::vector<std::size_t> order(ms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ms[a].nodes != ms[b].nodes) return span_less(ms[a], ms[b]);
    return ms[a].head < ms[b].head;
  });
  std::vector<std::size_t> rank(ms.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  return rank;
}

// Solves each connected component of the candidate graph optimally under the
// objective: most pairs, then largest total overlap, then smallest total
// |K|+|R| (exact spans win), then smallest total span rank, then largest
// total product of key and response span ranks (interchangeable mentions pair
// up in span order). With `cardinality_first` false, the pair count is not
// part of the objective.
inline std::vector<std::pair<std::size_t, std::size_t>> solve_candidates(
    std::size_t n_key, std::size_t n_resp, const std::vector<CandidateEdge>& edges,
    std::span<const std::size_t> key_rank, std::span<const std::size_t> resp_rank,
    bool cardinality_first) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (edges.empty()) return pairs;

  DisjointSets sets(n_key + n_resp);
  for (const auto& e : edges) sets.unite(e.key, n_key + e.resp);
  std::unordered_map<std::size_t, std::vector<std::size_t>> comps;  // root -> edge ids
  for (std::size_t i = 0; i < edges.size(); ++i) comps[sets.find(edges[i].key)].push_back(i);

  std::vector<std::size_t> roots;
  roots.reserve(comps.size());
  for (const auto& [root, ids] : comps) roots.push_back(root);
  std::sort(roots.begin(), roots.end());

  for (std::size_t root : roots) {
    const auto& ids = comps[root];
    if (ids.size() == 1) {
      pairs.emplace_back(edges[ids[0]].key, edges[ids[0]].resp);
      continue;
    }
    std::vector<std::size_t> keys, resps;
    for (std::size_t id : ids) {
      keys.push_back(edges[id].key);
      resps.push_back(edges[id].resp);
    }
    auto by_rank = [](std::span<const std::size_t> rank) {
      return [rank](std::size_t a, std::size_t b) { return rank[a] < rank[b]; };
    };
    std::sort(keys.begin(), keys.end(), by_rank(key_rank));
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::sort(resps.begin(), resps.end(), by_rank(resp_rank));
    resps.erase(std::unique(resps.begin(), resps.end()), resps.end());
    std::unordered_map<std::size_t, std::size_t> key_pos, resp_pos;
    for (std::size_t i = 0; i < keys.size(); ++i) key_pos[keys[i]] = i;
    for (std::size_t i = 0; i < resps.size(); ++i) resp_pos[resps[i]] = i;

    // Lexicographic objective packed into one integer weight per edge. Levels
    // that would overflow are dropped from the least significant end.
    const auto nk = static_cast<__int128>(keys.size());
    const auto nr = static_cast<__int128>(resps.size());
    const auto total_k = static_cast<__int128>(n_key);
    const auto total_r = static_cast<__int128>(n_resp);
    const __int128 most_pairs = std::min(nk, nr);
    __int128 max_size = 0, sum_overlap = 0;
    for (std::size_t id : ids) {
      max_size = std::max<__int128>(max_size, edges[id].size);
      sum_overlap += edges[id].overlap;
    }
    const __int128 limit = static_cast<__int128>(INT64_MAX) / 4;
    __int128 w_order = 0, w_rank = 0, w_size = 0, w_overlap = 0, w_pair = 0;
    for (int drop = 0; drop < 4; ++drop) {
      w_order = drop >= 1 ? 0 : 1;
      const __int128 span_order = w_order ? most_pairs * total_k * total_r + 1 : 1;
      w_rank = drop >= 2 ? 0 : span_order;
      const __int128 span_rank = w_rank ? (most_pairs * (total_k + total_r) + 1) * w_rank : span_order;
      w_size = drop >= 3 ? 0 : span_rank;
      const __int128 span_size = w_size ? (most_pairs * max_size + 1) * w_size : span_rank;
      w_overlap = span_size;
      w_pair = (sum_overlap + 1) * w_overlap;
      if ((most_pairs + 1) * w_pair < limit) break;
    }
    if (!cardinality_first) w_pair = 0;

    WeightMatrix<std::int64_t> w(keys.size(), resps.size(), 0);
    for (std::size_t id : ids) {
      const auto& e = edges[id];
      const auto rk = static_cast<__int128>(key_rank[e.key]);
      const auto rr = static_cast<__int128>(resp_rank[e.resp]);
      const __int128 weight = w_pair + e.overlap * w_overlap + (max_size - e.size) * w_size +
                              (total_k + total_r - rk - rr) * w_rank + rk * rr * w_order;
      w(key_pos[e.key], resp_pos[e.resp]) = static_cast<std::int64_t>(weight);
    }
    std::vector<int> assigned = max_weight_assignment(w);
    for (std::size_t r = 0; r < assigned.size(); ++r) {
      if (assigned[r] < 0) continue;
      const auto c = static_cast<std::size_t>(assigned[r]);
      if (w(r, c) > 0) pairs.emplace_back(keys[r], resps[c]);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace detail

// Maximum-cardinality one-to-one alignment of predicate-satisfying pairs;
// among those, the one with the largest word overlap, then the tightest
// spans, then the earliest mentions.
inline MentionAlignment align_mentions(std::span<const Mention> key, std::span<const Mention> resp,
                                       MatchPolicy policy) {
  MentionAlignment out;
  out.policy = policy;
  std::vector<detail::CandidateEdge> edges;
  if (policy == MatchPolicy::Exact) {
    std::unordered_map<NodeIndex, std::vector<std::size_t>> by_first;
    for (std::size_t k = 0; k < key.size(); ++k) by_first[key[k].first()].push_back(k);
    for (std::size_t r = 0; r < resp.size(); ++r) {
      auto it = by_first.find(resp[r].first());
      if (it == by_first.end()) continue;
      for (std::size_t k : it->second) {
        if (key[k].nodes == resp[r].nodes) {
          const auto n = static_cast<std::int64_t>(key[k].nodes.size());
          edges.push_back({k, r, n, 2 * n});
        }
      }
    }
  } else {
    std::unordered_map<NodeIndex, std::vector<std::size_t>> by_head;
    for (std::size_t k = 0; k < key.size(); ++k) by_head[key[k].head].push_back(k);
    for (std::size_t r = 0; r < resp.size(); ++r) {
      for (NodeIndex n : resp[r].nodes) {
        auto it = by_head.find(n);
        if (it == by_head.end()) continue;
        for (std::size_t k : it->second) {
          if (matches(key[k], resp[r], policy)) {
            edges.push_back({k, r, static_cast<std::int64_t>(resp[r].nodes.size()),
                             static_cast<std::int64_t>(key[k].nodes.size() + resp[r].nodes.size())});
          }
        }
      }
    }
  }
  const auto key_rank = detail::span_ranks(key);
  const auto resp_rank = detail::span_ranks(resp);
  out.pairs = detail::solve_candidates(key.size(), resp.size(), edges, key_rank, resp_rank, true);
  return out;
}

// One-to-one alignment maximizing the total number of shared nodes, with no
// predicate and no regard to entities.
inline std::vector<std::pair<std::size_t, std::size_t>> align_by_overlap(
    std::span<const Mention> key, std::span<const Mention> resp) {
  std::unordered_map<NodeIndex, std::vector<std::size_t>> keys_at;
  for (std::size_t k = 0; k < key.size(); ++k) {
    for (NodeIndex n : key[k].nodes) keys_at[n].push_back(k);
  }
  std::vector<detail::CandidateEdge> edges;
  std::unordered_map<std::size_t, std::int64_t> shared;
  for (std::size_t r = 0; r < resp.size(); ++r) {
    shared.clear();
    for (NodeIndex n : resp[r].nodes) {
      auto it = keys_at.find(n);
      if (it == keys_at.end()) continue;
      for (std::size_t k : it->second) ++shared[k];
    }
    std::vector<std::pair<std::size_t, std::int64_t>> sorted(shared.begin(), shared.end());
    std::sort(sorted.begin(), sorted.end());
    for (auto [k, n] : sorted) {
      edges.push_back({k, r, n,
                       static_cast<std::int64_t>(key[k].nodes.size() + resp[r].nodes.size())});
    }
  }
  const auto key_rank = detail::span_ranks(key);
  const auto resp_rank = detail::span_ranks(resp);
  return detail::solve_candidates(key.size(), resp.size(), edges, key_rank, resp_rank, false);
}

}  // namespace corefud
