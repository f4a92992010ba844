#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "support.hpp"

namespace corefud {
namespace {

Mention mention(std::vector<NodeIndex> nodes, NodeIndex head) {
  Mention m;
  m.nodes = std::move(nodes);
  m.head = head;
  return m;
}

// Nodes: 0 the, 1 big, 2 dog.
TEST(Matches, PartialContinuous) {
  const Mention key = mention({0, 1, 2}, 2);
  EXPECT_TRUE(matches(key, mention({1, 2}, 2), MatchPolicy::Partial));
  EXPECT_FALSE(matches(key, mention({0, 1}, 1), MatchPolicy::Partial));
  EXPECT_TRUE(matches(key, mention({2}, 2), MatchPolicy::Partial));
  EXPECT_FALSE(matches(key, mention({1, 2, 3}, 2), MatchPolicy::Partial));
}

TEST(Matches, Exact) {
  const Mention key = mention({0, 1, 2}, 2);
  EXPECT_TRUE(matches(key, mention({0, 1, 2}, 1), MatchPolicy::Exact));
  EXPECT_FALSE(matches(key, mention({1, 2}, 2), MatchPolicy::Exact));
}

// Key {A, B, E} with head B (A=0, B=1, C=2, E=4). Every nonempty subset of
// the key plus the outside node C, checked against the predicate directly.
TEST(Matches, DiscontinuousSubsetEnumeration) {
  const Mention key = mention({0, 1, 4}, 1);
  const std::vector<NodeIndex> pool{0, 1, 4, 2};
  for (int mask = 1; mask < 16; ++mask) {
    std::vector<NodeIndex> nodes;
    for (int i = 0; i < 4; ++i) {
      if (mask & (1 << i)) nodes.push_back(pool[static_cast<std::size_t>(i)]);
    }
    std::sort(nodes.begin(), nodes.end());
    const bool has_head = std::count(nodes.begin(), nodes.end(), 1) > 0;
    const bool inside = std::count(nodes.begin(), nodes.end(), 2) == 0;
    EXPECT_EQ(matches(key, mention(nodes, nodes.front()), MatchPolicy::Partial), has_head && inside)
        << "mask " << mask;
  }
  EXPECT_TRUE(matches(key, mention({1, 4}, 1), MatchPolicy::Partial));
  EXPECT_FALSE(matches(key, mention({1, 2}, 1), MatchPolicy::Partial));
}

TEST(Align, IdenticalExact) {
  std::vector<Mention> ms{mention({0}, 0), mention({1, 2}, 2), mention({3, 4, 5}, 4)};
  auto a = align_mentions(ms, ms, MatchPolicy::Exact);
  ASSERT_EQ(a.pairs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.pairs[i], std::make_pair(i, i));
}

TEST(Align, LargestOverlapWins) {
  std::vector<Mention> key{mention({0, 1, 2}, 1)};
  std::vector<Mention> resp{mention({1}, 1), mention({0, 1, 2}, 1)};
  auto a = align_mentions(key, resp, MatchPolicy::Partial);
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(a.pairs[0], std::make_pair(std::size_t{0}, std::size_t{1}));
}

TEST(Align, NestedKeysTightestSpan) {
  std::vector<Mention> key{mention({0, 1, 2}, 1), mention({1}, 1)};
  std::vector<Mention> resp{mention({1}, 1)};
  auto a = align_mentions(key, resp, MatchPolicy::Partial);
  ASSERT_EQ(a.pairs.size(), 1u);
  EXPECT_EQ(a.pairs[0].first, 1u);
}

TEST(Align, CardinalityBeforeOverlap) {
  // Key {0,1,2}h1 and {1}h1; responses {0,1,2} and {1}: both keys matched.
  std::vector<Mention> key{mention({0, 1, 2}, 1), mention({1}, 1)};
  std::vector<Mention> resp{mention({0, 1, 2}, 1), mention({1}, 1)};
  auto a = align_mentions(key, resp, MatchPolicy::Partial);
  ASSERT_EQ(a.pairs.size(), 2u);
  EXPECT_EQ(a.pairs[0], std::make_pair(std::size_t{0}, std::size_t{0}));
  EXPECT_EQ(a.pairs[1], std::make_pair(std::size_t{1}, std::size_t{1}));
}

TEST(Align, DuplicateSpansPairInOrder) {
  std::vector<Mention> ms{mention({2}, 2), mention({2}, 2), mention({2}, 2)};
  for (auto policy : {MatchPolicy::Exact, MatchPolicy::Partial}) {
    auto a = align_mentions(ms, ms, policy);
    ASSERT_EQ(a.pairs.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.pairs[i], std::make_pair(i, i));
  }
}

struct Sides {
  std::vector<Mention> key, resp;
};

Sides random_sides(std::mt19937& rng, int max_mentions) {
  test::PlainOptions po;
  po.sentences = 1;
  po.min_words = 4;
  po.max_words = 9;
  auto d = test::load_one(test::random_plain_document(rng, po));
  test::LayerOptions lo;
  lo.max_mentions = max_mentions;
  auto key_specs = test::random_mentions(rng, d.table(), lo);
  auto resp_specs = test::perturb(rng, d.table(), key_specs, lo);
  return {test::with_layer(d, key_specs).layer.mentions, test::with_layer(d, resp_specs).layer.mentions};
}

TEST(Align, MatchesExhaustiveOptimum) {
  std::mt19937 rng(21);
  for (int round = 0; round < 400; ++round) {
    auto [key, resp] = random_sides(rng, 6);
    for (auto policy : {MatchPolicy::Exact, MatchPolicy::Partial}) {
      auto a = align_mentions(key, resp, policy);
      std::set<std::size_t> ks, rs;
      for (auto [k, r] : a.pairs) {
        EXPECT_TRUE(oracle::predicate(key[k], resp[r], policy));
        EXPECT_TRUE(ks.insert(k).second);
        EXPECT_TRUE(rs.insert(r).second);
      }
      EXPECT_EQ(oracle::objective(key, resp, a.pairs), oracle::best_alignment_objective(key, resp, policy))
          << "round " << round;
    }
  }
}

TEST(Align, Properties) {
  std::mt19937 rng(22);
  for (int round = 0; round < 300; ++round) {
    auto [key, resp] = random_sides(rng, 10);
    auto exact = align_mentions(key, resp, MatchPolicy::Exact);
    auto partial = align_mentions(key, resp, MatchPolicy::Partial);
    EXPECT_LE(exact.pairs.size(), std::min(key.size(), resp.size()));
    EXPECT_LE(exact.pairs.size(), partial.pairs.size());
    std::size_t common = 0;
    for (const auto& k : key) {
      for (const auto& r : resp) common += k.nodes == r.nodes ? 1 : 0;
    }
    EXPECT_EQ(exact.pairs.size(), common);
  }
}

TEST(AlignByOverlap, MaximalOverlap) {
  std::mt19937 rng(23);
  for (int round = 0; round < 300; ++round) {
    auto [key, resp] = random_sides(rng, 7);
    std::size_t total = 0;
    std::set<std::size_t> ks, rs;
    for (auto [k, r] : align_by_overlap(key, resp)) {
      total += oracle::shared(key[k].nodes, resp[r].nodes);
      EXPECT_TRUE(ks.insert(k).second);
      EXPECT_TRUE(rs.insert(r).second);
    }
    EXPECT_EQ(total, oracle::best_overlap(key, resp));
  }
}

TEST(Assignment, Rectangular) {
  WeightMatrix<double> w(2, 3, 0.0);
  w(0, 0) = 1;
  w(0, 2) = 5;
  w(1, 2) = 4;
  w(1, 1) = 1;
  auto a = max_weight_assignment(w);
  EXPECT_EQ(a, (std::vector<int>{2, 1}));
  WeightMatrix<std::int64_t> t(3, 1, 0);
  t(1, 0) = 7;
  EXPECT_EQ(max_weight_assignment(t), (std::vector<int>{-1, 0, -1}));
}

}  // namespace
}  // namespace corefud
