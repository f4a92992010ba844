#include <gtest/gtest.h>

#include <map>
#include <random>

#include "support.hpp"

namespace corefud {
namespace {

using test::Row;

// "the big dog and cat barked": the<-dog, big<-dog, dog<-barked,
// and<-cat, cat<-dog (conj), barked root.
CorefDocument sentence() {
  auto w = [](int id, const char* form, const char* upos, int head, const char* rel) {
    Row r;
    r.id = std::to_string(id);
    r.form = form;
    r.lemma = form;
    r.upos = upos;
    r.head = std::to_string(head);
    r.deprel = rel;
    return r;
  };
  return test::load_one(test::sentence_text(
      "s", {w(1, "the", "DET", 3, "det"), w(2, "big", "ADJ", 3, "amod"), w(3, "dog", "NOUN", 6, "nsubj"),
            w(4, "and", "CCONJ", 5, "cc"), w(5, "cat", "NOUN", 3, "conj"), w(6, "barked", "VERB", 0, "root")}));
}

std::vector<std::vector<NodeIndex>> spans(const CorefDocument& d) {
  std::vector<std::vector<NodeIndex>> out;
  for (const auto& m : d.layer.mentions) out.push_back(m.nodes);
  return out;
}

TEST(ReduceToHead, Examples) {
  auto base = sentence();
  auto d = test::with_layer(base, {{"e1", {0, 1, 2}}});
  auto r = reduce_to_head(d);
  EXPECT_EQ(spans(r), (std::vector<std::vector<NodeIndex>>{{2}}));
  // Coordination and its first conjunct share the head: duplicate spans.
  auto coord = test::with_layer(base, {{"e1", {0, 1, 2, 3, 4}}, {"e2", {0, 1, 2}}});
  EXPECT_EQ(spans(reduce_to_head(coord)), (std::vector<std::vector<NodeIndex>>{{2}, {2}}));
  // Single node mentions stay as they are.
  auto single = test::with_layer(base, {{"e1", {4}}});
  single.modified = false;
  EXPECT_FALSE(reduce_to_head(single).modified);
}

TEST(ReduceToHead, OnlySingleNodeBrackets) {
  auto text = test::read_file(std::string(COREFUD_TEST_DATA) + "/corpus/discontinuous.conllu");
  auto docs = test::load(text);
  std::vector<CorefDocument> out;
  for (const auto& d : docs) out.push_back(reduce_to_head(d));
  const std::string written = write_conllu(to_treebank(out));
  for (const auto& d : parse_conllu(written).documents) {
    for (const auto& s : d.sentences) {
      for (const auto& t : s.tokens) {
        for (const auto& b : t.entity()) {
          EXPECT_EQ(b.kind, EntityBracket::Kind::OpenClose);
          EXPECT_FALSE(b.part);
        }
      }
    }
  }
}

TEST(MergeSameSpan, Examples) {
  auto base = sentence();
  auto d = test::with_layer(base, {{"e2", {2}}, {"e1", {2}}, {"e2", {4}}});
  auto m = merge_same_span_entities(d);
  ASSERT_EQ(m.layer.entities.size(), 1u);
  EXPECT_EQ(m.layer.entities[0].eid, "e1");
  EXPECT_EQ(spans(m), (std::vector<std::vector<NodeIndex>>{{2}, {4}}));
  auto plain = test::with_layer(base, {{"e1", {2}}, {"e2", {4}}});
  plain.modified = false;
  EXPECT_FALSE(merge_same_span_entities(plain).modified);
}

TEST(MergeSameSpan, Chain) {
  auto base = sentence();
  auto d = test::with_layer(base, {{"e1", {0}}, {"e2", {0}}, {"e2", {1}}, {"e3", {1}}, {"e4", {5}}});
  auto m = merge_same_span_entities(d);
  ASSERT_EQ(m.layer.entities.size(), 2u);
  EXPECT_EQ(m.layer.entities[0].eid, "e1");
  EXPECT_EQ(m.layer.entities[0].mentions.size(), 2u);
  EXPECT_EQ(m.layer.entities[1].eid, "e4");
}

// Union-find oracle: repeatedly join entities sharing a span until stable.
TEST(MergeSameSpan, ClosureOracle) {
  std::mt19937 rng(41);
  auto base = sentence();
  for (int round = 0; round < 300; ++round) {
    std::vector<test::MentionSpec> specs;
    const int n = 1 + static_cast<int>(rng() % 8);
    std::set<std::pair<std::string, std::vector<NodeIndex>>> seen;
    for (int i = 0; i < n; ++i) {
      const std::string eid = "e" + std::to_string(rng() % 6);
      std::vector<NodeIndex> nodes{static_cast<NodeIndex>(rng() % 6)};
      if (seen.insert({eid, nodes}).second) specs.push_back({eid, nodes});
    }
    std::map<std::string, std::string> group;
    for (const auto& s : specs) group[s.eid] = s.eid;
    for (bool again = true; again;) {
      again = false;
      for (const auto& a : specs) {
        for (const auto& b : specs) {
          if (a.nodes != b.nodes) continue;
          const std::string ga = group[a.eid], gb = group[b.eid];
          const std::string lo = std::min(ga, gb);
          for (auto& [eid, g] : group) {
            if ((g == ga || g == gb) && g != lo) {
              g = lo;
              again = true;
            }
          }
        }
      }
    }
    std::map<std::string, std::set<std::vector<NodeIndex>>> expected;
    for (const auto& s : specs) expected[group[s.eid]].insert(s.nodes);

    auto m = merge_same_span_entities(test::with_layer(base, specs));
    std::map<std::string, std::set<std::vector<NodeIndex>>> got;
    for (const auto& e : m.layer.entities) {
      for (std::size_t i : e.mentions) {
        EXPECT_TRUE(got[e.eid].insert(m.layer.mentions[i].nodes).second) << "duplicate mention";
      }
    }
    EXPECT_EQ(got, expected) << "round " << round;
  }
}

TEST(ConservativeHeadReduce, Examples) {
  auto base = sentence();
  auto lone = conservative_head_reduce(test::with_layer(base, {{"e1", {0, 2}}}));
  EXPECT_EQ(spans(lone), (std::vector<std::vector<NodeIndex>>{{2}}));
  auto pair = conservative_head_reduce(test::with_layer(base, {{"e1", {0, 1, 2}}, {"e2", {2}}}));
  EXPECT_EQ(spans(pair), (std::vector<std::vector<NodeIndex>>{{0, 1, 2}, {2}}));
  auto three = conservative_head_reduce(
      test::with_layer(base, {{"e1", {0, 1, 2, 3, 4}}, {"e2", {0, 1, 2}}, {"e3", {1, 2}}}));
  std::size_t multi = 0;
  for (const auto& s : spans(three)) multi += s.size() > 1 ? 1 : 0;
  EXPECT_EQ(multi, 1u);
  EXPECT_EQ(spans(three).front(), (std::vector<NodeIndex>{0, 1, 2, 3, 4}));
}

TEST(ConservativeHeadReduce, TieKeepsEarliest) {
  auto base = sentence();
  auto d = conservative_head_reduce(test::with_layer(base, {{"e1", {1, 2}}, {"e2", {0, 2}}}));
  EXPECT_EQ(spans(d), (std::vector<std::vector<NodeIndex>>{{0, 2}, {2}}));
}

TEST(RemoveSingletons, Examples) {
  auto base = sentence();
  auto all = remove_singletons(test::with_layer(base, {{"e1", {0}}, {"e2", {4}}}));
  EXPECT_TRUE(all.layer.mentions.empty());
  EXPECT_TRUE(all.layer.entities.empty());
  auto none = test::with_layer(base, {{"e1", {0}}, {"e1", {4}}});
  none.modified = false;
  EXPECT_FALSE(remove_singletons(none).modified);
  auto mixed = test::with_layer(base, {{"e1", {0}}, {"e1", {4}}, {"e2", {5}}, {"e3", {1}}});
  EXPECT_EQ(remove_singletons(mixed).layer.entities.size(), mixed.layer.entities.size() - 2);
}

TEST(FilterByHeadUpos, KeepsEntitiesWithMatchingHead) {
  auto base = sentence();
  auto d = test::with_layer(base, {{"e1", {0, 1, 2}}, {"e1", {5}}, {"e2", {1}}, {"e2", {3}}});
  auto f = filter_by_head_upos(d, "NOUN");
  ASSERT_EQ(f.layer.entities.size(), 1u);
  EXPECT_EQ(f.layer.entities[0].eid, "e1");
  EXPECT_EQ(f.layer.mentions.size(), 2u);
}

TEST(Transforms, IdempotentAndUniversePreserving) {
  std::mt19937 rng(42);
  for (int round = 0; round < 200; ++round) {
    test::PlainOptions po;
    po.empty_prob = 0.2;
    auto base = test::load_one(test::random_plain_document(rng, po));
    auto d = test::with_layer(base, test::random_mentions(rng, base.table(), {}));
    for (auto kind : {TransformKind::ReduceToHead, TransformKind::MergeSameSpan,
                      TransformKind::ConservativeHeadReduce, TransformKind::RemoveSingletons}) {
      auto once = apply_transform(d, kind);
      auto twice = apply_transform(once, kind);
      EXPECT_EQ(spans(once), spans(twice));
      EXPECT_EQ(test::entities_of(once.layer), test::entities_of(twice.layer));
      EXPECT_EQ(once.nodes, d.nodes);
    }
  }
}

// Without head sharing the three reductions coincide.
TEST(Transforms, ReductionsAgreeWithoutSharedHeads) {
  std::mt19937 rng(43);
  int checked = 0;
  for (int round = 0; round < 400; ++round) {
    auto base = test::load_one(test::random_plain_document(rng, {}));
    auto d = test::with_layer(base, test::random_mentions(rng, base.table(), {}));
    std::set<NodeIndex> heads;
    bool shared = false;
    for (const auto& m : d.layer.mentions) shared |= !heads.insert(m.head).second;
    if (shared) continue;
    ++checked;
    auto a = reduce_to_head(d);
    auto b = merge_same_span_entities(reduce_to_head(d));
    auto c = conservative_head_reduce(d);
    EXPECT_EQ(test::entities_of(a.layer), test::entities_of(b.layer));
    EXPECT_EQ(test::entities_of(a.layer), test::entities_of(c.layer));
  }
  EXPECT_GT(checked, 50);
}

TEST(Transforms, Names) {
  EXPECT_EQ(parse_transform("reduce-to-head"), TransformKind::ReduceToHead);
  EXPECT_EQ(parse_transform("merge-same-span"), TransformKind::MergeSameSpan);
  EXPECT_EQ(parse_transform("conservative-head-reduce"), TransformKind::ConservativeHeadReduce);
  EXPECT_EQ(parse_transform("remove-singletons"), TransformKind::RemoveSingletons);
  EXPECT_FALSE(parse_transform("reduce"));
}

}  // namespace
}  // namespace corefud
