#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace corefud {
namespace {

using test::Row;

Row word(int id, std::string form, std::string upos, int head, std::string feats = "_") {
  Row r;
  r.id = std::to_string(id);
  r.form = form;
  r.lemma = std::move(form);
  r.upos = std::move(upos);
  r.head = std::to_string(head);
  r.deprel = head == 0 ? "root" : "dep";
  r.feats = std::move(feats);
  return r;
}

// Nodes: 0 Anna, 1 saw, 2 Petr | 3 Anna, 4 called.
CorefDocument names() {
  return test::load_one(test::sentence_text("s1", {word(1, "Anna", "PROPN", 2), word(2, "saw", "VERB", 0),
                                                   word(3, "Petr", "PROPN", 2)}) +
                        test::sentence_text("s2", {word(1, "Anna", "PROPN", 2), word(2, "called", "VERB", 0)}));
}

std::vector<std::pair<std::string, std::vector<std::vector<NodeIndex>>>> layout(const CorefDocument& d) {
  std::vector<std::pair<std::string, std::vector<std::vector<NodeIndex>>>> out;
  for (const auto& e : d.layer.entities) {
    std::vector<std::vector<NodeIndex>> ms;
    for (std::size_t m : e.mentions) ms.push_back(d.layer.mentions[m].nodes);
    out.emplace_back(e.eid, ms);
  }
  return out;
}

void expect_valid(const CorefDocument& d) {
  const std::string text = write_conllu(to_treebank({d}));
  EXPECT_NO_THROW(validate(parse_conllu(text), false)) << text;
}

TEST(PropnLemma, CreatesEntity) {
  auto d = propn_lemma_merge(names());
  using L = decltype(layout(d));
  EXPECT_EQ(layout(d), (L{{"e1", {{0}, {3}}}}));
  expect_valid(d);
}

TEST(PropnLemma, JoinsExistingEntities) {
  auto d = test::with_layer(names(), {{"e7", {0}}, {"e7", {2}}, {"e3", {3}}});
  auto m = propn_lemma_merge(d);
  ASSERT_EQ(m.layer.entities.size(), 1u);
  EXPECT_EQ(m.layer.entities[0].eid, "e3");
  EXPECT_EQ(m.layer.mentions.size(), 3u);
  expect_valid(m);
}

TEST(PropnLemma, UncoveredJoinsCoveredEntity) {
  auto d = test::with_layer(names(), {{"x", {3}}});
  auto m = propn_lemma_merge(d);
  using L = decltype(layout(m));
  EXPECT_EQ(layout(m), (L{{"x", {{0}, {3}}}}));
}

TEST(PropnLemma, DistinctLemmasUnchanged) {
  auto d = test::load_one(test::sentence_text(
      "s", {word(1, "Anna", "PROPN", 2), word(2, "met", "VERB", 0), word(3, "Eva", "PROPN", 2)}));
  auto m = propn_lemma_merge(d);
  EXPECT_FALSE(m.modified);
  EXPECT_TRUE(m.layer.mentions.empty());
  EXPECT_FALSE(propn_lemma_merge(names(), false).modified);
}

// Nodes: 0 dog(M), 1 cat(F), 2 barked | 3 she(F), 4 bone(M), 5 he(M), 6 it(N).
CorefDocument animals() {
  return test::load_one(
      test::sentence_text("s1", {word(1, "dog", "NOUN", 3, "Gender=Masc"), word(2, "cat", "NOUN", 1, "Gender=Fem"),
                                 word(3, "barked", "VERB", 0)}) +
      test::sentence_text("s2", {word(1, "she", "PRON", 0, "Gender=Fem"), word(2, "bone", "NOUN", 1, "Gender=Masc"),
                                 word(3, "he", "PRON", 1, "Gender=Masc"), word(4, "it", "PRON", 1, "Gender=Neut")}));
}

TEST(PronounGender, NearestNounOfSameGender) {
  auto d = pronoun_gender_link(animals());
  using L = decltype(layout(d));
  EXPECT_EQ(layout(d), (L{{"e1", {{1}, {3}}}, {"e2", {{4}, {5}}}}));
  expect_valid(d);
}

TEST(PronounGender, GenderMismatchLeavesPronoun) {
  auto d = test::load_one(test::sentence_text(
      "s", {word(1, "dog", "NOUN", 0, "Gender=Masc"), word(2, "she", "PRON", 1, "Gender=Fem")}));
  auto m = pronoun_gender_link(d);
  EXPECT_FALSE(m.modified);
  EXPECT_TRUE(m.layer.mentions.empty());
}

TEST(PronounGender, JoinsNounEntity) {
  auto d = test::with_layer(animals(), {{"e1", {0, 1}}, {"e4", {4}}, {"e4", {6}}});
  auto m = pronoun_gender_link(d);
  using L = decltype(layout(m));
  // The cat has no mention headed by it; dog's mention is headed by 0.
  EXPECT_EQ(layout(m), (L{{"e1", {{0, 1}}}, {"e5", {{1}, {3}}}, {"e4", {{4}, {5}, {6}}}}));
  expect_valid(m);
}

TEST(Baseline, RunOutputsValidate) {
  std::mt19937 rng(51);
  for (int round = 0; round < 100; ++round) {
    test::PlainOptions po;
    po.empty_prob = 0.1;
    auto base = test::load_one(test::random_plain_document(rng, po));
    auto d = test::with_layer(base, test::random_mentions(rng, base.table(), {}));
    for (bool pron : {false, true}) {
      BaselineOptions opts;
      opts.pronoun_gender = pron;
      auto out = run_baseline(d, opts);
      for (const auto& m : out.layer.mentions) EXPECT_EQ(m.nodes.size(), 1u);
      expect_valid(out);
      EXPECT_EQ(out.nodes, d.nodes);
    }
  }
}

}  // namespace
}  // namespace corefud
