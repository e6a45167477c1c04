#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "tokstat/errors.hpp"
#include "tokstat/vocabtools.hpp"

using namespace tokstat;

namespace {

const std::vector<std::string> kSpecials = {"[UNK]", "[CLS]", "[SEP]", "[PAD]", "[MASK]"};

Vocabulary with_specials(std::vector<std::string> extra, std::string name = "v") {
  std::vector<std::string> tokens = kSpecials;
  tokens.insert(tokens.end(), extra.begin(), extra.end());
  return Vocabulary(std::move(tokens), {}, std::move(name));
}

Corpus corpus_of(std::vector<std::string> words) {
  Sentence s;
  for (std::size_t i = 0; i < words.size(); ++i) s.words.push_back({words[i], i + 1});
  return Corpus({s}, "xx");
}

std::vector<std::vector<std::string>> piece_sequences(const Corpus& corpus, const Vocabulary& v,
                                                      const TokenizerConfig& c) {
  std::vector<std::vector<std::string>> out;
  for (const auto& s : corpus.sentences()) {
    for (const auto& w : s.words) {
      std::vector<std::string> pieces;
      for (auto id : tokenize_word(w, v, c).pieces) pieces.push_back(v.token(id));
      out.push_back(std::move(pieces));
    }
  }
  return out;
}

}  // namespace

TEST(Overlap, IdenticalAndDisjoint) {
  auto v = with_specials({"a", "b"});
  auto self = overlap(v, v);
  EXPECT_EQ(self.proportion_a_in_b, 1.0);
  EXPECT_EQ(self.shared, v.size());

  Vocabulary a({"[UNK]", "x"}, {}, "a");
  VocabOptions other_unk;
  other_unk.unk_token = "<unk>";
  Vocabulary b({"<unk>", "y"}, other_unk, "b");
  auto none = overlap(a, b);
  EXPECT_EQ(none.shared, 0u);
  EXPECT_EQ(none.proportion_a_in_b, 0.0);
}

TEST(Overlap, RelativeToFirstVocabulary) {
  Vocabulary a({"[UNK]", "x", "y", "z"}, {}, "a");
  Vocabulary b({"[UNK]", "x", "q"}, {}, "b");
  auto r = overlap(a, b);
  EXPECT_EQ(r.size_a, 4u);
  EXPECT_EQ(r.size_b, 3u);
  EXPECT_EQ(r.shared, 2u);
  EXPECT_EQ(r.proportion_a_in_b, 0.5);
  EXPECT_NEAR(overlap(b, a).proportion_a_in_b, 2.0 / 3.0, 1e-15);
  auto j = to_json(r);
  EXPECT_EQ(j["shared"], 2);
}

TEST(Prune, FixtureRemovesUnusedToken) {
  auto v = with_specials({"un", "##able", "able", "zzz"});
  auto pruned = prune_vocab(v, corpus_of({"unable", "able"}), {});
  std::vector<std::string> expected = kSpecials;
  expected.insert(expected.end(), {"un", "##able", "able"});
  EXPECT_EQ(pruned.tokens(), expected);
}

TEST(Prune, FullyEmittedVocabularyUnchanged) {
  auto v = with_specials({"un", "##able", "able"});
  auto pruned = prune_vocab(v, corpus_of({"unable", "able"}), {});
  EXPECT_EQ(pruned.tokens(), v.tokens());
}

TEST(Prune, EmptyCorpusRejected) {
  auto v = with_specials({"a"});
  EXPECT_THROW(prune_vocab(v, Corpus{}, {}), UndefinedMetricError);
}

TEST(PruneProperty, SubsetIdempotentAndEquivalent) {
  tokstat::testing::InstanceGenerator gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = gen.random_vocab();
    auto corpus = gen.random_corpus();
    auto c = gen.random_config();
    auto pruned = prune_vocab(v, corpus, c, gen.uniform(1, 4));

    std::set<std::string> original(v.tokens().begin(), v.tokens().end());
    for (const auto& t : pruned.tokens()) EXPECT_TRUE(original.count(t)) << t;
    for (const auto& s : v.special_tokens()) {
      if (v.contains(s)) {
        EXPECT_TRUE(pruned.contains(s)) << s;
      }
    }
    // order preserved
    std::size_t last = 0;
    for (const auto& t : pruned.tokens()) {
      auto id = *v.find(t);
      EXPECT_TRUE(last == 0 || id > last);
      last = id;
    }
    EXPECT_EQ(prune_vocab(pruned, corpus, c).tokens(), pruned.tokens());
    EXPECT_EQ(piece_sequences(corpus, pruned, c), piece_sequences(corpus, v, c));
  }
}

TEST(Remap, PaperModeCopiesOnlySpecials) {
  auto old_v = with_specials({"a", "b", "c", "d", "e"}, "old");
  auto new_v = with_specials({"x", "y", "a"}, "new");
  auto plan = remap_plan(old_v, new_v, RemapMode::kPaper);
  ASSERT_EQ(plan.entries.size(), new_v.size());
  EXPECT_EQ(plan.copy_count(), 5u);
  EXPECT_EQ(plan.random_init_count(), 3u);
  for (const auto& e : plan.entries) {
    if (e.copy_from) {
      EXPECT_TRUE(new_v.is_special(e.new_id));
      EXPECT_EQ(old_v.token(*e.copy_from), e.token);
    }
  }
}

TEST(Remap, SharedCopyIdentity) {
  auto v = with_specials({"a", "b"});
  auto plan = remap_plan(v, v, RemapMode::kSharedCopy);
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    EXPECT_EQ(plan.entries[i].new_id, i);
    ASSERT_TRUE(plan.entries[i].copy_from);
    EXPECT_EQ(*plan.entries[i].copy_from, i);
  }
}

TEST(Remap, SharedCopyCountsIntersection) {
  // old: 5 specials + 5 others; new: 5 specials + 3 shared + 2 novel
  auto old_v = with_specials({"p", "q", "r", "s", "t"}, "old");
  auto new_v = with_specials({"q", "zz", "s", "t", "yy"}, "new");
  auto plan = remap_plan(old_v, new_v, RemapMode::kSharedCopy);
  EXPECT_EQ(plan.entries.size(), 10u);
  EXPECT_EQ(plan.copy_count(), 8u);
  EXPECT_EQ(plan.random_init_count(), 2u);
  EXPECT_EQ(*plan.entries[5].copy_from, *old_v.find("q"));
  EXPECT_FALSE(plan.entries[6].copy_from);
}

TEST(Remap, MissingSpecialIsError) {
  auto full = with_specials({"a"});
  Vocabulary partial({"[UNK]", "[CLS]", "a"}, {}, "partial");
  EXPECT_THROW(remap_plan(full, partial, RemapMode::kPaper), VocabError);
  EXPECT_THROW(remap_plan(partial, full, RemapMode::kPaper), VocabError);
}

TEST(Remap, ModeNames) {
  EXPECT_EQ(parse_remap_mode("paper"), RemapMode::kPaper);
  EXPECT_EQ(parse_remap_mode("shared-copy"), RemapMode::kSharedCopy);
  EXPECT_EQ(to_string(RemapMode::kSharedCopy), "shared-copy");
  EXPECT_THROW(parse_remap_mode("all"), std::invalid_argument);
}

TEST(Remap, JsonLayout) {
  auto v = with_specials({"a"});
  auto j = to_json(remap_plan(v, v, RemapMode::kPaper));
  EXPECT_EQ(j["mode"], "paper");
  EXPECT_EQ(j["copy_count"], 5);
  EXPECT_EQ(j["random_init_count"], 1);
  EXPECT_EQ(j["new_vocab_size"], 6);
  EXPECT_EQ(j["entries"][5]["action"], "random_init");
  EXPECT_FALSE(j["entries"][5].contains("old_id"));
  EXPECT_EQ(j["entries"][0]["action"], "copy_from");
  EXPECT_EQ(j["entries"][0]["old_id"], 0);
}

TEST(RemapProperty, EveryNewIdExactlyOnce) {
  tokstat::testing::InstanceGenerator gen(41);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = gen.random_vocab();
    auto b = gen.random_vocab();
    for (auto mode : {RemapMode::kPaper, RemapMode::kSharedCopy}) {
      auto plan = remap_plan(a, b, mode);
      ASSERT_EQ(plan.entries.size(), b.size());
      for (std::size_t i = 0; i < plan.entries.size(); ++i) {
        EXPECT_EQ(plan.entries[i].new_id, i);
        EXPECT_EQ(plan.entries[i].token, b.token(static_cast<TokenId>(i)));
        if (plan.entries[i].copy_from) {
          ASSERT_LT(*plan.entries[i].copy_from, a.size());
          EXPECT_EQ(a.token(*plan.entries[i].copy_from), plan.entries[i].token);
        }
      }
      if (mode == RemapMode::kPaper) {
        EXPECT_EQ(plan.copy_count(), 5u);
      }
      if (mode == RemapMode::kSharedCopy) {
        EXPECT_EQ(plan.copy_count(), overlap(b, a).shared);
      }
    }
  }
}
