#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tokstat/conllu.hpp"
#include "tokstat/errors.hpp"

namespace fs = std::filesystem;
using namespace tokstat;

namespace {

std::string row(const std::string& id, const std::string& form) {
  return id + "\t" + form + "\t_\t_\t_\t_\t_\t_\t_\t_\n";
}

fs::path temp_file(const std::string& name, const std::string& content) {
  auto dir = fs::temp_directory_path() / "tokstat-conllu-test";
  fs::create_directories(dir);
  auto path = dir / name;
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

}  // namespace

TEST(Conllu, MinimalSentence) {
  auto corpus = parse_conllu(row("1", "Hello") + row("2", "world") + "\n", "en");
  ASSERT_EQ(corpus.sentence_count(), 1u);
  EXPECT_EQ(corpus.word_count(), 2u);
  EXPECT_EQ(corpus.language_tag(), "en");
  EXPECT_EQ(corpus.sentences()[0].words[0].form, "Hello");
  EXPECT_EQ(corpus.sentences()[0].words[1].index, 2u);
}

TEST(Conllu, MissingFinalBlankLineStillClosesSentence) {
  auto corpus = parse_conllu(row("1", "a") + "\n" + row("1", "b"), "x");
  EXPECT_EQ(corpus.sentence_count(), 2u);
  EXPECT_EQ(corpus.word_count(), 2u);
}

TEST(Conllu, RangeRowsAndEmptyNodesAreSkipped) {
  // "vámonos" = "vamos" + "nos"
  std::string text = "# sent_id = s1\n" + row("1-2", "vámonos") + row("1", "vamos") +
                     row("2", "nos") + row("2.1", "ghost") + row("3", "!") + "\n";
  auto corpus = parse_conllu(text, "es");
  ASSERT_EQ(corpus.sentence_count(), 1u);
  const auto& s = corpus.sentences()[0];
  ASSERT_EQ(s.words.size(), 3u);
  EXPECT_EQ(s.words[0].form, "vamos");
  EXPECT_EQ(s.words[1].form, "nos");
  EXPECT_EQ(s.words[2].form, "!");
  EXPECT_EQ(s.source_id, "s1");
}

TEST(Conllu, CrlfAndBomAccepted) {
  std::string text = "\xEF\xBB\xBF" "# text = a b\r\n1\ta\t_\t_\t_\t_\t_\t_\t_\t_\r\n"
                     "2\tb\t_\t_\t_\t_\t_\t_\t_\t_\r\n\r\n";
  auto corpus = parse_conllu(text, "x");
  ASSERT_EQ(corpus.word_count(), 2u);
  EXPECT_EQ(corpus.sentences()[0].words[1].form, "b");
}

TEST(Conllu, FormMayContainSpaces) {
  auto corpus = parse_conllu(row("1", "100 000") + "\n", "fr");
  EXPECT_EQ(corpus.sentences()[0].words[0].form, "100 000");
}

TEST(Conllu, EmptyInputGivesEmptyCorpus) {
  auto corpus = parse_conllu("", "x");
  EXPECT_TRUE(corpus.empty());
  EXPECT_EQ(corpus.sentence_count(), 0u);
}

TEST(Conllu, WrongColumnCountReportsLine) {
  std::string text = row("1", "ok") + "2\tbad\t_\n";
  try {
    parse_conllu(text, "x");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Conllu, BadIdReportsLine) {
  std::string text = "# c\n" + row("1", "a") + row("x", "b");
  try {
    parse_conllu(text, "x");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Conllu, OutOfSequenceIdsRejected) {
  EXPECT_THROW(parse_conllu(row("2", "a"), "x"), ParseError);
  EXPECT_THROW(parse_conllu(row("1", "a") + row("1", "b"), "x"), ParseError);
  EXPECT_THROW(parse_conllu(row("0", "a"), "x"), ParseError);
}

TEST(Conllu, EmptyFormRejected) {
  EXPECT_THROW(parse_conllu("1\t\t_\t_\t_\t_\t_\t_\t_\t_\n", "x"), ParseError);
}

TEST(Conllu, LoadCorpusConcatenatesInPathOrder) {
  auto a = temp_file("a.conllu", row("1", "first") + "\n");
  auto b = temp_file("b.conllu", row("1", "second") + "\n" + row("1", "third") + "\n");
  std::vector<fs::path> paths = {b, a};
  auto corpus = load_corpus(paths, "x");
  ASSERT_EQ(corpus.sentence_count(), 3u);
  EXPECT_EQ(corpus.sentences()[0].words[0].form, "second");
  EXPECT_EQ(corpus.sentences()[2].words[0].form, "first");
}

TEST(Conllu, LoadCorpusMissingFileIsIoError) {
  std::vector<fs::path> paths = {"/nonexistent/tokstat/x.conllu"};
  try {
    load_corpus(paths, "x");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/tokstat/x.conllu"), std::string::npos);
  }
}

TEST(Conllu, LoadCorpusParseErrorNamesFile) {
  auto bad = temp_file("bad.conllu", row("1", "a") + "oops\n");
  std::vector<fs::path> paths = {bad};
  try {
    load_corpus(paths, "x");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("bad.conllu:2"), std::string::npos);
  }
}

TEST(Conllu, BundledFixtureShape) {
  std::vector<fs::path> paths = {fs::path(TOKSTAT_SOURCE_DIR) / "data/fixtures/fixture.conllu"};
  auto corpus = load_corpus(paths, "fx");
  EXPECT_EQ(corpus.sentence_count(), 50u);
  EXPECT_EQ(corpus.word_count(), 518u);
}

// Serializing random sentences and parsing them back preserves the word
// multiset and the per-sentence counts.
TEST(ConlluProperty, RoundTripPreservesWords) {
  tokstat::testing::InstanceGenerator gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    auto corpus = gen.random_corpus();
    std::ostringstream text;
    std::map<std::string, int> expected;
    for (const auto& s : corpus.sentences()) {
      std::size_t id = 1;
      for (const auto& w : s.words) {
        if (gen.coin(0.1)) text << row(std::to_string(id) + "-" + std::to_string(id + 1), "mwt");
        text << row(std::to_string(id), w.form);
        if (gen.coin(0.1)) text << row(std::to_string(id) + ".1", "empty");
        ++expected[w.form];
        ++id;
      }
      text << "\n";
    }
    auto parsed = parse_conllu(text.str(), "xx");
    ASSERT_EQ(parsed.sentence_count(), corpus.sentence_count());
    ASSERT_EQ(parsed.word_count(), corpus.word_count());
    std::map<std::string, int> actual;
    std::size_t sum = 0;
    for (std::size_t i = 0; i < parsed.sentence_count(); ++i) {
      EXPECT_EQ(parsed.sentences()[i].size(), corpus.sentences()[i].size());
      sum += parsed.sentences()[i].size();
      for (const auto& w : parsed.sentences()[i].words) ++actual[w.form];
    }
    EXPECT_EQ(sum, parsed.word_count());
    EXPECT_EQ(actual, expected);
  }
}
