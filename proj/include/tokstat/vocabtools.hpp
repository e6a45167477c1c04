#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tokstat/conllu.hpp"
#include "tokstat/wordpiece.hpp"

namespace tokstat {

struct OverlapResult {
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  std::size_t shared = 0;
  double proportion_a_in_b = 0;  // shared / size_a
};

// Exact string-set intersection, measured relative to vocab_a.
OverlapResult overlap(const Vocabulary& vocab_a, const Vocabulary& vocab_b);

// Ids of every token emitted while tokenizing the corpus (UNK included when
// some fragment is uncovered), as a membership mask over vocab ids.
std::vector<bool> emitted_tokens(const Corpus& corpus, const Vocabulary& vocab,
                                 const TokenizerConfig& config, std::size_t workers = 1);

// Keeps the special tokens and every token emitted on the corpus, in original
// order, with ids re-compacted to 0..n-1. Tokenizing the same corpus with the
// result yields the same piece strings. Throws UndefinedMetricError on an
// empty corpus.
Vocabulary prune_vocab(const Vocabulary& vocab, const Corpus& corpus,
                       const TokenizerConfig& config, std::size_t workers = 1);

enum class RemapMode { kPaper, kSharedCopy };

std::string to_string(RemapMode mode);
// Accepts "paper" and "shared-copy"; throws std::invalid_argument otherwise.
RemapMode parse_remap_mode(const std::string& text);

struct RemapEntry {
  TokenId new_id = 0;
  std::string token;
  std::optional<TokenId> copy_from;  // empty: random initialization
};

// One instruction per id of the new vocabulary, in id order.
struct RemapPlan {
  RemapMode mode = RemapMode::kPaper;
  std::vector<RemapEntry> entries;

  std::size_t copy_count() const;
  std::size_t random_init_count() const { return entries.size() - copy_count(); }
};

// kPaper copies only the special tokens' rows from the old vocabulary;
// kSharedCopy copies every token string the two vocabularies share. Throws
// VocabError when a special token of either vocabulary is missing from the
// other.
RemapPlan remap_plan(const Vocabulary& old_vocab, const Vocabulary& new_vocab, RemapMode mode);

nlohmann::json to_json(const OverlapResult& result);
nlohmann::json to_json(const RemapPlan& plan);

}  // namespace tokstat
