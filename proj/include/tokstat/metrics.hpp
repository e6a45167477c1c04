#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "tokstat/conllu.hpp"
#include "tokstat/wordpiece.hpp"

namespace tokstat {

inline constexpr std::size_t kDefaultBinWidth = 5;

// Sparse histogram of sentence lengths; bin b covers [b*width, (b+1)*width).
class LengthHistogram {
 public:
  explicit LengthHistogram(std::size_t bin_width = kDefaultBinWidth);

  void add(std::size_t length, std::size_t count = 1);
  void merge(const LengthHistogram& other);

  std::size_t bin_width() const noexcept { return bin_width_; }
  std::size_t total() const noexcept { return total_; }
  const std::map<std::size_t, std::size_t>& bins() const noexcept { return bins_; }
  std::size_t count(std::size_t bin) const;

  bool operator==(const LengthHistogram&) const = default;

 private:
  std::size_t bin_width_;
  std::map<std::size_t, std::size_t> bins_;
  std::size_t total_ = 0;
};

// Exact integer state of a metric pass. Partial states over disjoint sentence
// sets merge (commutatively and associatively) into the state of their union.
struct MetricCounts {
  std::size_t word_count = 0;
  std::size_t subword_count = 0;
  std::size_t continued_word_count = 0;
  std::size_t unk_token_count = 0;
  std::size_t unk_word_count = 0;
  std::size_t sentence_count = 0;
  LengthHistogram model_lengths;
  LengthHistogram reference_lengths;

  explicit MetricCounts(std::size_t bin_width = kDefaultBinWidth)
      : model_lengths(bin_width), reference_lengths(bin_width) {}

  void add_word(const TokenizedWord& word);
  void add_sentence(const Sentence& sentence, const Vocabulary& vocab,
                    const TokenizerConfig& config);
  void merge(const MetricCounts& other);

  bool operator==(const MetricCounts&) const = default;
};

// Single pass over the given sentences.
MetricCounts count_sentences(std::span<const Sentence> sentences, const Vocabulary& vocab,
                             const TokenizerConfig& config,
                             std::size_t bin_width = kDefaultBinWidth);

// Partitioned pass; workers == 0 means default parallelism. The result does
// not depend on the worker count.
MetricCounts count_corpus(const Corpus& corpus, const Vocabulary& vocab,
                          const TokenizerConfig& config, std::size_t bin_width = kDefaultBinWidth,
                          std::size_t workers = 1);

struct TokenizerReport {
  double fertility = 0;
  double continuation_proportion = 0;
  double unk_token_proportion = 0;
  double unk_word_proportion = 0;
  std::size_t word_count = 0;
  std::size_t subword_count = 0;
  std::size_t continued_word_count = 0;
  std::size_t unk_token_count = 0;
  std::size_t unk_word_count = 0;
  std::size_t sentence_count = 0;
  LengthHistogram sentence_length_histogram;
  LengthHistogram reference_length_histogram;
  std::string vocab_name;
  std::string language_tag;
};

// Derives the ratios from exact counts. Throws UndefinedMetricError when
// counts.word_count == 0.
TokenizerReport make_report(const MetricCounts& counts, std::string vocab_name,
                            std::string language_tag);

// Mean piece count per word; UNK words count as one piece.
double fertility(const Corpus& corpus, const Vocabulary& vocab, const TokenizerConfig& config);
// Fraction of words split into two or more pieces.
double continuation_proportion(const Corpus& corpus, const Vocabulary& vocab,
                               const TokenizerConfig& config);

struct UnkProportions {
  double token_level = 0;  // UNK pieces / all pieces
  double word_level = 0;   // fully unknown words / words
};
UnkProportions unk_proportions(const Corpus& corpus, const Vocabulary& vocab,
                               const TokenizerConfig& config);

struct LengthHistograms {
  LengthHistogram model;      // per-sentence piece totals
  LengthHistogram reference;  // per-sentence word counts
};
// Throws std::invalid_argument when bin_width == 0.
LengthHistograms sentence_length_histogram(const Corpus& corpus, const Vocabulary& vocab,
                                           const TokenizerConfig& config, std::size_t bin_width);

TokenizerReport tokenizer_report(const Corpus& corpus, const Vocabulary& vocab,
                                 const TokenizerConfig& config,
                                 std::size_t bin_width = kDefaultBinWidth, std::size_t workers = 1);

nlohmann::json to_json(const LengthHistogram& histogram);
nlohmann::json to_json(const TokenizerReport& report);

}  // namespace tokstat
