#include "tokstat/metrics.hpp"

#include <stdexcept>

#include "tokstat/errors.hpp"
#include "tokstat/parallel.hpp"

namespace tokstat {

LengthHistogram::LengthHistogram(std::size_t bin_width) : bin_width_(bin_width) {
  if (bin_width_ == 0) throw std::invalid_argument("histogram bin width must be positive");
}

void LengthHistogram::add(std::size_t length, std::size_t count) {
  bins_[length / bin_width_] += count;
  total_ += count;
}

void LengthHistogram::merge(const LengthHistogram& other) {
  if (other.bin_width_ != bin_width_) {
    throw std::invalid_argument("cannot merge histograms with different bin widths");
  }
  for (const auto& [bin, count] : other.bins_) bins_[bin] += count;
  total_ += other.total_;
}

std::size_t LengthHistogram::count(std::size_t bin) const {
  auto it = bins_.find(bin);
  return it == bins_.end() ? 0 : it->second;
}

void MetricCounts::add_word(const TokenizedWord& word) {
  const auto pieces = word.piece_count();
  ++word_count;
  subword_count += pieces;
  if (pieces >= 2) ++continued_word_count;
  if (word.is_unknown) ++unk_word_count;
}

void MetricCounts::add_sentence(const Sentence& sentence, const Vocabulary& vocab,
                                const TokenizerConfig& config) {
  std::size_t sentence_pieces = 0;
  const TokenId unk = vocab.unk_id();
  for (const auto& w : sentence.words) {
    auto tokenized = tokenize_word(w, vocab, config);
    add_word(tokenized);
    sentence_pieces += tokenized.piece_count();
    for (TokenId id : tokenized.pieces) {
      if (id == unk) ++unk_token_count;
    }
  }
  ++sentence_count;
  model_lengths.add(sentence_pieces);
  reference_lengths.add(sentence.words.size());
}

void MetricCounts::merge(const MetricCounts& other) {
  word_count += other.word_count;
  subword_count += other.subword_count;
  continued_word_count += other.continued_word_count;
  unk_token_count += other.unk_token_count;
  unk_word_count += other.unk_word_count;
  sentence_count += other.sentence_count;
  model_lengths.merge(other.model_lengths);
  reference_lengths.merge(other.reference_lengths);
}

MetricCounts count_sentences(std::span<const Sentence> sentences, const Vocabulary& vocab,
                             const TokenizerConfig& config, std::size_t bin_width) {
  MetricCounts counts(bin_width);
  for (const auto& s : sentences) counts.add_sentence(s, vocab, config);
  return counts;
}

MetricCounts count_corpus(const Corpus& corpus, const Vocabulary& vocab,
                          const TokenizerConfig& config, std::size_t bin_width,
                          std::size_t workers) {
  std::span<const Sentence> sentences(corpus.sentences());
  auto partials = map_chunks(sentences, workers, [&](std::span<const Sentence> chunk) {
    return count_sentences(chunk, vocab, config, bin_width);
  });
  MetricCounts total(bin_width);
  for (const auto& p : partials) total.merge(p);
  return total;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return static_cast<double>(num) / static_cast<double>(den);
}

void require_words(const Corpus& corpus) {
  if (corpus.word_count() == 0) {
    throw UndefinedMetricError("metric undefined for corpus '" + corpus.language_tag() +
                               "' without words");
  }
}

}  // namespace

TokenizerReport make_report(const MetricCounts& counts, std::string vocab_name,
                            std::string language_tag) {
  if (counts.word_count == 0) {
    throw UndefinedMetricError("metric undefined for corpus '" + language_tag +
                               "' without words");
  }
  TokenizerReport r;
  r.fertility = ratio(counts.subword_count, counts.word_count);
  r.continuation_proportion = ratio(counts.continued_word_count, counts.word_count);
  r.unk_token_proportion = ratio(counts.unk_token_count, counts.subword_count);
  r.unk_word_proportion = ratio(counts.unk_word_count, counts.word_count);
  r.word_count = counts.word_count;
  r.subword_count = counts.subword_count;
  r.continued_word_count = counts.continued_word_count;
  r.unk_token_count = counts.unk_token_count;
  r.unk_word_count = counts.unk_word_count;
  r.sentence_count = counts.sentence_count;
  r.sentence_length_histogram = counts.model_lengths;
  r.reference_length_histogram = counts.reference_lengths;
  r.vocab_name = std::move(vocab_name);
  r.language_tag = std::move(language_tag);
  return r;
}

double fertility(const Corpus& corpus, const Vocabulary& vocab, const TokenizerConfig& config) {
  require_words(corpus);
  auto c = count_corpus(corpus, vocab, config);
  return ratio(c.subword_count, c.word_count);
}

double continuation_proportion(const Corpus& corpus, const Vocabulary& vocab,
                               const TokenizerConfig& config) {
  require_words(corpus);
  auto c = count_corpus(corpus, vocab, config);
  return ratio(c.continued_word_count, c.word_count);
}

UnkProportions unk_proportions(const Corpus& corpus, const Vocabulary& vocab,
                               const TokenizerConfig& config) {
  require_words(corpus);
  auto c = count_corpus(corpus, vocab, config);
  return {ratio(c.unk_token_count, c.subword_count), ratio(c.unk_word_count, c.word_count)};
}

LengthHistograms sentence_length_histogram(const Corpus& corpus, const Vocabulary& vocab,
                                           const TokenizerConfig& config, std::size_t bin_width) {
  auto c = count_corpus(corpus, vocab, config, bin_width);
  return {c.model_lengths, c.reference_lengths};
}

TokenizerReport tokenizer_report(const Corpus& corpus, const Vocabulary& vocab,
                                 const TokenizerConfig& config, std::size_t bin_width,
                                 std::size_t workers) {
  require_words(corpus);
  return make_report(count_corpus(corpus, vocab, config, bin_width, workers), vocab.name(),
                     corpus.language_tag());
}

nlohmann::json to_json(const LengthHistogram& histogram) {
  auto bins = nlohmann::json::array();
  for (const auto& [bin, count] : histogram.bins()) {
    bins.push_back({{"bin", bin},
                    {"count", count},
                    {"lower", bin * histogram.bin_width()},
                    {"upper", (bin + 1) * histogram.bin_width()}});
  }
  return bins;
}

nlohmann::json to_json(const TokenizerReport& r) {
  return {
      {"bin_width", r.sentence_length_histogram.bin_width()},
      {"continuation_proportion", r.continuation_proportion},
      {"continued_word_count", r.continued_word_count},
      {"fertility", r.fertility},
      {"language_tag", r.language_tag},
      {"reference_length_histogram", to_json(r.reference_length_histogram)},
      {"sentence_count", r.sentence_count},
      {"sentence_length_histogram", to_json(r.sentence_length_histogram)},
      {"subword_count", r.subword_count},
      {"unk_token_count", r.unk_token_count},
      {"unk_token_proportion", r.unk_token_proportion},
      {"unk_word_count", r.unk_word_count},
      {"unk_word_proportion", r.unk_word_proportion},
      {"vocab_name", r.vocab_name},
      {"word_count", r.word_count},
  };
}

}  // namespace tokstat
