#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tokstat {

// A syntactic word row of a CoNLL-U sentence (integer ID column).
struct Word {
  std::string form;
  std::size_t index = 0;
};

struct Sentence {
  std::vector<Word> words;
  std::optional<std::string> source_id;

  std::size_t size() const noexcept { return words.size(); }
};

// Reference-tokenized sentences of one language. Immutable once built;
// word_count() always equals the summed sentence lengths.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Sentence> sentences, std::string language_tag);

  const std::vector<Sentence>& sentences() const noexcept { return sentences_; }
  const std::string& language_tag() const noexcept { return language_tag_; }
  std::size_t word_count() const noexcept { return word_count_; }
  std::size_t sentence_count() const noexcept { return sentences_.size(); }
  bool empty() const noexcept { return word_count_ == 0; }

  // Appends other's sentences after this corpus' sentences.
  void append(Corpus other);

 private:
  std::vector<Sentence> sentences_;
  std::string language_tag_;
  std::size_t word_count_ = 0;
};

// Reads CoNLL-U text. Range rows ("3-4") and empty nodes ("5.1") are skipped;
// every integer-ID row becomes a Word. Accepts LF and CRLF line endings.
// Throws ParseError carrying the 1-based line number of the offending row.
Corpus parse_conllu(std::istream& in, std::string language_tag);
Corpus parse_conllu(std::string_view text, std::string language_tag);

// Parses each file (concurrently) and concatenates the sentences in path order.
// Throws IoError naming the path when a file cannot be opened, and ParseError
// prefixed with the path on malformed content.
Corpus load_corpus(std::span<const std::filesystem::path> paths, std::string language_tag);

}  // namespace tokstat
