#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tokstat/conllu.hpp"

namespace tokstat {

using TokenId = std::uint32_t;

struct VocabOptions {
  std::string continuation_prefix = "##";
  std::set<std::string> special_tokens = {"[CLS]", "[SEP]", "[PAD]", "[UNK]", "[MASK]"};
  std::string unk_token = "[UNK]";
};

// Ordered subword inventory; a token's id is its zero-based position.
// Tokens are unique and the unknown token is always present.
class Vocabulary {
 public:
  // Validates uniqueness, non-emptiness and presence of the UNK token.
  // Throws VocabError.
  Vocabulary(std::vector<std::string> tokens, VocabOptions options, std::string name);

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::string& name() const noexcept { return name_; }
  const std::string& continuation_prefix() const noexcept { return options_.continuation_prefix; }
  const std::set<std::string>& special_tokens() const noexcept { return options_.special_tokens; }
  const VocabOptions& options() const noexcept { return options_; }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  TokenId unk_id() const noexcept { return unk_id_; }
  const std::string& token(TokenId id) const { return tokens_.at(id); }
  std::optional<TokenId> find(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }
  bool is_special(TokenId id) const { return options_.special_tokens.count(tokens_.at(id)) != 0; }

  // One token per line, the inverse of load_vocab.
  void write(std::ostream& out) const;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId, Hash, std::equal_to<>> index_;
  VocabOptions options_;
  std::string name_;
  TokenId unk_id_ = 0;
};

// vocab.txt reader: one token per line, line index = id. A final newline is
// tolerated; CR before LF is stripped. Throws VocabError on an empty file, a
// duplicate or empty token, or a missing UNK token.
Vocabulary load_vocab(std::istream& in, std::string name, VocabOptions options = {});
Vocabulary load_vocab_file(const std::string& path, VocabOptions options = {});

struct TokenizerConfig {
  bool lowercase = false;
  bool strip_accents = false;
  std::size_t max_chars_per_word = 100;
  bool isolate_punctuation = true;
  bool isolate_cjk = true;

  // Cased models keep accents, uncased ones strip them.
  static TokenizerConfig cased() { return {}; }
  static TokenizerConfig uncased() {
    TokenizerConfig c;
    c.lowercase = true;
    c.strip_accents = true;
    return c;
  }
};

struct TokenizedWord {
  std::string source;
  std::vector<TokenId> pieces;
  bool is_unknown = false;

  std::size_t piece_count() const noexcept { return pieces.size(); }
};

// BERT basic-tokenizer steps applied to one pre-tokenized word: drops control
// characters, splits on whitespace, optionally lowercases and strips combining
// marks (after canonical decomposition), and isolates punctuation and CJK
// ideographs as single-character fragments. May return no fragments when
// nothing printable remains.
std::vector<std::string> normalize_word(std::string_view word, const TokenizerConfig& config);

// Greedy longest-match-first segmentation of a single fragment. Returns an
// empty optional when the fragment cannot be covered or exceeds
// max_chars_per_word code points.
std::optional<std::vector<TokenId>> wordpiece_segment(std::string_view fragment,
                                                      const Vocabulary& vocab,
                                                      const TokenizerConfig& config);

// normalize_word followed by wordpiece_segment on each fragment; uncovered
// fragments contribute one UNK piece. is_unknown is set only when the word
// yields a single UNK piece overall (or normalizes to nothing).
TokenizedWord tokenize_word(const Word& word, const Vocabulary& vocab,
                            const TokenizerConfig& config);
TokenizedWord tokenize_word(std::string_view form, const Vocabulary& vocab,
                            const TokenizerConfig& config);

namespace detail {
// normalize_word without the ASCII shortcut.
std::vector<std::string> normalize_word_unicode(std::string_view word,
                                                const TokenizerConfig& config);
}  // namespace detail

}  // namespace tokstat
