#include "tokstat/wordpiece.hpp"

#include <algorithm>
#include <fstream>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "tokstat/errors.hpp"

namespace tokstat {

Vocabulary::Vocabulary(std::vector<std::string> tokens, VocabOptions options, std::string name)
    : tokens_(std::move(tokens)), options_(std::move(options)), name_(std::move(name)) {
  if (tokens_.empty()) throw VocabError("vocabulary '" + name_ + "' is empty");
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) {
      throw VocabError("vocabulary '" + name_ + "': empty token at id " + std::to_string(i));
    }
    auto [it, inserted] = index_.emplace(tokens_[i], static_cast<TokenId>(i));
    if (!inserted) {
      throw VocabError("vocabulary '" + name_ + "': duplicate token '" + tokens_[i] + "' at ids " +
                       std::to_string(it->second) + " and " + std::to_string(i));
    }
  }
  auto unk = find(options_.unk_token);
  if (!unk) {
    throw VocabError("vocabulary '" + name_ + "' lacks the unknown token " + options_.unk_token);
  }
  unk_id_ = *unk;
  options_.special_tokens.insert(options_.unk_token);
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::write(std::ostream& out) const {
  for (const auto& t : tokens_) out << t << '\n';
}

Vocabulary load_vocab(std::istream& in, std::string name, VocabOptions options) {
  std::vector<std::string> tokens;
  std::string line;
  std::size_t trailing_blank = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line.empty()) {
      ++trailing_blank;
      continue;
    }
    if (trailing_blank != 0) {
      throw VocabError("vocabulary '" + name + "': empty token at line " +
                       std::to_string(line_no - trailing_blank));
    }
    tokens.push_back(std::move(line));
    line.clear();
  }
  if (in.bad()) throw IoError("read failure in vocabulary '" + name + "'");
  return Vocabulary(std::move(tokens), std::move(options), std::move(name));
}

Vocabulary load_vocab_file(const std::string& path, VocabOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocabulary file: " + path);
  return load_vocab(in, path, std::move(options));
}

namespace {

bool is_bert_whitespace(UChar32 c) {
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r') return true;
  return u_charType(c) == U_SPACE_SEPARATOR;
}

bool is_bert_control(UChar32 c) {
  if (c == '\t' || c == '\n' || c == '\r') return false;
  auto type = u_charType(c);
  return type == U_CONTROL_CHAR || type == U_FORMAT_CHAR;
}

bool is_bert_punctuation(UChar32 c) {
  // ASCII symbols such as '$' and '^' count as punctuation.
  if ((c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
      (c >= 123 && c <= 126)) {
    return true;
  }
  return (U_GET_GC_MASK(c) & U_GC_P_MASK) != 0;
}

bool is_cjk_ideograph(UChar32 c) {
  return (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF) ||
         (c >= 0x20000 && c <= 0x2A6DF) || (c >= 0x2A700 && c <= 0x2B73F) ||
         (c >= 0x2B740 && c <= 0x2B81F) || (c >= 0x2B820 && c <= 0x2CEAF) ||
         (c >= 0xF900 && c <= 0xFAFF) || (c >= 0x2F800 && c <= 0x2FA1F);
}

std::vector<UChar32> decode_utf8(std::string_view s) {
  std::vector<UChar32> out;
  out.reserve(s.size());
  int32_t i = 0;
  const auto length = static_cast<int32_t>(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  while (i < length) {
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? 0xFFFD : c);
  }
  return out;
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(n));
}

// Lowercasing and accent stripping on one whitespace-delimited run.
std::vector<UChar32> transform_run(const std::vector<UChar32>& run, const TokenizerConfig& config) {
  if (!config.lowercase && !config.strip_accents) return run;
  icu::UnicodeString text;
  for (UChar32 c : run) text.append(c);
  if (config.lowercase) text.toLower(icu::Locale::getRoot());
  if (config.strip_accents) {
    UErrorCode status = U_ZERO_ERROR;
    const auto* nfd = icu::Normalizer2::getNFDInstance(status);
    if (U_SUCCESS(status)) {
      icu::UnicodeString decomposed = nfd->normalize(text, status);
      if (U_SUCCESS(status)) text = std::move(decomposed);
    }
  }
  std::vector<UChar32> out;
  out.reserve(static_cast<std::size_t>(text.length()));
  for (int32_t i = 0; i < text.length();) {
    UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    if (config.strip_accents && u_charType(c) == U_NON_SPACING_MARK) continue;
    out.push_back(c);
  }
  return out;
}

void split_run(const std::vector<UChar32>& run, const TokenizerConfig& config,
               std::vector<std::string>& fragments) {
  std::string current;
  for (UChar32 c : run) {
    if (config.isolate_punctuation && is_bert_punctuation(c)) {
      if (!current.empty()) fragments.push_back(std::move(current));
      current.clear();
      std::string single;
      append_utf8(single, c);
      fragments.push_back(std::move(single));
      continue;
    }
    append_utf8(current, c);
  }
  if (!current.empty()) fragments.push_back(std::move(current));
}

bool is_ascii(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

std::vector<std::string> normalize_ascii(std::string_view word, const TokenizerConfig& config) {
  std::vector<std::string> fragments;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) fragments.push_back(std::move(current));
    current.clear();
  };
  for (char raw : word) {
    auto c = static_cast<unsigned char>(raw);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      flush();
    } else if (c < 0x20 || c == 0x7F) {
      continue;
    } else if (config.isolate_punctuation && is_bert_punctuation(c)) {
      flush();
      fragments.emplace_back(1, static_cast<char>(c));
    } else {
      if (config.lowercase && c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
      current.push_back(static_cast<char>(c));
    }
  }
  flush();
  return fragments;
}

}  // namespace

namespace detail {

// Full Unicode path, exposed so tests can check the ASCII shortcut against it.
std::vector<std::string> normalize_word_unicode(std::string_view word,
                                                const TokenizerConfig& config) {
  std::vector<std::string> fragments;
  std::vector<UChar32> run;
  auto flush = [&] {
    if (!run.empty()) split_run(transform_run(run, config), config, fragments);
    run.clear();
  };
  for (UChar32 c : decode_utf8(word)) {
    if (c == 0 || c == 0xFFFD || is_bert_control(c)) continue;
    if (is_bert_whitespace(c)) {
      flush();
    } else if (config.isolate_cjk && is_cjk_ideograph(c)) {
      flush();
      run.push_back(c);
      flush();
    } else {
      run.push_back(c);
    }
  }
  flush();
  return fragments;
}

}  // namespace detail

std::vector<std::string> normalize_word(std::string_view word, const TokenizerConfig& config) {
  if (is_ascii(word)) return normalize_ascii(word, config);
  return detail::normalize_word_unicode(word, config);
}

std::optional<std::vector<TokenId>> wordpiece_segment(std::string_view fragment,
                                                      const Vocabulary& vocab,
                                                      const TokenizerConfig& config) {
  // Byte offset of every code point boundary, including the end.
  std::vector<std::size_t> bounds;
  bounds.reserve(fragment.size() + 1);
  {
    int32_t i = 0;
    const auto length = static_cast<int32_t>(fragment.size());
    const auto* bytes = reinterpret_cast<const uint8_t*>(fragment.data());
    while (i < length) {
      bounds.push_back(static_cast<std::size_t>(i));
      U8_FWD_1(bytes, i, length);
    }
    bounds.push_back(fragment.size());
  }
  const std::size_t chars = bounds.size() - 1;
  if (chars == 0 || chars > config.max_chars_per_word) return std::nullopt;

  const std::string& prefix = vocab.continuation_prefix();
  std::vector<TokenId> pieces;
  std::string candidate;
  std::size_t start = 0;
  while (start < chars) {
    std::optional<TokenId> match;
    std::size_t end = chars;
    for (; end > start; --end) {
      candidate.clear();
      if (start > 0) candidate = prefix;
      candidate.append(fragment.substr(bounds[start], bounds[end] - bounds[start]));
      if ((match = vocab.find(candidate))) break;
    }
    if (!match) return std::nullopt;
    pieces.push_back(*match);
    start = end;
  }
  return pieces;
}

TokenizedWord tokenize_word(std::string_view form, const Vocabulary& vocab,
                            const TokenizerConfig& config) {
  TokenizedWord out;
  out.source = std::string(form);
  auto fragments = normalize_word(form, config);
  if (fragments.empty()) {
    out.pieces.push_back(vocab.unk_id());
    out.is_unknown = true;
    return out;
  }
  bool any_covered = false;
  for (const auto& fragment : fragments) {
    if (auto pieces = wordpiece_segment(fragment, vocab, config)) {
      out.pieces.insert(out.pieces.end(), pieces->begin(), pieces->end());
      any_covered = true;
    } else {
      out.pieces.push_back(vocab.unk_id());
    }
  }
  out.is_unknown = fragments.size() == 1 && !any_covered;
  return out;
}

TokenizedWord tokenize_word(const Word& word, const Vocabulary& vocab,
                            const TokenizerConfig& config) {
  return tokenize_word(word.form, vocab, config);
}

}  // namespace tokstat
