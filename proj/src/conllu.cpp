#include "tokstat/conllu.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <future>
#include <sstream>

#include "tokstat/errors.hpp"

namespace tokstat {

Corpus::Corpus(std::vector<Sentence> sentences, std::string language_tag)
    : sentences_(std::move(sentences)), language_tag_(std::move(language_tag)) {
  for (const auto& s : sentences_) word_count_ += s.words.size();
}

void Corpus::append(Corpus other) {
  word_count_ += other.word_count_;
  if (sentences_.empty()) {
    sentences_ = std::move(other.sentences_);
    return;
  }
  sentences_.reserve(sentences_.size() + other.sentences_.size());
  std::move(other.sentences_.begin(), other.sentences_.end(), std::back_inserter(sentences_));
}

namespace {

constexpr std::size_t kColumns = 10;

enum class RowKind { kWord, kRange, kEmptyNode };

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

RowKind classify_id(std::string_view id, std::size_t line_no, std::size_t* index) {
  if (is_digits(id)) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), value);
    if (ec != std::errc() || value == 0) {
      throw ParseError("invalid word id '" + std::string(id) + "'", line_no);
    }
    *index = value;
    return RowKind::kWord;
  }
  auto split_pair = [&](char sep) {
    auto pos = id.find(sep);
    return pos != std::string_view::npos && is_digits(id.substr(0, pos)) &&
           is_digits(id.substr(pos + 1));
  };
  if (split_pair('-')) return RowKind::kRange;
  if (split_pair('.')) return RowKind::kEmptyNode;
  throw ParseError("invalid word id '" + std::string(id) + "'", line_no);
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; });
}

class SentenceBuilder {
 public:
  void comment(std::string_view line) {
    // "# sent_id = xyz"
    auto body = line.substr(1);
    auto eq = body.find('=');
    if (eq == std::string_view::npos) return;
    auto key = trim(body.substr(0, eq));
    if (key == "sent_id") current_.source_id = std::string(trim(body.substr(eq + 1)));
  }

  void word(std::string_view form, std::size_t index, std::size_t line_no) {
    if (form.empty()) throw ParseError("empty FORM column", line_no);
    if (current_.words.empty() ? index != 1 : index <= current_.words.back().index) {
      throw ParseError("word id " + std::to_string(index) + " out of sequence", line_no);
    }
    current_.words.push_back(Word{std::string(form), index});
  }

  void finish(std::vector<Sentence>& out) {
    if (!current_.words.empty()) out.push_back(std::move(current_));
    current_ = Sentence{};
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  }

  Sentence current_;
};

}  // namespace

Corpus parse_conllu(std::istream& in, std::string language_tag) {
  std::vector<Sentence> sentences;
  SentenceBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  std::array<std::string_view, kColumns> cols;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);

    if (is_blank(view)) {
      builder.finish(sentences);
      continue;
    }
    if (view.front() == '#') {
      builder.comment(view);
      continue;
    }

    std::size_t n = std::count(view.begin(), view.end(), '\t') + 1;
    if (n != kColumns) {
      throw ParseError("expected " + std::to_string(kColumns) + " tab-separated columns, found " +
                           std::to_string(n),
                       line_no);
    }
    std::size_t start = 0;
    for (auto& col : cols) {
      auto tab = view.find('\t', start);
      col = view.substr(start, tab == std::string_view::npos ? tab : tab - start);
      start = tab + 1;
    }

    std::size_t index = 0;
    if (classify_id(cols[0], line_no, &index) == RowKind::kWord) {
      builder.word(cols[1], index, line_no);
    }
  }
  if (in.bad()) throw IoError("read failure after line " + std::to_string(line_no));
  builder.finish(sentences);
  return Corpus(std::move(sentences), std::move(language_tag));
}

Corpus parse_conllu(std::string_view text, std::string language_tag) {
  std::istringstream in{std::string(text)};
  return parse_conllu(in, std::move(language_tag));
}

Corpus load_corpus(std::span<const std::filesystem::path> paths, std::string language_tag) {
  std::vector<std::future<Corpus>> parts;
  parts.reserve(paths.size());
  for (const auto& path : paths) {
    parts.push_back(std::async(std::launch::async, [path, language_tag] {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw IoError("cannot open corpus file: " + path.string());
      try {
        return parse_conllu(in, language_tag);
      } catch (const ParseError& e) {
        throw ParseError(e.message(), e.line(), path.string());
      }
    }));
  }
  Corpus merged({}, language_tag);
  // get() in path order so the first failing path is the one reported.
  for (auto& part : parts) merged.append(part.get());
  return merged;
}

}  // namespace tokstat
