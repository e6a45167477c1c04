#pragma once

// Test-only reference implementations. They deliberately share no code with
// the library: WordPiece here scans the whole token list at every position,
// and ranks are computed by pairwise counting.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "tokstat/conllu.hpp"
#include "tokstat/wordpiece.hpp"

namespace tokstat::testing {

// Splits UTF-8 into code points (as byte strings). Input is assumed valid.
inline std::vector<std::string> utf8_chars(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : 4;
    out.emplace_back(s.substr(i, len));
    i += len;
  }
  return out;
}

// Greedy longest-prefix WordPiece by exhaustive scan over the token list.
// Returns the piece strings, or nullopt when the fragment is unknown.
inline std::optional<std::vector<std::string>> brute_force_wordpiece(
    std::string_view fragment, const std::vector<std::string>& tokens, const std::string& prefix,
    std::size_t max_chars) {
  const auto chars = utf8_chars(fragment);
  if (chars.empty() || chars.size() > max_chars) return std::nullopt;
  std::vector<std::string> pieces;
  std::size_t pos = 0;
  while (pos < chars.size()) {
    std::string rest;
    for (std::size_t i = pos; i < chars.size(); ++i) rest += chars[i];
    const std::string* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& token : tokens) {
      std::string_view body = token;
      if (pos > 0) {
        if (!body.starts_with(prefix)) continue;
        body.remove_prefix(prefix.size());
      }
      if (body.empty() || !std::string_view(rest).starts_with(body)) continue;
      // must end on a character boundary
      std::size_t consumed = 0, n = 0;
      for (std::size_t i = pos; i < chars.size() && consumed < body.size(); ++i, ++n) {
        consumed += chars[i].size();
      }
      if (consumed != body.size()) continue;
      if (n > best_len) {
        best_len = n;
        best = &token;
      }
    }
    if (!best) return std::nullopt;
    pieces.push_back(*best);
    pos += best_len;
  }
  return pieces;
}

// Average ranks by counting: rank_i = 1 + #{x_j < x_i} + (#{x_j == x_i} - 1) / 2.
inline std::vector<double> counting_ranks(const std::vector<double>& xs) {
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (double x : xs) {
      if (x < xs[i]) ++less;
      if (x == xs[i]) ++equal;
    }
    ranks[i] = 1.0 + static_cast<double>(less) + (static_cast<double>(equal) - 1.0) / 2.0;
  }
  return ranks;
}

// Pearson correlation of counting ranks via the raw-moment covariance formula.
inline double spearman_oracle(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto rx = counting_ranks(xs);
  const auto ry = counting_ranks(ys);
  const long double n = static_cast<long double>(xs.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sx += rx[i];
    sy += ry[i];
    sxx += static_cast<long double>(rx[i]) * rx[i];
    syy += static_cast<long double>(ry[i]) * ry[i];
    sxy += static_cast<long double>(rx[i]) * ry[i];
  }
  const long double cov = sxy - sx * sy / n;
  const long double vx = sxx - sx * sx / n;
  const long double vy = syy - sy * sy / n;
  return static_cast<double>(cov / std::sqrt(vx * vy));
}

// Random instances for property tests: a small alphabet mixing case, accents,
// punctuation and a CJK ideograph so every normalization branch is exercised.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  std::string random_string(std::size_t min_len, std::size_t max_len, bool lower_only) {
    static const std::vector<std::string> lower = {"a", "b", "c", "d", "e", "é"};
    static const std::vector<std::string> any = {"a", "b", "c",  "d", "e", "é", "A",
                                                 "B", "É", ",", "-", "日", "ü"};
    const auto& pool = lower_only ? lower : any;
    std::string s;
    const auto len = uniform(min_len, max_len);
    for (std::size_t i = 0; i < len; ++i) s += pool[uniform(0, pool.size() - 1)];
    return s;
  }

  Vocabulary random_vocab() {
    std::vector<std::string> tokens = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};
    std::set<std::string> seen(tokens.begin(), tokens.end());
    auto add = [&](std::string t) {
      if (!t.empty() && seen.insert(t).second) tokens.push_back(std::move(t));
    };
    for (const char* c : {"a", "b", "c", "d", "e", "é", "e", ",", "-", "日", "u", "ü"}) {
      if (coin(0.8)) add(c);
      if (coin(0.7)) add(std::string("##") + c);
    }
    const auto extra = uniform(0, 25);
    for (std::size_t i = 0; i < extra; ++i) {
      auto body = random_string(2, 5, true);
      add(coin() ? body : "##" + body);
    }
    std::shuffle(tokens.begin() + 5, tokens.end(), rng_);
    return Vocabulary(std::move(tokens), {}, "random");
  }

  Corpus random_corpus(std::size_t max_sentences = 8, std::size_t max_words = 10) {
    std::vector<Sentence> sentences(uniform(1, max_sentences));
    for (auto& s : sentences) {
      const auto n = uniform(1, max_words);
      for (std::size_t i = 0; i < n; ++i) s.words.push_back({random_string(1, 8, false), i + 1});
    }
    return Corpus(std::move(sentences), "xx");
  }

  TokenizerConfig random_config() {
    TokenizerConfig c;
    c.lowercase = coin();
    c.strip_accents = coin();
    c.isolate_punctuation = coin(0.8);
    c.isolate_cjk = coin(0.8);
    c.max_chars_per_word = coin(0.2) ? uniform(1, 6) : 100;
    return c;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace tokstat::testing
