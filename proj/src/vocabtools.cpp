#include "tokstat/vocabtools.hpp"

#include <stdexcept>

#include "tokstat/errors.hpp"
#include "tokstat/parallel.hpp"

namespace tokstat {

OverlapResult overlap(const Vocabulary& vocab_a, const Vocabulary& vocab_b) {
  OverlapResult r;
  r.size_a = vocab_a.size();
  r.size_b = vocab_b.size();
  for (const auto& token : vocab_a.tokens()) {
    if (vocab_b.contains(token)) ++r.shared;
  }
  r.proportion_a_in_b = static_cast<double>(r.shared) / static_cast<double>(r.size_a);
  return r;
}

std::vector<bool> emitted_tokens(const Corpus& corpus, const Vocabulary& vocab,
                                 const TokenizerConfig& config, std::size_t workers) {
  std::span<const Sentence> sentences(corpus.sentences());
  auto partials = map_chunks(sentences, workers, [&](std::span<const Sentence> chunk) {
    std::vector<bool> seen(vocab.size(), false);
    for (const auto& sentence : chunk) {
      for (const auto& word : sentence.words) {
        for (TokenId id : tokenize_word(word, vocab, config).pieces) seen[id] = true;
      }
    }
    return seen;
  });
  std::vector<bool> emitted(vocab.size(), false);
  for (const auto& part : partials) {
    for (std::size_t i = 0; i < part.size(); ++i) {
      if (part[i]) emitted[i] = true;
    }
  }
  return emitted;
}

Vocabulary prune_vocab(const Vocabulary& vocab, const Corpus& corpus,
                       const TokenizerConfig& config, std::size_t workers) {
  if (corpus.word_count() == 0) {
    throw UndefinedMetricError("cannot prune vocabulary '" + vocab.name() +
                               "' against an empty corpus");
  }
  auto emitted = emitted_tokens(corpus, vocab, config, workers);
  std::vector<std::string> kept;
  for (TokenId id = 0; id < vocab.size(); ++id) {
    if (emitted[id] || vocab.is_special(id)) kept.push_back(vocab.token(id));
  }
  return Vocabulary(std::move(kept), vocab.options(), vocab.name());
}

std::string to_string(RemapMode mode) {
  return mode == RemapMode::kPaper ? "paper" : "shared-copy";
}

RemapMode parse_remap_mode(const std::string& text) {
  if (text == "paper") return RemapMode::kPaper;
  if (text == "shared-copy") return RemapMode::kSharedCopy;
  throw std::invalid_argument("unknown remap mode '" + text + "' (expected paper|shared-copy)");
}

std::size_t RemapPlan::copy_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.copy_from.has_value() ? 1 : 0;
  return n;
}

RemapPlan remap_plan(const Vocabulary& old_vocab, const Vocabulary& new_vocab, RemapMode mode) {
  std::set<std::string> specials = old_vocab.special_tokens();
  specials.insert(new_vocab.special_tokens().begin(), new_vocab.special_tokens().end());
  for (const auto& special : specials) {
    for (const Vocabulary* v : {&old_vocab, &new_vocab}) {
      if (!v->contains(special)) {
        throw VocabError("special token " + special + " missing from vocabulary '" + v->name() +
                         "'");
      }
    }
  }

  RemapPlan plan;
  plan.mode = mode;
  plan.entries.reserve(new_vocab.size());
  for (TokenId id = 0; id < new_vocab.size(); ++id) {
    const auto& token = new_vocab.token(id);
    RemapEntry entry{id, token, std::nullopt};
    if (specials.count(token) != 0 || mode == RemapMode::kSharedCopy) {
      entry.copy_from = old_vocab.find(token);
    }
    plan.entries.push_back(std::move(entry));
  }
  return plan;
}

nlohmann::json to_json(const OverlapResult& r) {
  return {{"proportion_a_in_b", r.proportion_a_in_b},
          {"shared", r.shared},
          {"size_a", r.size_a},
          {"size_b", r.size_b}};
}

nlohmann::json to_json(const RemapPlan& plan) {
  auto entries = nlohmann::json::array();
  for (const auto& e : plan.entries) {
    nlohmann::json item = {{"new_id", e.new_id}, {"token", e.token}};
    if (e.copy_from) {
      item["action"] = "copy_from";
      item["old_id"] = *e.copy_from;
    } else {
      item["action"] = "random_init";
    }
    entries.push_back(std::move(item));
  }
  return {{"copy_count", plan.copy_count()},
          {"entries", std::move(entries)},
          {"mode", to_string(plan.mode)},
          {"new_vocab_size", plan.entries.size()},
          {"random_init_count", plan.random_init_count()}};
}

}  // namespace tokstat
