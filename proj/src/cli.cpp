#include "tokstat/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tokstat/analysis.hpp"
#include "tokstat/conllu.hpp"
#include "tokstat/errors.hpp"
#include "tokstat/hub.hpp"
#include "tokstat/metrics.hpp"
#include "tokstat/serialize.hpp"
#include "tokstat/vocabtools.hpp"
#include "tokstat/wordpiece.hpp"

namespace fs = std::filesystem;

namespace tokstat::cli {

namespace {

struct TokenizerFlags {
  bool lowercase = false;
  bool strip_accents = false;
  bool keep_accents = false;
  std::size_t max_chars = 100;
  std::string continuation_prefix = "##";

  TokenizerConfig config() const {
    TokenizerConfig c;
    c.lowercase = lowercase;
    c.strip_accents = keep_accents ? false : (strip_accents || lowercase);
    c.max_chars_per_word = max_chars;
    return c;
  }
};

struct HubFlags {
  std::string cache_dir;
  std::string base_url;

  fs::path cache() const { return cache_dir.empty() ? default_cache_dir() : fs::path(cache_dir); }
  std::string url() const { return base_url.empty() ? default_hub_url() : base_url; }
};

struct RunConfig {
  std::vector<std::string> corpus_paths;
  std::vector<std::string> vocab_paths;
  std::vector<std::string> model_ids;
  std::string language = "und";
  TokenizerFlags tokenizer;
  HubFlags hub;
  std::size_t bin_width = kDefaultBinWidth;
  std::string format;
  std::string output;
  std::size_t workers = 0;
  // correlate
  std::string manifest;
  std::vector<std::string> exclude_languages;
  bool average_submeasures = false;
  // remap
  std::string old_vocab, new_vocab, old_model_id, new_model_id;
  std::string mode = "paper";
};

VocabOptions vocab_options(const RunConfig& rc) {
  VocabOptions o;
  o.continuation_prefix = rc.tokenizer.continuation_prefix;
  return o;
}

Vocabulary vocab_from_path(const std::string& path, const RunConfig& rc) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocabulary file: " + path);
  return load_vocab(in, fs::path(path).filename().string(), vocab_options(rc));
}

Vocabulary vocab_from_model(const std::string& model_id, const RunConfig& rc) {
  auto fetched = fetch_vocab(model_id, rc.hub.url(), rc.hub.cache());
  std::ifstream in(fetched.path, std::ios::binary);
  if (!in) throw IoError("cannot open cached vocabulary " + fetched.path.string());
  return load_vocab(in, model_id, vocab_options(rc));
}

// Exactly one of --vocab / --model-id.
Vocabulary single_vocab(const RunConfig& rc) {
  if (rc.vocab_paths.size() + rc.model_ids.size() != 1) {
    throw std::invalid_argument("exactly one of --vocab or --model-id is required");
  }
  return rc.vocab_paths.empty() ? vocab_from_model(rc.model_ids[0], rc)
                                : vocab_from_path(rc.vocab_paths[0], rc);
}

Corpus corpus_of(const RunConfig& rc) {
  std::vector<fs::path> paths(rc.corpus_paths.begin(), rc.corpus_paths.end());
  return load_corpus(paths, rc.language);
}

void emit(const RunConfig& rc, const std::string& text, std::ostream& out) {
  if (rc.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(rc.output, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open output file: " + rc.output);
  file << text;
  if (!file.flush()) throw IoError("cannot write output file: " + rc.output);
}

std::string report_csv(const TokenizerReport& r) {
  std::ostringstream s;
  s << "language_tag,vocab_name,word_count,subword_count,sentence_count,fertility,"
       "continuation_proportion,unk_token_proportion,unk_word_proportion,continued_word_count,"
       "unk_token_count,unk_word_count\n";
  s << r.language_tag << ',' << r.vocab_name << ',' << r.word_count << ',' << r.subword_count
    << ',' << r.sentence_count << ',' << format_fixed(r.fertility) << ','
    << format_fixed(r.continuation_proportion) << ',' << format_fixed(r.unk_token_proportion)
    << ',' << format_fixed(r.unk_word_proportion) << ',' << r.continued_word_count << ','
    << r.unk_token_count << ',' << r.unk_word_count << '\n';
  return s.str();
}

std::string histogram_csv(const LengthHistogram& model, const LengthHistogram& reference) {
  std::size_t last = 0;
  if (!model.bins().empty()) last = std::max(last, model.bins().rbegin()->first);
  if (!reference.bins().empty()) last = std::max(last, reference.bins().rbegin()->first);
  std::ostringstream s;
  s << "bin,lower,upper,model_count,reference_count\n";
  const auto width = model.bin_width();
  for (std::size_t b = 0; b <= last; ++b) {
    s << b << ',' << b * width << ',' << (b + 1) * width << ',' << model.count(b) << ','
      << reference.count(b) << '\n';
  }
  return s.str();
}

void cmd_stats(const RunConfig& rc, std::ostream& out) {
  const auto vocab = single_vocab(rc);
  const auto corpus = corpus_of(rc);
  if (corpus.empty()) throw ParseError("corpus contains no words", 0);
  const auto report =
      tokenizer_report(corpus, vocab, rc.tokenizer.config(), rc.bin_width, rc.workers);
  emit(rc, rc.format == "csv" ? report_csv(report) : dump_json(to_json(report)), out);
}

void cmd_histogram(const RunConfig& rc, std::ostream& out) {
  const auto vocab = single_vocab(rc);
  const auto corpus = corpus_of(rc);
  if (corpus.empty()) throw ParseError("corpus contains no words", 0);
  const auto counts =
      count_corpus(corpus, vocab, rc.tokenizer.config(), rc.bin_width, rc.workers);
  if (rc.format == "json") {
    emit(rc,
         dump_json({{"bin_width", rc.bin_width},
                    {"language_tag", corpus.language_tag()},
                    {"model", to_json(counts.model_lengths)},
                    {"reference", to_json(counts.reference_lengths)},
                    {"vocab_name", vocab.name()}}),
         out);
  } else {
    emit(rc, histogram_csv(counts.model_lengths, counts.reference_lengths), out);
  }
}

void cmd_compare(const RunConfig& rc, std::ostream& out) {
  if (rc.vocab_paths.size() + rc.model_ids.size() != 2) {
    throw std::invalid_argument("compare needs two vocabularies (--vocab and/or --model-id)");
  }
  std::vector<Vocabulary> vocabs;
  for (const auto& p : rc.vocab_paths) vocabs.push_back(vocab_from_path(p, rc));
  for (const auto& id : rc.model_ids) vocabs.push_back(vocab_from_model(id, rc));
  const auto result = overlap(vocabs[0], vocabs[1]);
  if (rc.format == "csv") {
    std::ostringstream s;
    s << "vocab_a,vocab_b,size_a,size_b,shared,proportion_a_in_b\n"
      << vocabs[0].name() << ',' << vocabs[1].name() << ',' << result.size_a << ','
      << result.size_b << ',' << result.shared << ',' << format_fixed(result.proportion_a_in_b)
      << '\n';
    emit(rc, s.str(), out);
  } else {
    auto j = to_json(result);
    j["vocab_a"] = vocabs[0].name();
    j["vocab_b"] = vocabs[1].name();
    emit(rc, dump_json(j), out);
  }
}

void cmd_correlate(const RunConfig& rc, std::ostream& out) {
  std::ifstream in(rc.manifest, std::ios::binary);
  if (!in) throw IoError("cannot open manifest: " + rc.manifest);
  const auto manifest = load_manifest(in);
  CorrelationOptions options;
  options.exclude_languages = {rc.exclude_languages.begin(), rc.exclude_languages.end()};
  options.average_submeasures = rc.average_submeasures;
  const auto matrix = correlation_matrix(manifest, options);
  emit(rc, rc.format == "json" ? dump_json(to_json(matrix)) : to_csv(matrix), out);
}

void cmd_prune(const RunConfig& rc, std::ostream& out) {
  const auto vocab = single_vocab(rc);
  const auto corpus = corpus_of(rc);
  const auto pruned = prune_vocab(vocab, corpus, rc.tokenizer.config(), rc.workers);
  std::ostringstream s;
  pruned.write(s);
  emit(rc, s.str(), out);
}

void cmd_remap(const RunConfig& rc, std::ostream& out) {
  auto pick = [&](const std::string& path, const std::string& id, const char* which) {
    if (path.empty() == id.empty()) {
      throw std::invalid_argument(std::string("exactly one of --") + which + "-vocab or --" +
                                  which + "-model-id is required");
    }
    return path.empty() ? vocab_from_model(id, rc) : vocab_from_path(path, rc);
  };
  const auto old_vocab = pick(rc.old_vocab, rc.old_model_id, "old");
  const auto new_vocab = pick(rc.new_vocab, rc.new_model_id, "new");
  const auto plan = remap_plan(old_vocab, new_vocab, parse_remap_mode(rc.mode));
  emit(rc, dump_json(to_json(plan)), out);
}

void cmd_fetch(const RunConfig& rc, std::ostream& out) {
  if (rc.model_ids.size() != 1) throw std::invalid_argument("fetch needs exactly one --model-id");
  auto result = fetch_vocab(rc.model_ids[0], rc.hub.url(), rc.hub.cache());
  emit(rc, result.path.string() + "\n", out);
}

void add_tokenizer_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_flag("--lowercase", rc.tokenizer.lowercase, "Lowercase words (uncased models)");
  cmd->add_flag("--strip-accents", rc.tokenizer.strip_accents,
                "Drop combining marks after canonical decomposition (implied by --lowercase)");
  cmd->add_flag("--keep-accents", rc.tokenizer.keep_accents,
                "Keep combining marks even with --lowercase");
  cmd->add_option("--max-chars", rc.tokenizer.max_chars, "Longest word (in characters) to split")
      ->check(CLI::PositiveNumber);
}

void add_vocab_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--vocab", rc.vocab_paths, "vocab.txt path");
  cmd->add_option("--model-id", rc.model_ids, "Model hub identifier to fetch the vocabulary for");
  cmd->add_option("--continuation-prefix", rc.tokenizer.continuation_prefix,
                  "Prefix of word-internal pieces");
}

void add_hub_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--cache-dir", rc.hub.cache_dir, "Vocabulary cache directory")
      ->envname(std::string(kCacheDirEnv));
  cmd->add_option("--base-url", rc.hub.base_url, "Hub URL or {model_id}/{filename} template")
      ->envname(std::string(kHubUrlEnv));
}

void add_corpus_flags(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--corpus", rc.corpus_paths, "CoNLL-U file(s), concatenated in order")
      ->required();
  cmd->add_option("--language", rc.language, "Language tag recorded in the report");
  cmd->add_option("--workers", rc.workers, "Worker threads (0 = available parallelism)");
}

void add_output_flags(CLI::App* cmd, RunConfig& rc, const std::string& default_format) {
  rc.format = default_format;
  cmd->add_option("--format", rc.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--output", rc.output, "Write to this file instead of stdout");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subword tokenizer quality statistics over UD treebanks", "tokstat"};
  app.require_subcommand(1);
  RunConfig stats_rc;
  RunConfig histogram_rc;

  auto* stats = app.add_subcommand("stats", "Fertility, continued words, UNK rates, histograms");
  add_vocab_flags(stats, stats_rc);
  add_tokenizer_flags(stats, stats_rc);
  add_corpus_flags(stats, stats_rc);
  add_hub_flags(stats, stats_rc);
  stats->add_option("--bin-width", stats_rc.bin_width, "Sentence-length histogram bin width")
      ->check(CLI::PositiveNumber);
  add_output_flags(stats, stats_rc, "json");

  auto* histogram = app.add_subcommand("histogram", "Sentence-length distributions");
  add_vocab_flags(histogram, histogram_rc);
  add_tokenizer_flags(histogram, histogram_rc);
  add_corpus_flags(histogram, histogram_rc);
  add_hub_flags(histogram, histogram_rc);
  histogram->add_option("--bin-width", histogram_rc.bin_width, "Bin width")
      ->check(CLI::PositiveNumber);
  add_output_flags(histogram, histogram_rc, "csv");

  RunConfig compare_rc;
  auto* compare = app.add_subcommand("compare", "Share of vocabulary A also in vocabulary B");
  add_vocab_flags(compare, compare_rc);
  add_hub_flags(compare, compare_rc);
  add_output_flags(compare, compare_rc, "json");

  RunConfig correlate_rc;
  auto* correlate = app.add_subcommand("correlate", "Spearman correlation of relative changes");
  correlate->add_option("--manifest", correlate_rc.manifest, "Manifest JSON")->required();
  correlate->add_option("--exclude-language", correlate_rc.exclude_languages,
                        "Drop a language from every cell");
  correlate->add_flag("--average-submeasures", correlate_rc.average_submeasures,
                      "Average grouped sub-measures (e.g. UAS/LAS) into one column");
  add_output_flags(correlate, correlate_rc, "csv");

  RunConfig prune_rc;
  auto* prune = app.add_subcommand("prune", "Drop tokens never emitted on a corpus");
  add_vocab_flags(prune, prune_rc);
  add_tokenizer_flags(prune, prune_rc);
  add_corpus_flags(prune, prune_rc);
  add_hub_flags(prune, prune_rc);
  prune->add_option("--output", prune_rc.output, "Write the pruned vocab.txt here");

  RunConfig remap_rc;
  auto* remap = app.add_subcommand("remap", "Embedding initialization plan for a new vocabulary");
  remap->add_option("--old-vocab", remap_rc.old_vocab, "Vocabulary the embeddings come from");
  remap->add_option("--old-model-id", remap_rc.old_model_id);
  remap->add_option("--new-vocab", remap_rc.new_vocab, "Vocabulary being initialized");
  remap->add_option("--new-model-id", remap_rc.new_model_id);
  remap->add_option("--mode", remap_rc.mode, "paper | shared-copy")
      ->check(CLI::IsMember({"paper", "shared-copy"}))
      ->capture_default_str();
  remap->add_option("--continuation-prefix", remap_rc.tokenizer.continuation_prefix);
  add_hub_flags(remap, remap_rc);
  remap->add_option("--output", remap_rc.output, "Write the plan here");

  RunConfig fetch_rc;
  auto* fetch = app.add_subcommand("fetch", "Download and cache a model's vocab.txt");
  fetch->add_option("--model-id", fetch_rc.model_ids, "Model hub identifier")->required();
  add_hub_flags(fetch, fetch_rc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (stats->parsed()) {
      cmd_stats(stats_rc, out);
    } else if (histogram->parsed()) {
      cmd_histogram(histogram_rc, out);
    } else if (compare->parsed()) {
      cmd_compare(compare_rc, out);
    } else if (correlate->parsed()) {
      cmd_correlate(correlate_rc, out);
    } else if (prune->parsed()) {
      cmd_prune(prune_rc, out);
    } else if (remap->parsed()) {
      cmd_remap(remap_rc, out);
    } else if (fetch->parsed()) {
      cmd_fetch(fetch_rc, out);
    }
  } catch (const IoError& e) {
    err << "tokstat: " << e.what() << '\n';
    return kIoError;
  } catch (const NetworkError& e) {
    err << "tokstat: " << e.what() << '\n';
    return kNetworkError;
  } catch (const std::exception& e) {
    err << "tokstat: " << e.what() << '\n';
    return kParseError;
  }
  return kOk;
}

}  // namespace tokstat::cli
