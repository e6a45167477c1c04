#pragma once

#include <array>
#include <cstddef>
#include <string_view>

// Published reference values for the nine-language tokenizer comparison:
// model identifiers, vocabulary sizes and mBERT coverage, the UD v2.6
// treebanks and their train+dev word counts, and estimated mBERT pretraining
// word counts per language.
namespace tokstat::reference {

inline constexpr std::string_view kMultilingualModel = "bert-base-multilingual-cased";
inline constexpr std::size_t kMultilingualVocabSize = 119547;

struct MonolingualModel {
  std::string_view language;
  std::string_view model_id;
  std::size_t vocab_size;
  double percent_in_multilingual;  // share of the vocabulary also in mBERT's, in percent
  bool uncased;
};

inline constexpr std::array<MonolingualModel, 9> kMonolingualModels = {{
    {"ar", "aubmindlab/bert-base-arabertv01", 64000, 5.6, false},
    {"en", "bert-base-cased", 28996, 66.4, false},
    {"fi", "TurkuNLP/bert-base-finnish-cased-v1", 50105, 14.3, false},
    {"id", "indobenchmark/indobert-base-p2", 30521, 40.5, true},
    {"ja", "cl-tohoku/bert-base-japanese-char", 4000, 99.1, false},
    {"ko", "snunlp/KR-BERT-char16424", 16424, 47.4, false},
    {"ru", "DeepPavlov/rubert-base-cased", 119547, 21.1, false},
    {"tr", "dbmdz/bert-base-turkish-cased", 32000, 23.0, false},
    {"zh", "bert-base-chinese", 21128, 79.4, false},
}};

struct TreebankSet {
  std::string_view language;
  std::array<std::string_view, 4> treebanks;  // UD_<Language>-<Name>, unused slots empty
  std::size_t train_dev_words;
};

inline constexpr std::array<TreebankSet, 9> kTreebanks = {{
    {"ar", {"UD_Arabic-PADT"}, 254192},
    {"en", {"UD_English-LinES", "UD_English-EWT", "UD_English-GUM", "UD_English-ParTUT"}, 449977},
    {"fi", {"UD_Finnish-FTB", "UD_Finnish-TDT"}, 324680},
    {"id", {"UD_Indonesian-GSD"}, 110141},
    {"ja", {"UD_Japanese-GSD"}, 179571},
    {"ko", {"UD_Korean-GSD"}, 390369},
    {"ru", {"UD_Russian-GSD", "UD_Russian-SynTagRus", "UD_Russian-Taiga"}, 1130482},
    {"tr", {"UD_Turkish-IMST"}, 47830},
    {"zh", {"UD_Chinese-GSD", "UD_Chinese-GSDSimp"}, 222558},
}};

struct CorpusSize {
  std::string_view language;
  double words;
};

// Wikipedia word counts used as the mBERT pretraining share per language.
inline constexpr std::array<CorpusSize, 9> kMultilingualCorpusWords = {{
    {"ar", 327e6},
    {"en", 3.7e9},
    {"fi", 134e6},
    {"id", 142e6},
    {"ja", 1.1e9},
    {"ko", 125e6},
    {"ru", 781e6},
    {"tr", 104e6},
    {"zh", 482e6},
}};

}  // namespace tokstat::reference
