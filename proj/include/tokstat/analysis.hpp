#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tokstat {

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

// Spearman's rho: Pearson correlation of average ranks. Throws AnalysisError
// on length mismatch, fewer than two observations, non-finite input, or a
// series without at least two distinct values.
double spearman(std::span<const double> xs, std::span<const double> ys);

enum class Orientation { kIncrease, kDecrease };

// Baseline-normalized change, signed so that a positive value is an
// improvement in both orientations: increase -> (model - baseline) / baseline,
// decrease -> (baseline - model) / baseline. Throws AnalysisError on a zero
// baseline.
double relative_change(double model_value, double baseline_value, Orientation orientation);

struct ManifestRecord {
  std::string language;
  std::string model;
  std::map<std::string, double> metrics;
  std::map<std::string, double> scores;
  std::optional<double> corpus_words;
};

// Per-language metric and score records plus the name of the baseline model
// every other record is compared against.
struct Manifest {
  std::string baseline_model;
  std::vector<std::string> metric_names;
  std::vector<std::string> task_names;
  // Sub-measures that may be averaged into one column, e.g. udp -> {udp_uas, udp_las}.
  std::map<std::string, std::vector<std::string>> task_groups;
  // Optional per-factor restriction of the models that contribute data points.
  std::map<std::string, std::set<std::string>> factor_models;
  std::vector<ManifestRecord> records;

  const ManifestRecord* find(const std::string& language, const std::string& model) const;
};

// Parses and validates a manifest document. Throws ManifestError when a
// language lacks a baseline record, a (language, model) pair repeats, or a
// metric/task name is not declared.
Manifest parse_manifest(const nlohmann::json& document);
Manifest load_manifest(std::istream& in);
void validate_manifest(const Manifest& manifest);

struct Factor {
  std::string name;
  std::string source;  // metric name, or "corpus_words"
  Orientation orientation;
};

// Rows of the correlation matrix: decrease in the proportion of continued
// words, decrease in fertility, increase in pretraining corpus size.
const std::vector<Factor>& correlation_factors();

struct CorrelationOptions {
  std::set<std::string> exclude_languages;
  bool average_submeasures = false;
};

struct CorrelationCell {
  std::optional<double> rho;  // absent when fewer than two pairs or a constant series
  std::size_t sample_size = 0;
};

struct CorrelationMatrix {
  std::vector<std::string> factors;
  std::vector<std::string> tasks;
  std::vector<std::vector<CorrelationCell>> cells;  // [factor][task]

  const CorrelationCell& at(const std::string& factor, const std::string& task) const;
};

CorrelationMatrix correlation_matrix(const Manifest& manifest,
                                     const CorrelationOptions& options = {});

// Header row "factor,<task>..."; absent cells are left empty.
std::string to_csv(const CorrelationMatrix& matrix);
nlohmann::json to_json(const CorrelationMatrix& matrix);

}  // namespace tokstat
