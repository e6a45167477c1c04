#include "tokstat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "tokstat/errors.hpp"
#include "tokstat/serialize.hpp"

namespace tokstat {

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j; their mean is (i+1+j)/2.
    const double rank = static_cast<double>(i + 1 + j) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw AnalysisError("spearman: series lengths differ (" + std::to_string(xs.size()) + " vs " +
                        std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 2) throw AnalysisError("spearman: need at least two observations");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(xs.begin(), xs.end(), finite) || !std::all_of(ys.begin(), ys.end(), finite)) {
    throw AnalysisError("spearman: non-finite value in input");
  }

  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(rx.size());
  const double mean_x = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double mean_y = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double cov = 0, var_x = 0, var_y = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mean_x;
    const double dy = ry[i] - mean_y;
    cov += dx * dy;
    var_x += dx * dx;
    var_y += dy * dy;
  }
  if (var_x == 0 || var_y == 0) {
    throw AnalysisError("spearman: correlation undefined for a constant series");
  }
  return std::clamp(cov / std::sqrt(var_x * var_y), -1.0, 1.0);
}

double relative_change(double model_value, double baseline_value, Orientation orientation) {
  if (baseline_value == 0) throw AnalysisError("relative change against a zero baseline");
  const double diff = orientation == Orientation::kIncrease ? model_value - baseline_value
                                                            : baseline_value - model_value;
  return diff / baseline_value;
}

const ManifestRecord* Manifest::find(const std::string& language, const std::string& model) const {
  for (const auto& r : records) {
    if (r.language == language && r.model == model) return &r;
  }
  return nullptr;
}

namespace {

const std::vector<std::string>& default_metric_names() {
  static const std::vector<std::string> names = {"continuation_proportion", "fertility",
                                                 "unk_token_proportion", "unk_word_proportion"};
  return names;
}

template <typename T>
T required(const nlohmann::json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ManifestError(where + ": missing field '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(where + ": field '" + key + "': " + e.what());
  }
}

std::map<std::string, double> number_map(const nlohmann::json& obj, const char* key,
                                         const std::string& where) {
  std::map<std::string, double> out;
  if (!obj.contains(key) || obj.at(key).is_null()) return out;
  const auto& m = obj.at(key);
  if (!m.is_object()) throw ManifestError(where + ": field '" + key + "' must be an object");
  for (auto it = m.begin(); it != m.end(); ++it) {
    if (it.value().is_null()) continue;  // explicit "no value"
    if (!it.value().is_number()) {
      throw ManifestError(where + ": " + key + "." + it.key() + " must be a number");
    }
    out[it.key()] = it.value().get<double>();
  }
  return out;
}

}  // namespace

Manifest parse_manifest(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ManifestError("manifest must be a JSON object");
  Manifest m;
  m.baseline_model = required<std::string>(doc, "baseline_model", "manifest");
  m.task_names = required<std::vector<std::string>>(doc, "tasks", "manifest");
  m.metric_names = doc.contains("metrics")
                       ? required<std::vector<std::string>>(doc, "metrics", "manifest")
                       : default_metric_names();
  if (doc.contains("task_groups")) {
    m.task_groups =
        required<std::map<std::string, std::vector<std::string>>>(doc, "task_groups", "manifest");
  }
  if (doc.contains("factor_models")) {
    m.factor_models =
        required<std::map<std::string, std::set<std::string>>>(doc, "factor_models", "manifest");
  }
  const auto& records = doc.contains("records") ? doc.at("records") : nlohmann::json::array();
  if (!records.is_array()) throw ManifestError("manifest: 'records' must be an array");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto where = "records[" + std::to_string(i) + "]";
    const auto& rec = records[i];
    if (!rec.is_object()) throw ManifestError(where + " must be an object");
    ManifestRecord r;
    r.language = required<std::string>(rec, "language", where);
    r.model = required<std::string>(rec, "model", where);
    r.metrics = number_map(rec, "metrics", where);
    r.scores = number_map(rec, "scores", where);
    if (rec.contains("corpus_words") && !rec.at("corpus_words").is_null()) {
      if (!rec.at("corpus_words").is_number()) {
        throw ManifestError(where + ": corpus_words must be a number");
      }
      r.corpus_words = rec.at("corpus_words").get<double>();
    }
    m.records.push_back(std::move(r));
  }
  validate_manifest(m);
  return m;
}

Manifest load_manifest(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  return parse_manifest(doc);
}

void validate_manifest(const Manifest& m) {
  const std::set<std::string> metrics(m.metric_names.begin(), m.metric_names.end());
  const std::set<std::string> tasks(m.task_names.begin(), m.task_names.end());
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : m.records) {
    const auto where = "record (" + r.language + ", " + r.model + ")";
    if (!seen.emplace(r.language, r.model).second) throw ManifestError(where + " is duplicated");
    if (!m.find(r.language, m.baseline_model)) {
      throw ManifestError("language '" + r.language + "' has no baseline record for model '" +
                          m.baseline_model + "'");
    }
    for (const auto& [name, value] : r.metrics) {
      if (!metrics.count(name)) throw ManifestError(where + ": undeclared metric '" + name + "'");
    }
    for (const auto& [name, value] : r.scores) {
      if (!tasks.count(name)) throw ManifestError(where + ": undeclared task '" + name + "'");
    }
  }
  for (const auto& [group, members] : m.task_groups) {
    for (const auto& t : members) {
      if (!tasks.count(t)) {
        throw ManifestError("task group '" + group + "' names undeclared task '" + t + "'");
      }
    }
  }
}

const std::vector<Factor>& correlation_factors() {
  static const std::vector<Factor> factors = {
      {"continuation_decrease", "continuation_proportion", Orientation::kDecrease},
      {"fertility_decrease", "fertility", Orientation::kDecrease},
      {"corpus_size_increase", "corpus_words", Orientation::kIncrease},
  };
  return factors;
}

const CorrelationCell& CorrelationMatrix::at(const std::string& factor,
                                             const std::string& task) const {
  auto f = std::find(factors.begin(), factors.end(), factor);
  auto t = std::find(tasks.begin(), tasks.end(), task);
  if (f == factors.end() || t == tasks.end()) {
    throw std::out_of_range("no correlation cell (" + factor + ", " + task + ")");
  }
  return cells[static_cast<std::size_t>(f - factors.begin())]
              [static_cast<std::size_t>(t - tasks.begin())];
}

namespace {

// A matrix column: either a single task or the mean of a group's sub-measures.
struct Column {
  std::string name;
  std::vector<std::string> members;
};

std::vector<Column> columns_for(const Manifest& m, bool average) {
  std::vector<Column> cols;
  std::set<std::string> emitted_groups;
  for (const auto& task : m.task_names) {
    const std::string* group = nullptr;
    if (average) {
      for (const auto& [name, members] : m.task_groups) {
        if (std::find(members.begin(), members.end(), task) != members.end()) {
          group = &name;
          break;
        }
      }
    }
    if (!group) {
      cols.push_back({task, {task}});
    } else if (emitted_groups.insert(*group).second) {
      cols.push_back({*group, m.task_groups.at(*group)});
    }
  }
  return cols;
}

std::optional<double> column_score(const ManifestRecord& r, const Column& col) {
  double sum = 0;
  for (const auto& t : col.members) {
    auto it = r.scores.find(t);
    if (it == r.scores.end()) return std::nullopt;
    sum += it->second;
  }
  return sum / static_cast<double>(col.members.size());
}

std::optional<double> factor_value(const ManifestRecord& r, const Factor& f) {
  if (f.source == "corpus_words") return r.corpus_words;
  auto it = r.metrics.find(f.source);
  if (it == r.metrics.end()) return std::nullopt;
  return it->second;
}

}  // namespace

CorrelationMatrix correlation_matrix(const Manifest& manifest, const CorrelationOptions& options) {
  validate_manifest(manifest);
  const auto columns = columns_for(manifest, options.average_submeasures);
  const auto& factors = correlation_factors();

  // Sorted record order keeps the paired series independent of manifest order.
  std::vector<const ManifestRecord*> records;
  for (const auto& r : manifest.records) {
    if (!options.exclude_languages.count(r.language)) records.push_back(&r);
  }
  std::sort(records.begin(), records.end(), [](const auto* a, const auto* b) {
    return std::tie(a->language, a->model) < std::tie(b->language, b->model);
  });

  CorrelationMatrix out;
  for (const auto& f : factors) out.factors.push_back(f.name);
  for (const auto& c : columns) out.tasks.push_back(c.name);
  out.cells.assign(factors.size(), std::vector<CorrelationCell>(columns.size()));

  for (std::size_t fi = 0; fi < factors.size(); ++fi) {
    const auto& factor = factors[fi];
    auto allowed = manifest.factor_models.find(factor.name);
    for (std::size_t ci = 0; ci < columns.size(); ++ci) {
      std::vector<double> xs, ys;
      for (const auto* r : records) {
        if (allowed != manifest.factor_models.end() && !allowed->second.count(r->model)) continue;
        const auto* base = manifest.find(r->language, manifest.baseline_model);
        auto x = factor_value(*r, factor);
        auto x0 = factor_value(*base, factor);
        auto y = column_score(*r, columns[ci]);
        auto y0 = column_score(*base, columns[ci]);
        if (!x || !x0 || !y || !y0 || *x0 == 0 || *y0 == 0) continue;
        xs.push_back(relative_change(*x, *x0, factor.orientation));
        ys.push_back(relative_change(*y, *y0, Orientation::kIncrease));
      }
      auto& cell = out.cells[fi][ci];
      cell.sample_size = xs.size();
      if (xs.size() < 2) continue;
      try {
        cell.rho = spearman(xs, ys);
      } catch (const AnalysisError&) {
        // constant series: leave the cell absent
      }
    }
  }
  return out;
}

std::string to_csv(const CorrelationMatrix& matrix) {
  std::ostringstream out;
  out << "factor";
  for (const auto& t : matrix.tasks) out << ',' << t;
  out << '\n';
  for (std::size_t fi = 0; fi < matrix.factors.size(); ++fi) {
    out << matrix.factors[fi];
    for (const auto& cell : matrix.cells[fi]) {
      out << ',';
      if (cell.rho) out << format_fixed(*cell.rho);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json to_json(const CorrelationMatrix& matrix) {
  auto cells = nlohmann::json::array();
  for (std::size_t fi = 0; fi < matrix.factors.size(); ++fi) {
    for (std::size_t ti = 0; ti < matrix.tasks.size(); ++ti) {
      const auto& cell = matrix.cells[fi][ti];
      cells.push_back({{"factor", matrix.factors[fi]},
                       {"task", matrix.tasks[ti]},
                       {"rho", cell.rho ? nlohmann::json(*cell.rho) : nlohmann::json(nullptr)},
                       {"sample_size", cell.sample_size}});
    }
  }
  return {{"cells", std::move(cells)}, {"factors", matrix.factors}, {"tasks", matrix.tasks}};
}

}  // namespace tokstat
