#pragma once

#include "partisan/classifier.hpp"
#include "partisan/corpus_io.hpp"
#include "partisan/pipeline.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace partisan {

/// Binary metrics with hyperpartisan (label 1) as the positive class.
/// Precision, recall and F1 are 0 whenever their denominator is 0.
struct Metrics {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

Metrics metrics_from_confusion(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn,
                               std::uint64_t fn);

/// Throws Error(invalid_argument) when the spans differ in length.
Metrics metrics_from_predictions(std::span<const Label> truth, std::span<const Label> predicted);

/// Scores a labeled corpus. Throws Error(data) on an unlabeled corpus.
Metrics evaluate(const ModelWeights& model, const FittedPipeline& pipeline, const Corpus& corpus);

struct NamedConfig {
  std::string name;
  FeatureConfig config;
};

struct NamedCorpus {
  std::string name;
  Corpus corpus;
};

struct ReportRow {
  std::string config_name;
  std::string eval_set;
  Metrics metrics;
};

/// Ablation/tuning output. Rows are in config order, then eval-set order.
struct Report {
  std::vector<ReportRow> rows;

  /// Header "config_name,eval_set,accuracy,precision,recall,f1,tp,fp,tn,fn";
  /// reals printed with six decimals.
  std::string to_csv() const;
  /// Aligned table, one line per (config, eval set), percentages.
  std::string to_text() const;
};

/// Fit pipeline, train model and evaluate for one configuration.
std::pair<FittedPipeline, ModelWeights> fit_and_train(const Corpus& train, const FeatureConfig& config,
                                                      const TrainOptions& options);

/// Runs every configuration in order against every eval set. A failing row
/// aborts the run with an Error naming the row.
Report ablation_run(const Corpus& train, std::span<const NamedCorpus> eval_sets,
                    std::span<const NamedConfig> rows, const TrainOptions& options);

/// Searchable hyperparameter: a family's scale factor or the word-channel k.
struct GridAxis {
  std::string parameter;  // family name or "k"
  std::vector<double> values;
};

struct GridResult {
  FeatureConfig best;
  Metrics dev_metrics;
  /// Parameter assignment of the winner, in axis order.
  std::vector<std::pair<std::string, double>> assignment;
  /// One row per evaluated grid point, in iteration order.
  Report trials;
};

/// Exhaustive search over the Cartesian product of the axes (first axis
/// varies slowest). Highest dev accuracy wins; ties keep the earliest point.
GridResult grid_search_scales(const Corpus& train, const Corpus& dev, const FeatureConfig& base,
                              std::span<const GridAxis> grid, const TrainOptions& options);

/// Applies one grid assignment to a config. Throws Error(config) on an
/// unknown parameter or a non-integral k.
void apply_grid_value(FeatureConfig& config, const std::string& parameter, double value);

}  // namespace partisan
