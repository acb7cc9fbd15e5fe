#include "partisan/evalharness.hpp"

#include "partisan/error.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace partisan {

Metrics metrics_from_confusion(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn,
                               std::uint64_t fn) {
  Metrics m{tp, fp, tn, fn};
  const auto ratio = [](std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.accuracy = ratio(tp + tn, m.total());
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  const double pr = m.precision + m.recall;
  m.f1 = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
  return m;
}

Metrics metrics_from_predictions(std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorKind::invalid_argument, "truth and prediction counts differ");
  }
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] == 1) {
      (truth[i] == 1 ? tp : fp) += 1;
    } else {
      (truth[i] == 1 ? fn : tn) += 1;
    }
  }
  return metrics_from_confusion(tp, fp, tn, fn);
}

Metrics evaluate(const ModelWeights& model, const FittedPipeline& pipeline, const Corpus& corpus) {
  const std::vector<Label> truth = corpus.labels();
  if (model.dimension() != pipeline.dimension()) {
    throw Error(ErrorKind::dimension, "dimension mismatch: model expects " +
                                          std::to_string(model.dimension()) +
                                          " features, pipeline produces " +
                                          std::to_string(pipeline.dimension()));
  }
  std::vector<Label> predicted;
  predicted.reserve(corpus.size());
  for (const auto& doc : corpus) predicted.push_back(predict_label(model, pipeline.transform(doc)));
  return metrics_from_predictions(truth, predicted);
}

std::string Report::to_csv() const {
  std::string out = "config_name,eval_set,accuracy,precision,recall,f1,tp,fp,tn,fn\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q.push_back('"');
      q.push_back(c);
    }
    q.push_back('"');
    return q;
  };
  for (const auto& r : rows) {
    const Metrics& m = r.metrics;
    out += fmt::format("{},{},{:.6f},{:.6f},{:.6f},{:.6f},{},{},{},{}\n", quote(r.config_name),
                       quote(r.eval_set), m.accuracy, m.precision, m.recall, m.f1, m.tp, m.fp, m.tn,
                       m.fn);
  }
  return out;
}

std::string Report::to_text() const {
  std::size_t name_w = 6;
  std::size_t set_w = 8;
  for (const auto& r : rows) {
    name_w = std::max(name_w, r.config_name.size());
    set_w = std::max(set_w, r.eval_set.size());
  }
  std::string out = fmt::format("{:<{}}  {:<{}}  {:>8}  {:>6}  {:>6}  {:>6}\n", "config", name_w,
                                "eval_set", set_w, "Accuracy", "Prec.", "Rec.", "F1");
  for (const auto& r : rows) {
    const Metrics& m = r.metrics;
    out += fmt::format("{:<{}}  {:<{}}  {:>8.1f}  {:>6.1f}  {:>6.1f}  {:>6.1f}\n", r.config_name,
                       name_w, r.eval_set, set_w, 100.0 * m.accuracy, 100.0 * m.precision,
                       100.0 * m.recall, 100.0 * m.f1);
  }
  return out;
}

std::pair<FittedPipeline, ModelWeights> fit_and_train(const Corpus& train, const FeatureConfig& config,
                                                      const TrainOptions& options) {
  FittedPipeline pipeline = fit_pipeline(train, config);
  const FeatureMatrix X = pipeline.transform(train);
  ModelWeights model = partisan::train(X, train.labels(), options);
  return {std::move(pipeline), std::move(model)};
}

Report ablation_run(const Corpus& train, std::span<const NamedCorpus> eval_sets,
                    std::span<const NamedConfig> rows, const TrainOptions& options) {
  for (const auto& set : eval_sets) {
    if (!set.corpus.labeled()) {
      throw Error(ErrorKind::data, "eval set '" + set.name + "' is not labeled");
    }
  }
  Report report;
  for (const auto& row : rows) {
    try {
      const auto [pipeline, model] = fit_and_train(train, row.config, options);
      for (const auto& set : eval_sets) {
        report.rows.push_back({row.name, set.name, evaluate(model, pipeline, set.corpus)});
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "ablation row '" + row.name + "' failed: " + e.what());
    }
  }
  return report;
}

void apply_grid_value(FeatureConfig& config, const std::string& parameter, double value) {
  if (parameter == "k") {
    if (!(value >= 1.0) || std::floor(value) != value) {
      throw Error(ErrorKind::config, "grid value for k must be a positive integer");
    }
    config.k = static_cast<std::size_t>(value);
    return;
  }
  const auto family = parse_family(parameter);
  if (!family) throw Error(ErrorKind::config, "unknown grid parameter '" + parameter + "'");
  config.scale[*family] = value;
}

GridResult grid_search_scales(const Corpus& train, const Corpus& dev, const FeatureConfig& base,
                              std::span<const GridAxis> grid, const TrainOptions& options) {
  if (grid.empty()) throw Error(ErrorKind::config, "grid must contain at least one axis");
  for (const auto& axis : grid) {
    if (axis.values.empty()) {
      throw Error(ErrorKind::config, "grid axis '" + axis.parameter + "' has no values");
    }
    FeatureConfig probe = base;
    apply_grid_value(probe, axis.parameter, axis.values.front());
  }

  std::optional<GridResult> best;
  GridResult result;
  std::vector<std::size_t> odometer(grid.size(), 0);
  while (true) {
    FeatureConfig config = base;
    std::vector<std::pair<std::string, double>> assignment;
    std::string label;
    for (std::size_t a = 0; a < grid.size(); ++a) {
      const double v = grid[a].values[odometer[a]];
      apply_grid_value(config, grid[a].parameter, v);
      assignment.emplace_back(grid[a].parameter, v);
      if (!label.empty()) label += ";";
      label += fmt::format("{}={:g}", grid[a].parameter, v);
    }

    Metrics m;
    try {
      const auto [pipeline, model] = fit_and_train(train, config, options);
      m = evaluate(model, pipeline, dev);
    } catch (const Error& e) {
      throw Error(e.kind(), "grid point '" + label + "' failed: " + e.what());
    }
    result.trials.rows.push_back({label, dev.name(), m});
    if (!best || m.accuracy > best->dev_metrics.accuracy) {
      best = GridResult{config, m, assignment, {}};
    }

    // Advance the odometer, last axis fastest.
    std::size_t a = grid.size();
    while (a > 0) {
      --a;
      if (++odometer[a] < grid[a].values.size()) break;
      odometer[a] = 0;
      if (a == 0) {
        result.best = std::move(best->best);
        result.dev_metrics = best->dev_metrics;
        result.assignment = std::move(best->assignment);
        return result;
      }
    }
  }
}

}  // namespace partisan
