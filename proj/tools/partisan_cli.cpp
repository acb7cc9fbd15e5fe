// partisan: command-line front end for the hyperpartisan feature pipeline.

#include "partisan/archive.hpp"
#include "partisan/classifier.hpp"
#include "partisan/config.hpp"
#include "partisan/corpus_io.hpp"
#include "partisan/error.hpp"
#include "partisan/evalharness.hpp"
#include "partisan/lexicons.hpp"
#include "partisan/pipeline.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <variant>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace partisan;

namespace {

// Writes to a file, or to stdout when the path is "-".
void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path);
  out << content;
}

void log_line(const std::string& msg) { std::cerr << "partisan: " << msg << '\n'; }

Corpus read_corpus(const std::string& path, const std::string& format) {
  if (format == "auto") return load_corpus(path);
  const auto f = parse_corpus_format(format);
  if (!f) throw Error(ErrorKind::invalid_argument, "unknown corpus format '" + format + "'");
  return load_corpus(path, *f);
}

CLI::Option* add_format(CLI::App* app, std::string& format) {
  return app->add_option("--format", format, "Corpus format: auto (by extension), jsonl or tsv")
      ->check(CLI::IsMember({"auto", "jsonl", "tsv"}))
      ->capture_default_str();
}

// Feature and solver flags shared by train/ablate/tune. Every flag, when
// given, overrides the config file.
struct SettingFlags {
  FeatureConfig features_default;
  TrainOptions training_default;

  std::vector<std::string> families;
  std::size_t k = features_default.k;
  double max_df = features_default.max_df;
  double alpha = features_default.alpha;
  bool nb_scaling = features_default.nb_scaling;
  double threshold = features_default.so_threshold;
  double C = training_default.C;
  std::string solver{solver_name(training_default.solver)};
  double tol = training_default.tol;
  std::size_t max_iter = training_default.max_iter;
  std::uint64_t seed = training_default.seed;

  std::vector<CLI::Option*> feature_opts;
  CLI::Option* families_opt = nullptr;
  CLI::Option* k_opt = nullptr;
  CLI::Option* max_df_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* nb_opt = nullptr;
  CLI::Option* threshold_opt = nullptr;
  CLI::Option* C_opt = nullptr;
  CLI::Option* solver_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* max_iter_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  void add_solver_flags(CLI::App* app) {
    C_opt = app->add_option("--C", C, "Inverse L2 regularization strength")->capture_default_str();
    solver_opt = app->add_option("--solver", solver, "Solver: batch_gd or avg_incremental")
                     ->check(CLI::IsMember({"batch_gd", "avg_incremental"}))
                     ->capture_default_str();
    tol_opt = app->add_option("--tol", tol, "Stop when the gradient infinity norm is below this")
                  ->capture_default_str();
    max_iter_opt = app->add_option("--max-iter", max_iter, "Iteration (epoch) budget")
                       ->capture_default_str();
    seed_opt = app->add_option("--seed", seed, "Random seed for the incremental solver")
                   ->capture_default_str();
  }

  void add_feature_flags(CLI::App* app) {
    families_opt = app->add_option("--families", families,
                                   "Enabled families (word_ngrams char_trigrams bias lexical "
                                   "richness readability)")
                       ->delimiter(',')
                       ->default_str("word_ngrams");
    k_opt = app->add_option("--k", k, "Word [1,2]-gram vocabulary size")->capture_default_str();
    max_df_opt = app->add_option("--max-df", max_df, "Drop n-grams in more than this share of documents")
                     ->capture_default_str();
    alpha_opt = app->add_option("--alpha", alpha, "NB ratio smoothing")->capture_default_str();
    nb_opt = app->add_option("--nb-scaling", nb_scaling, "Scale word TFiDF by NB log-count ratios")
                 ->capture_default_str();
    threshold_opt = app->add_option("--so-threshold", threshold,
                                    "|SO| cut-off for induced bias lexicons")
                        ->capture_default_str();
  }

  void apply(RunSettings& s) const {
    auto given = [](const CLI::Option* o) { return o != nullptr && o->count() > 0; };
    if (given(families_opt)) {
      for (Family f : kFamilies) s.features.enabled[f] = false;
      for (const auto& name : families) {
        const auto f = parse_family(name);
        if (!f) throw Error(ErrorKind::invalid_argument, "unknown family '" + name + "'");
        s.features.enabled[*f] = true;
      }
    }
    if (given(k_opt)) s.features.k = k;
    if (given(max_df_opt)) s.features.max_df = max_df;
    if (given(alpha_opt)) s.features.alpha = alpha;
    if (given(nb_opt)) s.features.nb_scaling = nb_scaling;
    if (given(threshold_opt)) s.features.so_threshold = threshold;
    if (given(C_opt)) s.training.C = C;
    if (given(solver_opt)) s.training.solver = *parse_solver(solver);
    if (given(tol_opt)) s.training.tol = tol;
    if (given(max_iter_opt)) s.training.max_iter = max_iter;
    if (given(seed_opt)) s.training.seed = seed;
  }
};

struct ModelBundle {
  FittedPipeline pipeline;
  ModelWeights model;
};

ModelBundle read_bundle(const std::string& model_path, const std::string& pipeline_path) {
  const Archive model_archive_file = Archive::read_file(model_path);
  ModelWeights model = model_from_archive(model_archive_file);
  FittedPipeline pipeline = pipeline_path.empty()
                                ? FittedPipeline::from_archive(model_archive_file)
                                : FittedPipeline::from_archive(Archive::read_file(pipeline_path));
  if (model.dimension() != pipeline.dimension()) {
    throw Error(ErrorKind::dimension, "dimension mismatch: model expects " +
                                          std::to_string(model.dimension()) +
                                          " features, pipeline produces " +
                                          std::to_string(pipeline.dimension()));
  }
  return {std::move(pipeline), std::move(model)};
}

std::string format_row(const SparseVector& v) {
  std::string out;
  for (const auto& e : v.entries()) {
    if (!out.empty()) out.push_back(' ');
    out += fmt::format("{}:{}", e.index, e.value);
  }
  return out;
}

// Rewrites lexicon paths to absolute ones so a tuned config stays valid
// wherever it is written.
void absolutize_lexicon_paths(ConfigDocument& doc) {
  const fs::path base = fs::absolute(doc.base_dir());
  auto rewrite = [&](const std::string& section, const std::string& key, const ConfigValue& value) {
    if (const auto* path = std::get_if<std::string>(&value.data)) {
      doc.set(section, key, ConfigValue{(base / *path).lexically_normal().string(), value.line});
    }
  };
  for (const std::string section : {"lexicons", "bias"}) {
    const ConfigTable* t = doc.table(section);
    if (t == nullptr) continue;
    const auto entries = t->entries;
    for (const auto& [key, value] : entries) {
      if (section == "lexicons" || key == "left_lexicon" || key == "right_lexicon") {
        rewrite(section, key, value);
      }
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperpartisan news detection: engineered features + logistic regression"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string format = "auto";

  // train -------------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "Fit the feature pipeline and the classifier");
  std::string train_corpus, train_config, train_out;
  SettingFlags train_flags;
  train_cmd->add_option("--corpus", train_corpus, "Labeled training corpus")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--config", train_config, "Feature/classifier config file")->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_out, "Output archive (pipeline + model)")->required();
  add_format(train_cmd, format);
  train_flags.add_feature_flags(train_cmd);
  train_flags.add_solver_flags(train_cmd);

  // predict -----------------------------------------------------------------
  auto* predict_cmd = app.add_subcommand("predict", "Write id, probability and label per document");
  std::string predict_model, predict_pipeline, predict_corpus, predict_out = "-";
  predict_cmd->add_option("--model", predict_model, "Archive written by train")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--pipeline", predict_pipeline, "Use the pipeline from this archive instead")
      ->check(CLI::ExistingFile);
  predict_cmd->add_option("--corpus", predict_corpus, "Corpus to score")->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--out", predict_out, "Output TSV ('-' for stdout)")->capture_default_str();
  add_format(predict_cmd, format);

  // evaluate ----------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("evaluate", "Accuracy/precision/recall/F1 on a labeled corpus");
  std::string eval_model, eval_pipeline, eval_corpus, eval_out = "-";
  eval_cmd->add_option("--model", eval_model, "Archive written by train")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--pipeline", eval_pipeline, "Use the pipeline from this archive instead")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--corpus", eval_corpus, "Labeled corpus")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval_out, "Metrics CSV ('-' for stdout)")->capture_default_str();
  add_format(eval_cmd, format);

  // induce-lexicon ------------------------------------------------------------
  auto* induce_cmd = app.add_subcommand("induce-lexicon", "Induce left/right bias lexicons by semantic orientation");
  std::string induce_left, induce_right, induce_out_left = "bias_left.txt",
                                         induce_out_right = "bias_right.txt", induce_scores;
  double induce_threshold = kDefaultSoThreshold;
  induce_cmd->add_option("--left", induce_left, "Left-leaning corpus")->required()->check(CLI::ExistingFile);
  induce_cmd->add_option("--right", induce_right, "Right-leaning corpus")->required()->check(CLI::ExistingFile);
  induce_cmd->add_option("--threshold", induce_threshold, "Minimum |SO| of a cue")->capture_default_str();
  induce_cmd->add_option("--out-left", induce_out_left, "Left lexicon output")->capture_default_str();
  induce_cmd->add_option("--out-right", induce_out_right, "Right lexicon output")->capture_default_str();
  induce_cmd->add_option("--scores", induce_scores, "Also write term<TAB>so scores here");
  add_format(induce_cmd, format);

  // featurize -----------------------------------------------------------------
  auto* feat_cmd = app.add_subcommand("featurize", "Dump sparse feature rows");
  std::string feat_corpus, feat_pipeline, feat_out = "-";
  feat_cmd->add_option("--corpus", feat_corpus, "Corpus to featurize")->required()->check(CLI::ExistingFile);
  feat_cmd->add_option("--pipeline", feat_pipeline, "Archive holding a fitted pipeline")->required()->check(CLI::ExistingFile);
  feat_cmd->add_option("--out", feat_out, "Output ('-' for stdout)")->capture_default_str();
  add_format(feat_cmd, format);

  // ablate --------------------------------------------------------------------
  auto* ablate_cmd = app.add_subcommand("ablate", "Run the incremental feature ablation");
  std::string ablate_config, ablate_train, ablate_out = "-", ablate_text;
  std::vector<std::string> ablate_evals;
  SettingFlags ablate_flags;
  ablate_cmd->add_option("--config", ablate_config, "Config file with [[row]] tables")->required()->check(CLI::ExistingFile);
  ablate_cmd->add_option("--train", ablate_train, "Labeled training corpus")->required()->check(CLI::ExistingFile);
  ablate_cmd->add_option("--eval", ablate_evals, "Evaluation set as name=path (repeatable)")->required();
  ablate_cmd->add_option("--out", ablate_out, "Report CSV ('-' for stdout)")->capture_default_str();
  ablate_cmd->add_option("--text", ablate_text, "Also write an aligned text report here");
  add_format(ablate_cmd, format);
  ablate_flags.add_solver_flags(ablate_cmd);

  // tune ----------------------------------------------------------------------
  auto* tune_cmd = app.add_subcommand("tune", "Grid-search family scale factors (and k) on a dev set");
  std::string tune_config, tune_train, tune_dev, tune_out = "-", tune_trials;
  SettingFlags tune_flags;
  tune_cmd->add_option("--config", tune_config, "Config file with a [grid] section")->required()->check(CLI::ExistingFile);
  tune_cmd->add_option("--train", tune_train, "Labeled training corpus")->required()->check(CLI::ExistingFile);
  tune_cmd->add_option("--dev", tune_dev, "Labeled development corpus")->required()->check(CLI::ExistingFile);
  tune_cmd->add_option("--out", tune_out, "Best config ('-' for stdout)")->capture_default_str();
  tune_cmd->add_option("--trials", tune_trials, "Also write per-grid-point metrics CSV here");
  add_format(tune_cmd, format);
  tune_flags.add_solver_flags(tune_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*train_cmd) {
      RunSettings settings;
      if (!train_config.empty()) settings = settings_from_config(ConfigDocument::load(train_config));
      train_flags.apply(settings);
      const Corpus corpus = read_corpus(train_corpus, format);
      const auto [pipeline, model] = fit_and_train(corpus, settings.features, settings.training);
      Archive archive = pipeline.to_archive();
      archive.merge(model_archive(model));
      archive.write_file(train_out);
      log_line(fmt::format("trained on {} documents, {} features, {} {} iterations, objective {:.6g}, {}",
                           corpus.size(), pipeline.dimension(), model.iterations,
                           solver_name(model.solver), model.final_objective,
                           model.converged ? "converged" : "not converged"));
    } else if (*predict_cmd) {
      const auto bundle = read_bundle(predict_model, predict_pipeline);
      const Corpus corpus = read_corpus(predict_corpus, format);
      std::string out;
      for (const auto& doc : corpus) {
        const double p = predict_proba(bundle.model, bundle.pipeline.transform(doc));
        out += fmt::format("{}\t{}\t{}\n", doc.id, p, p >= 0.5 ? 1 : 0);
      }
      write_output(predict_out, out);
    } else if (*eval_cmd) {
      const auto bundle = read_bundle(eval_model, eval_pipeline);
      const Corpus corpus = read_corpus(eval_corpus, format);
      Report report;
      report.rows.push_back({fs::path(eval_model).stem().string(), corpus.name(),
                             evaluate(bundle.model, bundle.pipeline, corpus)});
      write_output(eval_out, report.to_csv());
    } else if (*induce_cmd) {
      const Corpus left = read_corpus(induce_left, format);
      const Corpus right = read_corpus(induce_right, format);
      const auto scores = semantic_orientation(left, right);
      const auto lexicons = induce_bias_lexicons(scores, induce_threshold);
      save_lexicon(lexicons.left, induce_out_left);
      save_lexicon(lexicons.right, induce_out_right);
      if (!induce_scores.empty()) write_output(induce_scores, so_scores_tsv(scores));
      log_line(fmt::format("{} left cues, {} right cues at |SO| >= {}", lexicons.left.size(),
                           lexicons.right.size(), induce_threshold));
    } else if (*feat_cmd) {
      const FittedPipeline pipeline = FittedPipeline::from_archive(Archive::read_file(feat_pipeline));
      const Corpus corpus = read_corpus(feat_corpus, format);
      std::string out;
      for (const auto& doc : corpus) {
        out += fmt::format("{}\t{}\t{}\n", doc.id, doc.label ? std::to_string(*doc.label) : "",
                           format_row(pipeline.transform(doc)));
      }
      write_output(feat_out, out);
    } else if (*ablate_cmd) {
      const ConfigDocument doc = ConfigDocument::load(ablate_config);
      RunSettings settings = settings_from_config(doc);
      ablate_flags.apply(settings);
      const auto rows = ablation_rows(doc, settings.features);
      if (rows.empty()) throw Error(ErrorKind::config, ablate_config + ": no [[row]] tables");
      std::vector<NamedCorpus> evals;
      for (const auto& arg : ablate_evals) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw Error(ErrorKind::invalid_argument, "--eval expects name=path, got '" + arg + "'");
        }
        const std::string path = arg.substr(eq + 1);
        if (!fs::exists(path)) throw Error(ErrorKind::io, "eval corpus not found: " + path);
        evals.push_back({arg.substr(0, eq), read_corpus(path, format)});
      }
      const Corpus train = read_corpus(ablate_train, format);
      const Report report = ablation_run(train, evals, rows, settings.training);
      write_output(ablate_out, report.to_csv());
      if (!ablate_text.empty()) write_output(ablate_text, report.to_text());
    } else if (*tune_cmd) {
      ConfigDocument doc = ConfigDocument::load(tune_config);
      RunSettings settings = settings_from_config(doc);
      tune_flags.apply(settings);
      const auto axes = grid_axes(doc);
      if (axes.empty()) throw Error(ErrorKind::config, tune_config + ": no [grid] section");
      const Corpus train = read_corpus(tune_train, format);
      const Corpus dev = read_corpus(tune_dev, format);
      const GridResult result = grid_search_scales(train, dev, settings.features, axes, settings.training);
      apply_assignment(doc, result.assignment);
      absolutize_lexicon_paths(doc);
      std::string header = fmt::format("# dev accuracy {:.6f}, F1 {:.6f}\n", result.dev_metrics.accuracy,
                                       result.dev_metrics.f1);
      write_output(tune_out, header + doc.to_string());
      if (!tune_trials.empty()) write_output(tune_trials, result.trials.to_csv());
    }
  } catch (const Error& e) {
    std::cerr << "error: " << error_kind_name(e.kind()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
