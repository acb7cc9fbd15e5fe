// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "oracles.hpp"
#include "synthetic.hpp"

#include "partisan/archive.hpp"
#include "partisan/classifier.hpp"
#include "partisan/error.hpp"
#include "partisan/evalharness.hpp"
#include "partisan/lexicons.hpp"
#include "partisan/pipeline.hpp"
#include "partisan/readability.hpp"
#include "partisan/stylometry.hpp"
#include "partisan/vectorizer.hpp"

#include <sys/wait.h>

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace partisan;
using Strings = std::vector<std::string>;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. The ablation command runs the full row set, row 3 included, on
// user-style data: a labeled training sample and two labeled eval sets.
Outcome ablate_end_to_end() {
  const fs::path src = PARTISAN_SOURCE_DIR;
  const fs::path dir = fs::temp_directory_path() / "partisan_acceptance_ablate";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto q = [](const fs::path& p) { return "'" + p.string() + "'"; };
  const std::string cmd = q(PARTISAN_CLI_PATH) + " ablate --config " + q(src / "configs" / "ablation.toml") +
                          " --train " + q(src / "data" / "toy" / "train.jsonl") + " --eval " +
                          q("by-article=" + (src / "data" / "toy" / "dev.jsonl").string()) + " --eval " +
                          q("by-publisher=" + (src / "data" / "toy" / "test.jsonl").string()) + " --out " +
                          q(dir / "report.csv") + " 2>" + q(dir / "stderr");
  const int raw = std::system(cmd.c_str());
  const int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  const std::string report = slurp(dir / "report.csv");
  const std::string err = slurp(dir / "stderr");
  fs::remove_all(dir);
  if (status != 0) return {false, "exit status " + std::to_string(status) + ": " + err};
  const auto lines = std::count(report.begin(), report.end(), '\n');
  const bool row3 = report.find("+ Char trigrams,by-article") != std::string::npos &&
                    report.find("+ Char trigrams,by-publisher") != std::string::npos;
  return {lines == 15 && row3, std::to_string(lines - 1) + " report rows (7 configs x 2 eval sets)"};
}

// 2. NB log-count ratios against a dense brute-force recomputation.
Outcome nb_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + partisan::uniform_index(rng, 20);
    const std::size_t n = 2 + partisan::uniform_index(rng, 29);
    std::vector<SparseVector> rows;
    oracle::DenseMatrix dense;
    std::vector<Label> labels;
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back(synth::random_row(rng, dim, 0.5));
      dense.push_back(rows.back().to_dense());
      labels.push_back(static_cast<Label>(i < 2 ? i : partisan::uniform_index(rng, 2)));
    }
    const auto r = fit_nb_ratios(rows, labels, 1.0).r;
    const auto expected = oracle::nb_ratios(dense, labels, 1.0, dim);
    for (std::size_t j = 0; j < dim; ++j) worst = std::max(worst, std::abs(r[j] - expected[j]));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-9 && secs < 5.0, "max |diff| " + fmt_double(worst) + ", " + fmt_double(secs) + " s"};
}

// 3. Yule's K and Honore's R against naive counting.
Outcome stylometry_oracle() {
  const auto start = Clock::now();
  const Strings aab{"a", "a", "b"};
  const auto freqs = frequency_spectrum(aab);
  const bool hand = std::abs(yule_k(freqs) - 2222.222) < 1e-3 && std::abs(honore_r(freqs) - 219.722) < 1e-3;
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Strings tokens = synth::random_tokens(rng, 200, 1 + partisan::uniform_index(rng, 80));
    if (tokens.empty()) tokens.push_back("solo");
    const auto s = frequency_spectrum(tokens);
    const double ko = oracle::yule_k(tokens);
    const double ro = oracle::honore_r(tokens);
    worst = std::max(worst, std::abs(yule_k(s) - ko) / std::max(1.0, std::abs(ko)));
    worst = std::max(worst, std::abs(honore_r(s) - ro) / std::max(1.0, std::abs(ro)));
  }
  const double secs = seconds_since(start);
  return {hand && worst <= 1e-9 && secs < 2.0,
          std::string(hand ? "hand values ok" : "hand values WRONG") + ", max rel diff " + fmt_double(worst) +
              ", " + fmt_double(secs) + " s"};
}

// 4. Readability indices: hand-derived values and a spreadsheet oracle.
Outcome readability_checks() {
  const auto st = [](std::uint64_t w, std::uint64_t s, std::uint64_t syl, std::uint64_t cx) {
    return ReadabilityStats{w, s, syl, cx};
  };
  struct Hand {
    double got, want;
  };
  const Hand hand[] = {
      {flesch_reading_ease(st(3, 1, 3, 0)), 119.190},  {flesch_reading_ease(st(10, 1, 10, 0)), 112.085},
      {flesch_kincaid_grade(st(3, 1, 3, 0)), -2.62},   {flesch_kincaid_grade(st(20, 1, 30, 0)), 9.91},
      {gunning_fog(st(3, 1, 3, 0)), 1.2},              {gunning_fog(st(10, 2, 20, 5)), 22.0},
  };
  double worst_hand = 0.0;
  for (const auto& h : hand) worst_hand = std::max(worst_hand, std::abs(h.got - h.want));

  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t w = 1 + partisan::uniform_index(rng, 400);
    const std::uint64_t s = 1 + partisan::uniform_index(rng, 30);
    const std::uint64_t syl = w + partisan::uniform_index(rng, 2 * w);
    const std::uint64_t cx = partisan::uniform_index(rng, w + 1);
    const oracle::Sheet sheet{double(w), double(s), double(syl), double(cx)};
    worst = std::max({worst, std::abs(flesch_reading_ease(st(w, s, syl, cx)) - sheet.fre()),
                      std::abs(flesch_kincaid_grade(st(w, s, syl, cx)) - sheet.fkg()),
                      std::abs(gunning_fog(st(w, s, syl, cx)) - sheet.fog())});
  }
  return {worst_hand <= 1e-9 && worst <= 1e-9,
          "hand max |diff| " + fmt_double(worst_hand) + ", oracle max |diff| " + fmt_double(worst)};
}

// 5. Analytic gradient against central finite differences.
Outcome gradient_check() {
  const auto start = Clock::now();
  std::mt19937_64 rng(31337);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + partisan::uniform_index(rng, 30);
    const std::size_t n = 1 + partisan::uniform_index(rng, 50);
    FeatureMatrix X;
    X.n_cols = dim;
    std::vector<Label> y;
    for (std::size_t i = 0; i < n; ++i) {
      X.rows.push_back(synth::random_row(rng, dim, 0.5));
      y.push_back(static_cast<Label>(partisan::uniform_index(rng, 2)));
    }
    std::vector<double> w(dim);
    for (auto& v : w) v = synth::uniform(rng, -1.0, 1.0);
    const double b = synth::uniform(rng, -1.0, 1.0);
    const double C = 1.0;
    const auto at = objective_and_gradient(w, b, X, y, C);
    const double h = 1e-5;
    for (std::size_t j = 0; j <= dim; ++j) {
      auto wp = w;
      auto wm = w;
      double bp = b;
      double bm = b;
      (j < dim ? wp[j] : bp) += h;
      (j < dim ? wm[j] : bm) -= h;
      const double fd =
          (objective_and_gradient(wp, bp, X, y, C).loss - objective_and_gradient(wm, bm, X, y, C).loss) / (2 * h);
      const double an = j < dim ? at.grad_w[j] : at.grad_intercept;
      worst = std::max(worst, std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1.0}));
    }
  }
  const double secs = seconds_since(start);
  return {worst < 1e-5 && secs < 2.0, "max rel err " + fmt_double(worst) + ", " + fmt_double(secs) + " s"};
}

// 6. Word n-grams with NB-TFiDF on a separable synthetic corpus.
Outcome synthetic_end_to_end() {
  const auto start = Clock::now();
  const Corpus all = synth::separable_corpus(200, 42);
  const auto [train, test] = split_corpus(all, 0.75, 42);
  FeatureConfig row2;
  row2.set_families({Family::word_ngrams});
  row2.nb_scaling = true;
  const auto [pipeline, model] = fit_and_train(train, row2, TrainOptions{});
  const Metrics m = evaluate(model, pipeline, test);
  const double secs = seconds_since(start);
  return {train.size() == 150 && test.size() == 50 && m.accuracy >= 0.95 && secs < 30.0,
          "held-out accuracy " + fmt_double(m.accuracy) + " on " + std::to_string(test.size()) + " docs, " +
              fmt_double(secs) + " s"};
}

// 7. SO antisymmetry and the war/tax induction example.
Outcome so_checks() {
  std::mt19937_64 rng(9);
  bool antisymmetric = true;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Strings> left;
    std::vector<Strings> right;
    for (int d = 0; d < 5; ++d) left.push_back(synth::random_tokens(rng, 30, 15));
    for (int d = 0; d < 5; ++d) right.push_back(synth::random_tokens(rng, 30, 15));
    left[0].push_back("shared");
    right[0].push_back("shared");
    const auto lr = semantic_orientation(left, right);
    const auto rl = semantic_orientation(right, left);
    std::map<std::string, double> back;
    for (const auto& s : rl) back[s.term] = s.so;
    if (lr.size() != rl.size()) antisymmetric = false;
    for (const auto& s : lr) {
      if (!back.contains(s.term) || back[s.term] != -s.so) antisymmetric = false;
    }
  }
  const std::vector<Strings> left{{"war", "war", "peace"}};
  const std::vector<Strings> right{{"tax", "tax", "peace"}};
  const auto bl = induce_bias_lexicons(semantic_orientation(left, right), 0.4);
  const bool example = bl.left.terms() == std::set<std::string, std::less<>>{"war"} &&
                       bl.right.terms() == std::set<std::string, std::less<>>{"tax"};
  return {antisymmetric && example, std::string(antisymmetric ? "exact antisymmetry on 50 corpus pairs" : "antisymmetry broken") +
                                        (example ? ", BL_left={war}, BL_right={tax}" : ", war/tax example WRONG")};
}

// 8. No vocabulary term survives with df / n_docs above max_df.
Outcome max_df_property() {
  std::mt19937_64 rng(88);
  bool ok = true;
  std::size_t filtered = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Strings> docs;
    const std::size_t n = 1 + partisan::uniform_index(rng, 40);
    for (std::size_t d = 0; d < n; ++d) docs.push_back(word_ngrams(tokenize(synth::random_text(rng, 25, 40)).tokens));
    const auto vocab = build_vocabulary(docs, Channel::word_1_2, std::nullopt, 0.9);
    std::set<std::string> all_terms;
    for (const auto& d : docs) all_terms.insert(d.begin(), d.end());
    filtered += all_terms.size() - vocab.size();
    for (const auto& term : vocab.terms()) {
      std::size_t df = 0;
      for (const auto& d : docs) df += std::find(d.begin(), d.end(), term) != d.end() ? 1 : 0;
      if (static_cast<double>(df) / static_cast<double>(n) > 0.9) ok = false;
    }
  }
  return {ok, "50 corpora, " + std::to_string(filtered) + " terms removed by the filter, none above 0.9 kept"};
}

// 9. Pipeline and model archives reproduce transforms and predictions bit for bit.
Outcome persistence_round_trip() {
  const Corpus train = synth::separable_corpus(60, 7);
  FeatureConfig c;
  c.set_families({Family::word_ngrams, Family::char_trigrams, Family::bias, Family::lexical, Family::richness,
                  Family::readability});
  const Strings cues{"lefty1", "righty2", "filler3 filler4"};
  c.lexicons = {Lexicon("cues", cues)};
  c.standardize = true;
  const auto [pipeline, model] = fit_and_train(train, c, TrainOptions{});

  const fs::path dir = fs::temp_directory_path() / "partisan_acceptance_archive";
  fs::create_directories(dir);
  pipeline.to_archive().write_file(dir / "pipeline.bin");
  model_archive(model).write_file(dir / "model.bin");
  const auto pipeline2 = FittedPipeline::from_archive(Archive::read_file(dir / "pipeline.bin"));
  const auto model2 = model_from_archive(Archive::read_file(dir / "model.bin"));
  fs::remove_all(dir);

  std::mt19937_64 rng(123);
  bool ok = pipeline2.dimension() == pipeline.dimension();
  for (int i = 0; i < 20 && ok; ++i) {
    const std::string text = synth::random_text(rng, 30, 80) + " lefty1 righty7 filler3 filler4.";
    const auto a = pipeline.transform(text);
    const auto b = pipeline2.transform(text);
    if (a.nnz() != b.nnz()) ok = false;
    for (std::size_t k = 0; ok && k < a.nnz(); ++k) {
      ok = a.entries()[k].index == b.entries()[k].index && same_bits(a.entries()[k].value, b.entries()[k].value);
    }
    ok = ok && same_bits(predict_proba(model, a), predict_proba(model2, b));
  }
  return {ok, "20 random documents, all six families, standardization on"};
}

// 10. Doubling one family's scale doubles exactly its columns.
Outcome scaling_linearity() {
  const Corpus train = synth::separable_corpus(40, 3);
  FeatureConfig base;
  base.set_families({Family::word_ngrams, Family::char_trigrams, Family::bias, Family::lexical, Family::richness,
                     Family::readability});
  const Strings cues{"lefty1", "filler2"};
  base.lexicons = {Lexicon("cues", cues)};
  std::mt19937_64 rng(10);
  double worst = 0.0;
  for (Family f : kFamilies) {
    FeatureConfig doubled = base;
    doubled.scale[f] *= 2.0;
    const auto p1 = fit_pipeline(train, base);
    const auto p2 = fit_pipeline(train, doubled);
    const auto block = *p1.block(f);
    for (int i = 0; i < 10; ++i) {
      const std::string text = synth::random_text(rng, 20, 50) + " lefty1 righty3 filler2.";
      const auto a = p1.transform(text).to_dense();
      const auto b = p2.transform(text).to_dense();
      if (a.size() != b.size()) return {false, "dimension changed"};
      for (std::size_t j = 0; j < a.size(); ++j) {
        const bool inside = j >= block.offset && j < block.offset + block.width;
        worst = std::max(worst, std::abs(b[j] - (inside ? 2.0 : 1.0) * a[j]));
      }
    }
  }
  return {worst <= 1e-12, "6 families x 10 documents, max |diff| " + fmt_double(worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {1, "ablate runs every row end to end on user-supplied data", ablate_end_to_end},
      {2, "NB log-count ratios match the dense oracle", nb_oracle},
      {3, "Yule's K and Honore's R match naive counting", stylometry_oracle},
      {4, "readability indices match hand values and the spreadsheet oracle", readability_checks},
      {5, "gradient matches central finite differences", gradient_check},
      {6, "separable synthetic corpus reaches >= 0.95 held-out accuracy", synthetic_end_to_end},
      {7, "semantic orientation antisymmetry and lexicon induction", so_checks},
      {8, "max_df filter keeps no term above the threshold", max_df_property},
      {9, "pipeline and model archives round-trip bit-identically", persistence_round_trip},
      {10, "family scale factors act linearly on their own columns", scaling_linearity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  criterion %2d: %s (%s)\n", o.pass ? "PASS" : "FAIL", c.number, c.title, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
