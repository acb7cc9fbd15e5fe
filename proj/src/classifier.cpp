#include "partisan/classifier.hpp"

#include "partisan/error.hpp"
#include "partisan/random.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace partisan {
namespace {

constexpr std::string_view kModelTag = "MODL";

// ln(1 + e^z) without overflow.
double softplus(double z) noexcept {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sign_of(Label y) noexcept { return y == 1 ? 1.0 : -1.0; }

double inf_norm(std::span<const double> g, double g_intercept) noexcept {
  double m = std::abs(g_intercept);
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

void check_inputs(const FeatureMatrix& X, std::span<const Label> y) {
  if (X.n_rows() != y.size()) {
    throw Error(ErrorKind::dimension, "feature matrix has " + std::to_string(X.n_rows()) +
                                          " rows but " + std::to_string(y.size()) + " labels");
  }
  for (std::size_t i = 0; i < X.n_rows(); ++i) {
    if (X.rows[i].dimension() != X.n_cols) {
      throw Error(ErrorKind::dimension, "row " + std::to_string(i) + " has dimension " +
                                            std::to_string(X.rows[i].dimension()) + ", expected " +
                                            std::to_string(X.n_cols));
    }
    if (y[i] != 0 && y[i] != 1) {
      throw Error(ErrorKind::invalid_argument, "labels must be 0 or 1");
    }
  }
}

struct Point {
  std::vector<double> w;
  double b = 0.0;
};

ModelWeights finish(const Point& p, const TrainOptions& opt, const ObjectiveValue& obj,
                    std::size_t iterations) {
  ModelWeights m;
  m.w = p.w;
  m.intercept = p.b;
  m.C = opt.C;
  m.solver = opt.solver;
  m.seed = opt.seed;
  m.tol = opt.tol;
  m.iterations = iterations;
  m.final_objective = obj.loss;
  m.final_gradient_norm = inf_norm(obj.grad_w, obj.grad_intercept);
  m.converged = m.final_gradient_norm <= opt.tol;
  return m;
}

ModelWeights train_batch(const FeatureMatrix& X, std::span<const Label> y, const TrainOptions& opt,
                         TrainTrace* trace) {
  const std::size_t dim = X.n_cols;
  Point p{std::vector<double>(dim, 0.0), 0.0};
  ObjectiveValue cur = objective_and_gradient(p.w, p.b, X, y, opt.C);
  if (trace) trace->objective.push_back(cur.loss);

  // 1 / (upper bound on the Hessian's largest eigenvalue) as the first trial step.
  double lipschitz = 1.0;
  for (const auto& row : X.rows) {
    const double n = row.l2_norm();
    lipschitz += 0.25 * opt.C * (n * n + 1.0);
  }
  double step = 1.0 / lipschitz;

  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-20;
  std::size_t iter = 0;
  while (iter < opt.max_iter && inf_norm(cur.grad_w, cur.grad_intercept) > opt.tol) {
    ++iter;
    double g_sq = cur.grad_intercept * cur.grad_intercept;
    for (double g : cur.grad_w) g_sq += g * g;

    Point next;
    ObjectiveValue trial;
    double t = step;
    while (true) {
      next.w.resize(dim);
      for (std::size_t j = 0; j < dim; ++j) next.w[j] = p.w[j] - t * cur.grad_w[j];
      next.b = p.b - t * cur.grad_intercept;
      trial = objective_and_gradient(next.w, next.b, X, y, opt.C);
      if (trial.loss <= cur.loss - kArmijo * t * g_sq) break;
      t *= 0.5;
      if (t < kMinStep) break;
    }
    if (t < kMinStep) break;  // no further decrease representable

    // Barzilai-Borwein step for the next trial: s's / s'y.
    double ss = 0.0;
    double sy = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double s = next.w[j] - p.w[j];
      ss += s * s;
      sy += s * (trial.grad_w[j] - cur.grad_w[j]);
    }
    const double sb = next.b - p.b;
    ss += sb * sb;
    sy += sb * (trial.grad_intercept - cur.grad_intercept);
    step = (sy > 0.0) ? ss / sy : t * 2.0;

    p = std::move(next);
    cur = std::move(trial);
    if (trace) trace->objective.push_back(cur.loss);
  }
  return finish(p, opt, cur, iter);
}

// SAG on F = J / (C N) = mean log-loss + alpha/2 |w|^2 with alpha = 1/(C N).
// w is stored as scale * v and coordinates untouched by a sample are
// brought up to date lazily from cumulative step sums, so a step costs
// O(nnz(x_i)) rather than O(dim).
ModelWeights train_sag(const FeatureMatrix& X, std::span<const Label> y, const TrainOptions& opt,
                       TrainTrace* trace) {
  const std::size_t n = X.n_rows();
  const std::size_t dim = X.n_cols;
  const double alpha = 1.0 / (opt.C * static_cast<double>(n));

  double max_sq = 0.0;
  for (const auto& row : X.rows) {
    const double r = row.l2_norm();
    max_sq = std::max(max_sq, r * r);
  }
  const double eta = 1.0 / (0.25 * (max_sq + 1.0) + alpha);
  const double decay = 1.0 - eta * alpha;

  std::vector<double> v(dim, 0.0);
  double scale = 1.0;
  double b = 0.0;
  std::vector<double> grad_sum(dim, 0.0);
  double grad_sum_b = 0.0;
  std::vector<double> stored(n, 0.0);
  std::vector<bool> seen(n, false);
  std::size_t n_seen = 0;

  std::vector<double> cumulative(n + 1, 0.0);
  std::vector<std::size_t> last(dim, 0);

  auto catch_up = [&](std::size_t j, std::size_t now) {
    if (last[j] != now) {
      v[j] -= (cumulative[now] - cumulative[last[j]]) * grad_sum[j];
      last[j] = now;
    }
  };
  auto flush = [&](std::size_t now) {
    for (std::size_t j = 0; j < dim; ++j) catch_up(j, now);
    for (double& x : v) x *= scale;
    scale = 1.0;
  };

  std::mt19937_64 rng(opt.seed);
  Point p;
  ObjectiveValue cur = objective_and_gradient(v, b, X, y, opt.C);
  if (trace) trace->objective.push_back(cur.loss);
  std::size_t epoch = 0;
  while (epoch < opt.max_iter && inf_norm(cur.grad_w, cur.grad_intercept) > opt.tol) {
    ++epoch;
    std::size_t t = 0;
    for (; t < n; ++t) {
      const std::size_t i = uniform_index(rng, n);
      const auto& row = X.rows[i];
      double dot = 0.0;
      for (const auto& e : row.entries()) {
        catch_up(e.index, t);
        dot += v[e.index] * e.value;
      }
      const double margin = scale * dot + b;
      const double s = sign_of(y[i]);
      const double g_new = -s * sigmoid(-s * margin);
      const double delta = g_new - stored[i];
      stored[i] = g_new;
      if (!seen[i]) {
        seen[i] = true;
        ++n_seen;
      }
      for (const auto& e : row.entries()) grad_sum[e.index] += delta * e.value;
      grad_sum_b += delta;

      scale *= decay;
      const double coef = eta / static_cast<double>(n_seen);
      cumulative[t + 1] = cumulative[t] + coef / scale;
      for (const auto& e : row.entries()) catch_up(e.index, t + 1);
      b -= coef * grad_sum_b;

      if (scale < 1e-9) flush(t + 1);
    }
    flush(n);
    std::fill(last.begin(), last.end(), 0);
    cur = objective_and_gradient(v, b, X, y, opt.C);
    if (trace) trace->objective.push_back(cur.loss);
  }
  p.w = std::move(v);
  p.b = b;
  return finish(p, opt, cur, epoch);
}

}  // namespace

std::string_view solver_name(Solver solver) noexcept {
  return solver == Solver::batch_gd ? "batch_gd" : "avg_incremental";
}

std::optional<Solver> parse_solver(std::string_view name) noexcept {
  if (name == "batch_gd") return Solver::batch_gd;
  if (name == "avg_incremental" || name == "sag") return Solver::avg_incremental;
  return std::nullopt;
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

ObjectiveValue objective_and_gradient(std::span<const double> w, double intercept,
                                      const FeatureMatrix& X, std::span<const Label> y, double C) {
  if (w.size() != X.n_cols) {
    throw Error(ErrorKind::dimension, "weight vector has dimension " + std::to_string(w.size()) +
                                          ", feature matrix has " + std::to_string(X.n_cols) +
                                          " columns");
  }
  check_inputs(X, y);
  ObjectiveValue out;
  out.grad_w.assign(w.begin(), w.end());
  double reg = 0.0;
  for (double v : w) reg += v * v;
  double data = 0.0;
  for (std::size_t i = 0; i < X.n_rows(); ++i) {
    const double s = sign_of(y[i]);
    const double z = s * (X.rows[i].dot(w) + intercept);
    data += softplus(-z);
    const double coef = -C * s * sigmoid(-z);
    for (const auto& e : X.rows[i].entries()) out.grad_w[e.index] += coef * e.value;
    out.grad_intercept += coef;
  }
  out.loss = 0.5 * reg + C * data;
  return out;
}

ModelWeights train(const FeatureMatrix& X, std::span<const Label> y, const TrainOptions& options,
                   TrainTrace* trace) {
  check_inputs(X, y);
  if (!(options.C > 0.0) || !std::isfinite(options.C)) {
    throw Error(ErrorKind::invalid_argument, "C must be a positive finite number");
  }
  if (!(options.tol >= 0.0)) throw Error(ErrorKind::invalid_argument, "tol must be >= 0");
  if (X.n_rows() < 2) throw Error(ErrorKind::data, "training needs at least two samples");
  const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), 0) != y.end();
  if (!has_pos || !has_neg) {
    throw Error(ErrorKind::data, "training data contains a single class");
  }
  return options.solver == Solver::batch_gd ? train_batch(X, y, options, trace)
                                            : train_sag(X, y, options, trace);
}

double predict_proba(const ModelWeights& model, const SparseVector& x) {
  if (x.dimension() != model.w.size()) {
    throw Error(ErrorKind::dimension, "dimension mismatch: model expects " +
                                          std::to_string(model.w.size()) +
                                          " features, input has " + std::to_string(x.dimension()));
  }
  // Computed from |z| so that negating the model gives exactly 1 - p.
  const double z = x.dot(model.w) + model.intercept;
  return z >= 0.0 ? sigmoid(z) : 1.0 - sigmoid(-z);
}

Label predict_label(const ModelWeights& model, const SparseVector& x) {
  return predict_proba(model, x) >= 0.5 ? 1 : 0;
}

Archive model_archive(const ModelWeights& model) {
  ByteWriter w;
  w.f64_array(model.w);
  w.f64(model.intercept);
  w.f64(model.C);
  w.u8(static_cast<std::uint8_t>(model.solver));
  w.u64(model.seed);
  w.f64(model.tol);
  w.u64(model.iterations);
  w.f64(model.final_objective);
  w.f64(model.final_gradient_norm);
  w.u8(model.converged ? 1 : 0);
  Archive a;
  a.add(std::string(kModelTag), w.take());
  return a;
}

ModelWeights model_from_archive(const Archive& archive) {
  ByteReader r(archive.require(kModelTag), std::string(kModelTag));
  ModelWeights m;
  m.w = r.f64_array();
  m.intercept = r.f64();
  m.C = r.f64();
  const auto solver = r.u8();
  if (solver > 1) r.fail("unknown solver id " + std::to_string(solver));
  m.solver = static_cast<Solver>(solver);
  m.seed = r.u64();
  m.tol = r.f64();
  m.iterations = static_cast<std::size_t>(r.u64());
  m.final_objective = r.f64();
  m.final_gradient_norm = r.f64();
  const auto converged = r.u8();
  if (converged > 1) r.fail("invalid boolean");
  m.converged = converged == 1;
  r.expect_end();
  for (double v : m.w) {
    if (!std::isfinite(v)) r.fail("non-finite weight");
  }
  if (!std::isfinite(m.intercept)) r.fail("non-finite intercept");
  return m;
}

std::string save_model(const ModelWeights& model) { return model_archive(model).encode(); }

ModelWeights load_model(std::string_view bytes) { return model_from_archive(Archive::decode(bytes)); }

}  // namespace partisan
