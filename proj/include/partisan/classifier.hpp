#pragma once

#include "partisan/archive.hpp"
#include "partisan/corpus_io.hpp"
#include "partisan/sparse.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace partisan {

enum class Solver : std::uint8_t {
  /// Full-batch gradient descent, Barzilai-Borwein trial step, Armijo backtracking.
  batch_gd = 0,
  /// Stochastic average gradient over single samples.
  avg_incremental = 1,
};

std::string_view solver_name(Solver solver) noexcept;
std::optional<Solver> parse_solver(std::string_view name) noexcept;

struct TrainOptions {
  double C = 1.0;
  Solver solver = Solver::batch_gd;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::size_t max_iter = 1000;
};

struct ModelWeights {
  std::vector<double> w;
  double intercept = 0.0;
  double C = 1.0;
  Solver solver = Solver::batch_gd;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::size_t iterations = 0;
  double final_objective = 0.0;
  /// Infinity norm of the full gradient at the returned point.
  double final_gradient_norm = 0.0;
  bool converged = false;

  std::size_t dimension() const noexcept { return w.size(); }
  friend bool operator==(const ModelWeights&, const ModelWeights&) = default;
};

struct ObjectiveValue {
  double loss = 0.0;
  std::vector<double> grad_w;
  double grad_intercept = 0.0;
};

/// J(w, b) = 1/2 |w|^2 + C sum_i ln(1 + exp(-s_i (w.x_i + b))), with
/// s_i = +1 for label 1 and -1 for label 0. The intercept is not penalized.
/// Throws Error(dimension) when w does not match the matrix width.
ObjectiveValue objective_and_gradient(std::span<const double> w, double intercept,
                                      const FeatureMatrix& X, std::span<const Label> y, double C);

/// Objective value after every accepted step (batch_gd) or epoch
/// (avg_incremental), starting with the value at zero.
struct TrainTrace {
  std::vector<double> objective;
};

/// Minimizes J until |grad J|_inf <= tol or max_iter iterations (epochs for
/// avg_incremental). Throws Error(data) when only one class is present.
ModelWeights train(const FeatureMatrix& X, std::span<const Label> y, const TrainOptions& options,
                   TrainTrace* trace = nullptr);

double sigmoid(double z) noexcept;

/// sigma(w.x + b), evaluated so that p(-w, -b) == 1 - p(w, b) exactly.
/// Throws Error(dimension) on a width mismatch.
double predict_proba(const ModelWeights& model, const SparseVector& x);

/// 1 when predict_proba >= 0.5.
Label predict_label(const ModelWeights& model, const SparseVector& x);

Archive model_archive(const ModelWeights& model);
ModelWeights model_from_archive(const Archive& archive);

std::string save_model(const ModelWeights& model);
ModelWeights load_model(std::string_view bytes);

}  // namespace partisan
