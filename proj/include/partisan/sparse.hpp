#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace partisan {

struct SparseEntry {
  std::uint32_t index = 0;
  double value = 0.0;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sparse row: entries sorted by strictly increasing index, every index
/// below `dimension`, no explicitly stored zeros.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t dimension) : dimension_(dimension) {}

  /// Builds from arbitrary (index, value) pairs: sorts, sums duplicates and
  /// drops zeros. Throws Error(dimension) on an out-of-range index.
  static SparseVector from_pairs(std::size_t dimension, std::vector<SparseEntry> pairs);

  /// Builds from a dense array, keeping non-zero values.
  static SparseVector from_dense(std::span<const double> dense);

  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<SparseEntry>& entries() const noexcept { return entries_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Value at `index`, 0 when not stored. Logarithmic.
  double at(std::uint32_t index) const noexcept;

  double dot(std::span<const double> dense) const noexcept;
  double l2_norm() const noexcept;
  std::vector<double> to_dense() const;

  /// Appends an entry whose index exceeds every stored one. Zeros are
  /// skipped. Throws Error(dimension) if the ordering would be violated.
  void push_back(std::uint32_t index, double value);

  void scale(double factor);

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<SparseEntry> entries_;
};

/// Rows sharing one column count.
struct FeatureMatrix {
  std::size_t n_cols = 0;
  std::vector<SparseVector> rows;

  std::size_t n_rows() const noexcept { return rows.size(); }
};

}  // namespace partisan
