#include "partisan/sparse.hpp"

#include "partisan/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace partisan {

SparseVector SparseVector::from_pairs(std::size_t dimension, std::vector<SparseEntry> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  SparseVector out(dimension);
  out.entries_.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.index >= dimension) {
      throw Error(ErrorKind::dimension, "sparse index " + std::to_string(p.index) +
                                            " out of range for dimension " +
                                            std::to_string(dimension));
    }
    if (!out.entries_.empty() && out.entries_.back().index == p.index) {
      out.entries_.back().value += p.value;
    } else {
      out.entries_.push_back(p);
    }
  }
  std::erase_if(out.entries_, [](const SparseEntry& e) { return e.value == 0.0; });
  return out;
}

SparseVector SparseVector::from_dense(std::span<const double> dense) {
  SparseVector out(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) out.entries_.push_back({static_cast<std::uint32_t>(i), dense[i]});
  }
  return out;
}

double SparseVector::at(std::uint32_t index) const noexcept {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const SparseEntry& e, std::uint32_t i) { return e.index < i; });
  return (it != entries_.end() && it->index == index) ? it->value : 0.0;
}

double SparseVector::dot(std::span<const double> dense) const noexcept {
  double sum = 0.0;
  for (const auto& e : entries_) sum += e.value * dense[e.index];
  return sum;
}

double SparseVector::l2_norm() const noexcept {
  double sq = 0.0;
  for (const auto& e : entries_) sq += e.value * e.value;
  return std::sqrt(sq);
}

std::vector<double> SparseVector::to_dense() const {
  std::vector<double> dense(dimension_, 0.0);
  for (const auto& e : entries_) dense[e.index] = e.value;
  return dense;
}

void SparseVector::push_back(std::uint32_t index, double value) {
  if (index >= dimension_ || (!entries_.empty() && entries_.back().index >= index)) {
    throw Error(ErrorKind::dimension, "sparse push_back out of order at index " +
                                          std::to_string(index));
  }
  if (value != 0.0) entries_.push_back({index, value});
}

void SparseVector::scale(double factor) {
  for (auto& e : entries_) e.value *= factor;
  std::erase_if(entries_, [](const SparseEntry& e) { return e.value == 0.0; });
}

}  // namespace partisan
