#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace partisan {

/// Uniform integer in [0, bound) from a 64-bit engine by rejection sampling.
/// Unlike std::uniform_int_distribution the result sequence is identical
/// across standard library implementations.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t n = bound;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return static_cast<std::size_t>(draw % n);
}

/// Fisher-Yates shuffle driven by uniform_index.
template <typename T>
void portable_shuffle(std::span<T> items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = uniform_index(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace partisan
