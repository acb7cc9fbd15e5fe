#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>

namespace partisan {

/// Frequency-of-frequencies table of a token sequence: spectrum[i] is the
/// number of types occurring exactly i times.
struct FrequencySpectrum {
  std::uint64_t n_tokens = 0;
  std::uint64_t n_types = 0;
  std::map<std::uint64_t, std::uint64_t> spectrum;

  /// Number of types occurring exactly `frequency` times.
  std::uint64_t types_with(std::uint64_t frequency) const noexcept;
};

FrequencySpectrum frequency_spectrum(std::span<const std::string> tokens);

/// Honore's R = 100 ln(N) / (1 - V1/V). When every type is a hapax the
/// ratio V1/V is clamped to 1 - 1e-6 so the value stays finite.
/// Throws Error(invalid_argument) on empty text.
double honore_r(const FrequencySpectrum& freqs);

/// Yule's K = 1e4 (sum_i i^2 V_i - N) / N^2, i ranging over frequencies.
/// Throws Error(invalid_argument) on empty text.
double yule_k(const FrequencySpectrum& freqs);

struct RichnessFeatures {
  double ttr = 0.0;
  std::uint64_t hapax_legomena = 0;
  std::uint64_t hapax_dislegomena = 0;
  double honore_r = 0.0;
  double yule_k = 0.0;
};

/// All five richness values; zeros for an empty token list.
RichnessFeatures richness_features(std::span<const std::string> tokens);

}  // namespace partisan
