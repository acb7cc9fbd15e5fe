#include "partisan/stylometry.hpp"

#include "partisan/error.hpp"

#include <cmath>
#include <unordered_map>

namespace partisan {

std::uint64_t FrequencySpectrum::types_with(std::uint64_t frequency) const noexcept {
  const auto it = spectrum.find(frequency);
  return it == spectrum.end() ? 0 : it->second;
}

FrequencySpectrum frequency_spectrum(std::span<const std::string> tokens) {
  std::unordered_map<std::string_view, std::uint64_t> counts;
  counts.reserve(tokens.size());
  for (const auto& t : tokens) ++counts[t];

  FrequencySpectrum out;
  out.n_tokens = tokens.size();
  out.n_types = counts.size();
  for (const auto& [term, count] : counts) ++out.spectrum[count];
  return out;
}

double honore_r(const FrequencySpectrum& freqs) {
  if (freqs.n_tokens == 0) {
    throw Error(ErrorKind::invalid_argument, "Honore's R undefined on empty text");
  }
  constexpr double kMaxHapaxRatio = 1.0 - 1e-6;
  double ratio = static_cast<double>(freqs.types_with(1)) / static_cast<double>(freqs.n_types);
  if (ratio > kMaxHapaxRatio) ratio = kMaxHapaxRatio;
  return 100.0 * std::log(static_cast<double>(freqs.n_tokens)) / (1.0 - ratio);
}

double yule_k(const FrequencySpectrum& freqs) {
  if (freqs.n_tokens == 0) {
    throw Error(ErrorKind::invalid_argument, "Yule's K undefined on empty text");
  }
  double s2 = 0.0;
  for (const auto& [freq, types] : freqs.spectrum) {
    const auto f = static_cast<double>(freq);
    s2 += f * f * static_cast<double>(types);
  }
  const auto n = static_cast<double>(freqs.n_tokens);
  return 1e4 * (s2 - n) / (n * n);
}

RichnessFeatures richness_features(std::span<const std::string> tokens) {
  RichnessFeatures out;
  if (tokens.empty()) return out;
  const FrequencySpectrum freqs = frequency_spectrum(tokens);
  out.ttr = static_cast<double>(freqs.n_types) / static_cast<double>(freqs.n_tokens);
  out.hapax_legomena = freqs.types_with(1);
  out.hapax_dislegomena = freqs.types_with(2);
  out.honore_r = honore_r(freqs);
  out.yule_k = yule_k(freqs);
  return out;
}

}  // namespace partisan
