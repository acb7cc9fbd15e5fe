#pragma once

#include "partisan/textproc.hpp"

#include <cstdint>

namespace partisan {

struct ReadabilityStats {
  std::uint64_t n_words = 0;
  std::uint64_t n_sentences = 0;
  std::uint64_t n_syllables = 0;
  std::uint64_t n_complex_words = 0;  // three or more syllables
};

ReadabilityStats text_stats(const TokenizedDoc& doc);

// The three indices below throw Error(invalid_argument) when the stats hold
// no words or no sentences.

/// 206.835 - 1.015 (words/sentences) - 84.6 (syllables/words)
double flesch_reading_ease(const ReadabilityStats& s);

/// 0.39 (words/sentences) + 11.8 (syllables/words) - 15.59
double flesch_kincaid_grade(const ReadabilityStats& s);

/// 0.4 ((words/sentences) + 100 (complex/words))
double gunning_fog(const ReadabilityStats& s);

}  // namespace partisan
