#include "partisan/readability.hpp"

#include "partisan/error.hpp"

namespace partisan {
namespace {

void require_nonempty(const ReadabilityStats& s) {
  if (s.n_words == 0 || s.n_sentences == 0) {
    throw Error(ErrorKind::invalid_argument, "readability undefined on empty text");
  }
}

double words_per_sentence(const ReadabilityStats& s) {
  return static_cast<double>(s.n_words) / static_cast<double>(s.n_sentences);
}

double syllables_per_word(const ReadabilityStats& s) {
  return static_cast<double>(s.n_syllables) / static_cast<double>(s.n_words);
}

}  // namespace

ReadabilityStats text_stats(const TokenizedDoc& doc) {
  ReadabilityStats s;
  s.n_words = doc.tokens.size();
  s.n_sentences = doc.sentences.size();
  for (const auto& token : doc.tokens) {
    const int syl = count_syllables(token);
    s.n_syllables += static_cast<std::uint64_t>(syl);
    if (syl >= 3) ++s.n_complex_words;
  }
  return s;
}

double flesch_reading_ease(const ReadabilityStats& s) {
  require_nonempty(s);
  return 206.835 - 1.015 * words_per_sentence(s) - 84.6 * syllables_per_word(s);
}

double flesch_kincaid_grade(const ReadabilityStats& s) {
  require_nonempty(s);
  return 0.39 * words_per_sentence(s) + 11.8 * syllables_per_word(s) - 15.59;
}

double gunning_fog(const ReadabilityStats& s) {
  require_nonempty(s);
  const double complex_share =
      static_cast<double>(s.n_complex_words) / static_cast<double>(s.n_words);
  return 0.4 * (words_per_sentence(s) + 100.0 * complex_share);
}

}  // namespace partisan
