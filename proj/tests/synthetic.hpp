#pragma once

// Seeded generators shared by the unit and acceptance tests.

#include "partisan/corpus_io.hpp"
#include "partisan/random.hpp"
#include "partisan/sparse.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace synth {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t between(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + partisan::uniform_index(rng, hi - lo + 1);
}

// Token drawn from a small alphabet so repeats are common.
inline std::string small_word(std::mt19937_64& rng, std::size_t alphabet) {
  return "w" + std::to_string(partisan::uniform_index(rng, alphabet));
}

inline std::vector<std::string> random_tokens(std::mt19937_64& rng, std::size_t max_len,
                                              std::size_t alphabet) {
  const std::size_t n = partisan::uniform_index(rng, max_len + 1);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(small_word(rng, alphabet));
  return out;
}

// Non-negative sparse row with roughly `density` of the columns filled.
inline partisan::SparseVector random_row(std::mt19937_64& rng, std::size_t dim, double density) {
  partisan::SparseVector v(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    if (uniform(rng, 0.0, 1.0) < density) v.push_back(static_cast<std::uint32_t>(j), uniform(rng, 0.0, 2.0));
  }
  return v;
}

// Random short documents with sentence punctuation, for pipeline tests.
inline std::string random_text(std::mt19937_64& rng, std::size_t alphabet, std::size_t max_words) {
  static const char* const kExtra[] = {"the", "a", "and", "of", "government", "elections",
                                       "extraordinary", "people", "tax", "war"};
  const std::size_t n = partisan::uniform_index(rng, max_words + 1);
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    if (!text.empty()) text.push_back(' ');
    if (uniform(rng, 0.0, 1.0) < 0.3) {
      text += kExtra[partisan::uniform_index(rng, std::size(kExtra))];
    } else {
      text += small_word(rng, alphabet);
    }
    if (uniform(rng, 0.0, 1.0) < 0.1) text += ".";
  }
  return text;
}

// Two classes with disjoint 50-word vocabularies plus 100 shared filler
// words; every document has 50-150 tokens drawn uniformly from its class
// words and the filler, with a full stop every 8-15 tokens.
inline partisan::Corpus separable_corpus(std::size_t n_docs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto vocab = [](const std::string& prefix, std::size_t n) {
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n; ++i) words.push_back(prefix + std::to_string(i));
    return words;
  };
  const auto left = vocab("lefty", 50);
  const auto right = vocab("righty", 50);
  const auto filler = vocab("filler", 100);

  std::vector<partisan::Document> docs;
  for (std::size_t d = 0; d < n_docs; ++d) {
    const int label = static_cast<int>(d % 2);
    const auto& own = label == 1 ? right : left;
    const std::size_t n_tokens = between(rng, 50, 150);
    std::string text;
    std::size_t until_stop = between(rng, 8, 15);
    for (std::size_t t = 0; t < n_tokens; ++t) {
      const std::size_t pick = partisan::uniform_index(rng, own.size() + filler.size());
      if (!text.empty()) text.push_back(' ');
      text += pick < own.size() ? own[pick] : filler[pick - own.size()];
      if (--until_stop == 0 || t + 1 == n_tokens) {
        text.push_back('.');
        until_stop = between(rng, 8, 15);
      }
    }
    docs.push_back({"doc" + std::to_string(d), std::move(text), label});
  }
  return partisan::Corpus("synthetic", std::move(docs));
}

}  // namespace synth
