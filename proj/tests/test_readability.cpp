#include "oracles.hpp"
#include "synthetic.hpp"

#include "partisan/error.hpp"
#include "partisan/readability.hpp"

#include <doctest.h>

#include <cmath>

using namespace partisan;

namespace {

ReadabilityStats stats(std::uint64_t w, std::uint64_t s, std::uint64_t syl, std::uint64_t cx = 0) {
  return {w, s, syl, cx};
}

}  // namespace

TEST_CASE("text stats") {
  const auto s = text_stats(tokenize("The cat sat."));
  CHECK(s.n_words == 3);
  CHECK(s.n_sentences == 1);
  CHECK(s.n_syllables == 3);
  CHECK(s.n_complex_words == 0);

  const auto e = text_stats(tokenize(""));
  CHECK(e.n_words == 0);
  CHECK(e.n_sentences == 0);
  CHECK(e.n_syllables == 0);

  const auto h = text_stats(tokenize("Hi! Bye."));
  CHECK(h.n_words == 2);
  CHECK(h.n_sentences == 2);

  CHECK(text_stats(tokenize("An extraordinary beautiful day.")).n_complex_words == 2);
}

TEST_CASE("Flesch reading ease hand values") {
  CHECK(std::abs(flesch_reading_ease(stats(3, 1, 3)) - 119.190) < 1e-9);
  CHECK(std::abs(flesch_reading_ease(stats(10, 1, 10)) - 112.085) < 1e-9);
  CHECK(flesch_reading_ease(stats(10, 2, 10)) > flesch_reading_ease(stats(10, 2, 30)));
}

TEST_CASE("Flesch-Kincaid grade hand values") {
  CHECK(std::abs(flesch_kincaid_grade(stats(3, 1, 3)) - (-2.62)) < 1e-9);
  CHECK(std::abs(flesch_kincaid_grade(stats(20, 1, 30)) - 9.91) < 1e-9);
  CHECK(flesch_kincaid_grade(stats(20, 2, 30)) == doctest::Approx(flesch_kincaid_grade(stats(40, 4, 60))));
}

TEST_CASE("Gunning fog hand values") {
  CHECK(std::abs(gunning_fog(stats(3, 1, 3, 0)) - 1.2) < 1e-9);
  CHECK(std::abs(gunning_fog(stats(10, 2, 20, 5)) - 22.0) < 1e-9);
  CHECK(gunning_fog(stats(12, 3, 12, 0)) == doctest::Approx(0.4 * 4.0));
}

TEST_CASE("indices reject empty stats") {
  CHECK_THROWS_AS(flesch_reading_ease(stats(0, 0, 0)), Error);
  CHECK_THROWS_AS(flesch_kincaid_grade(stats(3, 0, 3)), Error);
  CHECK_THROWS_AS(gunning_fog(stats(0, 1, 0)), Error);
}

TEST_CASE("indices match a spreadsheet reimplementation") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t w = 1 + partisan::uniform_index(rng, 500);
    const std::uint64_t s = 1 + partisan::uniform_index(rng, 40);
    const std::uint64_t syl = w + partisan::uniform_index(rng, 2 * w);
    const std::uint64_t cx = partisan::uniform_index(rng, w + 1);
    const oracle::Sheet sheet{double(w), double(s), double(syl), double(cx)};
    CHECK(std::abs(flesch_reading_ease(stats(w, s, syl, cx)) - sheet.fre()) < 1e-9);
    CHECK(std::abs(flesch_kincaid_grade(stats(w, s, syl, cx)) - sheet.fkg()) < 1e-9);
    CHECK(std::abs(gunning_fog(stats(w, s, syl, cx)) - sheet.fog()) < 1e-9);
  }
}
