#include "oracles.hpp"
#include "synthetic.hpp"

#include "partisan/error.hpp"
#include "partisan/lexicons.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

using namespace partisan;
using Strings = std::vector<std::string>;

namespace {

Lexicon lex(std::initializer_list<std::string> terms) {
  const Strings raw(terms);
  return Lexicon("test", raw);
}

}  // namespace

TEST_CASE("lexicon parsing normalizes and deduplicates") {
  const auto l = parse_lexicon("good\nBAD\n# note\nbad\n\n", "x");
  CHECK(l.terms() == std::set<std::string, std::less<>>{"bad", "good"});
  CHECK_THROWS_AS(parse_lexicon("# only\n# comments\n", "x"), Error);
  CHECK(lex({"Not  Good", "ok"}).contains("not good"));
  CHECK(lex({"Not  Good"}).max_words() == 2);
  CHECK_THROWS_AS(Lexicon("", Strings{"a"}), Error);
}

TEST_CASE("lexicon file round-trip") {
  const auto path = std::filesystem::temp_directory_path() / "partisan_lexicon_test.txt";
  const auto l = lex({"zeta", "alpha beta", "gamma"});
  save_lexicon(l, path);
  CHECK(load_lexicon(path, "test") == l);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_lexicon(path, "test"), Error);
}

TEST_CASE("lexicon_count") {
  CHECK(lexicon_count(Strings{"bad", "bad", "good"}, lex({"bad"})) == 2);
  CHECK(lexicon_count(Strings{}, lex({"bad"})) == 0);
  CHECK(lexicon_count(Strings{"not", "good"}, lex({"not good"})) == 1);
  // Longest cue wins and consumes its tokens.
  CHECK(lexicon_count(Strings{"not", "good", "not"}, lex({"not", "not good"})) == 2);
  CHECK(lexicon_count(Strings{"a", "a", "a"}, lex({"a a"})) == 1);
}

TEST_CASE("bias score") {
  Strings ten(10, "x");
  ten[2] = "cue";
  ten[7] = "cue";
  CHECK(bias_score(ten, lex({"cue"})) == doctest::Approx(0.2));
  CHECK(bias_score(Strings{"a", "b"}, lex({"cue"})) == 0.0);
  CHECK(bias_score(Strings{"war", "war", "tax"}, lex({"war"})) == doctest::Approx(2.0 / 3.0));
  CHECK(bias_score(Strings{}, lex({"war"})) == 0.0);
}

TEST_CASE("bias score never exceeds one") {
  std::mt19937_64 rng(2);
  const auto l = lex({"w1", "w2", "w1 w2", "w3 w3 w3"});
  for (int trial = 0; trial < 300; ++trial) {
    const auto tokens = synth::random_tokens(rng, 30, 4);
    const double b = bias_score(tokens, l);
    CHECK(b >= 0.0);
    CHECK(b <= 1.0);
  }
}

TEST_CASE("semantic orientation hand example") {
  const std::vector<Strings> left{{"war", "war", "peace"}};
  const std::vector<Strings> right{{"tax", "tax", "peace"}};
  const auto so = semantic_orientation(left, right);
  REQUIRE(so.size() == 3);
  CHECK(so[0].term == "tax");
  CHECK(so[1].term == "war");
  CHECK(so[2].term == "peace");
  CHECK(std::abs(so[0].so - std::log2(3.0)) < 1e-12);
  CHECK(std::abs(so[1].so + std::log2(3.0)) < 1e-12);
  CHECK(so[2].so == 0.0);

  const auto bl = induce_bias_lexicons(so, 0.4);
  CHECK(bl.left.terms() == std::set<std::string, std::less<>>{"war"});
  CHECK(bl.right.terms() == std::set<std::string, std::less<>>{"tax"});
  const auto none = induce_bias_lexicons(so, 2.0);
  CHECK(none.left.empty());
  CHECK(none.right.empty());
  CHECK(kDefaultSoThreshold == 0.4);
}

TEST_CASE("semantic orientation properties") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Strings> left;
    std::vector<Strings> right;
    for (int d = 0; d < 4; ++d) left.push_back(synth::random_tokens(rng, 20, 12));
    for (int d = 0; d < 3; ++d) right.push_back(synth::random_tokens(rng, 20, 12));
    left[0].push_back("anchor");
    right[0].push_back("anchor");

    const auto lr = semantic_orientation(left, right);
    const auto rl = semantic_orientation(right, left);
    std::map<std::string, double> reversed;
    for (const auto& s : rl) reversed[s.term] = s.so;
    const auto expected = oracle::semantic_orientation(left, right);
    REQUIRE(lr.size() == expected.size());
    for (const auto& s : lr) {
      CHECK(reversed.at(s.term) == -s.so);
      CHECK(std::abs(expected.at(s.term) - s.so) < 1e-12);
    }
    for (std::size_t i = 1; i < lr.size(); ++i) {
      const double a = std::abs(lr[i - 1].so);
      const double b = std::abs(lr[i].so);
      CHECK((a > b || (a == b && lr[i - 1].term < lr[i].term)));
    }
    for (const auto& s : semantic_orientation(left, left)) CHECK(s.so == 0.0);
  }
}

TEST_CASE("semantic orientation rejects empty input") {
  const std::vector<Strings> some{{"a"}};
  CHECK_THROWS_AS(semantic_orientation(std::vector<Strings>{}, some), Error);
  CHECK_THROWS_AS(induce_bias_lexicons(std::vector<SoScore>{}, 0.0), Error);
}

TEST_CASE("score TSV keeps full precision") {
  const std::vector<SoScore> scores{{"a", 0.1}, {"b", -1.0 / 3.0}};
  CHECK(so_scores_tsv(scores) == "a\t0.10000000000000001\nb\t-0.33333333333333331\n");
}
