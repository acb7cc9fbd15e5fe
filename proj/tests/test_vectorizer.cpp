#include "oracles.hpp"
#include "synthetic.hpp"

#include "partisan/error.hpp"
#include "partisan/vectorizer.hpp"

#include <doctest.h>

#include <cmath>

using namespace partisan;
using Strings = std::vector<std::string>;

namespace {

std::vector<Strings> docs_of(std::initializer_list<const char*> texts) {
  std::vector<Strings> out;
  for (const char* t : texts) out.push_back(channel_terms(t, Channel::word_1_2));
  return out;
}

}  // namespace

TEST_CASE("word n-grams are unigrams then bigrams") {
  const Strings tokens{"a", "b", "c"};
  CHECK(word_ngrams(tokens) == Strings{"a", "b", "c", "a b", "b c"});
  CHECK(word_ngrams(Strings{}).empty());
  CHECK(channel_terms("Abcd", Channel::char_3) == Strings{"abc", "bcd"});
}

TEST_CASE("max_df excludes terms present in every document") {
  const auto docs = docs_of({"the cat", "the dog", "the bird"});
  const auto vocab = build_vocabulary(docs, Channel::word_1_2, std::nullopt, 0.9);
  CHECK_FALSE(vocab.find("the").has_value());
  CHECK(vocab.find("cat").has_value());
}

TEST_CASE("top-k ranking breaks ties lexicographically") {
  const auto docs = docs_of({"a b", "a c"});
  const auto vocab = build_vocabulary(docs, Channel::word_1_2, 2, 1.0);
  CHECK(vocab.terms() == Strings{"a", "a b"});
  const auto all = build_vocabulary(docs, Channel::word_1_2, 100, 1.0);
  CHECK(all.size() == 5);
}

TEST_CASE("vocabulary matches exhaustive enumeration") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Strings> docs;
    const std::size_t n_docs = 1 + partisan::uniform_index(rng, 12);
    for (std::size_t d = 0; d < n_docs; ++d) docs.push_back(word_ngrams(synth::random_tokens(rng, 15, 8)));
    const std::size_t k = 1 + partisan::uniform_index(rng, 30);
    const double max_df = synth::uniform(rng, 0.2, 1.0);
    const auto vocab = build_vocabulary(docs, Channel::word_1_2, k, max_df);
    CHECK(vocab.terms() == oracle::vocabulary(docs, k, max_df));
    for (std::size_t j = 0; j < vocab.size(); ++j) {
      std::uint64_t df = 0;
      for (const auto& d : docs) df += std::find(d.begin(), d.end(), vocab.terms()[j]) != d.end();
      CHECK(vocab.document_frequency()[j] == df);
    }
  }
}

TEST_CASE("tfidf weights") {
  SUBCASE("no in-vocabulary terms gives an empty row of full dimension") {
    const Vocabulary vocab(Channel::word_1_2, 2, {"a", "b"}, {1, 2});
    const auto v = tfidf_transform(Strings{"zzz"}, vocab);
    CHECK(v.empty());
    CHECK(v.dimension() == 2);
  }
  SUBCASE("single term normalizes to one") {
    const Vocabulary vocab(Channel::word_1_2, 3, {"a"}, {3});
    const auto v = tfidf_transform(Strings{"a"}, vocab);
    CHECK(v.at(0) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("hand-evaluated idf and normalization") {
    const Vocabulary vocab(Channel::word_1_2, 2, {"a", "b"}, {1, 2});
    const double wa = 2.0 * (std::log(3.0 / 2.0) + 1.0);
    const double wb = 1.0 * (std::log(3.0 / 3.0) + 1.0);
    const double norm = std::hypot(wa, wb);
    const auto v = tfidf_transform(Strings{"a", "a", "b"}, vocab);
    CHECK(std::abs(v.at(0) - wa / norm) < 1e-12);
    CHECK(std::abs(v.at(1) - wb / norm) < 1e-12);
    const auto bin = tfidf_transform(Strings{"a", "a", "b"}, vocab, true);
    const double bnorm = std::hypot(wa / 2.0, wb);
    CHECK(std::abs(bin.at(0) - wa / 2.0 / bnorm) < 1e-12);
  }
  SUBCASE("rows are unit length or empty") {
    std::mt19937_64 rng(8);
    std::vector<Strings> docs;
    for (int d = 0; d < 20; ++d) docs.push_back(word_ngrams(synth::random_tokens(rng, 20, 10)));
    const auto vocab = build_vocabulary(docs, Channel::word_1_2, 25, 0.9);
    for (const auto& d : docs) {
      const auto v = tfidf_transform(d, vocab);
      if (!v.empty()) CHECK(std::abs(v.l2_norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("vocabulary validation") {
  CHECK_THROWS_AS(Vocabulary(Channel::word_1_2, 2, {"b", "a"}, {1, 1}), Error);
  CHECK_THROWS_AS(Vocabulary(Channel::word_1_2, 2, {"a"}, {3}), Error);
  CHECK_THROWS_AS(Vocabulary(Channel::word_1_2, 2, {"a"}, {}), Error);
  CHECK_THROWS_AS(build_vocabulary(std::vector<Strings>{}, Channel::word_1_2, 10, 0.9), Error);
  CHECK_THROWS_AS(build_vocabulary(docs_of({"a"}), Channel::word_1_2, 10, 0.0), Error);
}

TEST_CASE("NB ratios hand example") {
  const std::vector<SparseVector> rows{SparseVector::from_dense(std::vector<double>{1, 0}),
                                       SparseVector::from_dense(std::vector<double>{0, 1})};
  const std::vector<Label> labels{1, 0};
  const auto r = fit_nb_ratios(rows, labels, 1.0).r;
  CHECK(std::abs(r[0] - std::log(2.0)) < 1e-12);
  CHECK(std::abs(r[1] + std::log(2.0)) < 1e-12);

  const SparseVector x = SparseVector::from_pairs(2, {{0, 0.5}});
  const auto scaled = apply_nb_scaling(x, NbRatios{{0.6931, -0.6931}, 1.0});
  CHECK(scaled.at(0) == doctest::Approx(0.34655));
  CHECK(scaled.nnz() == 1);
}

TEST_CASE("NB ratios of all-zero rows vanish") {
  const std::vector<SparseVector> rows{SparseVector(3), SparseVector(3)};
  const std::vector<Label> labels{1, 0};
  for (double r : fit_nb_ratios(rows, labels).r) CHECK(r == 0.0);
}

TEST_CASE("NB ratios: label swap negates exactly; oracle agreement") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + partisan::uniform_index(rng, 20);
    const std::size_t n = 2 + partisan::uniform_index(rng, 29);
    std::vector<SparseVector> rows;
    oracle::DenseMatrix dense;
    std::vector<Label> labels;
    for (std::size_t i = 0; i < n; ++i) {
      rows.push_back(synth::random_row(rng, dim, 0.4));
      dense.push_back(rows.back().to_dense());
      labels.push_back(static_cast<Label>(partisan::uniform_index(rng, 2)));
    }
    const double alpha = synth::uniform(rng, 0.1, 2.0);
    const auto r = fit_nb_ratios(rows, labels, alpha).r;
    const auto expected = oracle::nb_ratios(dense, labels, alpha, dim);
    for (std::size_t j = 0; j < dim; ++j) CHECK(std::abs(r[j] - expected[j]) < 1e-9);

    std::vector<Label> swapped;
    for (Label l : labels) swapped.push_back(1 - l);
    const auto rs = fit_nb_ratios(rows, swapped, alpha).r;
    for (std::size_t j = 0; j < dim; ++j) CHECK(rs[j] == -r[j]);
  }
}

TEST_CASE("NB scaling identities") {
  const SparseVector x = SparseVector::from_pairs(3, {{0, 0.5}, {2, -1.0}});
  CHECK(apply_nb_scaling(SparseVector(3), NbRatios{{1, 2, 3}, 1}).empty());
  CHECK(apply_nb_scaling(x, NbRatios{{1, 1, 1}, 1}) == x);
  CHECK_THROWS_AS(apply_nb_scaling(x, NbRatios{{1, 1}, 1}), Error);
  const std::vector<SparseVector> rows{x};
  const std::vector<Label> bad{2};
  CHECK_THROWS_AS(fit_nb_ratios(rows, bad), Error);
}
