#pragma once

#include "partisan/corpus_io.hpp"
#include "partisan/sparse.hpp"
#include "partisan/textproc.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace partisan {

/// N-gram channel: word unigrams+bigrams, or character trigrams.
enum class Channel : std::uint8_t { word_1_2 = 0, char_3 = 1 };

std::string_view channel_name(Channel channel) noexcept;

/// Unigrams followed by space-joined bigrams, in text order.
std::vector<std::string> word_ngrams(std::span<const std::string> tokens);

/// Terms of a raw text in the given channel.
std::vector<std::string> channel_terms(std::string_view text, Channel channel);

/// Term -> column mapping with document frequencies and smooth idf
/// ln((1 + n_docs) / (1 + df)) + 1. Columns are assigned in lexicographic
/// term order.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// `terms` must be strictly increasing; df values must lie in [1, n_docs].
  Vocabulary(Channel channel, std::uint64_t n_docs, std::vector<std::string> terms,
             std::vector<std::uint64_t> document_frequency);

  Channel channel() const noexcept { return channel_; }
  std::uint64_t n_docs() const noexcept { return n_docs_; }
  std::size_t size() const noexcept { return terms_.size(); }

  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::uint64_t>& document_frequency() const noexcept { return df_; }
  const std::vector<double>& idf() const noexcept { return idf_; }

  std::optional<std::uint32_t> find(std::string_view term) const;

 private:
  Channel channel_ = Channel::word_1_2;
  std::uint64_t n_docs_ = 0;
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> df_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Drops terms with df / n_docs > max_df, ranks the rest by total corpus
/// frequency (ties lexicographic) and keeps the first k. `k` = nullopt keeps
/// everything that survives the df filter.
Vocabulary build_vocabulary(std::span<const std::vector<std::string>> doc_terms, Channel channel,
                            std::optional<std::size_t> k, double max_df);

Vocabulary build_vocabulary(const Corpus& corpus, Channel channel, std::optional<std::size_t> k,
                            double max_df);

/// Raw-count tf times idf over in-vocabulary terms, L2-normalized.
/// With `binary_tf` every present term counts once.
SparseVector tfidf_transform(std::span<const std::string> terms, const Vocabulary& vocab,
                             bool binary_tf = false);

/// Convenience overload: extracts the vocabulary's channel terms from `text`.
SparseVector tfidf_transform_text(std::string_view text, const Vocabulary& vocab,
                                  bool binary_tf = false);

/// Naive-Bayes log-count ratios for NB-TFiDF scaling.
struct NbRatios {
  std::vector<double> r;
  double alpha = 1.0;

  friend bool operator==(const NbRatios&, const NbRatios&) = default;
};

/// p = alpha + sum of positive rows, q = alpha + sum of negative rows,
/// r = ln(p / |p|_1) - ln(q / |q|_1).
NbRatios fit_nb_ratios(std::span<const SparseVector> rows, std::span<const Label> labels,
                       double alpha = 1.0);

/// Elementwise r * x; entries that become zero are dropped.
SparseVector apply_nb_scaling(const SparseVector& x, const NbRatios& ratios);

}  // namespace partisan
