#include "partisan/vectorizer.hpp"

#include "partisan/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace partisan {

std::string_view channel_name(Channel channel) noexcept {
  return channel == Channel::word_1_2 ? "word_1_2" : "char_3";
}

std::vector<std::string> word_ngrams(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  if (tokens.empty()) return out;
  out.reserve(2 * tokens.size() - 1);
  out.insert(out.end(), tokens.begin(), tokens.end());
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    std::string bigram;
    bigram.reserve(tokens[i].size() + 1 + tokens[i + 1].size());
    bigram.append(tokens[i]).append(" ").append(tokens[i + 1]);
    out.push_back(std::move(bigram));
  }
  return out;
}

std::vector<std::string> channel_terms(std::string_view text, Channel channel) {
  if (channel == Channel::char_3) return char_ngrams(text, 3);
  return word_ngrams(tokenize(text).tokens);
}

Vocabulary::Vocabulary(Channel channel, std::uint64_t n_docs, std::vector<std::string> terms,
                       std::vector<std::uint64_t> document_frequency)
    : channel_(channel), n_docs_(n_docs), terms_(std::move(terms)), df_(std::move(document_frequency)) {
  if (terms_.size() != df_.size()) {
    throw Error(ErrorKind::invalid_argument, "vocabulary: term and df lengths differ");
  }
  idf_.reserve(terms_.size());
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) {
      throw Error(ErrorKind::invalid_argument, "vocabulary: terms must be strictly increasing");
    }
    if (df_[i] < 1 || df_[i] > n_docs_) {
      throw Error(ErrorKind::invalid_argument,
                  "vocabulary: document frequency out of range for '" + terms_[i] + "'");
    }
    idf_.push_back(std::log(static_cast<double>(1 + n_docs_) / static_cast<double>(1 + df_[i])) + 1.0);
    index_.emplace(terms_[i], static_cast<std::uint32_t>(i));
  }
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view term) const {
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> doc_terms, Channel channel,
                            std::optional<std::size_t> k, double max_df) {
  if (doc_terms.empty()) {
    throw Error(ErrorKind::invalid_argument, "build_vocabulary: empty corpus");
  }
  if (!(max_df > 0.0 && max_df <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "build_vocabulary: max_df must lie in (0, 1]");
  }
  if (k && *k < 1) {
    throw Error(ErrorKind::invalid_argument, "build_vocabulary: k must be >= 1");
  }

  struct Stats {
    std::uint64_t df = 0;
    std::uint64_t total = 0;
  };
  std::unordered_map<std::string, Stats> stats;
  std::vector<std::string_view> sorted;
  for (const auto& terms : doc_terms) {
    sorted.assign(terms.begin(), terms.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      auto& s = stats[std::string(sorted[i])];
      s.df += 1;
      s.total += j - i;
      i = j;
    }
  }

  const auto n_docs = static_cast<std::uint64_t>(doc_terms.size());
  struct Candidate {
    const std::string* term;
    Stats stats;
  };
  std::vector<Candidate> kept;
  kept.reserve(stats.size());
  for (const auto& [term, s] : stats) {
    if (static_cast<double>(s.df) / static_cast<double>(n_docs) > max_df) continue;
    kept.push_back({&term, s});
  }
  std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) {
    if (a.stats.total != b.stats.total) return a.stats.total > b.stats.total;
    return *a.term < *b.term;
  });
  if (k && kept.size() > *k) kept.resize(*k);
  std::sort(kept.begin(), kept.end(),
            [](const Candidate& a, const Candidate& b) { return *a.term < *b.term; });

  std::vector<std::string> terms;
  std::vector<std::uint64_t> df;
  terms.reserve(kept.size());
  df.reserve(kept.size());
  for (const auto& c : kept) {
    terms.push_back(*c.term);
    df.push_back(c.stats.df);
  }
  return Vocabulary(channel, n_docs, std::move(terms), std::move(df));
}

Vocabulary build_vocabulary(const Corpus& corpus, Channel channel, std::optional<std::size_t> k,
                            double max_df) {
  std::vector<std::vector<std::string>> doc_terms;
  doc_terms.reserve(corpus.size());
  for (const auto& doc : corpus) doc_terms.push_back(channel_terms(doc.text, channel));
  return build_vocabulary(doc_terms, channel, k, max_df);
}

SparseVector tfidf_transform(std::span<const std::string> terms, const Vocabulary& vocab,
                             bool binary_tf) {
  std::vector<SparseEntry> pairs;
  pairs.reserve(terms.size());
  for (const auto& term : terms) {
    if (const auto col = vocab.find(term)) pairs.push_back({*col, 1.0});
  }
  SparseVector v = SparseVector::from_pairs(vocab.size(), std::move(pairs));

  std::vector<SparseEntry> weighted;
  weighted.reserve(v.nnz());
  double sq = 0.0;
  for (const auto& e : v.entries()) {
    const double tf = binary_tf ? 1.0 : e.value;
    const double w = tf * vocab.idf()[e.index];
    weighted.push_back({e.index, w});
    sq += w * w;
  }
  SparseVector out(vocab.size());
  if (sq == 0.0) return out;
  const double norm = std::sqrt(sq);
  for (const auto& e : weighted) out.push_back(e.index, e.value / norm);
  return out;
}

SparseVector tfidf_transform_text(std::string_view text, const Vocabulary& vocab, bool binary_tf) {
  return tfidf_transform(channel_terms(text, vocab.channel()), vocab, binary_tf);
}

NbRatios fit_nb_ratios(std::span<const SparseVector> rows, std::span<const Label> labels,
                       double alpha) {
  if (rows.empty()) {
    throw Error(ErrorKind::invalid_argument, "fit_nb_ratios: no rows");
  }
  if (rows.size() != labels.size()) {
    throw Error(ErrorKind::invalid_argument, "fit_nb_ratios: row and label counts differ");
  }
  if (!(alpha > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "fit_nb_ratios: alpha must be positive");
  }
  const std::size_t dim = rows.front().dimension();
  std::vector<double> p(dim, alpha);
  std::vector<double> q(dim, alpha);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].dimension() != dim) {
      throw Error(ErrorKind::dimension, "fit_nb_ratios: row " + std::to_string(i) +
                                            " has dimension " +
                                            std::to_string(rows[i].dimension()) + ", expected " +
                                            std::to_string(dim));
    }
    if (labels[i] != 0 && labels[i] != 1) {
      throw Error(ErrorKind::invalid_argument, "fit_nb_ratios: labels must be 0 or 1");
    }
    auto& target = labels[i] == 1 ? p : q;
    for (const auto& e : rows[i].entries()) target[e.index] += e.value;
  }

  double p_norm = 0.0;
  double q_norm = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    p_norm += std::abs(p[j]);
    q_norm += std::abs(q[j]);
  }
  NbRatios out;
  out.alpha = alpha;
  out.r.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    if (!(p[j] > 0.0 && q[j] > 0.0)) {
      throw Error(ErrorKind::data, "fit_nb_ratios: non-positive count at column " +
                                       std::to_string(j) + " (negative feature values?)");
    }
    // Difference of logs keeps r exactly antisymmetric under a label swap.
    out.r[j] = std::log(p[j] / p_norm) - std::log(q[j] / q_norm);
  }
  return out;
}

SparseVector apply_nb_scaling(const SparseVector& x, const NbRatios& ratios) {
  if (x.dimension() != ratios.r.size()) {
    throw Error(ErrorKind::dimension, "apply_nb_scaling: vector dimension " +
                                          std::to_string(x.dimension()) + " != ratio length " +
                                          std::to_string(ratios.r.size()));
  }
  SparseVector out(x.dimension());
  for (const auto& e : x.entries()) out.push_back(e.index, e.value * ratios.r[e.index]);
  return out;
}

}  // namespace partisan
