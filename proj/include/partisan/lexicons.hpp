#pragma once

#include "partisan/corpus_io.hpp"

#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace partisan {

/// Named set of cue terms. A cue is one or more lowercase tokens joined by
/// single spaces, normalized with the word tokenizer.
class Lexicon {
 public:
  Lexicon() = default;
  /// Normalizes every raw entry; entries with no tokens are dropped.
  /// Throws Error(invalid_argument) on an empty name.
  Lexicon(std::string name, std::span<const std::string> raw_terms);

  const std::string& name() const noexcept { return name_; }
  const std::set<std::string, std::less<>>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  bool contains(std::string_view cue) const { return terms_.contains(cue); }
  /// Token length of the longest cue (0 when empty).
  std::size_t max_words() const noexcept { return max_words_; }

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.name_ == b.name_ && a.terms_ == b.terms_;
  }

 private:
  std::string name_;
  std::set<std::string, std::less<>> terms_;
  std::size_t max_words_ = 0;
};

/// One cue per line, '#' comment lines and blank lines ignored.
/// Throws Error(data) when nothing remains.
Lexicon parse_lexicon(std::string_view content, std::string name);
Lexicon load_lexicon(const std::filesystem::path& path, std::string name);

/// Sorted cues one per line, preceded by a comment naming the lexicon.
std::string serialize_lexicon(const Lexicon& lex);
void save_lexicon(const Lexicon& lex, const std::filesystem::path& path);

/// Cue occurrences in a token sequence. Scanning left to right, the longest
/// cue starting at each position is matched and skipped over, so single-word
/// cues count with multiplicity and each multi-word match counts once.
std::size_t lexicon_count(std::span<const std::string> tokens, const Lexicon& lex);

/// Bias intensity: lexicon_count / number of tokens, 0 on empty input.
double bias_score(std::span<const std::string> tokens, const Lexicon& lex);

/// Signed association of a term with the right (positive) or left
/// (negative) corpus.
struct SoScore {
  std::string term;
  double so = 0.0;

  friend bool operator==(const SoScore&, const SoScore&) = default;
};

/// SO(w) = log2 P(w|right) - log2 P(w|left) with add-one smoothed unigram
/// probabilities over the union vocabulary. Sorted by descending |SO|, ties
/// lexicographic. Throws Error(invalid_argument) if either corpus is empty.
std::vector<SoScore> semantic_orientation(const Corpus& left, const Corpus& right);

/// Same, over pre-tokenized documents.
std::vector<SoScore> semantic_orientation(std::span<const std::vector<std::string>> left_docs,
                                          std::span<const std::vector<std::string>> right_docs);

struct BiasLexicons {
  Lexicon left;
  Lexicon right;
};

/// Default |SO| cut-off for cue selection.
inline constexpr double kDefaultSoThreshold = 0.4;

/// right = {SO >= threshold}, left = {SO <= -threshold}.
BiasLexicons induce_bias_lexicons(std::span<const SoScore> scores,
                                  double threshold = kDefaultSoThreshold);

/// "term<TAB>so" lines in score order, so printed with 17 significant digits.
std::string so_scores_tsv(std::span<const SoScore> scores);

}  // namespace partisan
