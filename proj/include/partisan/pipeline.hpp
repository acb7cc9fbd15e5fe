#pragma once

#include "partisan/archive.hpp"
#include "partisan/corpus_io.hpp"
#include "partisan/lexicons.hpp"
#include "partisan/sparse.hpp"
#include "partisan/vectorizer.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace partisan {

/// Feature families, in the fixed column order of the assembled row.
enum class Family : std::uint8_t {
  word_ngrams = 0,
  char_trigrams = 1,
  bias = 2,
  lexical = 3,
  richness = 4,
  readability = 5,
};

inline constexpr std::array<Family, 6> kFamilies = {
    Family::word_ngrams, Family::char_trigrams, Family::bias,
    Family::lexical,     Family::richness,      Family::readability,
};

std::string_view family_name(Family family) noexcept;
std::optional<Family> parse_family(std::string_view name) noexcept;

/// Small fixed map keyed by Family.
template <typename T>
class FamilyMap {
 public:
  constexpr FamilyMap() = default;
  constexpr explicit FamilyMap(const std::array<T, kFamilies.size()>& values) : values_(values) {}

  constexpr T& operator[](Family f) noexcept { return values_[static_cast<std::size_t>(f)]; }
  constexpr const T& operator[](Family f) const noexcept {
    return values_[static_cast<std::size_t>(f)];
  }

  friend bool operator==(const FamilyMap&, const FamilyMap&) = default;

 private:
  std::array<T, kFamilies.size()> values_{};
};

struct FeatureConfig {
  FamilyMap<bool> enabled{{true, false, false, false, false, false}};

  /// Word-channel vocabulary cap.
  std::size_t k = 200000;
  /// Char-channel cap; unset keeps every trigram surviving max_df.
  std::optional<std::size_t> char_k;
  double max_df = 0.9;
  double alpha = 1.0;
  bool nb_scaling = true;
  /// Also apply NB ratios (fitted on char rows) to the char channel.
  bool nb_char = false;
  bool binary_tf = false;

  double so_threshold = kDefaultSoThreshold;
  /// Pre-built left/right cue lexicons. When unset, fit_pipeline induces
  /// them from the training labels (0 as "left", 1 as "right").
  std::optional<BiasLexicons> bias_lexicons;

  /// Cue lexicons of the lexical family, one column each.
  std::vector<Lexicon> lexicons;
  bool normalize_lexicon_counts = false;

  /// Mean/variance standardization of the dense families before scaling.
  bool standardize = false;

  FamilyMap<double> scale{{1.0, 1.0, 0.01, 0.01, 0.01, 0.01}};

  /// Enables exactly the listed families.
  void set_families(std::initializer_list<Family> families);
  std::vector<Family> enabled_families() const;

  /// Throws Error(config) describing the first violated constraint.
  void validate() const;
};

/// Column range of one family inside the assembled row.
struct FamilyBlock {
  Family family = Family::word_ngrams;
  std::uint32_t offset = 0;
  std::uint32_t width = 0;

  friend bool operator==(const FamilyBlock&, const FamilyBlock&) = default;
};

inline constexpr std::size_t kRichnessWidth = 5;
inline constexpr std::size_t kReadabilityWidth = 3;
inline constexpr std::size_t kBiasWidth = 2;

/// Per-column affine map of a dense family: (v - mean) / stddev.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  friend bool operator==(const Standardizer&, const Standardizer&) = default;
};

/// Immutable fitted feature pipeline. Safe to share across threads.
class FittedPipeline {
 public:
  const FeatureConfig& config() const noexcept { return config_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::vector<FamilyBlock>& layout() const noexcept { return layout_; }
  std::optional<FamilyBlock> block(Family family) const noexcept;

  const std::optional<Vocabulary>& word_vocabulary() const noexcept { return word_vocab_; }
  const std::optional<Vocabulary>& char_vocabulary() const noexcept { return char_vocab_; }
  const std::optional<NbRatios>& word_ratios() const noexcept { return word_ratios_; }
  const std::optional<NbRatios>& char_ratios() const noexcept { return char_ratios_; }
  const std::optional<BiasLexicons>& bias_lexicons() const noexcept { return bias_; }

  /// Assembled, scaled feature row. Total over any text.
  SparseVector transform(std::string_view text) const;
  SparseVector transform(const Document& doc) const { return transform(doc.text); }
  FeatureMatrix transform(const Corpus& corpus) const;

  /// Unscaled, unstandardized values of one dense family (bias, lexical,
  /// richness, readability) for a text.
  std::vector<double> dense_features(Family family, std::string_view text) const;

  Archive to_archive() const;
  static FittedPipeline from_archive(const Archive& archive);

 private:
  friend FittedPipeline fit_pipeline(const Corpus& train, const FeatureConfig& config);

  void build_layout();

  FeatureConfig config_;
  std::optional<Vocabulary> word_vocab_;
  std::optional<Vocabulary> char_vocab_;
  std::optional<NbRatios> word_ratios_;
  std::optional<NbRatios> char_ratios_;
  std::optional<BiasLexicons> bias_;
  FamilyMap<std::optional<Standardizer>> standardizers_;
  std::vector<FamilyBlock> layout_;
  std::size_t dimension_ = 0;
};

/// Fits vocabularies, idf, NB ratios, bias lexicons and standardization on
/// the labeled training corpus and freezes the column layout
/// [word | char | bias | lexical | richness | readability].
FittedPipeline fit_pipeline(const Corpus& train, const FeatureConfig& config);

std::string save_pipeline(const FittedPipeline& pipeline);
FittedPipeline load_pipeline(std::string_view bytes);

}  // namespace partisan
