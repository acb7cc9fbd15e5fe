#include "partisan/pipeline.hpp"

#include "partisan/error.hpp"
#include "partisan/readability.hpp"
#include "partisan/stylometry.hpp"
#include "partisan/textproc.hpp"

#include <cmath>
#include <set>

namespace partisan {
namespace {

constexpr std::array<std::string_view, kFamilies.size()> kFamilyNames = {
    "word_ngrams", "char_trigrams", "bias", "lexical", "richness", "readability",
};

bool is_dense(Family f) noexcept {
  return f != Family::word_ngrams && f != Family::char_trigrams;
}

// Section tags.
constexpr std::string_view kConfigTag = "PCFG";
constexpr std::string_view kWordVocabTag = "WVOC";
constexpr std::string_view kCharVocabTag = "CVOC";
constexpr std::string_view kWordRatiosTag = "WNBR";
constexpr std::string_view kCharRatiosTag = "CNBR";
constexpr std::string_view kBiasTag = "BIAS";
constexpr std::string_view kLexiconsTag = "LEXS";
constexpr std::string_view kStandardizeTag = "STDZ";
constexpr std::string_view kLayoutTag = "LAYT";

void write_lexicon(ByteWriter& w, const Lexicon& lex) {
  w.str(lex.name());
  w.u64(lex.size());
  for (const auto& t : lex.terms()) w.str(t);
}

Lexicon read_lexicon(ByteReader& r) {
  std::string name = r.str();
  const auto n = r.u64();
  std::vector<std::string> terms;
  for (std::uint64_t i = 0; i < n; ++i) terms.push_back(r.str());
  try {
    Lexicon lex(std::move(name), terms);
    if (lex.size() != terms.size()) r.fail("lexicon '" + lex.name() + "' holds non-normalized cues");
    return lex;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::archive) throw;
    r.fail(e.what());
  }
}

std::string encode_vocabulary(const Vocabulary& v) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(v.channel()));
  w.u64(v.n_docs());
  w.u64(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    w.str(v.terms()[i]);
    w.u64(v.document_frequency()[i]);
  }
  return w.take();
}

Vocabulary decode_vocabulary(std::string_view payload, std::string_view tag, Channel expected) {
  ByteReader r(payload, std::string(tag));
  const auto channel = r.u8();
  if (channel != static_cast<std::uint8_t>(expected)) r.fail("unexpected channel");
  const auto n_docs = r.u64();
  const auto n = r.u64();
  std::vector<std::string> terms;
  std::vector<std::uint64_t> df;
  for (std::uint64_t i = 0; i < n; ++i) {
    terms.push_back(r.str());
    df.push_back(r.u64());
  }
  r.expect_end();
  try {
    return Vocabulary(expected, n_docs, std::move(terms), std::move(df));
  } catch (const Error& e) {
    r.fail(e.what());
  }
}

std::string encode_ratios(const NbRatios& ratios) {
  ByteWriter w;
  w.f64(ratios.alpha);
  w.f64_array(ratios.r);
  return w.take();
}

NbRatios decode_ratios(std::string_view payload, std::string_view tag, std::size_t expected_len) {
  ByteReader r(payload, std::string(tag));
  NbRatios out;
  out.alpha = r.f64();
  out.r = r.f64_array();
  r.expect_end();
  if (out.r.size() != expected_len) r.fail("ratio length does not match vocabulary size");
  return out;
}

std::string encode_config(const FeatureConfig& c) {
  ByteWriter w;
  for (Family f : kFamilies) w.u8(c.enabled[f] ? 1 : 0);
  w.u64(c.k);
  w.u8(c.char_k ? 1 : 0);
  w.u64(c.char_k.value_or(0));
  w.f64(c.max_df);
  w.f64(c.alpha);
  w.u8(c.nb_scaling ? 1 : 0);
  w.u8(c.nb_char ? 1 : 0);
  w.u8(c.binary_tf ? 1 : 0);
  w.f64(c.so_threshold);
  w.u8(c.normalize_lexicon_counts ? 1 : 0);
  w.u8(c.standardize ? 1 : 0);
  for (Family f : kFamilies) w.f64(c.scale[f]);
  return w.take();
}

FeatureConfig decode_config(std::string_view payload) {
  ByteReader r(payload, std::string(kConfigTag));
  auto flag = [&r] {
    const auto v = r.u8();
    if (v > 1) r.fail("invalid boolean");
    return v == 1;
  };
  FeatureConfig c;
  for (Family f : kFamilies) c.enabled[f] = flag();
  c.k = static_cast<std::size_t>(r.u64());
  const bool has_char_k = flag();
  const auto char_k = r.u64();
  if (has_char_k) c.char_k = static_cast<std::size_t>(char_k);
  c.max_df = r.f64();
  c.alpha = r.f64();
  c.nb_scaling = flag();
  c.nb_char = flag();
  c.binary_tf = flag();
  c.so_threshold = r.f64();
  c.normalize_lexicon_counts = flag();
  c.standardize = flag();
  for (Family f : kFamilies) c.scale[f] = r.f64();
  r.expect_end();
  return c;
}

std::vector<double> dense_block(Family family, const TokenizedDoc& doc, const FeatureConfig& config,
                                const std::optional<BiasLexicons>& bias) {
  std::vector<double> out;
  switch (family) {
    case Family::bias:
      out = {bias_score(doc.tokens, bias->left), bias_score(doc.tokens, bias->right)};
      break;
    case Family::lexical:
      out.reserve(config.lexicons.size());
      for (const auto& lex : config.lexicons) {
        const auto count = static_cast<double>(lexicon_count(doc.tokens, lex));
        if (config.normalize_lexicon_counts) {
          out.push_back(doc.tokens.empty() ? 0.0 : count / static_cast<double>(doc.tokens.size()));
        } else {
          out.push_back(count);
        }
      }
      break;
    case Family::richness: {
      const RichnessFeatures rf = richness_features(doc.tokens);
      out = {rf.ttr, static_cast<double>(rf.hapax_legomena),
             static_cast<double>(rf.hapax_dislegomena), rf.honore_r, rf.yule_k};
      break;
    }
    case Family::readability: {
      const ReadabilityStats s = text_stats(doc);
      if (s.n_words == 0 || s.n_sentences == 0) {
        out.assign(kReadabilityWidth, 0.0);
      } else {
        out = {flesch_kincaid_grade(s), flesch_reading_ease(s), gunning_fog(s)};
      }
      break;
    }
    case Family::word_ngrams:
    case Family::char_trigrams:
      throw Error(ErrorKind::invalid_argument,
                  "dense_features: " + std::string(family_name(family)) + " is not a dense family");
  }
  return out;
}

}  // namespace

std::string_view family_name(Family family) noexcept {
  return kFamilyNames[static_cast<std::size_t>(family)];
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (Family f : kFamilies) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

void FeatureConfig::set_families(std::initializer_list<Family> families) {
  for (Family f : kFamilies) enabled[f] = false;
  for (Family f : families) enabled[f] = true;
}

std::vector<Family> FeatureConfig::enabled_families() const {
  std::vector<Family> out;
  for (Family f : kFamilies) {
    if (enabled[f]) out.push_back(f);
  }
  return out;
}

void FeatureConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorKind::config, msg); };
  if (enabled_families().empty()) fail("at least one feature family must be enabled");
  if (k < 1) fail("k must be >= 1");
  if (char_k && *char_k < 1) fail("char k must be >= 1 when set");
  if (!(max_df > 0.0 && max_df <= 1.0)) fail("max_df must lie in (0, 1]");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) fail("alpha must be positive");
  if (!(so_threshold > 0.0) || !std::isfinite(so_threshold)) fail("SO threshold must be positive");
  for (Family f : kFamilies) {
    if (!(scale[f] > 0.0) || !std::isfinite(scale[f])) {
      fail("scale factor for " + std::string(family_name(f)) + " must be a positive finite number");
    }
  }
  if (enabled[Family::lexical]) {
    if (lexicons.empty()) fail("lexical family enabled but no lexicons configured");
    std::set<std::string> names;
    for (const auto& lex : lexicons) {
      if (!names.insert(lex.name()).second) fail("duplicate lexicon name '" + lex.name() + "'");
    }
  }
}

std::optional<FamilyBlock> FittedPipeline::block(Family family) const noexcept {
  for (const auto& b : layout_) {
    if (b.family == family) return b;
  }
  return std::nullopt;
}

void FittedPipeline::build_layout() {
  layout_.clear();
  std::size_t offset = 0;
  for (Family f : kFamilies) {
    if (!config_.enabled[f]) continue;
    std::size_t width = 0;
    switch (f) {
      case Family::word_ngrams: width = word_vocab_->size(); break;
      case Family::char_trigrams: width = char_vocab_->size(); break;
      case Family::bias: width = kBiasWidth; break;
      case Family::lexical: width = config_.lexicons.size(); break;
      case Family::richness: width = kRichnessWidth; break;
      case Family::readability: width = kReadabilityWidth; break;
    }
    layout_.push_back({f, static_cast<std::uint32_t>(offset), static_cast<std::uint32_t>(width)});
    offset += width;
  }
  dimension_ = offset;
}

std::vector<double> FittedPipeline::dense_features(Family family, std::string_view text) const {
  if (!config_.enabled[family]) {
    throw Error(ErrorKind::invalid_argument,
                "dense_features: family " + std::string(family_name(family)) + " is not enabled");
  }
  return dense_block(family, tokenize(text), config_, bias_);
}

SparseVector FittedPipeline::transform(std::string_view text) const {
  const TokenizedDoc doc = tokenize(text);
  SparseVector out(dimension_);
  for (const auto& b : layout_) {
    const double s = config_.scale[b.family];
    if (b.family == Family::word_ngrams || b.family == Family::char_trigrams) {
      const bool word = b.family == Family::word_ngrams;
      const Vocabulary& vocab = word ? *word_vocab_ : *char_vocab_;
      const auto& ratios = word ? word_ratios_ : char_ratios_;
      SparseVector v = word ? tfidf_transform(word_ngrams(doc.tokens), vocab, config_.binary_tf)
                            : tfidf_transform(char_ngrams(text, 3), vocab, config_.binary_tf);
      if (ratios) v = apply_nb_scaling(v, *ratios);
      for (const auto& e : v.entries()) out.push_back(b.offset + e.index, e.value * s);
      continue;
    }
    std::vector<double> values = dense_block(b.family, doc, config_, bias_);
    if (const auto& st = standardizers_[b.family]) {
      for (std::size_t j = 0; j < values.size(); ++j) {
        values[j] = (values[j] - st->mean[j]) / st->stddev[j];
      }
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
      out.push_back(b.offset + static_cast<std::uint32_t>(j), values[j] * s);
    }
  }
  return out;
}

FeatureMatrix FittedPipeline::transform(const Corpus& corpus) const {
  FeatureMatrix m;
  m.n_cols = dimension_;
  m.rows.reserve(corpus.size());
  for (const auto& doc : corpus) m.rows.push_back(transform(doc));
  return m;
}

FittedPipeline fit_pipeline(const Corpus& train, const FeatureConfig& config) {
  config.validate();
  if (train.empty()) throw Error(ErrorKind::data, "cannot fit a pipeline on an empty corpus");
  const std::vector<Label> labels = train.labels();

  FittedPipeline p;
  p.config_ = config;

  std::vector<TokenizedDoc> docs;
  docs.reserve(train.size());
  for (const auto& d : train) docs.push_back(tokenize(d.text, d.id));

  auto fit_channel = [&](Channel channel, std::optional<std::size_t> k, bool nb,
                         std::optional<Vocabulary>& vocab_out, std::optional<NbRatios>& ratios_out) {
    std::vector<std::vector<std::string>> terms;
    terms.reserve(docs.size());
    for (std::size_t i = 0; i < docs.size(); ++i) {
      terms.push_back(channel == Channel::word_1_2 ? word_ngrams(docs[i].tokens)
                                                   : char_ngrams(train[i].text, 3));
    }
    vocab_out = build_vocabulary(terms, channel, k, config.max_df);
    if (!nb) return;
    std::vector<SparseVector> rows;
    rows.reserve(terms.size());
    for (const auto& t : terms) rows.push_back(tfidf_transform(t, *vocab_out, config.binary_tf));
    ratios_out = fit_nb_ratios(rows, labels, config.alpha);
  };

  if (config.enabled[Family::word_ngrams]) {
    fit_channel(Channel::word_1_2, config.k, config.nb_scaling, p.word_vocab_, p.word_ratios_);
  }
  if (config.enabled[Family::char_trigrams]) {
    fit_channel(Channel::char_3, config.char_k, config.nb_char, p.char_vocab_, p.char_ratios_);
  }

  if (config.enabled[Family::bias]) {
    if (config.bias_lexicons) {
      p.bias_ = config.bias_lexicons;
    } else {
      std::vector<std::vector<std::string>> left;
      std::vector<std::vector<std::string>> right;
      for (std::size_t i = 0; i < docs.size(); ++i) {
        (labels[i] == 1 ? right : left).push_back(docs[i].tokens);
      }
      if (left.empty() || right.empty()) {
        throw Error(ErrorKind::data, "bias lexicon induction needs training documents of both classes");
      }
      p.bias_ = induce_bias_lexicons(semantic_orientation(left, right), config.so_threshold);
    }
  }
  p.config_.bias_lexicons.reset();

  if (config.standardize) {
    for (Family f : kFamilies) {
      if (!config.enabled[f] || !is_dense(f)) continue;
      Standardizer st;
      std::vector<std::vector<double>> values;
      values.reserve(docs.size());
      for (const auto& d : docs) values.push_back(dense_block(f, d, config, p.bias_));
      const std::size_t width = values.front().size();
      st.mean.assign(width, 0.0);
      st.stddev.assign(width, 0.0);
      const auto n = static_cast<double>(values.size());
      for (const auto& v : values) {
        for (std::size_t j = 0; j < width; ++j) st.mean[j] += v[j];
      }
      for (auto& m : st.mean) m /= n;
      for (const auto& v : values) {
        for (std::size_t j = 0; j < width; ++j) {
          const double d = v[j] - st.mean[j];
          st.stddev[j] += d * d;
        }
      }
      for (auto& sd : st.stddev) {
        sd = std::sqrt(sd / n);
        if (!(sd > 0.0)) sd = 1.0;
      }
      p.standardizers_[f] = std::move(st);
    }
  }

  p.build_layout();
  return p;
}

Archive FittedPipeline::to_archive() const {
  Archive a;
  a.add(std::string(kConfigTag), encode_config(config_));
  if (word_vocab_) a.add(std::string(kWordVocabTag), encode_vocabulary(*word_vocab_));
  if (char_vocab_) a.add(std::string(kCharVocabTag), encode_vocabulary(*char_vocab_));
  if (word_ratios_) a.add(std::string(kWordRatiosTag), encode_ratios(*word_ratios_));
  if (char_ratios_) a.add(std::string(kCharRatiosTag), encode_ratios(*char_ratios_));
  if (bias_) {
    ByteWriter w;
    write_lexicon(w, bias_->left);
    write_lexicon(w, bias_->right);
    a.add(std::string(kBiasTag), w.take());
  }
  if (config_.enabled[Family::lexical]) {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(config_.lexicons.size()));
    for (const auto& lex : config_.lexicons) write_lexicon(w, lex);
    a.add(std::string(kLexiconsTag), w.take());
  }
  if (config_.standardize) {
    ByteWriter w;
    for (Family f : kFamilies) {
      if (!standardizers_[f]) continue;
      w.u8(static_cast<std::uint8_t>(f));
      w.f64_array(standardizers_[f]->mean);
      w.f64_array(standardizers_[f]->stddev);
    }
    a.add(std::string(kStandardizeTag), w.take());
  }
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(layout_.size()));
  for (const auto& b : layout_) {
    w.u8(static_cast<std::uint8_t>(b.family));
    w.u32(b.offset);
    w.u32(b.width);
  }
  a.add(std::string(kLayoutTag), w.take());
  return a;
}

FittedPipeline FittedPipeline::from_archive(const Archive& archive) {
  FittedPipeline p;
  p.config_ = decode_config(archive.require(kConfigTag));
  const FeatureConfig& c = p.config_;

  if (c.enabled[Family::word_ngrams]) {
    p.word_vocab_ = decode_vocabulary(archive.require(kWordVocabTag), kWordVocabTag, Channel::word_1_2);
    if (c.nb_scaling) {
      p.word_ratios_ = decode_ratios(archive.require(kWordRatiosTag), kWordRatiosTag, p.word_vocab_->size());
    }
  }
  if (c.enabled[Family::char_trigrams]) {
    p.char_vocab_ = decode_vocabulary(archive.require(kCharVocabTag), kCharVocabTag, Channel::char_3);
    if (c.nb_char) {
      p.char_ratios_ = decode_ratios(archive.require(kCharRatiosTag), kCharRatiosTag, p.char_vocab_->size());
    }
  }
  if (c.enabled[Family::bias]) {
    ByteReader r(archive.require(kBiasTag), std::string(kBiasTag));
    BiasLexicons bias;
    bias.left = read_lexicon(r);
    bias.right = read_lexicon(r);
    r.expect_end();
    p.bias_ = std::move(bias);
  }
  if (c.enabled[Family::lexical]) {
    ByteReader r(archive.require(kLexiconsTag), std::string(kLexiconsTag));
    const auto n = r.u32();
    for (std::uint32_t i = 0; i < n; ++i) p.config_.lexicons.push_back(read_lexicon(r));
    r.expect_end();
  }
  if (c.standardize) {
    ByteReader r(archive.require(kStandardizeTag), std::string(kStandardizeTag));
    while (!r.at_end()) {
      const auto f = r.u8();
      if (f >= kFamilies.size() || !is_dense(static_cast<Family>(f))) r.fail("invalid family");
      Standardizer st;
      st.mean = r.f64_array();
      st.stddev = r.f64_array();
      p.standardizers_[static_cast<Family>(f)] = std::move(st);
    }
  }

  try {
    p.config_.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::archive, "archive section 'PCFG': " + std::string(e.what()));
  }
  p.build_layout();

  ByteReader r(archive.require(kLayoutTag), std::string(kLayoutTag));
  const auto n = r.u32();
  std::vector<FamilyBlock> stored;
  for (std::uint32_t i = 0; i < n; ++i) {
    FamilyBlock b;
    const auto f = r.u8();
    if (f >= kFamilies.size()) r.fail("invalid family");
    b.family = static_cast<Family>(f);
    b.offset = r.u32();
    b.width = r.u32();
    stored.push_back(b);
  }
  r.expect_end();
  if (stored != p.layout_) r.fail("layout does not match the stored components");
  for (Family f : kFamilies) {
    if (c.standardize && c.enabled[f] && is_dense(f) && !p.standardizers_[f]) {
      ByteReader({}, std::string(kStandardizeTag)).fail("missing entry for " + std::string(family_name(f)));
    }
    if (!p.standardizers_[f]) continue;
    const auto width = p.block(f) ? p.block(f)->width : 0u;
    if (p.standardizers_[f]->mean.size() != width || p.standardizers_[f]->stddev.size() != width) {
      ByteReader({}, std::string(kStandardizeTag)).fail("width does not match layout");
    }
  }
  return p;
}

std::string save_pipeline(const FittedPipeline& pipeline) { return pipeline.to_archive().encode(); }

FittedPipeline load_pipeline(std::string_view bytes) {
  return FittedPipeline::from_archive(Archive::decode(bytes));
}

}  // namespace partisan
