#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace partisan {

/// 1 = hyperpartisan, 0 = not.
using Label = int;

struct Document {
  std::string id;
  std::string text;
  std::optional<Label> label;

  friend bool operator==(const Document&, const Document&) = default;
};

enum class CorpusFormat { jsonl, tsv };

std::optional<CorpusFormat> parse_corpus_format(std::string_view name);

/// Guesses the format from the extension: ".tsv" is TSV, anything else JSONL.
CorpusFormat corpus_format_for(const std::filesystem::path& path);

/// Ordered document collection. Labels are present on every document or on
/// none; ids are unique. Both are checked on construction.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::string name, std::vector<Document> documents);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Document>& documents() const noexcept { return documents_; }
  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }
  bool labeled() const noexcept;

  const Document& operator[](std::size_t i) const { return documents_[i]; }
  auto begin() const noexcept { return documents_.begin(); }
  auto end() const noexcept { return documents_.end(); }

  /// Labels in document order. Throws Error(data) on a non-empty unlabeled corpus.
  std::vector<Label> labels() const;

 private:
  std::string name_;
  std::vector<Document> documents_;
};

/// Concatenates a title and body into the single text field.
std::string join_title_and_body(std::string_view title, std::string_view body);

Corpus parse_corpus(std::string_view content, CorpusFormat format, std::string name = {});
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
Corpus load_corpus(const std::filesystem::path& path);

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format);

/// Stratified, seed-deterministic split. The first part holds
/// round(fraction * N) documents; each class is divided within one document
/// of its proportional share. Both parts keep the input's relative order.
std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double fraction, std::uint64_t seed);

}  // namespace partisan
