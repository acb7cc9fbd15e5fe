#include "partisan/corpus_io.hpp"

#include "partisan/error.hpp"
#include "partisan/random.hpp"
#include "partisan/textproc.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace partisan {
namespace {

using nlohmann::json;

std::string at_line(std::size_t line) { return " at line " + std::to_string(line); }

Label parse_label_json(const json& value, std::size_t line) {
  if (value.is_number_integer()) {
    const auto v = value.get<std::int64_t>();
    if (v == 0 || v == 1) return static_cast<Label>(v);
  }
  throw Error(ErrorKind::parse, "invalid label" + at_line(line));
}

Label parse_label_text(std::string_view field, std::size_t line) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw Error(ErrorKind::parse, "invalid label" + at_line(line));
}

std::string tsv_unescape(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == '\\' && i + 1 < field.size()) {
      switch (field[i + 1]) {
        case 't': out.push_back('\t'); ++i; continue;
        case 'n': out.push_back('\n'); ++i; continue;
        case 'r': out.push_back('\r'); ++i; continue;
        case '\\': out.push_back('\\'); ++i; continue;
        default: break;
      }
    }
    out.push_back(field[i]);
  }
  return out;
}

std::string tsv_escape(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

Document parse_jsonl_record(std::string_view line_text, std::size_t line) {
  json record;
  try {
    record = json::parse(line_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, "malformed record" + at_line(line) + ": " + e.what());
  }
  if (!record.is_object()) {
    throw Error(ErrorKind::parse, "malformed record" + at_line(line) + ": expected an object");
  }
  Document doc;
  const auto id = record.find("id");
  if (id == record.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) {
    throw Error(ErrorKind::parse,
                "malformed record" + at_line(line) + ": missing or empty string field 'id'");
  }
  doc.id = id->get<std::string>();
  const auto text = record.find("text");
  if (text == record.end() || !text->is_string()) {
    throw Error(ErrorKind::parse,
                "malformed record" + at_line(line) + ": missing string field 'text'");
  }
  doc.text = text->get<std::string>();
  const auto label = record.find("label");
  if (label != record.end() && !label->is_null()) doc.label = parse_label_json(*label, line);
  return doc;
}

Document parse_tsv_record(std::string_view line_text, std::size_t line) {
  const auto first = line_text.find('\t');
  const auto second = first == std::string_view::npos ? first : line_text.find('\t', first + 1);
  if (second == std::string_view::npos) {
    throw Error(ErrorKind::parse, "malformed record" + at_line(line) +
                                      ": expected id<TAB>label<TAB>text");
  }
  Document doc;
  doc.id = std::string(line_text.substr(0, first));
  if (doc.id.empty()) {
    throw Error(ErrorKind::parse, "malformed record" + at_line(line) + ": empty id");
  }
  const auto label = line_text.substr(first + 1, second - first - 1);
  if (!label.empty()) doc.label = parse_label_text(label, line);
  doc.text = tsv_unescape(line_text.substr(second + 1));
  return doc;
}

}  // namespace

std::optional<CorpusFormat> parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::jsonl;
  if (name == "tsv") return CorpusFormat::tsv;
  return std::nullopt;
}

CorpusFormat corpus_format_for(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? CorpusFormat::tsv : CorpusFormat::jsonl;
}

Corpus::Corpus(std::string name, std::vector<Document> documents)
    : name_(std::move(name)), documents_(std::move(documents)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(documents_.size());
  for (const auto& doc : documents_) {
    if (doc.id.empty()) throw Error(ErrorKind::data, "document with empty id");
    if (!seen.insert(doc.id).second) {
      throw Error(ErrorKind::data, "duplicate document id '" + doc.id + "'");
    }
    if (doc.label && *doc.label != 0 && *doc.label != 1) {
      throw Error(ErrorKind::data, "invalid label on document '" + doc.id + "'");
    }
  }
  if (!documents_.empty()) {
    const bool first = documents_.front().label.has_value();
    for (const auto& doc : documents_) {
      if (doc.label.has_value() != first) {
        throw Error(ErrorKind::data, "labels must be present on all documents or none; '" +
                                         doc.id + "' differs");
      }
    }
  }
}

bool Corpus::labeled() const noexcept {
  return !documents_.empty() && documents_.front().label.has_value();
}

std::vector<Label> Corpus::labels() const {
  if (documents_.empty()) return {};
  if (!labeled()) {
    throw Error(ErrorKind::data, "corpus '" + name_ + "' is not labeled");
  }
  std::vector<Label> out;
  out.reserve(documents_.size());
  for (const auto& doc : documents_) out.push_back(*doc.label);
  return out;
}

std::string join_title_and_body(std::string_view title, std::string_view body) {
  if (title.empty()) return std::string(body);
  std::string out;
  out.reserve(title.size() + 1 + body.size());
  out.append(title);
  out.push_back('\n');
  out.append(body);
  return out;
}

Corpus parse_corpus(std::string_view content, CorpusFormat format, std::string name) {
  std::vector<Document> docs;
  std::unordered_set<std::string> ids;
  std::optional<bool> labeled;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (!is_valid_utf8(line)) {
      throw Error(ErrorKind::parse, "invalid UTF-8" + at_line(line_no));
    }

    Document doc = format == CorpusFormat::jsonl ? parse_jsonl_record(line, line_no)
                                                 : parse_tsv_record(line, line_no);
    if (!ids.insert(doc.id).second) {
      throw Error(ErrorKind::parse, "duplicate id '" + doc.id + "'" + at_line(line_no));
    }
    if (!labeled) {
      labeled = doc.label.has_value();
    } else if (*labeled != doc.label.has_value()) {
      throw Error(ErrorKind::parse,
                  "label present on some records but not others" + at_line(line_no));
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(name), std::move(docs));
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open corpus file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_corpus(buffer.str(), format, path.stem().string());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

Corpus load_corpus(const std::filesystem::path& path) {
  return load_corpus(path, corpus_format_for(path));
}

std::string serialize_corpus(const Corpus& corpus, CorpusFormat format) {
  std::string out;
  for (const auto& doc : corpus) {
    if (format == CorpusFormat::jsonl) {
      json record = json::object();
      record["id"] = doc.id;
      record["text"] = doc.text;
      if (doc.label) record["label"] = *doc.label;
      out += record.dump();
    } else {
      out += doc.id;
      out.push_back('\t');
      if (doc.label) out += std::to_string(*doc.label);
      out.push_back('\t');
      out += tsv_escape(doc.text);
    }
    out.push_back('\n');
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path, CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write corpus file " + path.string());
  out << serialize_corpus(corpus, format);
}

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "split fraction must lie in (0, 1)");
  }
  if (!corpus.labeled()) {
    throw Error(ErrorKind::data, "split_corpus requires a labeled corpus");
  }

  std::array<std::vector<std::size_t>, 2> by_class;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    by_class[static_cast<std::size_t>(*corpus[i].label)].push_back(i);
  }
  std::mt19937_64 rng(seed);
  for (auto& members : by_class) portable_shuffle(std::span<std::size_t>(members), rng);

  // Largest-remainder allocation of the first part's size across classes.
  const auto total_first = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(corpus.size())));
  std::array<std::size_t, 2> take{};
  std::array<double, 2> remainder{};
  std::size_t allocated = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double exact = fraction * static_cast<double>(by_class[c].size());
    take[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - static_cast<double>(take[c]);
    allocated += take[c];
  }
  std::array<std::size_t, 2> order{0, 1};
  if (remainder[1] > remainder[0]) std::swap(order[0], order[1]);
  for (std::size_t c : order) {
    if (allocated < total_first && take[c] < by_class[c].size()) {
      ++take[c];
      ++allocated;
    }
  }
  for (std::size_t c : order) {
    while (allocated < total_first && take[c] < by_class[c].size()) {
      ++take[c];
      ++allocated;
    }
  }

  std::vector<std::size_t> first_idx;
  std::vector<std::size_t> second_idx;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto& members = by_class[c];
    first_idx.insert(first_idx.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take[c]));
    second_idx.insert(second_idx.end(), members.begin() + static_cast<std::ptrdiff_t>(take[c]), members.end());
  }
  std::sort(first_idx.begin(), first_idx.end());
  std::sort(second_idx.begin(), second_idx.end());

  auto gather = [&](const std::vector<std::size_t>& idx, const std::string& suffix) {
    std::vector<Document> docs;
    docs.reserve(idx.size());
    for (std::size_t i : idx) docs.push_back(corpus[i]);
    return Corpus(corpus.name() + suffix, std::move(docs));
  };
  return {gather(first_idx, ".part1"), gather(second_idx, ".part2")};
}

}  // namespace partisan
