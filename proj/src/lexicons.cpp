#include "partisan/lexicons.hpp"

#include "partisan/error.hpp"
#include "partisan/textproc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

namespace partisan {
namespace {

std::string join(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace

Lexicon::Lexicon(std::string name, std::span<const std::string> raw_terms) : name_(std::move(name)) {
  if (name_.empty()) throw Error(ErrorKind::invalid_argument, "lexicon name must not be empty");
  for (const auto& raw : raw_terms) {
    const auto tokens = tokenize(raw).tokens;
    if (tokens.empty()) continue;
    max_words_ = std::max(max_words_, tokens.size());
    terms_.insert(join(tokens));
  }
}

Lexicon parse_lexicon(std::string_view content, std::string name) {
  std::vector<std::string> raw;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    raw.push_back(line);
  }
  Lexicon lex(std::move(name), raw);
  if (lex.empty()) {
    throw Error(ErrorKind::data, "lexicon '" + lex.name() + "' has no entries");
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path, std::string name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open lexicon file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  if (!is_valid_utf8(content)) {
    throw Error(ErrorKind::parse, "lexicon file " + path.string() + " is not valid UTF-8");
  }
  return parse_lexicon(content, std::move(name));
}

std::string serialize_lexicon(const Lexicon& lex) {
  std::string out = "# " + lex.name() + "\n";
  for (const auto& term : lex.terms()) {
    out += term;
    out.push_back('\n');
  }
  return out;
}

void save_lexicon(const Lexicon& lex, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write lexicon file " + path.string());
  out << serialize_lexicon(lex);
}

std::size_t lexicon_count(std::span<const std::string> tokens, const Lexicon& lex) {
  if (lex.empty()) return 0;
  const std::size_t longest = lex.max_words();
  std::size_t count = 0;
  std::string key;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    for (std::size_t n = std::min(longest, tokens.size() - i); n >= 2; --n) {
      key = join(tokens.subspan(i, n));
      if (lex.contains(key)) {
        matched = n;
        break;
      }
    }
    if (matched == 0 && lex.contains(tokens[i])) matched = 1;
    if (matched > 0) {
      ++count;
      i += matched;
    } else {
      ++i;
    }
  }
  return count;
}

double bias_score(std::span<const std::string> tokens, const Lexicon& lex) {
  if (tokens.empty()) return 0.0;
  return static_cast<double>(lexicon_count(tokens, lex)) / static_cast<double>(tokens.size());
}

std::vector<SoScore> semantic_orientation(std::span<const std::vector<std::string>> left_docs,
                                          std::span<const std::vector<std::string>> right_docs) {
  if (left_docs.empty() || right_docs.empty()) {
    throw Error(ErrorKind::invalid_argument, "semantic_orientation: both corpora must be non-empty");
  }
  struct Counts {
    std::uint64_t left = 0;
    std::uint64_t right = 0;
  };
  std::unordered_map<std::string, Counts> counts;
  std::uint64_t n_left = 0;
  std::uint64_t n_right = 0;
  for (const auto& doc : left_docs) {
    for (const auto& t : doc) ++counts[t].left;
    n_left += doc.size();
  }
  for (const auto& doc : right_docs) {
    for (const auto& t : doc) ++counts[t].right;
    n_right += doc.size();
  }

  const auto vocab = static_cast<double>(counts.size());
  const double log_denom_left = std::log2(static_cast<double>(n_left) + vocab);
  const double log_denom_right = std::log2(static_cast<double>(n_right) + vocab);

  std::vector<SoScore> scores;
  scores.reserve(counts.size());
  for (const auto& [term, c] : counts) {
    const double log_p_right = std::log2(static_cast<double>(c.right) + 1.0) - log_denom_right;
    const double log_p_left = std::log2(static_cast<double>(c.left) + 1.0) - log_denom_left;
    scores.push_back({term, log_p_right - log_p_left});
  }
  std::sort(scores.begin(), scores.end(), [](const SoScore& a, const SoScore& b) {
    const double ma = std::abs(a.so);
    const double mb = std::abs(b.so);
    if (ma != mb) return ma > mb;
    return a.term < b.term;
  });
  return scores;
}

std::vector<SoScore> semantic_orientation(const Corpus& left, const Corpus& right) {
  if (left.empty() || right.empty()) {
    throw Error(ErrorKind::invalid_argument, "semantic_orientation: both corpora must be non-empty");
  }
  auto tokens_of = [](const Corpus& corpus) {
    std::vector<std::vector<std::string>> docs;
    docs.reserve(corpus.size());
    for (const auto& doc : corpus) docs.push_back(tokenize(doc.text).tokens);
    return docs;
  };
  const auto l = tokens_of(left);
  const auto r = tokens_of(right);
  return semantic_orientation(l, r);
}

BiasLexicons induce_bias_lexicons(std::span<const SoScore> scores, double threshold) {
  if (!(threshold > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "induce_bias_lexicons: threshold must be positive");
  }
  std::vector<std::string> left;
  std::vector<std::string> right;
  for (const auto& s : scores) {
    if (s.so >= threshold) {
      right.push_back(s.term);
    } else if (s.so <= -threshold) {
      left.push_back(s.term);
    }
  }
  return {Lexicon("bias_left", left), Lexicon("bias_right", right)};
}

std::string so_scores_tsv(std::span<const SoScore> scores) {
  std::string out;
  for (const auto& s : scores) out += fmt::format("{}\t{:.17g}\n", s.term, s.so);
  return out;
}

}  // namespace partisan
