#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace partisan {

/// Half-open token range [begin, end) covering one sentence.
struct SentenceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

/// Lowercased word tokens plus sentence segmentation over them.
struct TokenizedDoc {
  std::vector<std::string> tokens;
  std::vector<SentenceSpan> sentences;
  std::string source_id;
};

/// Word tokenizer shared by every feature family.
///
/// Tokens are maximal runs of letters and digits, where an apostrophe
/// (U+0027 or U+2019) sitting between two such characters stays inside the
/// token and is normalized to U+0027. Output is lowercased. A sentence ends
/// at '.', '!' or '?' followed by whitespace or end of text; trailing tokens
/// without a terminator form an implicit final sentence. Sentences with no
/// tokens are not emitted. Malformed UTF-8 bytes decode to U+FFFD and act as
/// separators; corpus loading is where encoding errors are reported.
TokenizedDoc tokenize(std::string_view text, std::string source_id = {});

/// Sliding window of `n` code points over the lowercased text after every
/// whitespace run has been collapsed to one space and the ends trimmed.
/// Throws Error(invalid_argument) when n < 1.
std::vector<std::string> char_ngrams(std::string_view text, int n);

/// Lowercases and collapses whitespace the same way char_ngrams does.
std::string normalize_for_char_ngrams(std::string_view text);

/// Vowel-group syllable estimate: runs of a/e/i/o/u/y, minus a lone silent
/// final 'e' (kept for consonant + "le" endings such as "table"), at least 1.
/// Throws Error(invalid_argument) on an empty word.
int count_syllables(std::string_view word);

/// True when `text` is well-formed UTF-8 (no overlongs, no surrogates).
bool is_valid_utf8(std::string_view text) noexcept;

/// Lowercase mapping used by the tokenizer, exposed for lexicon loading.
std::string to_lower_utf8(std::string_view text);

}  // namespace partisan
