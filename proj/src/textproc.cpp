#include "partisan/textproc.hpp"

#include "partisan/error.hpp"

#include <cstdint>

namespace partisan {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one code point starting at `pos` and advances it. Malformed input
// yields U+FFFD and consumes a single byte.
char32_t decode_next(std::string_view s, std::size_t& pos) noexcept {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
    min = 0x10000;
  } else {
    ++pos;
    return kReplacement;
  }
  if (pos + static_cast<std::size_t>(len) > s.size()) {
    ++pos;
    return kReplacement;
  }
  for (int i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + static_cast<std::size_t>(i)]);
    if ((b & 0xC0) != 0x80) {
      ++pos;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    ++pos;
    return kReplacement;
  }
  pos += static_cast<std::size_t>(len);
  return cp;
}

void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::u32string decode_all(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) out.push_back(decode_next(s, pos));
  return out;
}

bool is_space(char32_t c) noexcept {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

// Letter/digit test without a Unicode database: ASCII exactly, plus the
// letter blocks of the common alphabetic scripts and CJK.
bool is_word_char(char32_t c) noexcept {
  if (c < 0x80) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') ||
           (c >= U'0' && c <= U'9');
  }
  if (c >= 0xC0 && c <= 0x24F) return c != 0xD7 && c != 0xF7;
  if (c == 0xAA || c == 0xB5 || c == 0xBA) return true;
  if (c >= 0x250 && c <= 0x2AF) return true;    // IPA
  if (c >= 0x300 && c <= 0x36F) return true;    // combining marks
  if (c >= 0x370 && c <= 0x3FF) return c != 0x37E && c != 0x387;
  if (c >= 0x400 && c <= 0x52F) return c < 0x482 || c > 0x489;
  if (c >= 0x531 && c <= 0x587) return true;    // Armenian
  if (c >= 0x5D0 && c <= 0x5EA) return true;    // Hebrew
  if (c >= 0x620 && c <= 0x669) return true;    // Arabic letters, digits
  if (c >= 0x900 && c <= 0xDFF) return true;    // Indic
  if (c >= 0xE01 && c <= 0xE5B) return true;    // Thai
  if (c >= 0x1E00 && c <= 0x1FFF) return true;  // Latin/Greek extended
  if (c >= 0x3040 && c <= 0x30FF) return true;  // kana
  if (c >= 0x3400 && c <= 0x9FFF) return true;  // CJK
  if (c >= 0xAC00 && c <= 0xD7AF) return true;  // Hangul
  if (c >= 0xFF10 && c <= 0xFF19) return true;
  if (c >= 0xFF21 && c <= 0xFF3A) return true;
  if (c >= 0xFF41 && c <= 0xFF5A) return true;
  return false;
}

bool is_apostrophe(char32_t c) noexcept { return c == U'\'' || c == 0x2019; }

char32_t to_lower(char32_t c) noexcept {
  if (c < 0x80) return (c >= U'A' && c <= U'Z') ? c + 32 : c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x130) return U'i';
    if (c == 0x178) return 0xFF;
    const bool even_upper = (c <= 0x137) || (c >= 0x14A && c <= 0x177);
    const bool odd_upper = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    if (even_upper && c % 2 == 0) return c + 1;
    if (odd_upper && c % 2 == 1) return c + 1;
    return c;
  }
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  if (c >= 0xFF21 && c <= 0xFF3A) return c + 32;
  return c;
}

bool is_sentence_terminator(char32_t c) noexcept {
  return c == U'.' || c == U'!' || c == U'?';
}

bool is_vowel(char c) noexcept {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
      return true;
    default:
      return false;
  }
}

}  // namespace

bool is_valid_utf8(std::string_view text) noexcept {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t start = pos;
    const char32_t cp = decode_next(text, pos);
    if (cp == kReplacement) {
      // A literal U+FFFD is three bytes; a decoding failure consumes one.
      if (pos - start != 3) return false;
    }
  }
  return true;
}

std::string to_lower_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) encode(to_lower(decode_next(text, pos)), out);
  return out;
}

TokenizedDoc tokenize(std::string_view text, std::string source_id) {
  TokenizedDoc doc;
  doc.source_id = std::move(source_id);
  const std::u32string cps = decode_all(text);
  const std::size_t n = cps.size();

  std::size_t sentence_begin = 0;
  auto close_sentence = [&] {
    if (doc.tokens.size() > sentence_begin) {
      doc.sentences.push_back({sentence_begin, doc.tokens.size()});
    }
    sentence_begin = doc.tokens.size();
  };

  std::size_t i = 0;
  while (i < n) {
    const char32_t c = cps[i];
    if (is_word_char(c)) {
      std::string token;
      while (i < n) {
        if (is_word_char(cps[i])) {
          encode(to_lower(cps[i]), token);
          ++i;
        } else if (is_apostrophe(cps[i]) && i + 1 < n && is_word_char(cps[i + 1])) {
          token.push_back('\'');
          ++i;
        } else {
          break;
        }
      }
      doc.tokens.push_back(std::move(token));
      continue;
    }
    if (is_sentence_terminator(c) && (i + 1 == n || is_space(cps[i + 1]))) {
      close_sentence();
    }
    ++i;
  }
  close_sentence();
  return doc;
}

std::string normalize_for_char_ngrams(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char32_t c = decode_next(text, pos);
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    encode(to_lower(c), out);
  }
  return out;
}

std::vector<std::string> char_ngrams(std::string_view text, int n) {
  if (n < 1) {
    throw Error(ErrorKind::invalid_argument,
                "char_ngrams: n must be >= 1, got " + std::to_string(n));
  }
  const std::string normalized = normalize_for_char_ngrams(text);

  // Byte offset of every code point so windows can be sliced from the
  // encoded string directly.
  std::vector<std::size_t> offsets;
  offsets.reserve(normalized.size() + 1);
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    offsets.push_back(pos);
    decode_next(normalized, pos);
  }
  offsets.push_back(normalized.size());

  const std::size_t len = offsets.size() - 1;
  const auto width = static_cast<std::size_t>(n);
  std::vector<std::string> grams;
  if (len < width) return grams;
  grams.reserve(len - width + 1);
  for (std::size_t i = 0; i + width <= len; ++i) {
    grams.emplace_back(normalized.substr(offsets[i], offsets[i + width] - offsets[i]));
  }
  return grams;
}

int count_syllables(std::string_view word) {
  if (word.empty()) {
    throw Error(ErrorKind::invalid_argument, "count_syllables: empty word");
  }
  std::string letters;
  letters.reserve(word.size());
  for (char ch : word) {
    const auto u = static_cast<unsigned char>(ch);
    if (u >= 'A' && u <= 'Z') {
      letters.push_back(static_cast<char>(u + 32));
    } else if (u >= 'a' && u <= 'z') {
      letters.push_back(ch);
    }
  }

  int groups = 0;
  bool in_group = false;
  for (char ch : letters) {
    const bool v = is_vowel(ch);
    if (v && !in_group) ++groups;
    in_group = v;
  }

  const std::size_t m = letters.size();
  if (m >= 2 && letters[m - 1] == 'e' && !is_vowel(letters[m - 2])) {
    const bool consonant_le = m >= 3 && letters[m - 2] == 'l' && !is_vowel(letters[m - 3]);
    if (!consonant_le) --groups;
  }
  return groups < 1 ? 1 : groups;
}

}  // namespace partisan
