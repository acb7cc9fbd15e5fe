#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace partisan {

/// Sectioned binary container shared by pipeline and model files.
///
///   magic    8 bytes  "PARTISAN"
///   version  u32      kArchiveVersion
///   count    u32      number of sections
///   then per section:
///     tag      4 ASCII bytes
///     length   u64      payload byte count
///     checksum u64      FNV-1a 64 of the payload
///     payload  length bytes
///
/// Integers are little-endian; reals are IEEE-754 binary64 stored as their
/// little-endian bit pattern; strings are u32 length + bytes.
inline constexpr std::uint32_t kArchiveVersion = 1;

struct ArchiveSection {
  std::string tag;
  std::string payload;
};

class Archive {
 public:
  void add(std::string tag, std::string payload);
  /// Appends every section of `other`.
  void merge(const Archive& other);

  bool contains(std::string_view tag) const noexcept;
  /// Payload of `tag`; throws Error(archive) naming the section when absent.
  const std::string& require(std::string_view tag) const;
  const std::vector<ArchiveSection>& sections() const noexcept { return sections_; }

  std::string encode() const;
  /// Throws Error(archive) on bad magic, newer version, truncation, or a
  /// checksum mismatch; the message names the offending section.
  static Archive decode(std::string_view bytes);

  void write_file(const std::filesystem::path& path) const;
  static Archive read_file(const std::filesystem::path& path);

 private:
  std::vector<ArchiveSection> sections_;
};

std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Little-endian payload builder.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void str(std::string_view s);
  void f64_array(const std::vector<double>& values);

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

/// Bounds-checked payload reader; errors mention the section name.
class ByteReader {
 public:
  ByteReader(std::string_view bytes, std::string section)
      : bytes_(bytes), section_(std::move(section)) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  double f64();
  std::string str();
  std::vector<double> f64_array();

  bool at_end() const noexcept { return pos_ == bytes_.size(); }
  /// Throws unless every byte has been consumed.
  void expect_end() const;
  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::string_view take(std::size_t n);

  std::string_view bytes_;
  std::string section_;
  std::size_t pos_ = 0;
};

}  // namespace partisan
