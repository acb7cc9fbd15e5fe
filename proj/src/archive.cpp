#include "partisan/archive.hpp"

#include "partisan/error.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace partisan {
namespace {

constexpr std::string_view kMagic = "PARTISAN";

std::uint64_t load_le(std::string_view b, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  }
  return v;
}

void store_le(std::string& out, std::uint64_t v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

void ByteWriter::u32(std::uint32_t v) { store_le(out_, v, 4); }
void ByteWriter::u64(std::uint64_t v) { store_le(out_, v, 8); }
void ByteWriter::f64(double v) { store_le(out_, std::bit_cast<std::uint64_t>(v), 8); }

void ByteWriter::str(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  out_.append(s);
}

void ByteWriter::f64_array(const std::vector<double>& values) {
  u64(values.size());
  for (double v : values) f64(v);
}

std::string_view ByteReader::take(std::size_t n) {
  if (bytes_.size() - pos_ < n) fail("truncated");
  auto s = bytes_.substr(pos_, n);
  pos_ += n;
  return s;
}

void ByteReader::fail(const std::string& what) const {
  throw Error(ErrorKind::archive, "archive section '" + section_ + "': " + what);
}

std::uint8_t ByteReader::u8() { return static_cast<std::uint8_t>(take(1)[0]); }
std::uint32_t ByteReader::u32() { return static_cast<std::uint32_t>(load_le(take(4), 4)); }
std::uint64_t ByteReader::u64() { return load_le(take(8), 8); }
double ByteReader::f64() { return std::bit_cast<double>(load_le(take(8), 8)); }

std::string ByteReader::str() {
  const auto n = u32();
  return std::string(take(n));
}

std::vector<double> ByteReader::f64_array() {
  const auto n = u64();
  if (n > (bytes_.size() - pos_) / 8) fail("truncated");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(f64());
  return out;
}

void ByteReader::expect_end() const {
  if (!at_end()) fail("trailing bytes");
}

void Archive::add(std::string tag, std::string payload) {
  if (tag.size() != 4) {
    throw Error(ErrorKind::invalid_argument, "archive tag must be 4 bytes: '" + tag + "'");
  }
  sections_.push_back({std::move(tag), std::move(payload)});
}

void Archive::merge(const Archive& other) {
  for (const auto& s : other.sections_) sections_.push_back(s);
}

bool Archive::contains(std::string_view tag) const noexcept {
  for (const auto& s : sections_) {
    if (s.tag == tag) return true;
  }
  return false;
}

const std::string& Archive::require(std::string_view tag) const {
  for (const auto& s : sections_) {
    if (s.tag == tag) return s.payload;
  }
  throw Error(ErrorKind::archive, "archive section '" + std::string(tag) + "': missing");
}

std::string Archive::encode() const {
  std::string out(kMagic);
  store_le(out, kArchiveVersion, 4);
  store_le(out, sections_.size(), 4);
  for (const auto& s : sections_) {
    out += s.tag;
    store_le(out, s.payload.size(), 8);
    store_le(out, fnv1a64(s.payload), 8);
    out += s.payload;
  }
  return out;
}

Archive Archive::decode(std::string_view bytes) {
  ByteReader header(bytes, "header");
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic) {
    header.fail("bad magic (not an archive)");
  }
  bytes.remove_prefix(kMagic.size());
  header = ByteReader(bytes, "header");
  const auto version = header.u32();
  if (version > kArchiveVersion) {
    header.fail("format version " + std::to_string(version) +
                " is newer than supported version " + std::to_string(kArchiveVersion));
  }
  if (version == 0) header.fail("invalid format version 0");
  const auto count = header.u32();

  Archive archive;
  std::size_t pos = 8;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string where = "#" + std::to_string(i);
    if (bytes.size() - pos < 20) ByteReader({}, where).fail("truncated header");
    std::string tag(bytes.substr(pos, 4));
    const auto length = load_le(bytes.substr(pos + 4, 8), 8);
    const auto checksum = load_le(bytes.substr(pos + 12, 8), 8);
    pos += 20;
    if (bytes.size() - pos < length) ByteReader({}, tag).fail("truncated payload");
    std::string payload(bytes.substr(pos, static_cast<std::size_t>(length)));
    pos += static_cast<std::size_t>(length);
    if (fnv1a64(payload) != checksum) ByteReader({}, tag).fail("checksum mismatch");
    archive.sections_.push_back({std::move(tag), std::move(payload)});
  }
  if (pos != bytes.size()) header.fail("trailing bytes after last section");
  return archive;
}

void Archive::write_file(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write archive " + path.string());
  const auto bytes = encode();
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::io, "failed writing archive " + path.string());
}

Archive Archive::read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open archive " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return decode(buffer.str());
}

}  // namespace partisan
