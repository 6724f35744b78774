#include "exgs/file_io.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <string>
#include <system_error>

#include "exgs/byte_order.hpp"
#include "exgs/error.hpp"

namespace exgs {

namespace fs = std::filesystem;

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  in.seekg(0, std::ios::end);
  const std::streamoff size = in.tellg();
  if (size < 0) throw IoError("cannot determine size of " + path.string());
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
    throw IoError("short read from " + path.string());
  }
  return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing: " + std::strerror(errno));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into " + path.string());
  }
}

void write_file(const fs::path& path, std::string_view text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

namespace {

template <class T>
std::vector<std::uint8_t> encode_vector(std::span<const T> values) {
  if (values.size() > 0xFFFFFFFFull) throw CapacityError("vector too long for a u32 count");
  std::vector<std::uint8_t> out;
  out.reserve(4 + 4 * values.size());
  le::append_u32(out, static_cast<std::uint32_t>(values.size()));
  for (T v : values) le::append_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

template <class T>
std::vector<T> decode_vector(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw TruncationError("vector file header", 4, bytes.size());
  const std::size_t count = le::load_u32(bytes.data());
  const std::size_t expected = 4 + 4 * count;
  if (bytes.size() < expected) throw TruncationError("vector file body", expected, bytes.size());
  if (bytes.size() > expected) throw FormatError("vector file has trailing bytes");
  std::vector<T> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::bit_cast<T>(le::load_u32(bytes.data() + 4 + 4 * i));
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_f32_vector(std::span<const float> values) { return encode_vector(values); }
std::vector<float> decode_f32_vector(std::span<const std::uint8_t> bytes) { return decode_vector<float>(bytes); }
std::vector<std::uint8_t> encode_u32_vector(std::span<const std::uint32_t> values) { return encode_vector(values); }
std::vector<std::uint32_t> decode_u32_vector(std::span<const std::uint8_t> bytes) {
  return decode_vector<std::uint32_t>(bytes);
}

}  // namespace exgs
