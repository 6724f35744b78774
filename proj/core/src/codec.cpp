#include "exgs/codec.hpp"

#include <lzma.h>

#include <algorithm>
#include <cstring>
#include <limits>
#include <string>

#include "exgs/byte_order.hpp"
#include "exgs/error.hpp"
#include "exgs/half.hpp"

namespace exgs {

namespace {

constexpr std::uint8_t kMagic[4] = {'E', 'X', 'G', 'S'};

// Attribute arrays in payload order.
template <class Cloud>
auto payload_arrays(Cloud& c) {
  return std::array{&c.means, &c.sh_dc, &c.opacity_logit, &c.scale_log, &c.rotations};
}

std::vector<std::uint8_t> xz_encode(std::span<const std::uint8_t> raw, std::uint32_t preset) {
  std::vector<std::uint8_t> out(lzma_stream_buffer_bound(raw.size()));
  std::size_t out_pos = 0;
  const lzma_ret ret = lzma_easy_buffer_encode(preset, LZMA_CHECK_CRC64, nullptr, raw.data(), raw.size(), out.data(),
                                               &out_pos, out.size());
  if (ret != LZMA_OK) throw Error("LZMA encoder failed with code " + std::to_string(static_cast<int>(ret)));
  out.resize(out_pos);
  return out;
}

// Streams the decode so a corrupted count field cannot force a large up-front allocation.
std::vector<std::uint8_t> xz_decode(std::span<const std::uint8_t> stream, std::size_t expected) {
  lzma_stream strm = LZMA_STREAM_INIT;
  if (lzma_stream_decoder(&strm, std::numeric_limits<std::uint64_t>::max(), 0) != LZMA_OK) {
    throw Error("LZMA decoder initialisation failed");
  }
  struct Guard {
    lzma_stream* s;
    ~Guard() { lzma_end(s); }
  } guard{&strm};

  std::vector<std::uint8_t> out;
  std::uint8_t chunk[1 << 16];
  strm.next_in = stream.data();
  strm.avail_in = stream.size();
  lzma_ret ret = LZMA_OK;
  while (ret == LZMA_OK) {
    strm.next_out = chunk;
    strm.avail_out = sizeof(chunk);
    ret = lzma_code(&strm, LZMA_FINISH);
    const std::size_t produced = sizeof(chunk) - strm.avail_out;
    if (out.size() + produced > expected) {
      throw CorruptionError("EXGS: decoded payload exceeds the expected " + std::to_string(expected) + " bytes");
    }
    out.insert(out.end(), chunk, chunk + produced);
  }
  if (ret != LZMA_STREAM_END) {
    throw CorruptionError("EXGS: LZMA stream error (code " + std::to_string(static_cast<int>(ret)) + ")");
  }
  if (strm.avail_in != 0) throw CorruptionError("EXGS: trailing bytes after LZMA stream");
  if (out.size() != expected) {
    throw CorruptionError("EXGS: decoded payload is " + std::to_string(out.size()) + " bytes, expected " +
                          std::to_string(expected));
  }
  return out;
}

}  // namespace

bool looks_like_exgs(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 4 && std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin());
}

ExgsHeader read_exgs_header(std::span<const std::uint8_t> bytes) {
  if (!looks_like_exgs(bytes)) throw FormatError("EXGS: bad magic");
  if (bytes.size() < kExgsHeaderBytes) throw CorruptionError("EXGS: truncated header");
  ExgsHeader h;
  h.version = le::load_u16(bytes.data() + 4);
  h.flags = le::load_u16(bytes.data() + 6);
  h.count = le::load_u32(bytes.data() + 8);
  h.sh_degree = bytes[12];
  if (h.version == 0) throw FormatError("EXGS: version 0 is invalid");
  if (h.version > kExgsVersion) throw UnsupportedVersionError("EXGS: unsupported version " + std::to_string(h.version));
  if (h.sh_degree != 0) throw FormatError("EXGS: sh_degree must be 0");
  for (std::size_t i = 13; i < kExgsHeaderBytes; ++i)
    if (bytes[i] != 0) throw FormatError("EXGS: reserved header bytes are not zero");
  if (h.flags & ~(kExgsFlagLzma | kExgsFlagRaw)) throw FormatError("EXGS: unknown flag bits");
  const bool lzma = h.flags & kExgsFlagLzma;
  const bool raw = h.flags & kExgsFlagRaw;
  if (h.count > 0 && lzma == raw) throw CorruptionError("EXGS: exactly one payload flag must be set");
  if (h.count == 0 && h.flags != 0) throw CorruptionError("EXGS: empty scene with payload flags");
  return h;
}

std::vector<std::uint8_t> compress(const GaussianCloud& cloud, const CompressOptions& options) {
  cloud.validate();
  if (options.lzma_preset > 9) {
    throw InvalidParameterError("EXGS: LZMA preset must be 0-9, got " + std::to_string(options.lzma_preset));
  }
  const std::size_t n = cloud.size();
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw CapacityError("EXGS: " + std::to_string(n) + " Gaussians exceed the u32 count field");
  }

  std::vector<std::uint8_t> raw(n * kExgsValuesPerGaussian * 2);
  std::uint8_t* p = raw.data();
  for (const std::vector<float>* array : payload_arrays(cloud)) {
    for (float v : *array) {
      le::store_u16(p, float_to_half(v));
      p += 2;
    }
  }

  std::vector<std::uint8_t> out(kExgsHeaderBytes, 0);
  std::copy(std::begin(kMagic), std::end(kMagic), out.begin());
  le::store_u16(out.data() + 4, kExgsVersion);
  le::store_u32(out.data() + 8, static_cast<std::uint32_t>(n));
  if (n == 0) return out;

  std::vector<std::uint8_t> packed = xz_encode(raw, options.lzma_preset);
  std::uint16_t flags = kExgsFlagLzma;
  if (packed.size() > raw.size()) {
    packed = std::move(raw);
    flags = kExgsFlagRaw;
  }
  le::store_u16(out.data() + 6, flags);
  out.insert(out.end(), packed.begin(), packed.end());
  return out;
}

GaussianCloud decompress(std::span<const std::uint8_t> bytes) {
  const ExgsHeader h = read_exgs_header(bytes);
  const std::span<const std::uint8_t> payload = bytes.subspan(kExgsHeaderBytes);
  const std::size_t expected = static_cast<std::size_t>(h.count) * kExgsValuesPerGaussian * 2;

  std::vector<std::uint8_t> decoded;
  if (h.count == 0) {
    if (!payload.empty()) throw CorruptionError("EXGS: payload present for an empty scene");
  } else if (h.flags & kExgsFlagRaw) {
    if (payload.size() != expected) {
      throw CorruptionError("EXGS: raw payload is " + std::to_string(payload.size()) + " bytes, expected " +
                            std::to_string(expected));
    }
    decoded.assign(payload.begin(), payload.end());
  } else {
    decoded = xz_decode(payload, expected);
  }

  GaussianCloud cloud(h.count, 0);
  const std::uint8_t* p = decoded.data();
  for (std::vector<float>* array : payload_arrays(cloud)) {
    for (float& v : *array) {
      v = half_to_float(le::load_u16(p));
      p += 2;
    }
  }
  return cloud;
}

GaussianCloud half_round_trip(const GaussianCloud& cloud) {
  GaussianCloud out = cloud;
  out.sh_degree = 0;
  out.sh_rest.clear();
  for (std::vector<float>* array : payload_arrays(out))
    for (float& v : *array) v = round_to_half(v);
  return out;
}

RatioReport ratio_report(std::uint64_t original_bytes, std::uint64_t compressed_bytes) {
  if (compressed_bytes == 0) throw InvalidParameterError("ratio_report: compressed size is zero");
  if (original_bytes == 0) throw InvalidParameterError("ratio_report: original size is zero");
  RatioReport r;
  r.original_bytes = original_bytes;
  r.compressed_bytes = compressed_bytes;
  r.ratio = static_cast<double>(original_bytes) / static_cast<double>(compressed_bytes);
  r.original_mb = static_cast<double>(original_bytes) / 1e6;
  r.compressed_mb = static_cast<double>(compressed_bytes) / 1e6;
  return r;
}

}  // namespace exgs
