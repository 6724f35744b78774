#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "exgs/gaussian.hpp"

namespace exgs {

// EXGS container layout (all little-endian):
//   0  magic "EXGS"
//   4  u16 version (1)
//   6  u16 flags: bit 0 = payload is an XZ/LZMA2 stream, bit 1 = payload stored raw
//   8  u32 Gaussian count
//  12  u8  sh_degree (always 0)
//  13  7 reserved zero bytes
//  20  payload
// The decoded payload is binary16 structure-of-arrays: means (3N), sh_dc (3N),
// opacity_logit (N), scale_log (3N), rotation (4N).
inline constexpr std::size_t kExgsHeaderBytes = 20;
inline constexpr std::uint16_t kExgsVersion = 1;
inline constexpr std::uint16_t kExgsFlagLzma = 1u << 0;
inline constexpr std::uint16_t kExgsFlagRaw = 1u << 1;
inline constexpr std::size_t kExgsValuesPerGaussian = 14;

struct CompressOptions {
  std::uint32_t lzma_preset = 6;
};

struct ExgsHeader {
  std::uint16_t version = kExgsVersion;
  std::uint16_t flags = 0;
  std::uint32_t count = 0;
  std::uint8_t sh_degree = 0;
};

std::vector<std::uint8_t> compress(const GaussianCloud& cloud, const CompressOptions& options = {});
GaussianCloud decompress(std::span<const std::uint8_t> bytes);

// Validates magic, version and reserved bytes; throws FormatError / UnsupportedVersionError.
ExgsHeader read_exgs_header(std::span<const std::uint8_t> bytes);
bool looks_like_exgs(std::span<const std::uint8_t> bytes);

// What decompress(compress(cloud)) returns: SH truncated to degree 0 and every retained
// value rounded to binary16.
GaussianCloud half_round_trip(const GaussianCloud& cloud);

struct RatioReport {
  double ratio = 0.0;
  std::uint64_t original_bytes = 0;
  std::uint64_t compressed_bytes = 0;
  double original_mb = 0.0;    // 1 MB = 1e6 bytes
  double compressed_mb = 0.0;
};

RatioReport ratio_report(std::uint64_t original_bytes, std::uint64_t compressed_bytes);

}  // namespace exgs
