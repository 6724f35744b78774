#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <lzma.h>
#include <random>

#include "exgs/codec.hpp"
#include "exgs/error.hpp"
#include "exgs/half.hpp"
#include "test_support.hpp"

using namespace exgs;

namespace {

const fixtures::HalfOracle& oracle() {
  static const fixtures::HalfOracle o;
  return o;
}

GaussianCloud extreme_cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GaussianCloud c = fixtures::random_cloud(rng, n, 3);
  const float specials[] = {1e9f, -1e9f, 65504.0f, 65520.0f, -70000.0f, 1e-8f, -6e-8f, 3e-5f, 0.0f, -0.0f};
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 3 == 0) c.opacity_logit[i] = specials[i % 10];
    if (i % 5 == 1) c.scale_log[3 * i] = -20.0f;  // tiny scale
    if (i % 7 == 2) c.means[3 * i + 1] = specials[(i / 7) % 10];
  }
  return c;
}

void expect_quantized(const std::vector<float>& decoded, const std::vector<float>& source) {
  ASSERT_EQ(decoded.size(), source.size());
  for (std::size_t i = 0; i < source.size(); ++i)
    EXPECT_EQ(fixtures::float_bits(decoded[i]), fixtures::float_bits(oracle().round(source[i])))
        << "value " << source[i] << " at " << i;
}

std::vector<std::uint8_t> xz_decode(std::span<const std::uint8_t> in) {
  std::vector<std::uint8_t> out(1 << 20);
  std::size_t in_pos = 0, out_pos = 0;
  std::uint64_t limit = UINT64_MAX;
  EXPECT_EQ(lzma_stream_buffer_decode(&limit, 0, nullptr, in.data(), &in_pos, in.size(), out.data(), &out_pos,
                                      out.size()),
            LZMA_OK);
  out.resize(out_pos);
  return out;
}

}  // namespace

TEST(Half, MatchesBruteForceOracleOnEveryHalfAndMidpoint) {
  for (std::uint32_t h = 0; h < 0x7C00; ++h) {
    const double v = fixtures::HalfOracle::widen(h);
    const double next = fixtures::HalfOracle::widen(h + 1);
    for (double x : {v, 0.5 * (v + next), v + 0.25 * (next - v), v + 0.75 * (next - v)}) {
      const float f = static_cast<float>(x);
      for (float s : {f, -f}) EXPECT_EQ(fixtures::float_bits(round_to_half(s)), fixtures::float_bits(oracle().round(s))) << s;
    }
  }
}

TEST(Half, MatchesOracleOnRandomFloats) {
  std::mt19937 rng(51);
  for (int i = 0; i < 200000; ++i) {
    const std::uint32_t bits = rng();
    float f;
    std::memcpy(&f, &bits, 4);
    if (std::isnan(f)) continue;
    ASSERT_EQ(fixtures::float_bits(round_to_half(f)), fixtures::float_bits(oracle().round(f))) << f;
  }
}

TEST(Half, SpecialValues) {
  EXPECT_EQ(float_to_half(0.0f), 0x0000);
  EXPECT_EQ(float_to_half(-0.0f), 0x8000);
  EXPECT_EQ(float_to_half(1.0f), 0x3C00);
  EXPECT_EQ(float_to_half(65504.0f), 0x7BFF);
  EXPECT_EQ(float_to_half(INFINITY), 0x7C00);
  EXPECT_EQ(float_to_half(-1e10f), 0xFC00);
  EXPECT_TRUE(std::isnan(half_to_float(float_to_half(NAN))));
  EXPECT_EQ(half_to_float(0x0001), std::ldexp(1.0f, -24));
}

TEST(Codec, EmptyCloudIsHeaderOnly) {
  const auto bytes = compress(GaussianCloud(0, 3));
  ASSERT_EQ(bytes.size(), kExgsHeaderBytes);
  EXPECT_EQ(std::memcmp(bytes.data(), "EXGS", 4), 0);
  const ExgsHeader h = read_exgs_header(bytes);
  EXPECT_EQ(h.flags, 0);
  EXPECT_EQ(h.count, 0u);
  const GaussianCloud back = decompress(bytes);
  EXPECT_EQ(back.size(), 0u);
  EXPECT_EQ(back.sh_degree, 0);
}

TEST(Codec, HeaderLayout) {
  std::mt19937_64 rng(52);
  const auto bytes = compress(fixtures::random_cloud(rng, 7, 3));
  EXPECT_EQ(bytes[4] | (bytes[5] << 8), 1);
  const std::uint16_t flags = static_cast<std::uint16_t>(bytes[6] | (bytes[7] << 8));
  EXPECT_TRUE(flags == kExgsFlagLzma || flags == kExgsFlagRaw);
  EXPECT_EQ(bytes[8] | (bytes[9] << 8) | (bytes[10] << 16) | (bytes[11] << 24), 7);
  for (int i = 12; i < 20; ++i) EXPECT_EQ(bytes[i], 0) << i;
}

TEST(Codec, ThousandGaussianPayloadSize) {
  std::mt19937_64 rng(53);
  const auto bytes = compress(fixtures::random_cloud(rng, 1000, 3));
  ASSERT_EQ(read_exgs_header(bytes).flags, kExgsFlagLzma);
  const auto payload = xz_decode(std::span(bytes).subspan(kExgsHeaderBytes));
  EXPECT_EQ(payload.size(), 28000u);
}

TEST(Codec, PayloadIsHalfStructureOfArrays) {
  GaussianCloud c(2, 0);
  c.means = {1, 2, 3, 4, 5, 6};
  c.sh_dc = {7, 8, 9, 10, 11, 12};
  c.opacity_logit = {13, 14};
  c.scale_log = {15, 16, 17, 18, 19, 20};
  c.rotations = {21, 22, 23, 24, 25, 26, 27, 28};
  const auto bytes = compress(c);
  const auto payload = read_exgs_header(bytes).flags == kExgsFlagRaw
                           ? std::vector<std::uint8_t>(bytes.begin() + 20, bytes.end())
                           : xz_decode(std::span(bytes).subspan(kExgsHeaderBytes));
  ASSERT_EQ(payload.size(), 56u);
  for (int i = 0; i < 28; ++i) {
    const std::uint16_t h = static_cast<std::uint16_t>(payload[2 * i] | (payload[2 * i + 1] << 8));
    EXPECT_EQ(half_to_float(h), static_cast<float>(i + 1)) << i;
  }
}

TEST(Codec, RoundTripEqualsHalfQuantization) {
  for (std::size_t n : {0u, 1u, 7u, 1000u}) {
    const GaussianCloud c = extreme_cloud(n, 54 + n);
    const GaussianCloud back = decompress(compress(c));
    ASSERT_EQ(back.size(), n);
    EXPECT_EQ(back.sh_degree, 0);
    EXPECT_TRUE(back.sh_rest.empty());
    expect_quantized(back.means, c.means);
    expect_quantized(back.sh_dc, c.sh_dc);
    expect_quantized(back.opacity_logit, c.opacity_logit);
    expect_quantized(back.scale_log, c.scale_log);
    expect_quantized(back.rotations, c.rotations);
    EXPECT_EQ(back, half_round_trip(c));
  }
}

TEST(Codec, IncompressibleInputFallsBackToRaw) {
  std::mt19937_64 rng(55);
  GaussianCloud c(1, 0);
  for (auto* v : {&c.means, &c.sh_dc, &c.scale_log, &c.rotations, &c.opacity_logit})
    for (auto& x : *v) x = static_cast<float>(rng() % 1000) / 7.0f;
  const auto bytes = compress(c);
  EXPECT_EQ(read_exgs_header(bytes).flags, kExgsFlagRaw);
  EXPECT_EQ(bytes.size(), kExgsHeaderBytes + 28);
  EXPECT_EQ(decompress(bytes), half_round_trip(c));
}

TEST(Codec, PresetChangesSizeNotContent) {
  std::mt19937_64 rng(56);
  const GaussianCloud c = fixtures::random_cloud(rng, 2000);
  const auto fast = compress(c, {0});
  const auto best = compress(c, {9});
  EXPECT_EQ(decompress(fast), decompress(best));
  EXPECT_THROW(compress(c, {10}), InvalidParameterError);
}

TEST(Codec, CompressIsDeterministic) {
  std::mt19937_64 rng(57);
  const GaussianCloud c = fixtures::random_cloud(rng, 3000, 3);
  EXPECT_EQ(compress(c), compress(c));
}

TEST(CodecErrors, BadMagic) {
  std::mt19937_64 rng(58);
  auto bytes = compress(fixtures::random_cloud(rng, 10));
  bytes[3] = 'T';
  EXPECT_THROW(decompress(bytes), FormatError);
  EXPECT_FALSE(looks_like_exgs(bytes));
}

TEST(CodecErrors, VersionChecks) {
  auto bytes = compress(GaussianCloud(0, 0));
  bytes[4] = 2;
  EXPECT_THROW(decompress(bytes), UnsupportedVersionError);
  bytes[4] = 0;
  EXPECT_THROW(decompress(bytes), FormatError);
}

TEST(CodecErrors, ReservedAndFlagBits) {
  std::mt19937_64 rng(59);
  const auto good = compress(fixtures::random_cloud(rng, 10));
  auto bytes = good;
  bytes[15] = 1;
  EXPECT_THROW(decompress(bytes), FormatError);
  bytes = good;
  bytes[12] = 3;
  EXPECT_THROW(decompress(bytes), FormatError);
  bytes = good;
  bytes[6] |= 0x80;
  EXPECT_THROW(decompress(bytes), FormatError);
  bytes = good;
  bytes[6] = kExgsFlagLzma | kExgsFlagRaw;
  EXPECT_THROW(decompress(bytes), CorruptionError);
}

TEST(CodecErrors, EveryTruncationIsTyped) {
  std::mt19937_64 rng(60);
  const auto good = compress(fixtures::random_cloud(rng, 50));
  for (std::size_t len = 0; len < good.size(); ++len) {
    const std::vector<std::uint8_t> cut(good.begin(), good.begin() + static_cast<long>(len));
    EXPECT_THROW(decompress(cut), FormatError) << "length " << len;
  }
  EXPECT_THROW(decompress(std::vector<std::uint8_t>(good.begin(), good.end() - 1)), CorruptionError);
}

TEST(CodecErrors, FlippedStreamBytesAreDetected) {
  std::mt19937_64 rng(61);
  const GaussianCloud c = fixtures::random_cloud(rng, 200);
  const auto good = compress(c);
  ASSERT_EQ(read_exgs_header(good).flags, kExgsFlagLzma);
  for (std::size_t pos = kExgsHeaderBytes; pos < good.size(); ++pos) {
    for (std::uint8_t mask : {0x01, 0x80}) {
      auto bad = good;
      bad[pos] ^= mask;
      EXPECT_THROW(decompress(bad), CorruptionError) << "byte " << pos;
    }
  }
}

TEST(CodecErrors, CountMismatchAndTrailingData) {
  std::mt19937_64 rng(62);
  auto bytes = compress(fixtures::random_cloud(rng, 50));
  auto more = bytes;
  more[8] = 51;
  EXPECT_THROW(decompress(more), CorruptionError);
  auto fewer = bytes;
  fewer[8] = 49;
  EXPECT_THROW(decompress(fewer), CorruptionError);
  auto huge = bytes;
  huge[11] = 0xFF;
  EXPECT_THROW(decompress(huge), CorruptionError);
  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_THROW(decompress(trailing), CorruptionError);
}

TEST(Ratio, Examples) {
  const RatioReport r = ratio_report(354770000, 3310000);
  EXPECT_NEAR(r.ratio, 107.2, 0.05);
  EXPECT_NEAR(r.original_mb, 354.77, 1e-9);
  EXPECT_NEAR(r.compressed_mb, 3.31, 1e-9);
  EXPECT_DOUBLE_EQ(ratio_report(1234, 1234).ratio, 1.0);
  EXPECT_NEAR(ratio_report(248000, 28020).ratio, 8.85, 0.005);
  EXPECT_THROW(ratio_report(10, 0), InvalidParameterError);
  EXPECT_THROW(ratio_report(0, 10), InvalidParameterError);
}
