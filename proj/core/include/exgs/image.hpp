#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace exgs {

// Interleaved float image, row-major, values nominally in [0, 1].
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  Image() = default;
  Image(int w, int h, int c, float fill = 0.0f);

  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width) * height; }
  bool same_shape(const Image& o) const noexcept {
    return width == o.width && height == o.height && channels == o.channels;
  }

  float& at(int x, int y, int c = 0) { return data[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  float at(int x, int y, int c = 0) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  bool operator==(const Image&) const = default;
};

// 8-bit quantization used for PNG output: clamp to [0, 1], scale by 255, round half away
// from zero.
std::uint8_t quantize_u8(float v);

// 8-bit PNG encode/decode. Channels 1 (gray) and 3 (RGB) are written; decoding converts
// any PNG to the requested channel count (1 or 3), dropping alpha.
std::vector<std::uint8_t> encode_png(const Image& image);
Image decode_png(std::span<const std::uint8_t> bytes, int channels);
void write_png(const std::filesystem::path& path, const Image& image);
Image read_png(const std::filesystem::path& path, int channels);

// Channel-mean grayscale.
Image to_gray(const Image& image);

// Bilinear resample with pixel-centre alignment.
Image resize_bilinear(const Image& image, int width, int height);

}  // namespace exgs
