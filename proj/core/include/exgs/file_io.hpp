#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace exgs {

// Whole-file helpers. Failures throw IoError naming the path.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it into place, so readers never
// observe a partially written file.
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path& path, std::string_view text);

// Flat binary vectors: u32 LE count, then count little-endian 4-byte values.
std::vector<std::uint8_t> encode_f32_vector(std::span<const float> values);
std::vector<float> decode_f32_vector(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_u32_vector(std::span<const std::uint32_t> values);
std::vector<std::uint32_t> decode_u32_vector(std::span<const std::uint8_t> bytes);

}  // namespace exgs
