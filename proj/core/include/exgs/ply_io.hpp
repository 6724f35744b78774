#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "exgs/gaussian.hpp"

namespace exgs {

// Parsed header of a 3DGS PLY file.
struct PlyLayout {
  enum class Type : std::uint8_t { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

  struct Property {
    std::string name;
    Type type = Type::Float32;
  };

  std::size_t vertex_count = 0;
  std::vector<Property> properties;  // file order
  std::size_t header_bytes = 0;      // through the newline after end_header

  std::size_t stride() const;
};

// Parses the textual header. Throws FormatError on bad magic, UnsupportedFormatError for
// ascii/big-endian bodies or list properties.
PlyLayout parse_ply_header(std::span<const std::uint8_t> bytes);

// Reads a binary little-endian 3DGS PLY. Normals are dropped and unknown properties are
// skipped; each skipped property adds a line to `warnings` when it is non-null.
GaussianCloud load_ply(std::span<const std::uint8_t> bytes, std::vector<std::string>* warnings = nullptr);

// Canonical 3DGS layout: x y z nx ny nz f_dc_0..2 f_rest_* opacity scale_0..2 rot_0..3,
// with zero normals.
std::vector<std::uint8_t> save_ply(const GaussianCloud& cloud);

// Byte size of save_ply's body for a cloud (count * 4 * property count).
std::size_t ply_body_bytes(std::size_t count, int sh_degree);

}  // namespace exgs
