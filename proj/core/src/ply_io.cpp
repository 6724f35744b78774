#include "exgs/ply_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>

#include "exgs/byte_order.hpp"
#include "exgs/error.hpp"

namespace exgs {

namespace {

std::size_t type_size(PlyLayout::Type t) {
  switch (t) {
    case PlyLayout::Type::Int8:
    case PlyLayout::Type::UInt8:
      return 1;
    case PlyLayout::Type::Int16:
    case PlyLayout::Type::UInt16:
      return 2;
    case PlyLayout::Type::Int32:
    case PlyLayout::Type::UInt32:
    case PlyLayout::Type::Float32:
      return 4;
    case PlyLayout::Type::Float64:
      return 8;
  }
  return 0;
}

std::optional<PlyLayout::Type> parse_type(std::string_view s) {
  using T = PlyLayout::Type;
  static const std::map<std::string_view, T> kTypes = {
      {"char", T::Int8},     {"int8", T::Int8},       {"uchar", T::UInt8},  {"uint8", T::UInt8},
      {"short", T::Int16},   {"int16", T::Int16},     {"ushort", T::UInt16}, {"uint16", T::UInt16},
      {"int", T::Int32},     {"int32", T::Int32},     {"uint", T::UInt32},  {"uint32", T::UInt32},
      {"float", T::Float32}, {"float32", T::Float32}, {"double", T::Float64}, {"float64", T::Float64}};
  const auto it = kTypes.find(s);
  if (it == kTypes.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) words.push_back(line.substr(start, i - start));
  }
  return words;
}

std::string rest_name(int k) { return "f_rest_" + std::to_string(k); }

// Canonical property names in output order for a given SH degree.
std::vector<std::string> canonical_names(int sh_degree) {
  std::vector<std::string> names = {"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"};
  for (int k = 0; k < sh_rest_count(sh_degree); ++k) names.push_back(rest_name(k));
  for (const char* n : {"opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3"}) {
    names.emplace_back(n);
  }
  return names;
}

}  // namespace

std::size_t PlyLayout::stride() const {
  std::size_t s = 0;
  for (const auto& p : properties) s += type_size(p.type);
  return s;
}

PlyLayout parse_ply_header(std::span<const std::uint8_t> bytes) {
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  if (text.size() < 4 || text.substr(0, 3) != "ply" || (text[3] != '\n' && text[3] != '\r')) {
    throw FormatError("PLY: missing 'ply' magic");
  }

  PlyLayout layout;
  bool saw_format = false;
  bool in_vertex = false;
  bool saw_vertex = false;
  std::size_t pos = 0;
  while (true) {
    const std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) throw FormatError("PLY: header is not terminated by end_header");
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto words = split_words(line);
    if (words.empty() || words[0] == "ply" || words[0] == "comment" || words[0] == "obj_info") continue;

    if (words[0] == "end_header") break;
    if (words[0] == "format") {
      if (words.size() < 2) throw FormatError("PLY: malformed format line");
      if (words[1] == "ascii") throw UnsupportedFormatError("PLY: ascii format is not supported");
      if (words[1] != "binary_little_endian") {
        throw UnsupportedFormatError("PLY: unsupported format '" + std::string(words[1]) + "'");
      }
      saw_format = true;
    } else if (words[0] == "element") {
      if (words.size() != 3) throw FormatError("PLY: malformed element line");
      if (words[1] == "vertex") {
        std::size_t count = 0;
        const auto [ptr, ec] = std::from_chars(words[2].data(), words[2].data() + words[2].size(), count);
        if (ec != std::errc() || ptr != words[2].data() + words[2].size()) {
          throw FormatError("PLY: bad vertex count");
        }
        layout.vertex_count = count;
        in_vertex = true;
        saw_vertex = true;
      } else {
        // Elements after the vertex block are never read; ones before it would shift the body.
        if (!saw_vertex) {
          throw UnsupportedFormatError("PLY: element '" + std::string(words[1]) + "' before vertex");
        }
        in_vertex = false;
      }
    } else if (words[0] == "property") {
      if (!in_vertex) continue;
      if (words.size() >= 2 && words[1] == "list") {
        throw UnsupportedFormatError("PLY: list properties are not supported on vertex");
      }
      if (words.size() != 3) throw FormatError("PLY: malformed property line");
      const auto type = parse_type(words[1]);
      if (!type) throw FormatError("PLY: unknown property type '" + std::string(words[1]) + "'");
      layout.properties.push_back({std::string(words[2]), *type});
    } else {
      throw FormatError("PLY: unexpected header line '" + std::string(line) + "'");
    }
  }
  if (!saw_format) throw FormatError("PLY: missing format line");
  if (!saw_vertex) throw SchemaError("PLY: no vertex element");
  layout.header_bytes = pos;
  return layout;
}

GaussianCloud load_ply(std::span<const std::uint8_t> bytes, std::vector<std::string>* warnings) {
  const PlyLayout layout = parse_ply_header(bytes);

  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < layout.properties.size(); ++i) {
    if (!index_of.emplace(layout.properties[i].name, i).second) {
      throw SchemaError("PLY: duplicate property '" + layout.properties[i].name + "'");
    }
  }

  int rest_count = 0;
  while (index_of.count(rest_name(rest_count))) ++rest_count;
  int sh_degree = -1;
  for (int d = 0; d <= kMaxShDegree; ++d)
    if (sh_rest_count(d) == rest_count) sh_degree = d;
  if (sh_degree < 0) {
    throw SchemaError("PLY: " + std::to_string(rest_count) + " f_rest properties do not match an SH degree");
  }

  const std::size_t stride = layout.stride();
  if (stride != 0 && layout.vertex_count > std::numeric_limits<std::size_t>::max() / stride) {
    throw FormatError("PLY: vertex count overflows");
  }
  const std::size_t body = layout.vertex_count * stride;
  const std::size_t available = bytes.size() - layout.header_bytes;
  if (available < body) throw TruncationError("PLY body", body, available);
  if (available > body && warnings) warnings->push_back("PLY: ignoring trailing bytes after vertex data");

  // Destination of each property: (array, component stride, component offset).
  struct Slot {
    std::vector<float>* target = nullptr;
    std::size_t stride = 0;
    std::size_t offset = 0;
  };
  GaussianCloud cloud(layout.vertex_count, sh_degree);
  std::vector<Slot> slots(layout.properties.size());
  std::vector<std::string> missing;
  auto bind = [&](const std::string& name, std::vector<float>& target, std::size_t step, std::size_t offset) {
    const auto it = index_of.find(name);
    if (it == index_of.end()) {
      missing.push_back(name);
      return;
    }
    if (layout.properties[it->second].type != PlyLayout::Type::Float32) {
      throw SchemaError("PLY: property '" + name + "' must be float");
    }
    slots[it->second] = Slot{&target, step, offset};
  };
  for (int k = 0; k < 3; ++k) {
    bind(std::string(1, "xyz"[k]), cloud.means, 3, k);
    bind("f_dc_" + std::to_string(k), cloud.sh_dc, 3, k);
    bind("scale_" + std::to_string(k), cloud.scale_log, 3, k);
  }
  bind("opacity", cloud.opacity_logit, 1, 0);
  for (int k = 0; k < 4; ++k) bind("rot_" + std::to_string(k), cloud.rotations, 4, k);
  for (int k = 0; k < rest_count; ++k) bind(rest_name(k), cloud.sh_rest, rest_count, k);
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw SchemaError("PLY: missing required properties: " + list);
  }
  if (warnings) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto& name = layout.properties[i].name;
      if (!slots[i].target && name != "nx" && name != "ny" && name != "nz") {
        warnings->push_back("PLY: skipping unknown property '" + name + "'");
      }
    }
  }


  std::vector<std::size_t> offsets(layout.properties.size());
  for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] = offsets[i - 1] + type_size(layout.properties[i - 1].type);

  const std::uint8_t* base = bytes.data() + layout.header_bytes;
  for (std::size_t v = 0; v < layout.vertex_count; ++v) {
    const std::uint8_t* row = base + v * stride;
    for (std::size_t p = 0; p < slots.size(); ++p) {
      const Slot& s = slots[p];
      if (s.target) (*s.target)[v * s.stride + s.offset] = le::load_f32(row + offsets[p]);
    }
  }
  return cloud;
}

std::size_t ply_body_bytes(std::size_t count, int sh_degree) {
  return count * 4 * canonical_names(sh_degree).size();
}

std::vector<std::uint8_t> save_ply(const GaussianCloud& cloud) {
  cloud.validate();
  const auto names = canonical_names(cloud.sh_degree);
  std::ostringstream header;
  header << "ply\nformat binary_little_endian 1.0\nelement vertex " << cloud.size() << "\n";
  for (const auto& n : names) header << "property float " << n << "\n";
  header << "end_header\n";
  const std::string h = header.str();

  const std::size_t n = cloud.size();
  const std::size_t rest = static_cast<std::size_t>(cloud.rest_per_gaussian());
  std::vector<std::uint8_t> out(h.size() + ply_body_bytes(n, cloud.sh_degree));
  std::copy(h.begin(), h.end(), out.begin());
  std::uint8_t* p = out.data() + h.size();
  auto put = [&p](float v) {
    le::store_f32(p, v);
    p += 4;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 3; ++k) put(cloud.means[3 * i + k]);
    for (int k = 0; k < 3; ++k) put(0.0f);
    for (int k = 0; k < 3; ++k) put(cloud.sh_dc[3 * i + k]);
    for (std::size_t k = 0; k < rest; ++k) put(cloud.sh_rest[rest * i + k]);
    put(cloud.opacity_logit[i]);
    for (int k = 0; k < 3; ++k) put(cloud.scale_log[3 * i + k]);
    for (int k = 0; k < 4; ++k) put(cloud.rotations[4 * i + k]);
  }
  return out;
}

}  // namespace exgs
