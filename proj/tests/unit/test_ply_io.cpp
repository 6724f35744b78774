#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "exgs/error.hpp"
#include "exgs/ply_io.hpp"
#include "test_support.hpp"

using namespace exgs;

namespace {

std::vector<std::string> standard_properties() {
  std::vector<std::string> names{"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"};
  for (int i = 0; i < 45; ++i) names.push_back("f_rest_" + std::to_string(i));
  for (const char* n : {"opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3"}) names.push_back(n);
  return names;
}

std::string header_for(std::size_t count, const std::vector<std::string>& names, const std::string& type = "float") {
  std::string h = "ply\nformat binary_little_endian 1.0\nelement vertex " + std::to_string(count) + "\n";
  for (const auto& n : names) h += "property " + type + " " + n + "\n";
  return h + "end_header\n";
}

void append_float(std::vector<std::uint8_t>& out, float v) {
  std::uint8_t b[4];
  std::memcpy(b, &v, 4);
  out.insert(out.end(), b, b + 4);  // host is little-endian (checked below)
}

// One vertex; property k holds the value 0.25 * k, except normals (0) and rotation (w=1).
std::vector<std::uint8_t> one_vertex_fixture() {
  const auto names = standard_properties();
  const std::string h = header_for(1, names);
  std::vector<std::uint8_t> bytes(h.begin(), h.end());
  for (std::size_t k = 0; k < names.size(); ++k) {
    float v = 0.25f * static_cast<float>(k);
    if (names[k][0] == 'n') v = 0.0f;
    append_float(bytes, v);
  }
  return bytes;
}

}  // namespace

TEST(Ply, HostIsLittleEndian) {
  const std::uint32_t probe = 1;
  std::uint8_t first;
  std::memcpy(&first, &probe, 1);
  ASSERT_EQ(first, 1) << "fixtures below assume a little-endian host";
}

TEST(Ply, LoadsHandBuiltFixture) {
  const auto names = standard_properties();
  ASSERT_EQ(names.size(), 62u);
  const auto bytes = one_vertex_fixture();
  EXPECT_EQ(bytes.size() - header_for(1, names).size(), 248u);

  const GaussianCloud c = load_ply(bytes);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.sh_degree, 3);
  EXPECT_EQ(c.means, (std::vector<float>{0.0f, 0.25f, 0.5f}));
  EXPECT_EQ(c.sh_dc, (std::vector<float>{1.5f, 1.75f, 2.0f}));
  EXPECT_EQ(c.sh_rest.front(), 2.25f);
  EXPECT_EQ(c.sh_rest.back(), 0.25f * 53);
  EXPECT_EQ(c.opacity_logit[0], 0.25f * 54);
  EXPECT_EQ(c.scale_log, (std::vector<float>{0.25f * 55, 0.25f * 56, 0.25f * 57}));
  EXPECT_EQ(c.rotations, (std::vector<float>{0.25f * 58, 0.25f * 59, 0.25f * 60, 0.25f * 61}));
}

TEST(Ply, SaveIsByteIdenticalToCanonicalFixture) {
  const auto bytes = one_vertex_fixture();
  EXPECT_EQ(save_ply(load_ply(bytes)), bytes);
}

TEST(Ply, TruncatedBodyIsTypedError) {
  const auto names = standard_properties();
  auto bytes = one_vertex_fixture();
  const std::string two = header_for(2, names);
  const std::string one = header_for(1, names);
  bytes.erase(bytes.begin(), bytes.begin() + static_cast<long>(one.size()));
  bytes.insert(bytes.begin(), two.begin(), two.end());
  try {
    load_ply(bytes);
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_EQ(e.expected_bytes(), 496u);
    EXPECT_EQ(e.actual_bytes(), 248u);
  }
}

TEST(Ply, EmptyCloud) {
  const GaussianCloud empty(0, 3);
  const auto bytes = save_ply(empty);
  const std::string text(bytes.begin(), bytes.end());
  EXPECT_NE(text.find("element vertex 0\n"), std::string::npos);
  EXPECT_EQ(text.substr(text.size() - 11), "end_header\n");
  const GaussianCloud back = load_ply(bytes);
  EXPECT_EQ(back.size(), 0u);
  EXPECT_EQ(back.sh_degree, 3);
}

TEST(Ply, BodySizeForThousandGaussians) {
  std::mt19937_64 rng(3);
  const GaussianCloud c = fixtures::random_cloud(rng, 1000, 3);
  const auto bytes = save_ply(c);
  const std::string header = header_for(1000, standard_properties());
  EXPECT_EQ(bytes.size() - header.size(), 248000u);
  EXPECT_EQ(ply_body_bytes(1000, 3), 248000u);
}

TEST(Ply, RoundTripIsBitExactForEveryDegree) {
  std::mt19937_64 rng(5);
  for (int degree = 0; degree <= 3; ++degree) {
    GaussianCloud c = fixtures::random_cloud(rng, 37, degree);
    c.means[0] = -0.0f;
    c.opacity_logit[1] = 1e-38f;
    const GaussianCloud back = load_ply(save_ply(c));
    EXPECT_EQ(back.sh_degree, degree);
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t i = 0; i < c.means.size(); ++i) EXPECT_EQ(fixtures::float_bits(back.means[i]), fixtures::float_bits(c.means[i]));
    EXPECT_EQ(back, c);
  }
}

TEST(Ply, AcceptsReorderedPropertiesAndWarnsOnUnknown) {
  auto names = standard_properties();
  std::reverse(names.begin(), names.end());
  names.push_back("confidence");
  const std::string h = header_for(1, names);
  std::vector<std::uint8_t> bytes(h.begin(), h.end());
  for (std::size_t k = 0; k < names.size(); ++k) append_float(bytes, names[k] == "x" ? 7.0f : (names[k] == "rot_0" ? 1.0f : 0.0f));
  std::vector<std::string> warnings;
  const GaussianCloud c = load_ply(bytes, &warnings);
  EXPECT_EQ(c.means[0], 7.0f);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("confidence"), std::string::npos);
}

TEST(Ply, TrailingElementsAfterVertexAreIgnored) {
  const auto names = standard_properties();
  std::string h = header_for(1, names);
  h.insert(h.size() - 11, "element face 0\nproperty list uchar int vertex_indices\n");
  std::vector<std::uint8_t> bytes(h.begin(), h.end());
  const auto fixture = one_vertex_fixture();
  bytes.insert(bytes.end(), fixture.end() - 248, fixture.end());
  EXPECT_EQ(load_ply(bytes).size(), 1u);
}

TEST(Ply, SchemaErrorsNameMissingProperties) {
  auto names = standard_properties();
  names.erase(std::find(names.begin(), names.end(), "opacity"));
  names.erase(std::find(names.begin(), names.end(), "scale_2"));
  const std::string h = header_for(1, names);
  std::vector<std::uint8_t> bytes(h.begin(), h.end());
  bytes.resize(bytes.size() + 4 * names.size(), 0);
  try {
    load_ply(bytes);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("opacity"), std::string::npos);
    EXPECT_NE(what.find("scale_2"), std::string::npos);
  }
}

TEST(Ply, RejectsUnsupportedEncodings) {
  const auto names = standard_properties();
  auto to_bytes = [](const std::string& s) { return std::vector<std::uint8_t>(s.begin(), s.end()); };

  std::string ascii = header_for(0, names);
  ascii.replace(ascii.find("binary_little_endian"), 20, "ascii");
  EXPECT_THROW(load_ply(to_bytes(ascii)), UnsupportedFormatError);

  std::string big = header_for(0, names);
  big.replace(big.find("binary_little_endian"), 20, "binary_big_endian");
  EXPECT_THROW(load_ply(to_bytes(big)), UnsupportedFormatError);

  EXPECT_THROW(load_ply(to_bytes("plx\nformat binary_little_endian 1.0\n")), FormatError);
  EXPECT_THROW(load_ply(to_bytes("ply\nformat binary_little_endian 1.0\nelement vertex 1\n")), FormatError);
  EXPECT_THROW(load_ply(to_bytes(header_for(0, names, "double"))), SchemaError);

  auto odd = standard_properties();
  odd.erase(std::find(odd.begin(), odd.end(), "f_rest_44"));
  const std::string h = header_for(0, odd);
  EXPECT_THROW(load_ply(to_bytes(h)), SchemaError);
}

TEST(Ply, HugeDeclaredCountFailsBeforeAllocating) {
  const std::string h = header_for(4000000000ull, standard_properties());
  const std::vector<std::uint8_t> bytes(h.begin(), h.end());
  EXPECT_THROW(load_ply(bytes), TruncationError);
}
