#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "exgs/math.hpp"

namespace exgs {

// Degree-0 spherical harmonic basis constant, 1 / (2 sqrt(pi)).
inline constexpr double kShC0 = 0.28209479177387814;

inline constexpr int kMaxShDegree = 3;

// Number of higher-order SH coefficients per Gaussian (all three colour channels) for a degree.
constexpr int sh_rest_count(int sh_degree) { return 3 * ((sh_degree + 1) * (sh_degree + 1) - 1); }

// One Gaussian in storage (pre-activation) form, as found in 3DGS PLY files.
struct Gaussian {
  std::array<float, 3> mean{};
  std::array<float, 3> scale_log{};
  std::array<float, 4> rotation{1.0f, 0.0f, 0.0f, 0.0f};  // (w, x, y, z), unnormalized
  float opacity_logit = 0.0f;
  std::array<float, 3> sh_dc{};
};

// Structure-of-arrays scene. Attribute arrays are flat; the i-th Gaussian occupies
// [3i, 3i+3) of means/scale_log/sh_dc, [4i, 4i+4) of rotations, and
// [R*i, R*i+R) of sh_rest where R = sh_rest_count(sh_degree). sh_rest keeps the
// PLY f_rest_* order.
struct GaussianCloud {
  int sh_degree = 0;
  std::vector<float> means;
  std::vector<float> scale_log;
  std::vector<float> rotations;
  std::vector<float> opacity_logit;
  std::vector<float> sh_dc;
  std::vector<float> sh_rest;

  GaussianCloud() = default;
  // Zero-filled cloud with identity rotations.
  GaussianCloud(std::size_t count, int sh_degree);

  std::size_t size() const noexcept { return opacity_logit.size(); }
  bool empty() const noexcept { return opacity_logit.empty(); }
  int rest_per_gaussian() const noexcept { return sh_rest_count(sh_degree); }

  Gaussian at(std::size_t i) const;
  void set(std::size_t i, const Gaussian& g);

  // Throws InvalidParameterError when array lengths disagree with size()/sh_degree or a
  // stored value is not finite.
  void validate() const;

  // Sub-cloud of the listed indices, in the order given.
  GaussianCloud select(std::span<const std::uint32_t> indices) const;

  bool operator==(const GaussianCloud&) const = default;
};

// Pinhole camera. world_to_camera is a row-major 4x4 rigid transform into an
// OpenCV-style camera frame (x right, y down, z forward).
struct Camera {
  int width = 0;
  int height = 0;
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  std::array<double, 16> world_to_camera{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};

  Mat3 rotation() const;
  Vec3 translation() const;
  Vec3 to_camera(const Vec3& world) const { return rotation() * world + translation(); }
  // Camera centre in world coordinates.
  Vec3 position() const;

  // Throws InvariantError on nonpositive size/focal length or a non-orthonormal rotation
  // block (tolerance 1e-4 on max |RᵀR - I|).
  void validate() const;

  bool operator==(const Camera&) const = default;
};

Mat3 quaternion_to_rotation(const std::array<float, 4>& wxyz);

// Σ = R S Sᵀ Rᵀ with R from the normalized quaternion and S = diag(exp(scale_log)).
Mat3 activate_covariance(const Gaussian& g);

inline double activate_opacity(double logit) { return 1.0 / (1.0 + std::exp(-logit)); }
inline double opacity_to_logit(double opacity) { return std::log(opacity / (1.0 - opacity)); }

// Degree-0 colour, clamped to [0, 1]. Higher-order SH are never evaluated.
std::array<float, 3> sh_to_color(const std::array<float, 3>& sh_dc);

}  // namespace exgs
