#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exgs/gaussian.hpp"

namespace exgs {

// xorshift64* (Vigna 2014) seeded through one splitmix64 step, so every implementation
// that follows this definition reproduces the same scenes:
//   state = splitmix64(seed)            (0 is remapped to 0x9E3779B97F4A7C15)
//   next: x ^= x >> 12; x ^= x << 25; x ^= x >> 27; return x * 0x2545F4914F6CDD1D
//   uniform() = (next() >> 11) * 2^-53
class XorShift64Star {
 public:
  explicit XorShift64Star(std::uint64_t seed);
  std::uint64_t next();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double normal();                        // Box-Muller, one value per call

 private:
  std::uint64_t state_;
};

enum class SceneKind : std::uint8_t { TexturedRoom, RandomBlob, PlanarGrid };

struct SynthSpec {
  SceneKind kind = SceneKind::TexturedRoom;
  std::size_t gaussian_count = 10000;
  std::uint64_t seed = 1;
  double extent = 4.0;
  int sh_degree = 3;
};

// textured-room: Gaussians on the six inner faces of a cube of edge `extent` centred at the
//   origin, flattened along the face normal, with smoothly varying DC colour.
// planar-grid: ceil(sqrt(n)) x ceil(sqrt(n)) lattice spanning [-extent/2, extent/2]^2 in the
//   z = 0 plane (row-major, first n points).
// random-blob: uniform in a ball of radius extent/2.
GaussianCloud make_scene(const SynthSpec& spec);

struct Intrinsics {
  int width = 256;
  int height = 256;
  double fx = 256.0;
  double fy = 256.0;
  double cx = 128.0;
  double cy = 128.0;
};

// n cameras on the circle target + radius (cos a, sin a, 0), a = 2 pi k / n, each looking at
// the target with world +z as up.
std::vector<Camera> make_orbit_cameras(int n, double radius, const Vec3& target, const Intrinsics& intrinsics);

// Look-at extrinsics (OpenCV camera axes) for a single pose.
Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, const Intrinsics& intrinsics);

SceneKind parse_scene_kind(const std::string& text);

}  // namespace exgs
