#include "exgs/scene_synth.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "exgs/error.hpp"

namespace exgs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::array<float, 4> random_unit_quaternion(XorShift64Star& rng) {
  double q[4];
  double n = 0.0;
  do {
    n = 0.0;
    for (double& v : q) {
      v = rng.normal();
      n += v * v;
    }
  } while (n < 1e-12);
  n = std::sqrt(n);
  return {static_cast<float>(q[0] / n), static_cast<float>(q[1] / n), static_cast<float>(q[2] / n),
          static_cast<float>(q[3] / n)};
}

// Quaternion (w, x, y, z) rotating +z onto the given axis-aligned face normal.
std::array<double, 4> face_frame(int axis, int sign) {
  const double h = std::sqrt(0.5);
  if (axis == 2) return sign > 0 ? std::array<double, 4>{1, 0, 0, 0} : std::array<double, 4>{0, 1, 0, 0};
  if (axis == 0) return sign > 0 ? std::array<double, 4>{h, 0, h, 0} : std::array<double, 4>{h, 0, -h, 0};
  return sign > 0 ? std::array<double, 4>{h, -h, 0, 0} : std::array<double, 4>{h, h, 0, 0};
}

std::array<double, 4> quat_mul(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3], a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1], a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

// Smooth colour field in [0, 1]^3, converted to SH DC coefficients.
std::array<float, 3> wall_color(const Vec3& p, double extent) {
  const double f = 8.0 * std::numbers::pi / extent;
  const double r = 0.5 + 0.35 * std::sin(1.3 * f * p[0] + 0.4) * std::cos(0.7 * f * p[1]);
  const double g = 0.5 + 0.35 * std::sin(0.9 * f * p[1] + 1.1) * std::cos(1.1 * f * p[2]);
  const double b = 0.5 + 0.35 * std::cos(1.7 * f * p[2] - 0.3) * std::sin(0.8 * f * p[0] + 0.9);
  return {static_cast<float>((r - 0.5) / kShC0), static_cast<float>((g - 0.5) / kShC0),
          static_cast<float>((b - 0.5) / kShC0)};
}

}  // namespace

XorShift64Star::XorShift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
  if (state_ == 0) state_ = 0x9E3779B97F4A7C15ull;
}

std::uint64_t XorShift64Star::next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1Dull;
}

double XorShift64Star::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double XorShift64Star::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double XorShift64Star::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

GaussianCloud make_scene(const SynthSpec& spec) {
  if (spec.gaussian_count == 0) throw InvalidParameterError("make_scene: gaussian_count must be positive");
  if (!(spec.extent > 0.0)) throw InvalidParameterError("make_scene: extent must be positive");

  const std::size_t n = spec.gaussian_count;
  GaussianCloud cloud(n, spec.sh_degree);
  XorShift64Star rng(spec.seed);
  const double e = spec.extent;
  const int rest = cloud.rest_per_gaussian();

  switch (spec.kind) {
    case SceneKind::TexturedRoom: {
      // Mean spacing of n points over the six faces sets the footprint size.
      const double spacing = std::sqrt(6.0 * e * e / static_cast<double>(n));
      for (std::size_t i = 0; i < n; ++i) {
        const int face = static_cast<int>(rng.next() % 6);
        const int axis = face / 2;
        const int sign = (face % 2) ? 1 : -1;
        Vec3 p{};
        for (int k = 0; k < 3; ++k) p[k] = k == axis ? sign * 0.5 * e : rng.uniform(-0.5 * e, 0.5 * e);
        p[axis] += rng.normal() * 0.002 * e;
        for (int k = 0; k < 3; ++k) cloud.means[3 * i + k] = static_cast<float>(p[k]);

        const double in_plane = std::log(spacing * rng.uniform(0.6, 1.4));
        cloud.scale_log[3 * i + 0] = static_cast<float>(in_plane + 0.25 * rng.normal());
        cloud.scale_log[3 * i + 1] = static_cast<float>(in_plane + 0.25 * rng.normal());
        cloud.scale_log[3 * i + 2] = static_cast<float>(std::log(spacing * 0.1) + 0.2 * rng.normal());

        // In-plane spin plus a small tilt about the face frame.
        const double spin = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const std::array<double, 4> twist{std::cos(spin / 2), 0.05 * rng.normal(), 0.05 * rng.normal(),
                                          std::sin(spin / 2)};
        const auto q = quat_mul(face_frame(axis, -sign), twist);
        for (int k = 0; k < 4; ++k) cloud.rotations[4 * i + k] = static_cast<float>(q[k]);

        cloud.opacity_logit[i] = static_cast<float>(rng.uniform(-1.0, 4.0));
        const auto dc = wall_color(p, e);
        for (int k = 0; k < 3; ++k) cloud.sh_dc[3 * i + k] = dc[k] + static_cast<float>(0.05 * rng.normal());
        for (int k = 0; k < rest; ++k) cloud.sh_rest[rest * i + k] = static_cast<float>(0.05 * rng.normal());
      }
      break;
    }
    case SceneKind::PlanarGrid: {
      const std::size_t side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
      const double step = side > 1 ? e / static_cast<double>(side - 1) : 0.0;
      const double scale = std::log(side > 1 ? 0.5 * step : 0.5 * e);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t row = i / side, col = i % side;
        cloud.means[3 * i + 0] = static_cast<float>(-0.5 * e + step * static_cast<double>(col));
        cloud.means[3 * i + 1] = static_cast<float>(-0.5 * e + step * static_cast<double>(row));
        cloud.means[3 * i + 2] = 0.0f;
        cloud.scale_log[3 * i + 0] = static_cast<float>(scale);
        cloud.scale_log[3 * i + 1] = static_cast<float>(scale);
        cloud.scale_log[3 * i + 2] = static_cast<float>(scale - 2.0);
        cloud.opacity_logit[i] = static_cast<float>(rng.uniform(0.0, 3.0));
        for (int k = 0; k < 3; ++k) cloud.sh_dc[3 * i + k] = static_cast<float>(rng.uniform(-1.5, 1.5));
        for (int k = 0; k < rest; ++k) cloud.sh_rest[rest * i + k] = static_cast<float>(0.05 * rng.normal());
      }
      break;
    }
    case SceneKind::RandomBlob: {
      const double radius = 0.5 * e;
      const double scale = std::log(radius / std::cbrt(static_cast<double>(n)));
      for (std::size_t i = 0; i < n; ++i) {
        Vec3 p{};
        do {
          for (double& v : p) v = rng.uniform(-radius, radius);
        } while (dot(p, p) > radius * radius);
        for (int k = 0; k < 3; ++k) {
          cloud.means[3 * i + k] = static_cast<float>(p[k]);
          cloud.scale_log[3 * i + k] = static_cast<float>(scale + 0.3 * rng.normal());
          cloud.sh_dc[3 * i + k] = static_cast<float>(rng.uniform(-1.5, 1.5));
        }
        const auto q = random_unit_quaternion(rng);
        for (int k = 0; k < 4; ++k) cloud.rotations[4 * i + k] = q[k];
        cloud.opacity_logit[i] = static_cast<float>(rng.uniform(-2.0, 3.0));
        for (int k = 0; k < rest; ++k) cloud.sh_rest[rest * i + k] = static_cast<float>(0.05 * rng.normal());
      }
      break;
    }
  }
  return cloud;
}

Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, const Intrinsics& in) {
  const Vec3 forward = normalized(target - eye);
  const Vec3 right = normalized(cross(forward, up));
  const Vec3 down = cross(forward, right);
  Camera cam;
  cam.width = in.width;
  cam.height = in.height;
  cam.fx = in.fx;
  cam.fy = in.fy;
  cam.cx = in.cx;
  cam.cy = in.cy;
  const Vec3 rows[3] = {right, down, forward};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) cam.world_to_camera[4 * r + c] = rows[r][c];
    cam.world_to_camera[4 * r + 3] = -dot(rows[r], eye);
  }
  cam.world_to_camera[12] = cam.world_to_camera[13] = cam.world_to_camera[14] = 0.0;
  cam.world_to_camera[15] = 1.0;
  return cam;
}

std::vector<Camera> make_orbit_cameras(int n, double radius, const Vec3& target, const Intrinsics& intrinsics) {
  if (n < 1) throw InvalidParameterError("make_orbit_cameras: need at least one camera");
  if (!(radius > 0.0)) throw InvalidParameterError("make_orbit_cameras: radius must be positive");
  std::vector<Camera> cams;
  cams.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    const Vec3 eye = target + Vec3{radius * std::cos(a), radius * std::sin(a), 0.0};
    cams.push_back(look_at(eye, target, {0.0, 0.0, 1.0}, intrinsics));
  }
  return cams;
}

SceneKind parse_scene_kind(const std::string& text) {
  if (text == "textured-room") return SceneKind::TexturedRoom;
  if (text == "random-blob") return SceneKind::RandomBlob;
  if (text == "planar-grid") return SceneKind::PlanarGrid;
  throw InvalidParameterError("unknown scene kind '" + text + "'");
}

}  // namespace exgs
