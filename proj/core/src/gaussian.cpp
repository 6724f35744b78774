#include "exgs/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exgs/error.hpp"

namespace exgs {

namespace {

bool all_finite(std::span<const float> values) {
  return std::all_of(values.begin(), values.end(), [](float v) { return std::isfinite(v); });
}

void check_length(const char* name, std::size_t actual, std::size_t expected) {
  if (actual != expected) {
    throw InvalidParameterError(std::string("GaussianCloud: ") + name + " has " + std::to_string(actual) +
                                " values, expected " + std::to_string(expected));
  }
}

int checked_degree(int degree) {
  if (degree < 0 || degree > kMaxShDegree) {
    throw InvalidParameterError("GaussianCloud: sh_degree must be in [0, 3], got " + std::to_string(degree));
  }
  return degree;
}

}  // namespace

GaussianCloud::GaussianCloud(std::size_t count, int degree)
    : sh_degree(checked_degree(degree)),
      means(3 * count, 0.0f),
      scale_log(3 * count, 0.0f),
      rotations(4 * count, 0.0f),
      opacity_logit(count, 0.0f),
      sh_dc(3 * count, 0.0f),
      sh_rest(static_cast<std::size_t>(sh_rest_count(sh_degree)) * count, 0.0f) {
  for (std::size_t i = 0; i < count; ++i) rotations[4 * i] = 1.0f;
}

Gaussian GaussianCloud::at(std::size_t i) const {
  Gaussian g;
  for (int k = 0; k < 3; ++k) {
    g.mean[k] = means[3 * i + k];
    g.scale_log[k] = scale_log[3 * i + k];
    g.sh_dc[k] = sh_dc[3 * i + k];
  }
  for (int k = 0; k < 4; ++k) g.rotation[k] = rotations[4 * i + k];
  g.opacity_logit = opacity_logit[i];
  return g;
}

void GaussianCloud::set(std::size_t i, const Gaussian& g) {
  for (int k = 0; k < 3; ++k) {
    means[3 * i + k] = g.mean[k];
    scale_log[3 * i + k] = g.scale_log[k];
    sh_dc[3 * i + k] = g.sh_dc[k];
  }
  for (int k = 0; k < 4; ++k) rotations[4 * i + k] = g.rotation[k];
  opacity_logit[i] = g.opacity_logit;
}

void GaussianCloud::validate() const {
  if (sh_degree < 0 || sh_degree > kMaxShDegree) {
    throw InvalidParameterError("GaussianCloud: sh_degree must be in [0, 3], got " + std::to_string(sh_degree));
  }
  const std::size_t n = size();
  check_length("means", means.size(), 3 * n);
  check_length("scale_log", scale_log.size(), 3 * n);
  check_length("rotations", rotations.size(), 4 * n);
  check_length("sh_dc", sh_dc.size(), 3 * n);
  check_length("sh_rest", sh_rest.size(), static_cast<std::size_t>(rest_per_gaussian()) * n);
  if (!all_finite(means) || !all_finite(scale_log) || !all_finite(rotations) || !all_finite(opacity_logit) ||
      !all_finite(sh_dc) || !all_finite(sh_rest)) {
    throw InvalidParameterError("GaussianCloud: non-finite attribute value");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const float* q = &rotations[4 * i];
    if (q[0] == 0.0f && q[1] == 0.0f && q[2] == 0.0f && q[3] == 0.0f) {
      throw InvalidParameterError("GaussianCloud: zero quaternion at index " + std::to_string(i));
    }
  }
}

GaussianCloud GaussianCloud::select(std::span<const std::uint32_t> indices) const {
  GaussianCloud out;
  out.sh_degree = sh_degree;
  const std::size_t rest = static_cast<std::size_t>(rest_per_gaussian());
  out.means.reserve(3 * indices.size());
  out.scale_log.reserve(3 * indices.size());
  out.rotations.reserve(4 * indices.size());
  out.opacity_logit.reserve(indices.size());
  out.sh_dc.reserve(3 * indices.size());
  out.sh_rest.reserve(rest * indices.size());
  for (std::uint32_t i : indices) {
    if (i >= size()) throw InvalidParameterError("GaussianCloud::select: index out of range");
    out.means.insert(out.means.end(), means.begin() + 3 * i, means.begin() + 3 * i + 3);
    out.scale_log.insert(out.scale_log.end(), scale_log.begin() + 3 * i, scale_log.begin() + 3 * i + 3);
    out.rotations.insert(out.rotations.end(), rotations.begin() + 4 * i, rotations.begin() + 4 * i + 4);
    out.opacity_logit.push_back(opacity_logit[i]);
    out.sh_dc.insert(out.sh_dc.end(), sh_dc.begin() + 3 * i, sh_dc.begin() + 3 * i + 3);
    out.sh_rest.insert(out.sh_rest.end(), sh_rest.begin() + rest * i, sh_rest.begin() + rest * (i + 1));
  }
  return out;
}

Mat3 Camera::rotation() const {
  const auto& t = world_to_camera;
  return Mat3{{t[0], t[1], t[2], t[4], t[5], t[6], t[8], t[9], t[10]}};
}

Vec3 Camera::translation() const { return {world_to_camera[3], world_to_camera[7], world_to_camera[11]}; }

Vec3 Camera::position() const {
  const Vec3 t = translation();
  return -1.0 * (rotation().transposed() * t);
}

void Camera::validate() const {
  if (width <= 0 || height <= 0) {
    throw InvariantError("Camera: width and height must be positive");
  }
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw InvariantError("Camera: fx and fy must be positive");
  }
  for (double v : world_to_camera) {
    if (!std::isfinite(v)) throw InvariantError("Camera: non-finite extrinsic");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy)) throw InvariantError("Camera: non-finite principal point");
  const Mat3 r = rotation();
  const Mat3 rtr = r.transposed() * r;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(rtr(i, j) - (i == j ? 1.0 : 0.0)));
  if (worst > 1e-4) {
    throw InvariantError("Camera: rotation block is not orthonormal (max deviation " + std::to_string(worst) + ")");
  }
}

Mat3 quaternion_to_rotation(const std::array<float, 4>& wxyz) {
  double w = wxyz[0], x = wxyz[1], y = wxyz[2], z = wxyz[3];
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidParameterError("quaternion has zero or non-finite norm");
  w /= n;
  x /= n;
  y /= n;
  z /= n;
  return Mat3{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
               2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
               2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}};
}

Mat3 activate_covariance(const Gaussian& g) {
  for (float v : g.scale_log)
    if (!std::isfinite(v)) throw InvalidParameterError("activate_covariance: non-finite scale");
  for (float v : g.rotation)
    if (!std::isfinite(v)) throw InvalidParameterError("activate_covariance: non-finite rotation");
  const Mat3 r = quaternion_to_rotation(g.rotation);
  Mat3 m = r;  // M = R S
  for (int c = 0; c < 3; ++c) {
    const double s = std::exp(static_cast<double>(g.scale_log[c]));
    for (int row = 0; row < 3; ++row) m(row, c) *= s;
  }
  Mat3 sigma = m * m.transposed();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) sigma(j, i) = sigma(i, j);
  return sigma;
}

std::array<float, 3> sh_to_color(const std::array<float, 3>& sh_dc) {
  std::array<float, 3> c{};
  for (int k = 0; k < 3; ++k) {
    const double v = kShC0 * static_cast<double>(sh_dc[k]) + 0.5;
    c[k] = static_cast<float>(std::clamp(v, 0.0, 1.0));
  }
  return c;
}

}  // namespace exgs
