#pragma once

// Shared by the tiled renderer, the reference renderer and both significance paths so
// that every path evaluates a splat at a pixel with identical arithmetic.

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "exgs/rasterizer.hpp"

namespace exgs::detail {

struct PreparedSplat {
  float mean_x = 0, mean_y = 0;
  float conic_a = 0, conic_b = 0, conic_c = 0;  // inverse of the dilated 2D covariance
  float opacity = 0;                             // activated
  std::array<float, 3> color{};
  float depth = 0;
  std::uint32_t index = 0;
  // Inclusive pixel rectangle of the 3-sigma footprint, clipped to the image.
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;
};

// Projects, culls (near plane, empty footprint) and sorts by (depth, index).
std::vector<PreparedSplat> prepare_splats(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg,
                                          unsigned workers);

// Alpha of splat s at pixel centre (px, py); 0 outside the footprint rectangle or beyond
// 3 sigma (Mahalanobis distance), otherwise clamped to kMaxAlpha.
inline float splat_alpha(const PreparedSplat& s, int px, int py) {
  if (px < s.x0 || px > s.x1 || py < s.y0 || py > s.y1) return 0.0f;
  const float dx = static_cast<float>(px) - s.mean_x;
  const float dy = static_cast<float>(py) - s.mean_y;
  const float power = -0.5f * (s.conic_a * dx * dx + s.conic_c * dy * dy) - s.conic_b * dx * dy;
  if (power > 0.0f || power < -4.5f) return 0.0f;
  const float alpha = s.opacity * std::exp(power);
  return alpha < kMaxAlpha ? alpha : kMaxAlpha;
}

inline double tally_credit(ScoringMode mode, const PreparedSplat& s, float alpha, float transmittance) {
  return mode == ScoringMode::Literal ? static_cast<double>(s.opacity) * transmittance
                                      : static_cast<double>(alpha) * transmittance;
}

void check_render_inputs(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg);

}  // namespace exgs::detail
