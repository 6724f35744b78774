#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "exgs/gaussian.hpp"
#include "exgs/image.hpp"

namespace exgs {

inline constexpr double kDefaultNearPlane = 0.01;
// Low-pass dilation added to both diagonal entries of the projected covariance.
inline constexpr double kCovarianceDilation = 0.3;
inline constexpr float kMaxAlpha = 0.99f;
inline constexpr float kMinAlpha = 1.0f / 255.0f;
inline constexpr float kMinTransmittance = 1e-4f;

// Per-Gaussian credit rule used when tallying hits.
enum class ScoringMode : std::uint8_t {
  Literal,       // activated opacity times the transmittance in front of the splat
  Contribution,  // evaluated alpha times transmittance (the blending weight)
};

// Screen-space footprint of one Gaussian. Pixel (px, py) has its centre at (px, py).
struct Splat2D {
  std::array<double, 2> mean2d{};
  std::array<double, 3> cov2d{};  // (xx, xy, yy), dilated
  double depth = 0.0;
  std::uint32_t gaussian_index = 0;
};

// Projects a Gaussian through a pinhole camera. Returns nullopt when the mean lies at or
// behind the near plane.
std::optional<Splat2D> project_gaussian(const Gaussian& g, const Camera& cam, double near_plane = kDefaultNearPlane);

struct RenderConfig {
  int max_dimension = 4096;
  int tile_size = 16;
  float min_transmittance = kMinTransmittance;
  double near_plane = kDefaultNearPlane;
  // When set, RenderOutput::tally is filled using this credit rule.
  std::optional<ScoringMode> tally;
  // 0 = EXGS_THREADS or hardware concurrency.
  unsigned threads = 0;
};

struct GaussianTally {
  std::uint64_t hit_count = 0;
  double score = 0.0;

  bool operator==(const GaussianTally&) const = default;
};

struct RenderOutput {
  Image color;          // H x W x 3, composited over black
  Image accum_opacity;  // H x W x 1, 1 - final transmittance
  std::vector<GaussianTally> tally;  // cloud.size() entries when tallying, else empty
};

// Tiled front-to-back splatting with early termination once transmittance drops below
// cfg.min_transmittance.
RenderOutput render(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg = {});

// Naive oracle: every pixel walks every depth-sorted splat, no tiling and no early
// termination. Same alpha evaluation as render().
RenderOutput render_reference(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg = {});

// Accumulated-opacity mask. High values mark well-covered pixels.
Image render_visibility_mask(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg = {});

}  // namespace exgs
