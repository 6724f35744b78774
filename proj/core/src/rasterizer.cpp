#include "exgs/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exgs/error.hpp"
#include "exgs/parallel.hpp"
#include "splat_kernel.hpp"

namespace exgs {

std::optional<Splat2D> project_gaussian(const Gaussian& g, const Camera& cam, double near_plane) {
  const Vec3 t = cam.to_camera({g.mean[0], g.mean[1], g.mean[2]});
  if (!(t[2] > near_plane)) return std::nullopt;

  const Mat3 w = cam.rotation();
  const Mat3 cov_cam = w * activate_covariance(g) * w.transposed();

  // Perspective Jacobian; the off-axis terms are evaluated with x/z and y/z clamped to
  // 1.3x the half field of view so grazing splats near the image plane stay bounded.
  const double z = t[2];
  const double lim_x = 1.3 * (0.5 * cam.width / cam.fx);
  const double lim_y = 1.3 * (0.5 * cam.height / cam.fy);
  const double u = std::clamp(t[0] / z, -lim_x, lim_x);
  const double v = std::clamp(t[1] / z, -lim_y, lim_y);
  const double j[2][3] = {{cam.fx / z, 0.0, -cam.fx * u / z}, {0.0, cam.fy / z, -cam.fy * v / z}};
  double cov2[2][2] = {};
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += j[r][k] * cov_cam(k, l) * j[c][l];
      cov2[r][c] = s;
    }

  Splat2D out;
  out.mean2d = {cam.fx * t[0] / z + cam.cx, cam.fy * t[1] / z + cam.cy};
  out.cov2d = {cov2[0][0] + kCovarianceDilation, 0.5 * (cov2[0][1] + cov2[1][0]), cov2[1][1] + kCovarianceDilation};
  out.depth = z;
  return out;
}

namespace detail {

void check_render_inputs(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg) {
  if (cam.width <= 0 || cam.height <= 0) {
    throw InvalidParameterError("render: zero-area image " + std::to_string(cam.width) + "x" +
                                std::to_string(cam.height));
  }
  if (cam.width > cfg.max_dimension || cam.height > cfg.max_dimension) {
    throw InvalidParameterError("render: image exceeds max dimension " + std::to_string(cfg.max_dimension));
  }
  if (cfg.tile_size <= 0) throw InvalidParameterError("render: tile size must be positive");
  cam.validate();
  cloud.validate();
}

std::vector<PreparedSplat> prepare_splats(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg,
                                          unsigned workers) {
  const std::size_t n = cloud.size();
  std::vector<PreparedSplat> all(n);
  std::vector<std::uint8_t> keep(n, 0);
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (n + kChunk - 1) / kChunk;

  parallel_for(chunks, workers, [&](std::size_t chunk) {
    const std::size_t end = std::min(n, (chunk + 1) * kChunk);
    for (std::size_t i = chunk * kChunk; i < end; ++i) {
      const Gaussian g = cloud.at(i);
      const auto splat = project_gaussian(g, cam, cfg.near_plane);
      if (!splat) continue;
      const double a = splat->cov2d[0], b = splat->cov2d[1], c = splat->cov2d[2];
      const double det = a * c - b * b;
      if (!(det > 0.0)) continue;
      const double mid = 0.5 * (a + c);
      const double lambda_max = mid + std::sqrt(std::max(0.0, mid * mid - det));
      const double radius = std::ceil(3.0 * std::sqrt(lambda_max));
      const double mx = splat->mean2d[0], my = splat->mean2d[1];
      if (!std::isfinite(mx) || !std::isfinite(my) || !std::isfinite(radius)) continue;

      const double lo_x = std::max(0.0, std::ceil(mx - radius));
      const double hi_x = std::min(cam.width - 1.0, std::floor(mx + radius));
      const double lo_y = std::max(0.0, std::ceil(my - radius));
      const double hi_y = std::min(cam.height - 1.0, std::floor(my + radius));
      if (lo_x > hi_x || lo_y > hi_y) continue;

      PreparedSplat& s = all[i];
      s.mean_x = static_cast<float>(mx);
      s.mean_y = static_cast<float>(my);
      s.conic_a = static_cast<float>(c / det);
      s.conic_b = static_cast<float>(-b / det);
      s.conic_c = static_cast<float>(a / det);
      s.opacity = static_cast<float>(activate_opacity(g.opacity_logit));
      s.color = sh_to_color(g.sh_dc);
      s.depth = static_cast<float>(splat->depth);
      s.index = static_cast<std::uint32_t>(i);
      s.x0 = static_cast<int>(lo_x);
      s.x1 = static_cast<int>(hi_x);
      s.y0 = static_cast<int>(lo_y);
      s.y1 = static_cast<int>(hi_y);
      keep[i] = 1;
    }
  });

  std::vector<PreparedSplat> splats;
  splats.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    if (keep[i]) splats.push_back(all[i]);
  std::sort(splats.begin(), splats.end(), [](const PreparedSplat& l, const PreparedSplat& r) {
    return l.depth < r.depth || (l.depth == r.depth && l.index < r.index);
  });
  return splats;
}

}  // namespace detail

using detail::PreparedSplat;

RenderOutput render(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg) {
  detail::check_render_inputs(cloud, cam, cfg);
  const unsigned workers = resolve_workers(cfg.threads);
  const std::vector<PreparedSplat> splats = detail::prepare_splats(cloud, cam, cfg, workers);

  const int ts = cfg.tile_size;
  const int tiles_x = (cam.width + ts - 1) / ts;
  const int tiles_y = (cam.height + ts - 1) / ts;
  const std::size_t tile_count = static_cast<std::size_t>(tiles_x) * tiles_y;

  // Bin splats into tiles; each tile list inherits the global depth order.
  std::vector<std::size_t> offsets(tile_count + 1, 0);
  for (const auto& s : splats)
    for (int ty = s.y0 / ts; ty <= s.y1 / ts; ++ty)
      for (int tx = s.x0 / ts; tx <= s.x1 / ts; ++tx) ++offsets[static_cast<std::size_t>(ty) * tiles_x + tx + 1];
  for (std::size_t t = 0; t < tile_count; ++t) offsets[t + 1] += offsets[t];
  std::vector<std::uint32_t> entries(offsets.back());
  {
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t k = 0; k < splats.size(); ++k) {
      const auto& s = splats[k];
      for (int ty = s.y0 / ts; ty <= s.y1 / ts; ++ty)
        for (int tx = s.x0 / ts; tx <= s.x1 / ts; ++tx) entries[cursor[static_cast<std::size_t>(ty) * tiles_x + tx]++] = k;
    }
  }

  RenderOutput out{Image(cam.width, cam.height, 3), Image(cam.width, cam.height, 1), {}};
  const bool tallying = cfg.tally.has_value();
  const ScoringMode mode = cfg.tally.value_or(ScoringMode::Literal);
  std::vector<double> entry_score(tallying ? entries.size() : 0, 0.0);
  std::vector<std::uint32_t> entry_hits(tallying ? entries.size() : 0, 0);
  const float min_t = cfg.min_transmittance;

  parallel_for(tile_count, workers, [&](std::size_t tile) {
    const int tx = static_cast<int>(tile % tiles_x);
    const int ty = static_cast<int>(tile / tiles_x);
    const std::size_t first = offsets[tile];
    const std::size_t last = offsets[tile + 1];
    const int px_end = std::min(cam.width, (tx + 1) * ts);
    const int py_end = std::min(cam.height, (ty + 1) * ts);
    for (int py = ty * ts; py < py_end; ++py) {
      for (int px = tx * ts; px < px_end; ++px) {
        float t = 1.0f;
        float c[3] = {0.0f, 0.0f, 0.0f};
        for (std::size_t e = first; e < last; ++e) {
          if (t < min_t) break;
          const PreparedSplat& s = splats[entries[e]];
          const float alpha = detail::splat_alpha(s, px, py);
          if (alpha < kMinAlpha) continue;
          const float weight = alpha * t;
          for (int k = 0; k < 3; ++k) c[k] += s.color[k] * weight;
          if (tallying) {
            ++entry_hits[e];
            entry_score[e] += detail::tally_credit(mode, s, alpha, t);
          }
          t *= 1.0f - alpha;
        }
        for (int k = 0; k < 3; ++k) out.color.at(px, py, k) = c[k];
        out.accum_opacity.at(px, py) = 1.0f - t;
      }
    }
  });

  if (tallying) {
    out.tally.assign(cloud.size(), GaussianTally{});
    for (std::size_t e = 0; e < entries.size(); ++e) {
      if (entry_hits[e] == 0) continue;
      GaussianTally& g = out.tally[splats[entries[e]].index];
      g.hit_count += entry_hits[e];
      g.score += entry_score[e];
    }
  }
  return out;
}

Image render_visibility_mask(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg) {
  RenderConfig plain = cfg;
  plain.tally.reset();
  return render(cloud, cam, plain).accum_opacity;
}

}  // namespace exgs
