// Brute-force oracles for the rasterizer and the significance scorer. They share splat
// preparation and per-pixel alpha evaluation with the production paths but none of the
// tiling, early exit, threading or reduction logic.

#include "exgs/error.hpp"
#include "exgs/rasterizer.hpp"
#include "exgs/significance.hpp"
#include "splat_kernel.hpp"

namespace exgs {

using detail::PreparedSplat;

RenderOutput render_reference(const GaussianCloud& cloud, const Camera& cam, const RenderConfig& cfg) {
  detail::check_render_inputs(cloud, cam, cfg);
  const std::vector<PreparedSplat> splats = detail::prepare_splats(cloud, cam, cfg, 1);

  RenderOutput out{Image(cam.width, cam.height, 3), Image(cam.width, cam.height, 1), {}};
  const bool tallying = cfg.tally.has_value();
  const ScoringMode mode = cfg.tally.value_or(ScoringMode::Literal);
  if (tallying) out.tally.assign(cloud.size(), GaussianTally{});

  for (int py = 0; py < cam.height; ++py) {
    for (int px = 0; px < cam.width; ++px) {
      float t = 1.0f;
      float c[3] = {0.0f, 0.0f, 0.0f};
      for (const PreparedSplat& s : splats) {
        const float alpha = detail::splat_alpha(s, px, py);
        if (alpha < kMinAlpha) continue;
        const float weight = alpha * t;
        for (int k = 0; k < 3; ++k) c[k] += s.color[k] * weight;
        if (tallying) {
          ++out.tally[s.index].hit_count;
          out.tally[s.index].score += detail::tally_credit(mode, s, alpha, t);
        }
        t *= 1.0f - alpha;
      }
      for (int k = 0; k < 3; ++k) out.color.at(px, py, k) = c[k];
      out.accum_opacity.at(px, py) = 1.0f - t;
    }
  }
  return out;
}

SignificanceVector compute_significance_oracle(const GaussianCloud& cloud, std::span<const Camera> cameras,
                                               ScoringMode mode) {
  if (cameras.empty()) throw InvalidParameterError("compute_significance_oracle: no cameras");
  SignificanceVector out;
  out.mode = mode;
  out.views_used = static_cast<std::uint32_t>(cameras.size());
  const RenderConfig cfg;
  std::vector<double> total(cloud.size(), 0.0);
  for (const Camera& cam : cameras) {
    detail::check_render_inputs(cloud, cam, cfg);
    const std::vector<PreparedSplat> splats = detail::prepare_splats(cloud, cam, cfg, 1);
    for (int py = 0; py < cam.height; ++py) {
      for (int px = 0; px < cam.width; ++px) {
        float t = 1.0f;
        for (const PreparedSplat& s : splats) {
          // A terminated ray credits nothing further; the loop still visits every splat.
          if (t < cfg.min_transmittance) continue;
          const float alpha = detail::splat_alpha(s, px, py);
          if (alpha < kMinAlpha) continue;
          total[s.index] += detail::tally_credit(mode, s, alpha, t);
          t *= 1.0f - alpha;
        }
      }
    }
  }
  out.scores.resize(total.size());
  for (std::size_t j = 0; j < total.size(); ++j) out.scores[j] = static_cast<float>(total[j]);
  return out;
}

}  // namespace exgs
