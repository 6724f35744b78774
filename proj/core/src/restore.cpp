#include "exgs/restore.hpp"

#include <algorithm>
#include <vector>

#include "exgs/error.hpp"

namespace exgs {

RestoreResult inpaint_baseline(const RestoreRequest& req) {
  const Image& src = req.degraded;
  if (req.mask.channels != 1 || req.mask.width != src.width || req.mask.height != src.height) {
    throw InvalidParameterError("inpaint: mask must be single-channel and match the image size");
  }
  if (!(req.fill_threshold > 0.0 && req.fill_threshold < 1.0)) {
    throw InvalidParameterError("inpaint: fill threshold must be in (0, 1)");
  }
  if (req.iterations <= 0) throw InvalidParameterError("inpaint: iterations must be positive");

  const int w = src.width, h = src.height, ch = src.channels;
  std::vector<std::uint32_t> holes;
  for (std::size_t p = 0; p < src.pixel_count(); ++p)
    if (req.mask.data[p] < req.fill_threshold) holes.push_back(static_cast<std::uint32_t>(p));

  RestoreResult result{src, false, holes.size()};
  if (holes.empty()) return result;
  if (holes.size() == src.pixel_count()) {
    result.no_boundary = true;
    result.filled_pixels = 0;
    return result;
  }

  std::vector<std::uint8_t> is_hole(src.pixel_count(), 0);
  for (std::uint32_t p : holes) is_hole[p] = 1;

  // Neighbour lists of each hole pixel (in-image only).
  std::vector<std::array<std::int32_t, 4>> nbrs(holes.size());
  std::vector<std::uint8_t> nbr_count(holes.size(), 0);
  std::vector<double> boundary_sum(ch, 0.0);
  std::size_t boundary_n = 0;
  std::vector<std::uint8_t> counted(src.pixel_count(), 0);
  for (std::size_t k = 0; k < holes.size(); ++k) {
    const int x = static_cast<int>(holes[k] % w), y = static_cast<int>(holes[k] / w);
    const int dx[4] = {-1, 1, 0, 0}, dy[4] = {0, 0, -1, 1};
    for (int d = 0; d < 4; ++d) {
      const int nx = x + dx[d], ny = y + dy[d];
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      const std::int32_t q = ny * w + nx;
      nbrs[k][nbr_count[k]++] = q;
      if (!is_hole[q] && !counted[q]) {
        counted[q] = 1;
        ++boundary_n;
        for (int c = 0; c < ch; ++c) boundary_sum[c] += src.data[static_cast<std::size_t>(q) * ch + c];
      }
    }
  }

  std::vector<float> cur = src.data;
  for (std::uint32_t p : holes)
    for (int c = 0; c < ch; ++c) cur[static_cast<std::size_t>(p) * ch + c] = static_cast<float>(boundary_sum[c] / boundary_n);

  std::vector<float> next = cur;
  for (int it = 0; it < req.iterations; ++it) {
    for (std::size_t k = 0; k < holes.size(); ++k) {
      const std::size_t p = holes[k];
      for (int c = 0; c < ch; ++c) {
        double s = 0.0;
        for (int d = 0; d < nbr_count[k]; ++d) s += cur[static_cast<std::size_t>(nbrs[k][d]) * ch + c];
        next[p * ch + c] = static_cast<float>(s / nbr_count[k]);
      }
    }
    std::swap(cur, next);
  }

  for (std::uint32_t p : holes)
    for (int c = 0; c < ch; ++c)
      result.image.data[static_cast<std::size_t>(p) * ch + c] = std::clamp(cur[static_cast<std::size_t>(p) * ch + c], 0.0f, 1.0f);
  return result;
}

}  // namespace exgs
