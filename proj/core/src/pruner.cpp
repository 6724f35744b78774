#include "exgs/pruner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "exgs/error.hpp"
#include "exgs/file_io.hpp"

namespace exgs {

const VoxelIndex::Bucket* VoxelIndex::find(const VoxelCoord& coord) const {
  const auto it = std::lower_bound(buckets.begin(), buckets.end(), coord,
                                   [](const Bucket& b, const VoxelCoord& c) { return b.coord < c; });
  return it != buckets.end() && it->coord == coord ? &*it : nullptr;
}

void PruneConfig::validate() const {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw InvalidParameterError("prune: ratio must be in (0, 1], got " + std::to_string(ratio));
  }
  if (voxel_size && !(*voxel_size > 0.0 && std::isfinite(*voxel_size))) {
    throw InvalidParameterError("prune: voxel size must be positive");
  }
  if (min_count < 1) throw InvalidParameterError("prune: min_count must be at least 1");
}

double auto_voxel_size(const GaussianCloud& cloud) {
  if (cloud.empty()) return 1.0;
  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi = -1.0 * lo;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(lo[k], static_cast<double>(cloud.means[3 * i + k]));
      hi[k] = std::max(hi[k], static_cast<double>(cloud.means[3 * i + k]));
    }
  const double edge = std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
  return edge > 0.0 ? edge / 64.0 : 1.0;
}

VoxelIndex voxelize(const GaussianCloud& cloud, double voxel_size) {
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
    throw InvalidParameterError("voxelize: voxel size must be positive, got " + std::to_string(voxel_size));
  }
  if (cloud.empty()) throw InvalidParameterError("voxelize: empty cloud");

  const std::size_t n = cloud.size();
  VoxelIndex index;
  index.voxel_size = voxel_size;
  index.origin = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k) index.origin[k] = std::min(index.origin[k], static_cast<double>(cloud.means[3 * i + k]));

  std::vector<VoxelCoord> coords(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k)
      coords[i][k] = static_cast<std::int64_t>(
          std::floor((static_cast<double>(cloud.means[3 * i + k]) - index.origin[k]) / voxel_size));

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return coords[a] < coords[b] || (coords[a] == coords[b] && a < b);
  });

  index.bucket_of.resize(n);
  for (std::uint32_t i : order) {
    if (index.buckets.empty() || index.buckets.back().coord != coords[i]) {
      index.buckets.push_back({coords[i], {}});
    }
    index.buckets.back().members.push_back(i);
    index.bucket_of[i] = static_cast<std::uint32_t>(index.buckets.size() - 1);
  }
  return index;
}

std::size_t retained_budget(double ratio, std::size_t n) {
  return static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 1e-9));
}

PruneResult prune(const GaussianCloud& cloud, std::span<const float> scores, const PruneConfig& cfg) {
  cfg.validate();
  const std::size_t n = cloud.size();
  if (scores.size() != n) {
    throw InvalidParameterError("prune: " + std::to_string(scores.size()) + " scores for " + std::to_string(n) +
                                " Gaussians");
  }
  for (float s : scores)
    if (!std::isfinite(s)) throw InvalidParameterError("prune: non-finite score");

  PruneResult result;
  if (n == 0) {
    result.cloud = cloud;
    return result;
  }
  result.index = voxelize(cloud, cfg.voxel_size.value_or(auto_voxel_size(cloud)));

  // Global preference order: higher score first, lower index on ties.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return scores[a] > scores[b] || (scores[a] == scores[b] && a < b);
  });
  std::vector<std::uint32_t> rank(n);
  for (std::uint32_t r = 0; r < n; ++r) rank[order[r]] = r;

  std::vector<std::uint8_t> selected(n, 0);
  std::vector<std::uint8_t> guaranteed(n, 0);
  std::size_t selected_count = 0;
  std::size_t guaranteed_count = 0;

  for (const auto& bucket : result.index.buckets) {
    std::vector<std::uint32_t> members = bucket.members;
    std::sort(members.begin(), members.end(), [&](std::uint32_t a, std::uint32_t b) { return rank[a] < rank[b]; });
    std::size_t k = retained_budget(cfg.ratio, members.size());
    const bool sufficient = members.size() >= cfg.min_count;
    if (sufficient) {
      k = std::max<std::size_t>(k, 1);
      guaranteed[members.front()] = 1;
      ++guaranteed_count;
    }
    for (std::size_t i = 0; i < k; ++i) selected[members[i]] = 1;
    selected_count += k;
  }

  const std::size_t budget = retained_budget(cfg.ratio, n);
  if (selected_count < budget) {
    for (std::uint32_t j : order) {
      if (selected_count == budget) break;
      if (!selected[j]) {
        selected[j] = 1;
        ++selected_count;
      }
    }
  } else if (cfg.budget == BudgetMode::Exact) {
    const std::size_t target = std::max(budget, guaranteed_count);
    for (auto it = order.rbegin(); it != order.rend() && selected_count > target; ++it) {
      if (selected[*it] && !guaranteed[*it]) {
        selected[*it] = 0;
        --selected_count;
      }
    }
  }

  result.kept.reserve(selected_count);
  for (std::uint32_t j = 0; j < n; ++j)
    if (selected[j]) result.kept.push_back(j);
  result.cloud = cloud.select(result.kept);
  return result;
}

GaussianCloud amplify(const GaussianCloud& pruned, std::span<const std::uint32_t> kept, const VoxelIndex& index,
                      double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidParameterError("amplify: lambda must be a finite nonnegative number");
  }
  if (pruned.size() != kept.size()) throw InvalidParameterError("amplify: kept list does not match pruned cloud");

  std::vector<std::uint32_t> kept_in_bucket(index.buckets.size(), 0);
  for (std::uint32_t j : kept) {
    if (j >= index.bucket_of.size()) throw InvalidParameterError("amplify: kept index outside voxel index");
    ++kept_in_bucket[index.bucket_of[j]];
  }

  GaussianCloud out = pruned;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const std::uint32_t b = index.bucket_of[kept[i]];
    const double removed = static_cast<double>(index.buckets[b].members.size() - kept_in_bucket[b]);
    const double r = removed / std::max(1.0, static_cast<double>(kept_in_bucket[b]));
    const double exponent = 1.0 + lambda * r;
    if (exponent == 1.0) continue;
    const double sigma = activate_opacity(pruned.opacity_logit[i]);
    const double boosted = std::min(0.99, 1.0 - std::pow(1.0 - sigma, exponent));
    if (boosted > sigma) out.opacity_logit[i] = static_cast<float>(opacity_to_logit(boosted));
  }
  return out;
}

std::vector<std::uint8_t> encode_kept_indices(std::span<const std::uint32_t> kept) { return encode_u32_vector(kept); }

std::vector<std::uint32_t> decode_kept_indices(std::span<const std::uint8_t> bytes) {
  return decode_u32_vector(bytes);
}

}  // namespace exgs
