#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "exgs/gaussian.hpp"

namespace exgs {

using VoxelCoord = std::array<std::int64_t, 3>;

// Uniform grid over Gaussian means. Bucket coordinate of Gaussian j is
// floor((mean_j - origin) / voxel_size) per axis; buckets are sorted by coordinate.
struct VoxelIndex {
  struct Bucket {
    VoxelCoord coord{};
    std::vector<std::uint32_t> members;  // ascending Gaussian index
  };

  double voxel_size = 0.0;
  Vec3 origin{};
  std::vector<Bucket> buckets;
  std::vector<std::uint32_t> bucket_of;  // Gaussian index -> position in buckets

  const Bucket* find(const VoxelCoord& coord) const;
};

enum class BudgetMode : std::uint8_t {
  Exact,           // trim to max(floor(ratio * N), guaranteed voxel count)
  GuaranteedOver,  // keep voxel guarantees even when they overshoot the budget
};

struct PruneConfig {
  double ratio = 0.1;                 // fraction of Gaussians retained, in (0, 1]
  std::optional<double> voxel_size;   // nullopt = auto (longest bounding-box edge / 64)
  std::uint32_t min_count = 4;        // voxels with at least this many members keep one
  BudgetMode budget = BudgetMode::Exact;

  void validate() const;
};

struct PruneResult {
  GaussianCloud cloud;                // retained Gaussians, original relative order
  std::vector<std::uint32_t> kept;    // sorted indices into the input cloud
  VoxelIndex index;                   // built over the input cloud
};

// Bounding-box longest edge / 64; 1.0 for degenerate (single-point) extents.
double auto_voxel_size(const GaussianCloud& cloud);

VoxelIndex voxelize(const GaussianCloud& cloud, double voxel_size);

// floor(ratio * n), tolerant of the representation error in ratio (0.29 * 100 -> 29).
std::size_t retained_budget(double ratio, std::size_t n);

PruneResult prune(const GaussianCloud& cloud, std::span<const float> scores, const PruneConfig& cfg);

// Raises opacity of retained Gaussians in thinned voxels:
//   r = removed / max(1, kept) within the voxel, sigma' = min(0.99, 1 - (1 - sigma)^(1 + lambda * r)),
// never lowering sigma. `pruned[i]` is the input Gaussian `kept[i]`; `index` covers the input cloud.
GaussianCloud amplify(const GaussianCloud& pruned, std::span<const std::uint32_t> kept, const VoxelIndex& index,
                      double lambda);

// Flat binary: u32 LE count, then count u32 LE indices.
std::vector<std::uint8_t> encode_kept_indices(std::span<const std::uint32_t> kept);
std::vector<std::uint32_t> decode_kept_indices(std::span<const std::uint8_t> bytes);

}  // namespace exgs
