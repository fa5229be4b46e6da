#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "porenet/skeleton_graph.hpp"
#include "porenet/voxel_grid.hpp"

namespace porenet {

struct Region {
  std::uint32_t id = 0;         // 1-based, dense
  std::uint32_t branch_id = 0;  // source branch
  std::uint64_t voxel_count = 0;
  std::array<double, 3> centroid_um{};  // mean of voxel centers, micrometers
};

/// Exact partition of the pore set: every pore voxel carries a region label
/// >= 1, every non-pore voxel carries 0, and each region is a 26-connected
/// set of voxels.
struct Partition {
  std::vector<std::uint32_t> labels;
  std::vector<Region> regions;  // regions[r].id == r+1
  int nx = 0, ny = 0, nz = 0;
  Resolution res{};

  std::size_t split_count(std::size_t branch_count) const {
    return regions.size() - branch_count;
  }
};

/// Per pore voxel: id of the branch whose nearest member skeleton voxel is
/// closest in physical Euclidean distance between voxel centers; 0 for
/// non-pore voxels. Candidates are restricted to the voxel's own
/// 26-connected pore component (thinning works per component, so every
/// component has skeleton voxels). Distance ties pick the smallest branch
/// id. Throws InvariantError if a pore component has no branch voxel.
std::vector<std::uint32_t> nearest_branch_transform(
    const VoxelGrid& grid, const SkeletonGraph& graph,
    const std::vector<Branch>& branches, int threads = 1);

/// Splits each branch's voxel set into 26-connected regions and produces the
/// label image. Region ids are dense 1..R, ordered by (branch id, smallest
/// linear voxel index).
Partition split_disconnected(const VoxelGrid& grid,
                             const std::vector<std::uint32_t>& branch_assignment);

/// nearest_branch_transform followed by split_disconnected.
Partition partition_pore_space(const VoxelGrid& grid, const SkeletonGraph& graph,
                               const std::vector<Branch>& branches,
                               int threads = 1);

/// CSV: region_id,branch_id,voxel_count,centroid_x_um,centroid_y_um,centroid_z_um
void save_regions_csv(const Partition& part, const std::filesystem::path& path);

/// Rebuilds a Partition (counts, centroids) from a label image, e.g. one
/// loaded from disk. Region ids must be dense 1..R (FormatError otherwise);
/// source branch ids are not recoverable and read 0.
Partition partition_from_labels(std::vector<std::uint32_t> labels, int nx,
                                int ny, int nz, const Resolution& res);

}  // namespace porenet
