#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "porenet/voxel_grid.hpp"

namespace porenet {

/// The 26 lattice offsets of the 3x3x3 neighborhood, x-fastest scan order,
/// center excluded.
const std::array<std::array<int, 3>, 26>& neighbor_offsets_26();

/// In-bounds pore voxels among the 26 lattice neighbors of v.
/// Throws BoundsError when v lies outside the grid.
std::vector<VoxelCoord> neighbors26(const VoxelGrid& grid, VoxelCoord v);

/// Number of pore voxels among the 26 neighbors of v (grid boundary counts
/// as non-pore).
int neighbor_count_26(const VoxelGrid& grid, VoxelCoord v);

struct ComponentLabels {
  std::vector<std::uint32_t> labels;  // per voxel; 0 = non-pore
  std::uint32_t count = 0;            // components labeled 1..count
};

/// 26-connected components of the pore set. Labels are assigned in order of
/// each component's smallest linear index, so the result is deterministic.
ComponentLabels connected_components(const VoxelGrid& grid);

/// Border mask B: pore voxels with at least one of their 26 neighbors outside
/// the pore set (voxels beyond the grid count as outside).
VoxelGrid border_mask(const VoxelGrid& grid);

}  // namespace porenet
