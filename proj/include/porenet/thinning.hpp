#pragma once

#include "porenet/voxel_grid.hpp"

namespace porenet {

/// True iff deleting v preserves local topology: the 26-connected pore
/// voxels of the punctured 3x3x3 neighborhood stay one component and the
/// Euler characteristic is unchanged (octant lookup table test). Cavity
/// creation shows up as an Euler change, so an interior voxel whose full
/// neighborhood is pore is NOT simple.
/// Precondition: v is a pore voxel (std::invalid_argument otherwise).
bool is_simple_point(const VoxelGrid& grid, VoxelCoord v);

/// Curvilinear skeleton by iterated homotopic thinning. Per pass, six
/// directional sub-passes (+x, -x, +y, -y, +z, -z) collect, in linear scan
/// order, the pore voxels that (a) are exposed in that direction, (b) have
/// more than one 26-neighbor (ending-point protection), and (c) are simple;
/// candidates are then re-validated and deleted one at a time, so each
/// deletion individually preserves topology. Iterates to the fixed point.
/// Deterministic for any thread count; `threads` only parallelizes candidate
/// detection.
VoxelGrid thin(const VoxelGrid& grid, int threads = 1);

}  // namespace porenet
