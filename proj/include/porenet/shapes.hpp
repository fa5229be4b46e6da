#pragma once

#include <string>

#include "porenet/voxel_grid.hpp"

namespace porenet {

enum class ShapeKind { cylinder, torus, l_tube, cube_with_hole, y_tube };

ShapeKind shape_kind_from_string(const std::string& name);

/// Analytic test-shape parameters. Geometry is expressed in voxel index
/// units; a voxel belongs to the shape when its center (i+0.5, j+0.5, k+0.5)
/// passes the inclusion test. Rasterization is deterministic.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::cylinder;
  int nx = 0, ny = 0, nz = 0;
  Resolution res{};

  int axis = 2;              // cylinder / hole axis: 0=x, 1=y, 2=z
  double radius = 0.0;       // tube radius (cylinder, l/y tube, hole)
  double length = 0.0;       // cylinder length; 0 = full span along axis
  double major_radius = 0.0; // torus centerline radius
  double minor_radius = 0.0; // torus tube radius
  double cube_side = 0.0;    // cube_with_hole edge length
};

/// Deterministic voxelization of the analytic shape. Throws
/// std::invalid_argument for degenerate parameters (e.g. radius <= 0) and
/// BoundsError when the shape does not fit inside the grid.
VoxelGrid make_shape(const ShapeSpec& spec);

}  // namespace porenet
