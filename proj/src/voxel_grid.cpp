#include "porenet/voxel_grid.hpp"

#include <bit>
#include <string>

namespace porenet {

VoxelGrid::VoxelGrid(int nx, int ny, int nz, Resolution res)
    : nx_(nx), ny_(ny), nz_(nz), res_(res) {
  if (nx < 1 || ny < 1 || nz < 1)
    throw std::invalid_argument("VoxelGrid: dims must be >= 1");
  if (res.rx <= 0.0 || res.ry <= 0.0 || res.rz <= 0.0)
    throw std::invalid_argument("VoxelGrid: resolution must be > 0");
  total_ = static_cast<std::size_t>(nx) * ny * nz;
  bits_.assign((total_ + 63) / 64, 0);
}

bool VoxelGrid::at(VoxelCoord v) const {
  if (!contains(v))
    throw BoundsError("voxel (" + std::to_string(v.i) + "," +
                      std::to_string(v.j) + "," + std::to_string(v.k) +
                      ") outside grid");
  return get(linear_index(v));
}

std::size_t VoxelGrid::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : bits_) n += std::popcount(w);
  return n;
}

bool VoxelGrid::operator==(const VoxelGrid& other) const {
  return nx_ == other.nx_ && ny_ == other.ny_ && nz_ == other.nz_ &&
         res_ == other.res_ && bits_ == other.bits_;
}

}  // namespace porenet
