#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "porenet/errors.hpp"

namespace porenet {

struct Resolution {
  double rx = 1.0;  // voxel edge length along x, micrometers
  double ry = 1.0;
  double rz = 1.0;

  bool operator==(const Resolution&) const = default;
};

struct VoxelCoord {
  int i = 0;
  int j = 0;
  int k = 0;

  bool operator==(const VoxelCoord&) const = default;
};

/// Dense 3D binary occupancy volume (true = pore voxel, member of the pore
/// set). Linearization is x-fastest: index = i + nx*(j + ny*k). Everything
/// outside the grid counts as non-pore, so neighborhood queries are well
/// defined at image edges. Occupancy is bit-packed; a 512^3 volume takes
/// 16 MiB.
class VoxelGrid {
 public:
  VoxelGrid(int nx, int ny, int nz, Resolution res = {});

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  const Resolution& resolution() const { return res_; }

  std::size_t size() const { return total_; }

  bool contains(int i, int j, int k) const {
    return i >= 0 && i < nx_ && j >= 0 && j < ny_ && k >= 0 && k < nz_;
  }
  bool contains(VoxelCoord v) const { return contains(v.i, v.j, v.k); }

  std::size_t linear_index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx_) *
               (static_cast<std::size_t>(j) +
                static_cast<std::size_t>(ny_) * static_cast<std::size_t>(k));
  }
  std::size_t linear_index(VoxelCoord v) const {
    return linear_index(v.i, v.j, v.k);
  }

  VoxelCoord coord_of(std::size_t idx) const {
    const auto nxy = static_cast<std::size_t>(nx_) * ny_;
    return VoxelCoord{static_cast<int>(idx % nx_),
                      static_cast<int>((idx % nxy) / nx_),
                      static_cast<int>(idx / nxy)};
  }

  /// Occupancy; out-of-bounds coordinates read as non-pore.
  bool pore_at(int i, int j, int k) const {
    if (!contains(i, j, k)) return false;
    return get(linear_index(i, j, k));
  }
  bool pore_at(VoxelCoord v) const { return pore_at(v.i, v.j, v.k); }

  /// Occupancy with a bounds check; throws BoundsError when outside.
  bool at(VoxelCoord v) const;

  bool get(std::size_t idx) const {
    return (bits_[idx >> 6] >> (idx & 63)) & 1u;
  }
  void set(std::size_t idx, bool value) {
    const std::uint64_t bit = std::uint64_t{1} << (idx & 63);
    if (value)
      bits_[idx >> 6] |= bit;
    else
      bits_[idx >> 6] &= ~bit;
  }
  void set(int i, int j, int k, bool value) { set(linear_index(i, j, k), value); }
  void set(VoxelCoord v, bool value) { set(linear_index(v), value); }

  /// Number of pore voxels.
  std::size_t count() const;

  /// Physical volume of one voxel in cubic micrometers.
  double voxel_volume() const { return res_.rx * res_.ry * res_.rz; }

  /// Physical center of voxel (i,j,k): ((i+0.5)rx, (j+0.5)ry, (k+0.5)rz).
  std::array<double, 3> voxel_center(VoxelCoord v) const {
    return {(v.i + 0.5) * res_.rx, (v.j + 0.5) * res_.ry, (v.k + 0.5) * res_.rz};
  }

  bool operator==(const VoxelGrid& other) const;

  const std::vector<std::uint64_t>& raw_bits() const { return bits_; }

 private:
  int nx_, ny_, nz_;
  Resolution res_;
  std::size_t total_;
  std::vector<std::uint64_t> bits_;
};

/// Squared Euclidean distance between the centers of two voxels in physical
/// units. Both the partition kernel and its brute-force test oracle call this
/// exact expression, so distance ties resolve identically everywhere.
inline double center_dist2(VoxelCoord a, VoxelCoord b, const Resolution& res) {
  const double dx = (a.i - b.i) * res.rx;
  const double dy = (a.j - b.j) * res.ry;
  const double dz = (a.k - b.k) * res.rz;
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace porenet
