#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "porenet/diffusion.hpp"
#include "porenet/partition.hpp"

namespace porenet {

enum class Axis : int { x = 0, y = 1, z = 2 };

Axis axis_from_string(const std::string& name);

/// Pore volume of each region inside each of n_planes slabs perpendicular to
/// an axis. Grid plane p maps to slab floor(p * n_planes / n_axis), so any
/// slab count up to the axis dimension works (the paper-style setup uses 300
/// slabs for a 512-wide volume).
class PlaneVolumeTable {
 public:
  PlaneVolumeTable(const Partition& part, Axis axis, int n_planes);

  int n_planes() const { return n_planes_; }
  Axis axis() const { return axis_; }
  std::size_t region_count() const { return regions_; }

  double volume(std::size_t region_idx, int plane) const {
    return volume_[region_idx * n_planes_ + plane];
  }
  /// Total pore volume per slab.
  const std::vector<double>& plane_pore_volume() const { return plane_volume_; }

 private:
  int n_planes_;
  Axis axis_;
  std::size_t regions_;
  std::vector<double> volume_;        // region-major [region][plane]
  std::vector<double> plane_volume_;
};

/// Mass per slab: sum over pore voxels of voxel volume x concentration of the
/// voxel's region. The profile sums to sum_i v_i c_i exactly (up to rounding).
std::vector<double> plane_mass_profile(const PlaneVolumeTable& table,
                                       const ConcentrationField& c);

}  // namespace porenet
