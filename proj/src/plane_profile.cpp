#include "porenet/plane_profile.hpp"

#include <stdexcept>

namespace porenet {

Axis axis_from_string(const std::string& name) {
  if (name == "x") return Axis::x;
  if (name == "y") return Axis::y;
  if (name == "z") return Axis::z;
  throw std::invalid_argument("axis must be x, y or z, got '" + name + "'");
}

PlaneVolumeTable::PlaneVolumeTable(const Partition& part, Axis axis, int n_planes)
    : n_planes_(n_planes), axis_(axis), regions_(part.regions.size()) {
  const int dims[3] = {part.nx, part.ny, part.nz};
  const int n_axis = dims[static_cast<int>(axis)];
  if (n_planes < 1 || n_planes > n_axis)
    throw std::invalid_argument("n_planes must be in [1, axis dimension]");

  volume_.assign(regions_ * static_cast<std::size_t>(n_planes), 0.0);
  plane_volume_.assign(n_planes, 0.0);
  const double voxel_volume = part.res.rx * part.res.ry * part.res.rz;

  std::size_t idx = 0;
  for (int k = 0; k < part.nz; ++k) {
    for (int j = 0; j < part.ny; ++j) {
      for (int i = 0; i < part.nx; ++i, ++idx) {
        const std::uint32_t label = part.labels[idx];
        if (label == 0) continue;
        const int coords[3] = {i, j, k};
        const int plane = coords[static_cast<int>(axis)];
        const int slab = static_cast<int>(
            (static_cast<std::int64_t>(plane) * n_planes) / n_axis);
        volume_[static_cast<std::size_t>(label - 1) * n_planes + slab] +=
            voxel_volume;
        plane_volume_[slab] += voxel_volume;
      }
    }
  }
}

std::vector<double> plane_mass_profile(const PlaneVolumeTable& table,
                                       const ConcentrationField& c) {
  if (c.size() != table.region_count())
    throw InvariantError("plane_mass_profile: field size does not match table");
  std::vector<double> profile(table.n_planes(), 0.0);
  for (std::size_t r = 0; r < table.region_count(); ++r) {
    if (c[r] == 0.0) continue;
    for (int p = 0; p < table.n_planes(); ++p)
      profile[p] += table.volume(r, p) * c[r];
  }
  return profile;
}

}  // namespace porenet
