#include "porenet/connectivity.hpp"

#include <string>

namespace porenet {

const std::array<std::array<int, 3>, 26>& neighbor_offsets_26() {
  static const std::array<std::array<int, 3>, 26> offsets = [] {
    std::array<std::array<int, 3>, 26> o{};
    int n = 0;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          o[n++] = {dx, dy, dz};
        }
    return o;
  }();
  return offsets;
}

std::vector<VoxelCoord> neighbors26(const VoxelGrid& grid, VoxelCoord v) {
  if (!grid.contains(v))
    throw BoundsError("neighbors26: voxel (" + std::to_string(v.i) + "," +
                      std::to_string(v.j) + "," + std::to_string(v.k) +
                      ") outside grid");
  std::vector<VoxelCoord> out;
  out.reserve(26);
  for (const auto& d : neighbor_offsets_26()) {
    const VoxelCoord n{v.i + d[0], v.j + d[1], v.k + d[2]};
    if (grid.pore_at(n)) out.push_back(n);
  }
  return out;
}

int neighbor_count_26(const VoxelGrid& grid, VoxelCoord v) {
  int count = 0;
  for (const auto& d : neighbor_offsets_26())
    if (grid.pore_at(v.i + d[0], v.j + d[1], v.k + d[2])) ++count;
  return count;
}

ComponentLabels connected_components(const VoxelGrid& grid) {
  ComponentLabels result;
  result.labels.assign(grid.size(), 0);

  std::vector<std::size_t> stack;
  const auto& offsets = neighbor_offsets_26();

  for (std::size_t seed = 0; seed < grid.size(); ++seed) {
    if (!grid.get(seed) || result.labels[seed] != 0) continue;
    const std::uint32_t label = ++result.count;
    result.labels[seed] = label;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const VoxelCoord c = grid.coord_of(cur);
      for (const auto& d : offsets) {
        const VoxelCoord n{c.i + d[0], c.j + d[1], c.k + d[2]};
        if (!grid.contains(n)) continue;
        const std::size_t idx = grid.linear_index(n);
        if (grid.get(idx) && result.labels[idx] == 0) {
          result.labels[idx] = label;
          stack.push_back(idx);
        }
      }
    }
  }
  return result;
}

VoxelGrid border_mask(const VoxelGrid& grid) {
  VoxelGrid mask(grid.nx(), grid.ny(), grid.nz(), grid.resolution());
  const auto& offsets = neighbor_offsets_26();
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    if (!grid.get(idx)) continue;
    const VoxelCoord v = grid.coord_of(idx);
    for (const auto& d : offsets) {
      if (!grid.pore_at(v.i + d[0], v.j + d[1], v.k + d[2])) {
        mask.set(idx, true);
        break;
      }
    }
  }
  return mask;
}

}  // namespace porenet
