#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "porenet/partition.hpp"

namespace porenet {

struct PoreNode {
  double volume_um3 = 0.0;
  std::array<double, 3> centroid_um{};
};

struct PoreArc {
  std::uint32_t a = 0, b = 0;  // region ids, a < b
  double area_um2 = 0.0;       // summed surfel area
  double dist_um = 0.0;        // distance between region centroids
  std::array<std::uint64_t, 3> surfels{};  // per face orientation (x, y, z)
};

/// Attributed region-adjacency graph: pores as nodes (volume, centroid),
/// face-sharing adjacencies as arcs (contact area, centroid distance).
/// Node index r corresponds to region id r+1.
struct PoreNetwork {
  std::vector<PoreNode> nodes;
  std::vector<PoreArc> arcs;  // sorted by (a, b)
  int nx = 0, ny = 0, nz = 0;
  Resolution res{};
  std::string source;

  double total_volume_um3() const;
};

/// One pass over the label image: for every pore voxel the three forward
/// 6-neighbors (+x, +y, +z) are examined; differing labels create or extend
/// an arc and add one surfel of the corresponding face orientation. Contacts
/// through edges or vertices only do NOT create arcs. Throws InvariantError
/// when two adjacent regions have coincident centroids (dist would be 0).
PoreNetwork build_network(const Partition& part);

struct NetworkStats {
  std::size_t node_count = 0;
  std::size_t arc_count = 0;
  double total_volume_um3 = 0.0;
  double total_area_um2 = 0.0;
  double mean_degree = 0.0;
  double volume_weighted_degree = 0.0;
};

NetworkStats network_stats(const PoreNetwork& net);

/// Self-describing JSON graph file with a version field.
void save_network_json(const PoreNetwork& net, const std::filesystem::path& path);
PoreNetwork load_network_json(const std::filesystem::path& path);

/// CSV exports: nodes (id,volume_um3,cx,cy,cz) and arcs (i,j,area_um2,dist_um).
void save_nodes_csv(const PoreNetwork& net, const std::filesystem::path& path);
void save_arcs_csv(const PoreNetwork& net, const std::filesystem::path& path);

}  // namespace porenet
