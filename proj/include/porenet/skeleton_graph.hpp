#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "porenet/voxel_grid.hpp"

namespace porenet {

enum class NodeKind : std::uint8_t { ending, simple, interior };

/// Voxel-level graph of a skeleton mask: one node per skeleton voxel (in
/// ascending linear-index order), edges between 26-adjacent skeleton voxels.
/// Node kind follows degree: ending <= 1 (isolated voxels are classified
/// ending), simple == 2, interior >= 3.
struct SkeletonGraph {
  std::vector<VoxelCoord> coords;           // node id -> voxel
  std::vector<std::uint32_t> adj_offsets;   // CSR, size nodes+1
  std::vector<std::uint32_t> adj;           // neighbor node ids, ascending
  std::vector<NodeKind> kinds;
  int nx = 0, ny = 0, nz = 0;
  Resolution res{};

  std::size_t node_count() const { return coords.size(); }
  int degree(std::uint32_t n) const {
    return static_cast<int>(adj_offsets[n + 1] - adj_offsets[n]);
  }
  std::size_t count_kind(NodeKind kind) const;
};

SkeletonGraph build_graph(const VoxelGrid& mask);

/// A maximal 26-connected set of simple nodes, ordered along the branch.
/// Skeleton components that contain no simple node at all (isolated voxels,
/// two adjacent ending nodes, small stars) are promoted to one
/// whole-component branch each so that every pore component owns at least
/// one branch. Branch ids are 1-based, assigned by ascending smallest member
/// voxel.
struct Branch {
  std::uint32_t id = 0;
  std::vector<std::uint32_t> node_ids;
  // Ending/interior nodes adjacent to the branch extremities; -1 = none
  // (pure loops, whole-component branches). Both entries may name the same
  // interior node when a loop hangs off a single junction.
  std::array<std::int64_t, 2> endpoints{-1, -1};
  bool whole_component = false;
};

std::vector<Branch> extract_branches(const SkeletonGraph& graph);

/// Per skeleton node: id of the branch owning it, 0 when the node belongs to
/// no branch (interior/ending nodes of components that have simple nodes).
std::vector<std::uint32_t> node_branch_ids(const SkeletonGraph& graph,
                                           const std::vector<Branch>& branches);

/// CSV: branch_id,size,endpoint_kinds,first_i,first_j,first_k,last_i,last_j,last_k
void save_branches_csv(const SkeletonGraph& graph,
                       const std::vector<Branch>& branches,
                       const std::filesystem::path& path);

}  // namespace porenet
