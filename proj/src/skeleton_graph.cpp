#include "porenet/skeleton_graph.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "porenet/connectivity.hpp"

namespace porenet {

std::size_t SkeletonGraph::count_kind(NodeKind kind) const {
  std::size_t n = 0;
  for (NodeKind k : kinds)
    if (k == kind) ++n;
  return n;
}

SkeletonGraph build_graph(const VoxelGrid& mask) {
  SkeletonGraph g;
  g.nx = mask.nx();
  g.ny = mask.ny();
  g.nz = mask.nz();
  g.res = mask.resolution();

  std::unordered_map<std::size_t, std::uint32_t> node_of;
  for (std::size_t idx = 0; idx < mask.size(); ++idx) {
    if (!mask.get(idx)) continue;
    node_of.emplace(idx, static_cast<std::uint32_t>(g.coords.size()));
    g.coords.push_back(mask.coord_of(idx));
  }

  g.adj_offsets.assign(g.coords.size() + 1, 0);
  std::vector<std::uint32_t> row;
  for (std::uint32_t n = 0; n < g.coords.size(); ++n) {
    const VoxelCoord v = g.coords[n];
    row.clear();
    for (const auto& d : neighbor_offsets_26()) {
      const VoxelCoord w{v.i + d[0], v.j + d[1], v.k + d[2]};
      if (!mask.pore_at(w)) continue;
      row.push_back(node_of.at(mask.linear_index(w)));
    }
    std::sort(row.begin(), row.end());
    g.adj.insert(g.adj.end(), row.begin(), row.end());
    g.adj_offsets[n + 1] = static_cast<std::uint32_t>(g.adj.size());
  }

  g.kinds.resize(g.coords.size());
  for (std::uint32_t n = 0; n < g.coords.size(); ++n) {
    const int deg = g.degree(n);
    g.kinds[n] = deg <= 1 ? NodeKind::ending
                          : (deg == 2 ? NodeKind::simple : NodeKind::interior);
  }
  return g;
}

namespace {

// Members of one branch ordered by walking the path (or loop) from its
// lexicographically smallest extremity.
std::vector<std::uint32_t> order_branch(const SkeletonGraph& g,
                                        const std::vector<std::uint32_t>& members,
                                        const std::vector<char>& is_member) {
  if (members.size() <= 1) return members;

  auto member_neighbors = [&](std::uint32_t n) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t e = g.adj_offsets[n]; e < g.adj_offsets[n + 1]; ++e)
      if (is_member[g.adj[e]]) out.push_back(g.adj[e]);
    return out;
  };

  // Path extremities have at most one member neighbor; loops have none, so
  // the walk then starts at the smallest member id.
  std::uint32_t start = members.front();
  for (std::uint32_t m : members) {
    if (member_neighbors(m).size() <= 1) {
      start = m;
      break;
    }
  }

  std::vector<std::uint32_t> ordered;
  ordered.reserve(members.size());
  std::uint32_t prev = start;
  std::uint32_t cur = start;
  ordered.push_back(start);
  while (ordered.size() < members.size()) {
    const auto nbrs = member_neighbors(cur);
    std::uint32_t next = cur;
    bool found = false;
    for (std::uint32_t n : nbrs) {
      if (n == prev) continue;
      next = n;
      found = true;
      break;
    }
    if (!found) break;
    prev = cur;
    cur = next;
    ordered.push_back(cur);
  }
  return ordered;
}

}  // namespace

std::vector<Branch> extract_branches(const SkeletonGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<Branch> branches;
  std::vector<char> visited(n, 0);
  std::vector<char> is_member(n, 0);
  std::vector<std::uint32_t> stack, members;

  // Connected components of the simple-node subgraph, discovered in node-id
  // order so the first node of each component is its smallest member.
  for (std::uint32_t seed = 0; seed < n; ++seed) {
    if (visited[seed] || g.kinds[seed] != NodeKind::simple) continue;
    members.clear();
    visited[seed] = 1;
    stack.assign(1, seed);
    while (!stack.empty()) {
      const std::uint32_t cur = stack.back();
      stack.pop_back();
      members.push_back(cur);
      is_member[cur] = 1;
      for (std::uint32_t e = g.adj_offsets[cur]; e < g.adj_offsets[cur + 1]; ++e) {
        const std::uint32_t nb = g.adj[e];
        if (!visited[nb] && g.kinds[nb] == NodeKind::simple) {
          visited[nb] = 1;
          stack.push_back(nb);
        }
      }
    }
    std::sort(members.begin(), members.end());

    Branch b;
    b.node_ids = order_branch(g, members, is_member);

    // Non-simple nodes touching the walk extremities.
    std::array<std::int64_t, 2> ends{-1, -1};
    const std::uint32_t first = b.node_ids.front();
    const std::uint32_t last = b.node_ids.back();
    auto extremity_endpoint = [&](std::uint32_t m) -> std::int64_t {
      for (std::uint32_t e = g.adj_offsets[m]; e < g.adj_offsets[m + 1]; ++e)
        if (g.kinds[g.adj[e]] != NodeKind::simple) return g.adj[e];
      return -1;
    };
    ends[0] = extremity_endpoint(first);
    if (b.node_ids.size() == 1) {
      // Singleton branch: a simple node has two neighbors, so it can touch
      // two distinct non-simple nodes.
      std::int64_t second = -1;
      for (std::uint32_t e = g.adj_offsets[first]; e < g.adj_offsets[first + 1];
           ++e) {
        const std::uint32_t nb = g.adj[e];
        if (g.kinds[nb] != NodeKind::simple &&
            static_cast<std::int64_t>(nb) != ends[0])
          second = nb;
      }
      ends[1] = second == -1 ? ends[0] : second;
      if (ends[0] == -1) ends[1] = -1;
    } else {
      ends[1] = extremity_endpoint(last);
    }
    b.endpoints = ends;
    for (std::uint32_t m : members) is_member[m] = 0;
    branches.push_back(std::move(b));
  }

  // Whole-component fallback: skeleton components without any simple node
  // (isolated voxels, ending-ending pairs, small stars) still must seed a
  // region each.
  std::vector<char> comp_visited(n, 0);
  for (std::uint32_t seed = 0; seed < n; ++seed) {
    if (comp_visited[seed]) continue;
    members.clear();
    bool has_simple = false;
    comp_visited[seed] = 1;
    stack.assign(1, seed);
    while (!stack.empty()) {
      const std::uint32_t cur = stack.back();
      stack.pop_back();
      members.push_back(cur);
      if (g.kinds[cur] == NodeKind::simple) has_simple = true;
      for (std::uint32_t e = g.adj_offsets[cur]; e < g.adj_offsets[cur + 1]; ++e) {
        const std::uint32_t nb = g.adj[e];
        if (!comp_visited[nb]) {
          comp_visited[nb] = 1;
          stack.push_back(nb);
        }
      }
    }
    if (has_simple) continue;
    Branch b;
    std::sort(members.begin(), members.end());
    b.node_ids = members;
    b.whole_component = true;
    branches.push_back(std::move(b));
  }

  std::sort(branches.begin(), branches.end(),
            [](const Branch& a, const Branch& b) {
              return *std::min_element(a.node_ids.begin(), a.node_ids.end()) <
                     *std::min_element(b.node_ids.begin(), b.node_ids.end());
            });
  for (std::size_t i = 0; i < branches.size(); ++i)
    branches[i].id = static_cast<std::uint32_t>(i + 1);
  return branches;
}

std::vector<std::uint32_t> node_branch_ids(const SkeletonGraph& graph,
                                           const std::vector<Branch>& branches) {
  std::vector<std::uint32_t> out(graph.node_count(), 0);
  for (const Branch& b : branches)
    for (std::uint32_t n : b.node_ids) out[n] = b.id;
  return out;
}

void save_branches_csv(const SkeletonGraph& graph,
                       const std::vector<Branch>& branches,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write branch table: " + path.string());
  out << "branch_id,size,endpoint_kinds,first_i,first_j,first_k,last_i,last_j,last_k\n";
  auto kind_name = [&](std::int64_t node) -> const char* {
    if (node < 0) return "-";
    switch (graph.kinds[static_cast<std::size_t>(node)]) {
      case NodeKind::ending: return "ending";
      case NodeKind::simple: return "simple";
      case NodeKind::interior: return "interior";
    }
    return "-";
  };
  for (const Branch& b : branches) {
    const VoxelCoord f = graph.coords[b.node_ids.front()];
    const VoxelCoord l = graph.coords[b.node_ids.back()];
    out << b.id << ',' << b.node_ids.size() << ',' << kind_name(b.endpoints[0])
        << '/' << kind_name(b.endpoints[1]) << ',' << f.i << ',' << f.j << ','
        << f.k << ',' << l.i << ',' << l.j << ',' << l.k << '\n';
  }
  if (!out) throw IoError("failed writing branch table: " + path.string());
}

}  // namespace porenet
