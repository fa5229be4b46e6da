// Independent brute-force oracles used by the test suites. These deliberately
// avoid the library's algorithms: components via union-find over all adjacent
// pairs, the Euler characteristic from first principles on the cubical
// complex, nearest-source search by exhaustive scan, and dense Gaussian
// elimination for the implicit scheme.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "porenet/skeleton_graph.hpp"
#include "porenet/voxel_grid.hpp"

namespace oracle {

using porenet::Resolution;
using porenet::VoxelCoord;
using porenet::VoxelGrid;

// ---- union-find ------------------------------------------------------------

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

// 26-connected components by union-find over every adjacent pore pair.
// Labels are normalized to first-appearance order (1-based).
inline std::vector<std::uint32_t> components_unionfind(const VoxelGrid& g) {
  UnionFind uf(g.size());
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.get(idx)) continue;
    const VoxelCoord v = g.coord_of(idx);
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0 && dz == 0) continue;
          const VoxelCoord w{v.i + dx, v.j + dy, v.k + dz};
          if (g.pore_at(w)) uf.unite(idx, g.linear_index(w));
        }
  }
  std::vector<std::uint32_t> labels(g.size(), 0);
  std::map<std::size_t, std::uint32_t> remap;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.get(idx)) continue;
    const std::size_t root = uf.find(idx);
    auto [it, inserted] =
        remap.emplace(root, static_cast<std::uint32_t>(remap.size() + 1));
    labels[idx] = it->second;
  }
  return labels;
}

inline std::uint32_t component_count(const VoxelGrid& g) {
  std::uint32_t n = 0;
  for (std::uint32_t l : components_unionfind(g)) n = std::max(n, l);
  return n;
}

// ---- Euler characteristic ---------------------------------------------------

// chi = V - E + F - C of the cubical complex spanned by the pore voxels.
inline long long euler_characteristic(const VoxelGrid& g) {
  std::set<std::array<int, 3>> vertices;
  std::set<std::array<int, 4>> edges;   // (x,y,z, axis)
  std::set<std::array<int, 4>> faces;   // (x,y,z, normal axis)
  long long cubes = 0;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!g.get(idx)) continue;
    const VoxelCoord v = g.coord_of(idx);
    ++cubes;
    for (int dz = 0; dz <= 1; ++dz)
      for (int dy = 0; dy <= 1; ++dy)
        for (int dx = 0; dx <= 1; ++dx)
          vertices.insert({v.i + dx, v.j + dy, v.k + dz});
    // 12 edges: 4 along each axis
    for (int a = 0; a <= 1; ++a)
      for (int b = 0; b <= 1; ++b) {
        edges.insert({v.i, v.j + a, v.k + b, 0});
        edges.insert({v.i + a, v.j, v.k + b, 1});
        edges.insert({v.i + a, v.j + b, v.k, 2});
      }
    // 6 faces: 2 with each normal
    for (int a = 0; a <= 1; ++a) {
      faces.insert({v.i + a, v.j, v.k, 0});
      faces.insert({v.i, v.j + a, v.k, 1});
      faces.insert({v.i, v.j, v.k + a, 2});
    }
  }
  return static_cast<long long>(vertices.size()) -
         static_cast<long long>(edges.size()) +
         static_cast<long long>(faces.size()) - cubes;
}

// Background 6-components that do not touch the grid boundary (cavities).
inline int cavity_count(const VoxelGrid& g) {
  std::vector<char> visited(g.size(), 0);
  std::vector<std::size_t> stack;
  int cavities = 0;
  for (std::size_t seed = 0; seed < g.size(); ++seed) {
    if (g.get(seed) || visited[seed]) continue;
    bool touches_boundary = false;
    stack.assign(1, seed);
    visited[seed] = 1;
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const VoxelCoord v = g.coord_of(cur);
      if (v.i == 0 || v.i == g.nx() - 1 || v.j == 0 || v.j == g.ny() - 1 ||
          v.k == 0 || v.k == g.nz() - 1)
        touches_boundary = true;
      const std::array<std::array<int, 3>, 6> dirs{
          {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
      for (const auto& d : dirs) {
        const VoxelCoord w{v.i + d[0], v.j + d[1], v.k + d[2]};
        if (!g.contains(w)) continue;
        const std::size_t widx = g.linear_index(w);
        if (!g.get(widx) && !visited[widx]) {
          visited[widx] = 1;
          stack.push_back(widx);
        }
      }
    }
    if (!touches_boundary) ++cavities;
  }
  return cavities;
}

// Tunnel (genus) count from chi = components - tunnels + cavities.
inline long long tunnel_count(const VoxelGrid& g) {
  return static_cast<long long>(component_count(g)) + cavity_count(g) -
         euler_characteristic(g);
}

// ---- local simple-point oracle ----------------------------------------------

// First-principles check on the 3x3x3 window: deleting the center must keep
// the window's pore set at one 26-component and leave the window's Euler
// characteristic unchanged.
inline bool simple_point_bruteforce(const VoxelGrid& g, VoxelCoord v) {
  VoxelGrid window(3, 3, 3);
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx)
        if (g.pore_at(v.i + dx, v.j + dy, v.k + dz))
          window.set(dx + 1, dy + 1, dz + 1, true);
  VoxelGrid punctured = window;
  punctured.set(1, 1, 1, false);
  if (component_count(punctured) != 1) return false;
  return euler_characteristic(window) == euler_characteristic(punctured);
}

// ---- geometry helpers ---------------------------------------------------------

inline VoxelGrid grid_union(const VoxelGrid& a, const VoxelGrid& b) {
  VoxelGrid out = a;
  for (std::size_t idx = 0; idx < b.size(); ++idx)
    if (b.get(idx)) out.set(idx, true);
  return out;
}

// Seeded random blob: union of random balls. Produces organic multi-component
// pore shapes for property tests.
inline VoxelGrid random_blob(int n, std::uint64_t seed, int balls = 6,
                             double max_radius = 4.0, Resolution res = {}) {
  VoxelGrid g(n, n, n, res);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, n);
  std::uniform_real_distribution<double> rad(1.0, max_radius);
  for (int b = 0; b < balls; ++b) {
    const double cx = pos(rng), cy = pos(rng), cz = pos(rng), r = rad(rng);
    const double r2 = r * r;
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          const double dx = i + 0.5 - cx, dy = j + 0.5 - cy, dz = k + 0.5 - cz;
          if (dx * dx + dy * dy + dz * dz <= r2) g.set(i, j, k, true);
        }
  }
  return g;
}

// ---- dense linear algebra -----------------------------------------------------

// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> A,
                                       std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
    std::swap(A[col], A[pivot]);
    std::swap(b[col], b[pivot]);
    if (A[col][col] == 0.0) throw std::runtime_error("dense_solve: singular");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= A[r][c] * x[c];
    x[r] = acc / A[r][r];
  }
  return x;
}

}  // namespace oracle
