#include "porenet/thinning.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "porenet/connectivity.hpp"

namespace porenet {

namespace {

// 3x3x3 window cells indexed n = (dx+1) + 3*(dy+1) + 9*(dz+1); center is 13.
constexpr int kCenter = 13;

// Change of the Euler characteristic when the center voxel is deleted,
// evaluated octant by octant (Lee, Kashyap & Chu 1994). Index: bit 0 is the
// center (always set), bits 1..7 encode the seven window cells of the octant
// in a fixed orientation. Deletion preserves the Euler characteristic iff
// the eight octant contributions sum to zero.
constexpr std::array<int, 256> make_euler_lut() {
  std::array<int, 256> lut{};
  constexpr int idx[128] = {
      1,   3,   5,   7,   9,   11,  13,  15,  17,  19,  21,  23,  25,
      27,  29,  31,  33,  35,  37,  39,  41,  43,  45,  47,  49,  51,
      53,  55,  57,  59,  61,  63,  65,  67,  69,  71,  73,  75,  77,
      79,  81,  83,  85,  87,  89,  91,  93,  95,  97,  99,  101, 103,
      105, 107, 109, 111, 113, 115, 117, 119, 121, 123, 125, 127, 129,
      131, 133, 135, 137, 139, 141, 143, 145, 147, 149, 151, 153, 155,
      157, 159, 161, 163, 165, 167, 169, 171, 173, 175, 177, 179, 181,
      183, 185, 187, 189, 191, 193, 195, 197, 199, 201, 203, 205, 207,
      209, 211, 213, 215, 217, 219, 221, 223, 225, 227, 229, 231, 233,
      235, 237, 239, 241, 243, 245, 247, 249, 251, 253, 255};
  constexpr int val[128] = {
      1,  -1, -1, 1,  -3, -1, -1, 1,  -1, 1,  1,  -1, 3,  1,  1,  -1,
      -3, -1, 3,  1,  1,  -1, 3,  1,  -1, 1,  1,  -1, 3,  1,  1,  -1,
      -3, 3,  -1, 1,  1,  3,  -1, 1,  -1, 1,  1,  -1, 3,  1,  1,  -1,
      1,  3,  3,  1,  5,  3,  3,  1,  -1, 1,  1,  -1, 3,  1,  1,  -1,
      -7, -1, -1, 1,  -3, -1, -1, 1,  -1, 1,  1,  -1, 3,  1,  1,  -1,
      -3, -1, 3,  1,  1,  -1, 3,  1,  -1, 1,  1,  -1, 3,  1,  1,  -1,
      -3, 3,  -1, 1,  1,  3,  -1, 1,  -1, 1,  1,  -1, 3,  1,  1,  -1,
      1,  3,  3,  1,  5,  3,  3,  1,  -1, 1,  1,  -1, 3,  1,  1,  -1};
  for (int n = 0; n < 128; ++n) lut[idx[n]] = val[n];
  return lut;
}

constexpr std::array<int, 256> kEulerLut = make_euler_lut();

// Window cells of each octant, ordered by descending bit weight
// (128, 64, 32, 16, 8, 4, 2); the center contributes the implicit low bit.
constexpr int kOctantCells[8][7] = {
    {24, 25, 15, 16, 21, 22, 12},  // -x +y +z
    {26, 23, 17, 14, 25, 22, 16},  // +x +y +z
    {18, 21, 9, 12, 19, 22, 10},   // -x -y +z
    {20, 23, 19, 22, 11, 14, 10},  // +x -y +z
    {6, 15, 7, 16, 3, 12, 4},      // -x +y -z
    {8, 7, 17, 16, 5, 4, 14},      // +x +y -z
    {0, 9, 3, 12, 1, 10, 4},       // -x -y -z
    {2, 1, 11, 10, 5, 4, 14},      // +x -y -z
};

// Bitmask of window cells 26-adjacent to cell n inside the window, center
// excluded. Used to flood-fill the punctured neighborhood.
constexpr std::array<std::uint32_t, 27> make_window_adjacency() {
  std::array<std::uint32_t, 27> adj{};
  for (int a = 0; a < 27; ++a) {
    const int ax = a % 3, ay = (a / 3) % 3, az = a / 9;
    for (int b = 0; b < 27; ++b) {
      if (a == b || b == kCenter) continue;
      const int bx = b % 3, by = (b / 3) % 3, bz = b / 9;
      const int dx = ax > bx ? ax - bx : bx - ax;
      const int dy = ay > by ? ay - by : by - ay;
      const int dz = az > bz ? az - bz : bz - az;
      if (dx <= 1 && dy <= 1 && dz <= 1) adj[a] |= 1u << b;
    }
  }
  return adj;
}

constexpr std::array<std::uint32_t, 27> kWindowAdj = make_window_adjacency();

// 27-bit occupancy of the 3x3x3 window around v (center bit always set for
// a pore voxel; out-of-grid cells read as background).
std::uint32_t window_mask(const VoxelGrid& grid, VoxelCoord v) {
  std::uint32_t mask = 0;
  int n = 0;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx, ++n)
        if (grid.pore_at(v.i + dx, v.j + dy, v.k + dz)) mask |= 1u << n;
  return mask;
}

bool euler_invariant(std::uint32_t mask) {
  int delta = 0;
  for (const auto& octant : kOctantCells) {
    unsigned idx = 1;
    unsigned bit = 128;
    for (int cell : octant) {
      if (mask & (1u << cell)) idx |= bit;
      bit >>= 1;
    }
    delta += kEulerLut[idx];
  }
  return delta == 0;
}

// Exactly one 26-connected pore component in the punctured window.
bool punctured_single_component(std::uint32_t mask) {
  std::uint32_t rest = mask & ~(1u << kCenter);
  if (rest == 0) return false;  // deleting the last voxel kills a component
  std::uint32_t region = rest & (~rest + 1);  // lowest set bit as seed
  for (;;) {
    std::uint32_t grown = region;
    std::uint32_t frontier = region;
    while (frontier) {
      const int cell = std::countr_zero(frontier);
      frontier &= frontier - 1;
      grown |= kWindowAdj[cell] & rest;
    }
    if (grown == region) break;
    region = grown;
  }
  return region == rest;
}

bool simple_mask(std::uint32_t mask) {
  return punctured_single_component(mask) && euler_invariant(mask);
}

}  // namespace

bool is_simple_point(const VoxelGrid& grid, VoxelCoord v) {
  if (!grid.contains(v) || !grid.pore_at(v))
    throw std::invalid_argument("is_simple_point: voxel is not in the pore set");
  return simple_mask(window_mask(grid, v));
}

VoxelGrid thin(const VoxelGrid& grid, int threads) {
  VoxelGrid work = grid;
  if (work.count() == 0) return work;

  constexpr std::array<std::array<int, 3>, 6> kDirections{{
      {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};

  const std::size_t total = work.size();
  threads = std::max(1, threads);

  std::vector<std::size_t> candidates;
  bool any_change = true;
  while (any_change) {
    any_change = false;
    for (const auto& dir : kDirections) {
      candidates.clear();

      auto scan_range = [&](std::size_t begin, std::size_t end,
                            std::vector<std::size_t>& out) {
        for (std::size_t idx = begin; idx < end; ++idx) {
          if (!work.get(idx)) continue;
          const VoxelCoord v = work.coord_of(idx);
          if (work.pore_at(v.i + dir[0], v.j + dir[1], v.k + dir[2]))
            continue;  // not exposed in this direction
          const std::uint32_t mask = window_mask(work, v);
          const int nbrs = std::popcount(mask) - 1;
          if (nbrs <= 1) continue;  // ending-point protection
          if (simple_mask(mask)) out.push_back(idx);
        }
      };

      if (threads == 1 || total < (1u << 16)) {
        scan_range(0, total, candidates);
      } else {
        // Chunks are concatenated in order, so the candidate list matches a
        // serial scan regardless of thread count.
        const int n_chunks = threads;
        std::vector<std::vector<std::size_t>> chunk_out(n_chunks);
        std::vector<std::thread> pool;
        pool.reserve(n_chunks);
        const std::size_t step = (total + n_chunks - 1) / n_chunks;
        for (int c = 0; c < n_chunks; ++c) {
          const std::size_t b = std::min(total, c * step);
          const std::size_t e = std::min(total, b + step);
          pool.emplace_back(scan_range, b, e, std::ref(chunk_out[c]));
        }
        for (auto& t : pool) t.join();
        for (auto& part : chunk_out)
          candidates.insert(candidates.end(), part.begin(), part.end());
      }

      // Sequential re-validation: earlier deletions may have changed the
      // neighborhood, so each candidate is re-tested against the current
      // image before it is removed.
      for (std::size_t idx : candidates) {
        const VoxelCoord v = work.coord_of(idx);
        if (simple_mask(window_mask(work, v))) {
          work.set(idx, false);
          any_change = true;
        }
      }
    }
  }
  return work;
}

}  // namespace porenet
