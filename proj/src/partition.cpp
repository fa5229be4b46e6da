#include "porenet/partition.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <thread>

#include "porenet/connectivity.hpp"

namespace porenet {

namespace {

// Branch voxels (the nearest-branch sources) bucketed on a coarse grid for
// expanding-ring nearest-neighbor queries. Buckets keep sources sorted by
// (branch id, linear index) so scan order is deterministic.
struct SourceIndex {
  struct Source {
    VoxelCoord coord;
    std::uint32_t branch;
    std::uint32_t component;
  };

  static constexpr int kBucket = 4;

  int bx, by, bz;  // bucket grid dims
  std::vector<std::vector<Source>> buckets;

  SourceIndex(const VoxelGrid& grid) {
    bx = (grid.nx() + kBucket - 1) / kBucket;
    by = (grid.ny() + kBucket - 1) / kBucket;
    bz = (grid.nz() + kBucket - 1) / kBucket;
    buckets.resize(static_cast<std::size_t>(bx) * by * bz);
  }

  std::size_t bucket_of(VoxelCoord v) const {
    return static_cast<std::size_t>(v.i / kBucket) +
           static_cast<std::size_t>(bx) *
               (static_cast<std::size_t>(v.j / kBucket) +
                static_cast<std::size_t>(by) * (v.k / kBucket));
  }

  void insert(Source s) { buckets[bucket_of(s.coord)].push_back(s); }

  void finalize(const VoxelGrid& grid) {
    for (auto& b : buckets)
      std::sort(b.begin(), b.end(), [&](const Source& a, const Source& c) {
        if (a.branch != c.branch) return a.branch < c.branch;
        return grid.linear_index(a.coord) < grid.linear_index(c.coord);
      });
  }
};

}  // namespace

std::vector<std::uint32_t> nearest_branch_transform(
    const VoxelGrid& grid, const SkeletonGraph& graph,
    const std::vector<Branch>& branches, int threads) {
  const ComponentLabels comps = connected_components(grid);

  SourceIndex index(grid);
  for (const Branch& b : branches) {
    for (std::uint32_t n : b.node_ids) {
      const VoxelCoord v = graph.coords[n];
      const std::uint32_t comp = comps.labels[grid.linear_index(v)];
      if (comp == 0)
        throw InvariantError("nearest_branch_transform: branch voxel off the pore set");
      index.insert({v, b.id, comp});
    }
  }
  index.finalize(grid);

  const Resolution res = grid.resolution();
  const double rmin = std::min({res.rx, res.ry, res.rz});
  const int max_ring = std::max({index.bx, index.by, index.bz});

  std::vector<std::uint32_t> assignment(grid.size(), 0);

  auto assign_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      if (!grid.get(idx)) continue;
      const VoxelCoord v = grid.coord_of(idx);
      const std::uint32_t comp = comps.labels[idx];
      const int vbi = v.i / SourceIndex::kBucket;
      const int vbj = v.j / SourceIndex::kBucket;
      const int vbk = v.k / SourceIndex::kBucket;

      double best_d2 = std::numeric_limits<double>::infinity();
      std::uint32_t best_branch = 0;

      for (int ring = 0; ring <= max_ring; ++ring) {
        if (best_branch != 0) {
          // Any voxel in a bucket at Chebyshev bucket-distance `ring` is at
          // least (ring-1)*kBucket+1 voxels away along some axis.
          const double lb =
              (static_cast<double>(ring - 1) * SourceIndex::kBucket + 1) * rmin;
          if (lb > 0 && lb * lb > best_d2) break;
        }
        const int klo = std::max(0, vbk - ring), khi = std::min(index.bz - 1, vbk + ring);
        const int jlo = std::max(0, vbj - ring), jhi = std::min(index.by - 1, vbj + ring);
        const int ilo = std::max(0, vbi - ring), ihi = std::min(index.bx - 1, vbi + ring);
        for (int bk = klo; bk <= khi; ++bk) {
          for (int bj = jlo; bj <= jhi; ++bj) {
            for (int bi = ilo; bi <= ihi; ++bi) {
              const int cheb = std::max({std::abs(bi - vbi), std::abs(bj - vbj),
                                         std::abs(bk - vbk)});
              if (cheb != ring) continue;  // only the new shell
              const auto& bucket =
                  index.buckets[static_cast<std::size_t>(bi) +
                                static_cast<std::size_t>(index.bx) *
                                    (static_cast<std::size_t>(bj) +
                                     static_cast<std::size_t>(index.by) * bk)];
              for (const auto& s : bucket) {
                if (s.component != comp) continue;
                const double d2 = center_dist2(v, s.coord, res);
                if (d2 < best_d2 ||
                    (d2 == best_d2 && s.branch < best_branch)) {
                  best_d2 = d2;
                  best_branch = s.branch;
                }
              }
            }
          }
        }
      }

      if (best_branch == 0)
        throw InvariantError(
            "nearest_branch_transform: pore component without skeleton voxel");
      assignment[idx] = best_branch;
    }
  };

  threads = std::max(1, threads);
  if (threads == 1 || grid.size() < (1u << 15)) {
    assign_range(0, grid.size());
  } else {
    // Per-voxel work is independent, so chunked execution is deterministic.
    std::vector<std::thread> pool;
    const std::size_t step = (grid.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const std::size_t b = std::min(grid.size(), t * step);
      const std::size_t e = std::min(grid.size(), b + step);
      if (b < e) pool.emplace_back(assign_range, b, e);
    }
    for (auto& t : pool) t.join();
  }
  return assignment;
}

Partition split_disconnected(const VoxelGrid& grid,
                             const std::vector<std::uint32_t>& branch_assignment) {
  if (branch_assignment.size() != grid.size())
    throw InvariantError("split_disconnected: assignment size mismatch");

  Partition part;
  part.nx = grid.nx();
  part.ny = grid.ny();
  part.nz = grid.nz();
  part.res = grid.resolution();
  part.labels.assign(grid.size(), 0);

  struct Provisional {
    std::uint32_t branch;
    std::size_t seed;
    std::uint64_t count = 0;
    std::array<double, 3> sum{};  // sum of integer voxel indices
  };
  std::vector<Provisional> provisional;
  std::vector<std::size_t> stack;
  const auto& offsets = neighbor_offsets_26();

  for (std::size_t seed = 0; seed < grid.size(); ++seed) {
    if (!grid.get(seed) || part.labels[seed] != 0) continue;
    if (branch_assignment[seed] == 0)
      throw InvariantError("split_disconnected: unassigned pore voxel");
    const std::uint32_t branch = branch_assignment[seed];
    Provisional region{branch, seed};
    const std::uint32_t provisional_label =
        static_cast<std::uint32_t>(provisional.size() + 1);
    part.labels[seed] = provisional_label;
    stack.assign(1, seed);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const VoxelCoord c = grid.coord_of(cur);
      ++region.count;
      region.sum[0] += c.i;
      region.sum[1] += c.j;
      region.sum[2] += c.k;
      for (const auto& d : offsets) {
        const VoxelCoord nb{c.i + d[0], c.j + d[1], c.k + d[2]};
        if (!grid.contains(nb)) continue;
        const std::size_t nidx = grid.linear_index(nb);
        if (grid.get(nidx) && part.labels[nidx] == 0 &&
            branch_assignment[nidx] == branch) {
          part.labels[nidx] = provisional_label;
          stack.push_back(nidx);
        }
      }
    }
    provisional.push_back(region);
  }

  // Regions were discovered in ascending seed order; a stable sort by branch
  // yields the documented (branch id, seed voxel) order.
  std::vector<std::uint32_t> order(provisional.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return provisional[a].branch < provisional[b].branch;
                   });

  std::vector<std::uint32_t> remap(provisional.size() + 1, 0);
  part.regions.resize(provisional.size());
  const Resolution res = grid.resolution();
  for (std::uint32_t rank = 0; rank < order.size(); ++rank) {
    const Provisional& p = provisional[order[rank]];
    remap[order[rank] + 1] = rank + 1;
    Region& r = part.regions[rank];
    r.id = rank + 1;
    r.branch_id = p.branch;
    r.voxel_count = p.count;
    const double n = static_cast<double>(p.count);
    r.centroid_um = {(p.sum[0] / n + 0.5) * res.rx, (p.sum[1] / n + 0.5) * res.ry,
                     (p.sum[2] / n + 0.5) * res.rz};
  }
  for (auto& label : part.labels) label = remap[label];
  return part;
}

Partition partition_pore_space(const VoxelGrid& grid, const SkeletonGraph& graph,
                               const std::vector<Branch>& branches, int threads) {
  return split_disconnected(
      grid, nearest_branch_transform(grid, graph, branches, threads));
}

Partition partition_from_labels(std::vector<std::uint32_t> labels, int nx,
                                int ny, int nz, const Resolution& res) {
  if (labels.size() != static_cast<std::size_t>(nx) * ny * nz)
    throw FormatError("partition_from_labels: label count does not match dims");
  std::uint32_t max_label = 0;
  for (std::uint32_t l : labels) max_label = std::max(max_label, l);

  Partition part;
  part.nx = nx;
  part.ny = ny;
  part.nz = nz;
  part.res = res;
  part.regions.resize(max_label);
  std::vector<std::array<double, 3>> sums(max_label, {0.0, 0.0, 0.0});

  std::size_t idx = 0;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i, ++idx) {
        const std::uint32_t l = labels[idx];
        if (l == 0) continue;
        Region& r = part.regions[l - 1];
        ++r.voxel_count;
        sums[l - 1][0] += i;
        sums[l - 1][1] += j;
        sums[l - 1][2] += k;
      }
    }
  }
  for (std::uint32_t l = 1; l <= max_label; ++l) {
    Region& r = part.regions[l - 1];
    if (r.voxel_count == 0)
      throw FormatError("partition_from_labels: region id " + std::to_string(l) +
                        " has no voxels (ids must be dense)");
    r.id = l;
    const double n = static_cast<double>(r.voxel_count);
    r.centroid_um = {(sums[l - 1][0] / n + 0.5) * res.rx,
                     (sums[l - 1][1] / n + 0.5) * res.ry,
                     (sums[l - 1][2] / n + 0.5) * res.rz};
  }
  part.labels = std::move(labels);
  return part;
}

void save_regions_csv(const Partition& part, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write region table: " + path.string());
  out << "region_id,branch_id,voxel_count,centroid_x_um,centroid_y_um,centroid_z_um\n";
  char buf[160];
  for (const Region& r : part.regions) {
    std::snprintf(buf, sizeof buf, "%u,%u,%llu,%.12g,%.12g,%.12g\n", r.id,
                  r.branch_id, static_cast<unsigned long long>(r.voxel_count),
                  r.centroid_um[0], r.centroid_um[1], r.centroid_um[2]);
    out << buf;
  }
  if (!out) throw IoError("failed writing region table: " + path.string());
}

}  // namespace porenet
