#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "porenet/connectivity.hpp"
#include "porenet/shapes.hpp"
#include "porenet/skeleton_graph.hpp"
#include "porenet/thinning.hpp"
#include "support/oracles.hpp"

using namespace porenet;

namespace {

bool has_full_2x2x2_block(const VoxelGrid& g) {
  for (int k = 0; k + 1 < g.nz(); ++k)
    for (int j = 0; j + 1 < g.ny(); ++j)
      for (int i = 0; i + 1 < g.nx(); ++i) {
        bool full = true;
        for (int dz = 0; dz <= 1 && full; ++dz)
          for (int dy = 0; dy <= 1 && full; ++dy)
            for (int dx = 0; dx <= 1 && full; ++dx)
              full = g.pore_at(i + dx, j + dy, k + dz);
        if (full) return true;
      }
  return false;
}

void check_homotopic(const VoxelGrid& shape, const VoxelGrid& skeleton) {
  CHECK(oracle::component_count(skeleton) == oracle::component_count(shape));
  CHECK(oracle::euler_characteristic(skeleton) ==
        oracle::euler_characteristic(shape));
  CHECK(oracle::cavity_count(skeleton) == oracle::cavity_count(shape));
}

}  // namespace

TEST_CASE("thinning keeps a single voxel") {
  VoxelGrid g(5, 5, 5);
  g.set(2, 2, 2, true);
  CHECK(thin(g) == g);
}

TEST_CASE("thinning keeps an already-thin line") {
  VoxelGrid g(12, 3, 3);
  for (int i = 1; i <= 10; ++i) g.set(i, 1, 1, true);
  CHECK(thin(g) == g);
}

TEST_CASE("empty input gives an empty skeleton") {
  VoxelGrid g(6, 6, 6);
  CHECK(thin(g).count() == 0);
}

TEST_CASE("solid cylinder thins to a single curve with two ends") {
  ShapeSpec spec;
  spec.kind = ShapeKind::cylinder;
  spec.nx = spec.ny = spec.nz = 50;
  spec.radius = 3;
  spec.length = 40;
  const VoxelGrid shape = make_shape(spec);
  const VoxelGrid skeleton = thin(shape);

  CHECK(skeleton.count() > 10);
  check_homotopic(shape, skeleton);

  const SkeletonGraph graph = build_graph(skeleton);
  CHECK(graph.count_kind(NodeKind::ending) == 2);
  CHECK(graph.count_kind(NodeKind::interior) == 0);
  CHECK(graph.count_kind(NodeKind::simple) == skeleton.count() - 2);

  // The curve hugs the cylinder axis (x = y = 25 in voxel units).
  for (const VoxelCoord& v : graph.coords) {
    const double du = v.i + 0.5 - 25.0;
    const double dv = v.j + 0.5 - 25.0;
    CHECK(du * du + dv * dv < 2.5 * 2.5);
  }
}

TEST_CASE("torus thins to a pure cycle") {
  ShapeSpec spec;
  spec.kind = ShapeKind::torus;
  spec.nx = spec.ny = 40;
  spec.nz = 12;
  spec.major_radius = 15;
  spec.minor_radius = 3;
  const VoxelGrid shape = make_shape(spec);
  const VoxelGrid skeleton = thin(shape);

  check_homotopic(shape, skeleton);
  const SkeletonGraph graph = build_graph(skeleton);
  CHECK(graph.count_kind(NodeKind::ending) == 0);
  for (std::uint32_t n = 0; n < graph.node_count(); ++n)
    CHECK(graph.degree(n) == 2);
}

TEST_CASE("thinning is idempotent and thread-count independent") {
  for (std::uint64_t seed : {3u, 17u, 42u}) {
    const VoxelGrid shape = oracle::random_blob(18, seed, 7, 5.0);
    const VoxelGrid skeleton = thin(shape);
    CHECK(thin(skeleton) == skeleton);       // bit-exact fixed point
    CHECK(thin(shape, 4) == skeleton);       // deterministic across threads
    CHECK_FALSE(has_full_2x2x2_block(skeleton));
    check_homotopic(shape, skeleton);
    // Skeleton stays inside the pore set.
    for (std::size_t idx = 0; idx < shape.size(); ++idx)
      if (skeleton.get(idx)) CHECK(shape.get(idx));
  }
}

TEST_CASE("is_simple_point agrees with the brute-force topology oracle") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const VoxelGrid g = oracle::random_blob(8, seed, 4, 3.0);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      if (!g.get(idx)) continue;
      const VoxelCoord v = g.coord_of(idx);
      CHECK(is_simple_point(g, v) == oracle::simple_point_bruteforce(g, v));
    }
  }
}

TEST_CASE("deleting the center of a solid block would create a cavity") {
  // The center of a fully occupied 3x3x3 neighborhood is NOT simple: removal
  // changes the Euler characteristic (a cavity appears), which the
  // brute-force oracle confirms.
  VoxelGrid g(5, 5, 5);
  for (int k = 1; k <= 3; ++k)
    for (int j = 1; j <= 3; ++j)
      for (int i = 1; i <= 3; ++i) g.set(i, j, k, true);
  CHECK_FALSE(oracle::simple_point_bruteforce(g, {2, 2, 2}));
  CHECK_FALSE(is_simple_point(g, {2, 2, 2}));
  // A corner of the block is simple.
  CHECK(oracle::simple_point_bruteforce(g, {1, 1, 1}));
  CHECK(is_simple_point(g, {1, 1, 1}));
}

TEST_CASE("loop voxels and isolated voxels are not simple") {
  // 8-voxel closed loop in a plane: removing any voxel breaks the cycle.
  VoxelGrid loop(6, 6, 3);
  const int pts[8][2] = {{1, 0}, {2, 0}, {3, 1}, {3, 2}, {2, 3}, {1, 3}, {0, 2}, {0, 1}};
  for (const auto& p : pts) loop.set(p[0] + 1, p[1] + 1, 1, true);
  const SkeletonGraph graph = build_graph(loop);
  for (std::uint32_t n = 0; n < graph.node_count(); ++n)
    CHECK(graph.degree(n) == 2);  // the fixture really is a cycle
  for (const auto& p : pts)
    CHECK_FALSE(is_simple_point(loop, {p[0] + 1, p[1] + 1, 1}));

  VoxelGrid lone(3, 3, 3);
  lone.set(1, 1, 1, true);
  CHECK_FALSE(is_simple_point(lone, {1, 1, 1}));
  CHECK_THROWS_AS(is_simple_point(lone, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("thinning preserves topology of tube fixtures") {
  ShapeSpec l;
  l.kind = ShapeKind::l_tube;
  l.nx = l.ny = 40;
  l.nz = 16;
  l.radius = 3;
  const VoxelGrid l_shape = make_shape(l);
  check_homotopic(l_shape, thin(l_shape));

  ShapeSpec hole;
  hole.kind = ShapeKind::cube_with_hole;
  hole.nx = hole.ny = hole.nz = 30;
  hole.cube_side = 20;
  hole.radius = 4;
  const VoxelGrid hole_shape = make_shape(hole);
  CHECK(oracle::tunnel_count(hole_shape) == 1);
  check_homotopic(hole_shape, thin(hole_shape));
}
