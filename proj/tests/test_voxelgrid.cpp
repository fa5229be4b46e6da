#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "porenet/connectivity.hpp"
#include "porenet/raw_io.hpp"
#include "porenet/shapes.hpp"
#include "porenet/voxel_grid.hpp"
#include "support/oracles.hpp"

using namespace porenet;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "porenet_test_voxelgrid";
  fs::create_directories(dir);
  return dir;
}

void write_bytes(const fs::path& path, const std::vector<unsigned char>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("load_raw reads the smallest volume") {
  const fs::path dir = temp_dir();
  write_bytes(dir / "tiny.raw", {1, 0, 0, 0, 0, 0, 0, 0});
  const VolumeMeta meta{2, 2, 2, Resolution{24, 24, 24}, "u8"};
  const VoxelGrid g = load_raw(dir / "tiny.raw", meta);
  CHECK(g.count() == 1);
  CHECK(g.pore_at(0, 0, 0));
  CHECK_FALSE(g.pore_at(1, 0, 0));
}

TEST_CASE("load_raw handles an empty pore space") {
  const fs::path dir = temp_dir();
  write_bytes(dir / "empty.raw", std::vector<unsigned char>(64, 0));
  const VolumeMeta meta{4, 4, 4, Resolution{1, 1, 1}, "u8"};
  CHECK(load_raw(dir / "empty.raw", meta).count() == 0);
}

TEST_CASE("load_raw rejects a size mismatch") {
  const fs::path dir = temp_dir();
  write_bytes(dir / "short.raw", std::vector<unsigned char>(7, 1));
  const VolumeMeta meta{2, 2, 2, Resolution{1, 1, 1}, "u8"};
  CHECK_THROWS_AS(load_raw(dir / "short.raw", meta), FormatError);
}

TEST_CASE("metadata parse errors carry the line number") {
  const fs::path dir = temp_dir();
  {
    std::ofstream out(dir / "bad.meta");
    out << "dims = [2, 2, 2]\nresolution_um = oops\n";
  }
  try {
    read_meta(dir / "bad.meta");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK_THROWS_AS(read_meta(dir / "does_not_exist.meta"), IoError);
}

TEST_CASE("save then load round-trips bit-identically") {
  VoxelGrid g = oracle::random_blob(12, 99, 5, 3.5, Resolution{24, 24, 24});
  const fs::path dir = temp_dir();
  save_raw(g, dir / "blob.raw");
  const VoxelGrid back = load_raw(dir / "blob.raw", default_meta_path(dir / "blob.raw"));
  CHECK(back == g);
}

TEST_CASE("label image round-trips") {
  const VolumeMeta meta{3, 2, 2, Resolution{1, 2, 3}, "u32le"};
  std::vector<std::uint32_t> labels{0, 1, 2, 0, 0, 70000, 1, 1, 2, 0, 0, 0};
  const fs::path dir = temp_dir();
  save_labels(labels, meta, dir / "l.raw", dir / "l.raw.meta");
  const VolumeMeta back_meta = read_meta(dir / "l.raw.meta");
  CHECK(back_meta.encoding == "u32le");
  CHECK(load_labels(dir / "l.raw", back_meta) == labels);
}

TEST_CASE("neighbors26 on a solid grid") {
  VoxelGrid g(5, 5, 5);
  for (std::size_t i = 0; i < g.size(); ++i) g.set(i, true);
  CHECK(neighbors26(g, {2, 2, 2}).size() == 26);
  CHECK(neighbors26(g, {0, 0, 0}).size() == 7);
  CHECK_THROWS_AS(neighbors26(g, {5, 0, 0}), BoundsError);

  VoxelGrid lone(5, 5, 5);
  lone.set(2, 2, 2, true);
  CHECK(neighbors26(lone, {2, 2, 2}).empty());
}

TEST_CASE("connected components: vertex contact joins, gap separates") {
  VoxelGrid diag(4, 4, 4);
  diag.set(0, 0, 0, true);
  diag.set(1, 1, 1, true);
  CHECK(connected_components(diag).count == 1);

  VoxelGrid gap(5, 1, 1);
  gap.set(0, 0, 0, true);
  gap.set(2, 0, 0, true);
  CHECK(connected_components(gap).count == 2);
}

TEST_CASE("connected components match the union-find oracle on random volumes") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const VoxelGrid g = oracle::random_blob(20, seed, 8, 5.0);
    const ComponentLabels got = connected_components(g);
    const std::vector<std::uint32_t> expected = oracle::components_unionfind(g);
    // Same partition up to label renaming; both label in first-appearance
    // order, so they match exactly.
    CHECK(got.labels == expected);
  }
}

TEST_CASE("border mask of a centered cube") {
  VoxelGrid g(5, 5, 5);
  for (int k = 1; k <= 3; ++k)
    for (int j = 1; j <= 3; ++j)
      for (int i = 1; i <= 3; ++i) g.set(i, j, k, true);
  const VoxelGrid border = border_mask(g);
  CHECK(border.count() == 26);  // all but the center voxel
  CHECK_FALSE(border.pore_at(2, 2, 2));
}

TEST_CASE("border mask: single voxel and full grid") {
  VoxelGrid lone(3, 3, 3);
  lone.set(1, 1, 1, true);
  CHECK(border_mask(lone).count() == 1);

  VoxelGrid full(4, 4, 4);
  for (std::size_t i = 0; i < full.size(); ++i) full.set(i, true);
  const VoxelGrid border = border_mask(full);
  // Outside the grid counts as non-pore, so the 6-face shell is border.
  CHECK(border.count() == 4 * 4 * 4 - 2 * 2 * 2);
  CHECK_FALSE(border.pore_at(1, 1, 1));
  CHECK(border.pore_at(0, 1, 1));
}

TEST_CASE("interior is exactly the pore set minus the border") {
  const VoxelGrid g = oracle::random_blob(15, 7, 6, 4.0);
  const VoxelGrid border = border_mask(g);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (border.get(idx)) CHECK(g.get(idx));  // border is a subset of S
    if (!g.get(idx)) continue;
    const VoxelCoord v = g.coord_of(idx);
    CHECK(border.get(idx) == (neighbor_count_26(g, v) < 26));
  }
}

TEST_CASE("cylinder voxelization matches the analytic inclusion count") {
  ShapeSpec spec;
  spec.kind = ShapeKind::cylinder;
  spec.nx = spec.ny = spec.nz = 50;
  spec.radius = 3;
  spec.length = 40;
  const VoxelGrid g = make_shape(spec);

  // Independent analytic count over voxel centers.
  std::size_t expected = 0;
  for (int k = 0; k < 50; ++k)
    for (int j = 0; j < 50; ++j)
      for (int i = 0; i < 50; ++i) {
        const double du = i + 0.5 - 25.0, dv = j + 0.5 - 25.0, w = k + 0.5;
        if (w >= 5.0 && w < 45.0 && du * du + dv * dv <= 9.0) ++expected;
      }
  CHECK(g.count() == expected);
  CHECK(std::abs(static_cast<double>(g.count()) - 3.14159265 * 9 * 40) < 160);
}

TEST_CASE("torus is one component with one tunnel") {
  ShapeSpec spec;
  spec.kind = ShapeKind::torus;
  spec.nx = spec.ny = 40;
  spec.nz = 12;
  spec.major_radius = 15;
  spec.minor_radius = 3;
  const VoxelGrid g = make_shape(spec);
  CHECK(g.count() > 0);
  CHECK(oracle::component_count(g) == 1);
  CHECK(oracle::tunnel_count(g) == 1);
  CHECK(oracle::euler_characteristic(g) == 0);
}

TEST_CASE("make_shape rejects degenerate and oversized shapes") {
  ShapeSpec spec;
  spec.kind = ShapeKind::cylinder;
  spec.nx = spec.ny = spec.nz = 20;
  spec.radius = 0;
  CHECK_THROWS_AS(make_shape(spec), std::invalid_argument);
  spec.radius = 30;
  CHECK_THROWS_AS(make_shape(spec), BoundsError);
}

TEST_CASE("grid rejects bad dims and resolutions") {
  CHECK_THROWS_AS(VoxelGrid(0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(VoxelGrid(1, 1, 1, Resolution{0, 1, 1}), std::invalid_argument);
}
