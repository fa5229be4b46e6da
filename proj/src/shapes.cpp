#include "porenet/shapes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace porenet {

namespace {

using Vec3 = std::array<double, 3>;

double dist2_point_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const Vec3 ap{p[0] - a[0], p[1] - a[1], p[2] - a[2]};
  const double len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
  double t = len2 > 0.0 ? (ap[0] * ab[0] + ap[1] * ab[1] + ap[2] * ab[2]) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec3 d{p[0] - (a[0] + t * ab[0]), p[1] - (a[1] + t * ab[1]),
               p[2] - (a[2] + t * ab[2])};
  return d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
}

void require_inside(double lo, double hi, double n, const char* what) {
  if (lo < 0.0 || hi > n)
    throw BoundsError(std::string("make_shape: ") + what + " exceeds grid");
}

}  // namespace

ShapeKind shape_kind_from_string(const std::string& name) {
  if (name == "cylinder") return ShapeKind::cylinder;
  if (name == "torus") return ShapeKind::torus;
  if (name == "l-tube" || name == "l_tube") return ShapeKind::l_tube;
  if (name == "cube-with-hole" || name == "cube_with_hole")
    return ShapeKind::cube_with_hole;
  if (name == "y-tube" || name == "y_tube") return ShapeKind::y_tube;
  throw std::invalid_argument("unknown shape kind: " + name);
}

VoxelGrid make_shape(const ShapeSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1 || spec.nz < 1)
    throw std::invalid_argument("make_shape: dims must be >= 1");

  VoxelGrid grid(spec.nx, spec.ny, spec.nz, spec.res);
  const double cx = spec.nx / 2.0;
  const double cy = spec.ny / 2.0;
  const double cz = spec.nz / 2.0;
  const std::array<double, 3> dims{static_cast<double>(spec.nx),
                                   static_cast<double>(spec.ny),
                                   static_cast<double>(spec.nz)};
  const std::array<double, 3> center{cx, cy, cz};

  // Per-voxel inclusion predicate on the voxel center.
  auto rasterize = [&](auto&& inside) {
    for (int k = 0; k < spec.nz; ++k)
      for (int j = 0; j < spec.ny; ++j)
        for (int i = 0; i < spec.nx; ++i)
          if (inside(i + 0.5, j + 0.5, k + 0.5)) grid.set(i, j, k, true);
  };

  switch (spec.kind) {
    case ShapeKind::cylinder: {
      if (spec.radius <= 0.0)
        throw std::invalid_argument("make_shape: cylinder radius must be > 0");
      if (spec.axis < 0 || spec.axis > 2)
        throw std::invalid_argument("make_shape: axis must be 0, 1 or 2");
      const int a = spec.axis;
      const int u = (a + 1) % 3;
      const int v = (a + 2) % 3;
      const double len = spec.length > 0.0 ? spec.length : dims[a];
      const double lo = (dims[a] - len) / 2.0;
      const double hi = lo + len;
      require_inside(lo, hi, dims[a], "cylinder length");
      require_inside(center[u] - spec.radius, center[u] + spec.radius, dims[u],
                     "cylinder radius");
      require_inside(center[v] - spec.radius, center[v] + spec.radius, dims[v],
                     "cylinder radius");
      const double r2 = spec.radius * spec.radius;
      rasterize([&](double x, double y, double z) {
        const std::array<double, 3> p{x, y, z};
        const double du = p[u] - center[u];
        const double dv = p[v] - center[v];
        return p[a] >= lo && p[a] < hi && du * du + dv * dv <= r2;
      });
      break;
    }
    case ShapeKind::torus: {
      if (spec.major_radius <= 0.0 || spec.minor_radius <= 0.0)
        throw std::invalid_argument("make_shape: torus radii must be > 0");
      const double reach = spec.major_radius + spec.minor_radius;
      require_inside(cx - reach, cx + reach, dims[0], "torus");
      require_inside(cy - reach, cy + reach, dims[1], "torus");
      require_inside(cz - spec.minor_radius, cz + spec.minor_radius, dims[2],
                     "torus");
      const double r2 = spec.minor_radius * spec.minor_radius;
      rasterize([&](double x, double y, double z) {
        const double ring =
            std::hypot(x - cx, y - cy) - spec.major_radius;
        const double dz = z - cz;
        return ring * ring + dz * dz <= r2;
      });
      break;
    }
    case ShapeKind::l_tube: {
      if (spec.radius <= 0.0)
        throw std::invalid_argument("make_shape: l-tube radius must be > 0");
      const double m = spec.radius + 1.5;  // arm start margin
      if (cx - m < spec.radius || cy - m < spec.radius)
        throw BoundsError("make_shape: l-tube does not fit inside grid");
      require_inside(cz - spec.radius, cz + spec.radius, dims[2], "l-tube");
      // Corner at the grid center; one arm back along x, one back along y.
      const Vec3 corner{cx, cy, cz};
      const Vec3 end_x{m, cy, cz};
      const Vec3 end_y{cx, m, cz};
      const double r2 = spec.radius * spec.radius;
      rasterize([&](double x, double y, double z) {
        const Vec3 p{x, y, z};
        return dist2_point_segment(p, corner, end_x) <= r2 ||
               dist2_point_segment(p, corner, end_y) <= r2;
      });
      break;
    }
    case ShapeKind::y_tube: {
      if (spec.radius <= 0.0)
        throw std::invalid_argument("make_shape: y-tube radius must be > 0");
      const double arm = spec.length > 0.0
                             ? spec.length
                             : std::min({cx, cy, cz}) - spec.radius - 2.0;
      if (arm <= spec.radius)
        throw BoundsError("make_shape: y-tube arms do not fit inside grid");
      const Vec3 junction{cx, cy, cz};
      // Stem down in y, two branches up at +-45 degrees in the xy-plane.
      const double diag = arm / std::sqrt(2.0);
      const std::array<Vec3, 3> tips{Vec3{cx, cy - arm, cz},
                                     Vec3{cx - diag, cy + diag, cz},
                                     Vec3{cx + diag, cy + diag, cz}};
      for (const auto& tip : tips) {
        require_inside(tip[0] - spec.radius, tip[0] + spec.radius, dims[0],
                       "y-tube");
        require_inside(tip[1] - spec.radius, tip[1] + spec.radius, dims[1],
                       "y-tube");
      }
      require_inside(cz - spec.radius, cz + spec.radius, dims[2], "y-tube");
      const double r2 = spec.radius * spec.radius;
      rasterize([&](double x, double y, double z) {
        const Vec3 p{x, y, z};
        for (const auto& tip : tips)
          if (dist2_point_segment(p, junction, tip) <= r2) return true;
        return false;
      });
      break;
    }
    case ShapeKind::cube_with_hole: {
      if (spec.cube_side <= 0.0)
        throw std::invalid_argument("make_shape: cube side must be > 0");
      if (spec.radius <= 0.0)
        throw std::invalid_argument("make_shape: hole radius must be > 0");
      if (spec.axis < 0 || spec.axis > 2)
        throw std::invalid_argument("make_shape: axis must be 0, 1 or 2");
      const double h = spec.cube_side / 2.0;
      require_inside(cx - h, cx + h, dims[0], "cube");
      require_inside(cy - h, cy + h, dims[1], "cube");
      require_inside(cz - h, cz + h, dims[2], "cube");
      if (spec.radius >= h)
        throw std::invalid_argument("make_shape: hole swallows the cube");
      const int a = spec.axis;
      const int u = (a + 1) % 3;
      const int v = (a + 2) % 3;
      const double r2 = spec.radius * spec.radius;
      rasterize([&](double x, double y, double z) {
        const std::array<double, 3> p{x, y, z};
        if (std::abs(p[0] - cx) > h || std::abs(p[1] - cy) > h ||
            std::abs(p[2] - cz) > h)
          return false;
        const double du = p[u] - center[u];
        const double dv = p[v] - center[v];
        return du * du + dv * dv > r2;  // hole runs through the whole cube
      });
      break;
    }
  }
  return grid;
}

}  // namespace porenet
