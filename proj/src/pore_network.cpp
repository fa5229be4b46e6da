#include "porenet/pore_network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

namespace porenet {

double PoreNetwork::total_volume_um3() const {
  double total = 0.0;
  for (const PoreNode& n : nodes) total += n.volume_um3;
  return total;
}

PoreNetwork build_network(const Partition& part) {
  PoreNetwork net;
  net.nx = part.nx;
  net.ny = part.ny;
  net.nz = part.nz;
  net.res = part.res;

  const double voxel_volume = part.res.rx * part.res.ry * part.res.rz;
  net.nodes.resize(part.regions.size());
  for (const Region& r : part.regions) {
    net.nodes[r.id - 1].volume_um3 = static_cast<double>(r.voxel_count) * voxel_volume;
    net.nodes[r.id - 1].centroid_um = r.centroid_um;
  }

  // Surfel counts per unordered region pair, keyed (a<<32)|b with a < b.
  std::unordered_map<std::uint64_t, std::array<std::uint64_t, 3>> surfels;
  const auto& labels = part.labels;
  const int nx = part.nx, ny = part.ny, nz = part.nz;
  const std::size_t sx = 1;
  const std::size_t sy = static_cast<std::size_t>(nx);
  const std::size_t sz = static_cast<std::size_t>(nx) * ny;

  std::size_t idx = 0;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i, ++idx) {
        const std::uint32_t l = labels[idx];
        if (l == 0) continue;
        auto visit = [&](std::uint32_t m, int axis) {
          if (m == 0 || m == l) return;
          const std::uint64_t key =
              l < m ? (static_cast<std::uint64_t>(l) << 32) | m
                    : (static_cast<std::uint64_t>(m) << 32) | l;
          ++surfels[key][axis];
        };
        if (i + 1 < nx) visit(labels[idx + sx], 0);
        if (j + 1 < ny) visit(labels[idx + sy], 1);
        if (k + 1 < nz) visit(labels[idx + sz], 2);
      }
    }
  }

  const double face_x = part.res.ry * part.res.rz;
  const double face_y = part.res.rx * part.res.rz;
  const double face_z = part.res.rx * part.res.ry;

  net.arcs.reserve(surfels.size());
  for (const auto& [key, counts] : surfels) {
    PoreArc arc;
    arc.a = static_cast<std::uint32_t>(key >> 32);
    arc.b = static_cast<std::uint32_t>(key & 0xffffffffu);
    arc.surfels = counts;
    arc.area_um2 = static_cast<double>(counts[0]) * face_x +
                   static_cast<double>(counts[1]) * face_y +
                   static_cast<double>(counts[2]) * face_z;
    const auto& ca = net.nodes[arc.a - 1].centroid_um;
    const auto& cb = net.nodes[arc.b - 1].centroid_um;
    const double dx = ca[0] - cb[0];
    const double dy = ca[1] - cb[1];
    const double dz = ca[2] - cb[2];
    arc.dist_um = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (arc.dist_um == 0.0)
      throw InvariantError("build_network: regions " + std::to_string(arc.a) +
                           " and " + std::to_string(arc.b) +
                           " have coincident centroids");
    net.arcs.push_back(arc);
  }
  std::sort(net.arcs.begin(), net.arcs.end(),
            [](const PoreArc& x, const PoreArc& y) {
              return x.a != y.a ? x.a < y.a : x.b < y.b;
            });
  return net;
}

NetworkStats network_stats(const PoreNetwork& net) {
  NetworkStats s;
  s.node_count = net.nodes.size();
  s.arc_count = net.arcs.size();
  s.total_volume_um3 = net.total_volume_um3();
  if (net.nodes.empty()) return s;

  std::vector<std::uint32_t> degree(net.nodes.size(), 0);
  for (const PoreArc& a : net.arcs) {
    s.total_area_um2 += a.area_um2;
    ++degree[a.a - 1];
    ++degree[a.b - 1];
  }
  double deg_sum = 0.0, vdeg_sum = 0.0;
  for (std::size_t r = 0; r < net.nodes.size(); ++r) {
    deg_sum += degree[r];
    vdeg_sum += degree[r] * net.nodes[r].volume_um3;
  }
  s.mean_degree = deg_sum / static_cast<double>(net.nodes.size());
  s.volume_weighted_degree =
      s.total_volume_um3 > 0.0 ? vdeg_sum / s.total_volume_um3 : 0.0;
  return s;
}

void save_network_json(const PoreNetwork& net, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["format"] = "porenet-network";
  doc["version"] = 1;
  doc["dims"] = {net.nx, net.ny, net.nz};
  doc["resolution_um"] = {net.res.rx, net.res.ry, net.res.rz};
  doc["source"] = net.source;
  auto& nodes = doc["nodes"] = nlohmann::json::array();
  for (std::size_t r = 0; r < net.nodes.size(); ++r) {
    nodes.push_back({{"id", r + 1},
                     {"volume_um3", net.nodes[r].volume_um3},
                     {"centroid_um", net.nodes[r].centroid_um}});
  }
  auto& arcs = doc["arcs"] = nlohmann::json::array();
  for (const PoreArc& a : net.arcs) {
    arcs.push_back({{"a", a.a},
                    {"b", a.b},
                    {"area_um2", a.area_um2},
                    {"dist_um", a.dist_um},
                    {"surfels", a.surfels}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write network file: " + path.string());
  out << doc.dump(1) << '\n';
  if (!out) throw IoError("failed writing network file: " + path.string());
}

PoreNetwork load_network_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open network file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  try {
    if (doc.at("format") != "porenet-network")
      throw FormatError(path.string() + ": not a porenet network file");
    if (doc.at("version") != 1)
      throw FormatError(path.string() + ": unsupported network file version");
    PoreNetwork net;
    net.nx = doc.at("dims").at(0);
    net.ny = doc.at("dims").at(1);
    net.nz = doc.at("dims").at(2);
    net.res = Resolution{doc.at("resolution_um").at(0),
                         doc.at("resolution_um").at(1),
                         doc.at("resolution_um").at(2)};
    net.source = doc.value("source", "");
    net.nodes.resize(doc.at("nodes").size());
    for (const auto& n : doc.at("nodes")) {
      const std::size_t id = n.at("id");
      if (id < 1 || id > net.nodes.size())
        throw FormatError(path.string() + ": node ids must be dense 1..N");
      PoreNode& node = net.nodes[id - 1];
      node.volume_um3 = n.at("volume_um3");
      node.centroid_um = {n.at("centroid_um").at(0), n.at("centroid_um").at(1),
                          n.at("centroid_um").at(2)};
    }
    for (const auto& a : doc.at("arcs")) {
      PoreArc arc;
      arc.a = a.at("a");
      arc.b = a.at("b");
      arc.area_um2 = a.at("area_um2");
      arc.dist_um = a.at("dist_um");
      if (a.contains("surfels"))
        arc.surfels = {a.at("surfels").at(0), a.at("surfels").at(1),
                       a.at("surfels").at(2)};
      if (arc.a < 1 || arc.b < 1 || arc.a > net.nodes.size() ||
          arc.b > net.nodes.size() || arc.a == arc.b)
        throw FormatError(path.string() + ": arc references invalid node ids");
      net.arcs.push_back(arc);
    }
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_nodes_csv(const PoreNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write nodes table: " + path.string());
  out << "id,volume_um3,cx_um,cy_um,cz_um\n";
  char buf[160];
  for (std::size_t r = 0; r < net.nodes.size(); ++r) {
    const PoreNode& n = net.nodes[r];
    std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g,%.12g\n", r + 1,
                  n.volume_um3, n.centroid_um[0], n.centroid_um[1],
                  n.centroid_um[2]);
    out << buf;
  }
  if (!out) throw IoError("failed writing nodes table: " + path.string());
}

void save_arcs_csv(const PoreNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write arcs table: " + path.string());
  out << "i,j,area_um2,dist_um\n";
  char buf[160];
  for (const PoreArc& a : net.arcs) {
    std::snprintf(buf, sizeof buf, "%u,%u,%.12g,%.12g\n", a.a, a.b, a.area_um2,
                  a.dist_um);
    out << buf;
  }
  if (!out) throw IoError("failed writing arcs table: " + path.string());
}

}  // namespace porenet
