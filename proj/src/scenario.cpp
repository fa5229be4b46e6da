#include "porenet/scenario.hpp"

#include "porenet/calibration.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace porenet {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::filesystem::path& path, int line,
                       const std::string& msg) {
  throw FormatError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

double number(const std::filesystem::path& path, int line, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  fail(path, line, "expected a number, got '" + v + "'");
}

}  // namespace

Scenario read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path.string());

  Scenario sc;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string s = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(path, lineno, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (value.empty()) fail(path, lineno, "missing value for '" + key + "'");

    if (key == "version") {
      if (number(path, lineno, value) != 1.0)
        fail(path, lineno, "unsupported scenario version " + value);
    } else if (key == "dt_h") {
      sc.dt_h = number(path, lineno, value);
      if (!(sc.dt_h > 0)) fail(path, lineno, "dt_h must be > 0");
    } else if (key == "duration_h") {
      sc.duration_h = number(path, lineno, value);
      if (!(sc.duration_h > 0)) fail(path, lineno, "duration_h must be > 0");
    } else if (key == "output_every_h") {
      sc.output_every_h = number(path, lineno, value);
      if (sc.output_every_h < 0) fail(path, lineno, "output_every_h must be >= 0");
    } else if (key == "D_c_cm2_s") {
      sc.D_c_um2_h = dc_cm2_s_to_um2_h(number(path, lineno, value));
    } else if (key == "D_c_um2_h") {
      sc.D_c_um2_h = number(path, lineno, value);
    } else if (key == "alpha") {
      if (value == "calibrate") {
        sc.calibrate = true;
      } else {
        sc.alpha = number(path, lineno, value);
        if (!(sc.alpha > 0) || sc.alpha > 1)
          fail(path, lineno, "alpha must be in (0, 1]");
      }
    } else if (key == "planes_axis") {
      try {
        sc.planes_axis = axis_from_string(value);
      } catch (const std::exception& e) {
        fail(path, lineno, e.what());
      }
    } else if (key == "n_planes") {
      sc.n_planes = static_cast<int>(number(path, lineno, value));
      if (sc.n_planes < 0) fail(path, lineno, "n_planes must be >= 0");
    } else if (key == "seed") {
      sc.seed = static_cast<std::uint64_t>(number(path, lineno, value));
    } else if (key == "dom_total_mgC") {
      sc.dom_total_mgC = number(path, lineno, value);
      if (sc.dom_total_mgC < 0) fail(path, lineno, "dom_total_mgC must be >= 0");
    } else if (key == "dom_placement") {
      std::istringstream ss(value);
      std::string mode;
      ss >> mode;
      if (mode == "uniform") {
        sc.dom_placement = Scenario::DomPlacement::uniform;
      } else if (mode == "first_planes") {
        sc.dom_placement = Scenario::DomPlacement::first_planes;
        int n = 0;
        if (!(ss >> n) || n < 1)
          fail(path, lineno, "first_planes needs a positive slab count");
        sc.dom_first_planes = n;
      } else if (mode == "regions") {
        sc.dom_placement = Scenario::DomPlacement::regions;
        std::string rest;
        std::getline(ss, rest);
        std::stringstream ids(rest);
        std::string item;
        sc.dom_regions.clear();
        while (std::getline(ids, item, ',')) {
          const std::string t = trim(item);
          if (t.empty()) continue;
          const double id = number(path, lineno, t);
          if (id < 1) fail(path, lineno, "region ids are 1-based");
          sc.dom_regions.push_back(static_cast<std::uint32_t>(id));
        }
        if (sc.dom_regions.empty())
          fail(path, lineno, "regions placement needs at least one region id");
      } else {
        fail(path, lineno, "unknown dom_placement '" + mode + "'");
      }
    } else if (key == "biology") {
      if (value == "on")
        sc.biology = true;
      else if (value == "off")
        sc.biology = false;
      else
        fail(path, lineno, "biology must be 'on' or 'off'");
    } else if (key == "mu_max_per_d") {
      sc.bio.mu_max_per_d = number(path, lineno, value);
    } else if (key == "half_saturation_gC_per_g") {
      sc.bio.half_saturation_gC_per_g = number(path, lineno, value);
    } else if (key == "respiration_per_d") {
      sc.bio.respiration_per_d = number(path, lineno, value);
    } else if (key == "mortality_per_d") {
      sc.bio.mortality_per_d = number(path, lineno, value);
    } else if (key == "dom_return_fraction") {
      sc.bio.dom_return_fraction = number(path, lineno, value);
    } else if (key == "k_pom_per_d") {
      sc.bio.k_pom_per_d = number(path, lineno, value);
    } else if (key == "k_som_per_d") {
      sc.bio.k_som_per_d = number(path, lineno, value);
    } else if (key == "bulk_density_g_cm3") {
      sc.bulk_density_g_cm3 = number(path, lineno, value);
      if (!(sc.bulk_density_g_cm3 > 0))
        fail(path, lineno, "bulk_density_g_cm3 must be > 0");
    } else if (key == "biomass_total_mgC") {
      sc.biomass_total_mgC = number(path, lineno, value);
      if (sc.biomass_total_mgC < 0)
        fail(path, lineno, "biomass_total_mgC must be >= 0");
    } else if (key == "biomass_placement") {
      std::istringstream ss(value);
      std::string mode;
      int n = 0;
      ss >> mode;
      if (!(ss >> n) || n < 1)
        fail(path, lineno, "biomass_placement needs a positive count");
      if (mode == "random_spots")
        sc.biomass_placement = Scenario::BiomassPlacement::random_spots;
      else if (mode == "largest_regions")
        sc.biomass_placement = Scenario::BiomassPlacement::largest_regions;
      else
        fail(path, lineno, "unknown biomass_placement '" + mode + "'");
      sc.biomass_spots = n;
    } else if (key == "som_total_mgC") {
      sc.som_total_mgC = number(path, lineno, value);
      if (sc.som_total_mgC < 0) fail(path, lineno, "som_total_mgC must be >= 0");
    } else if (key == "pom_total_mgC") {
      sc.pom_total_mgC = number(path, lineno, value);
      if (sc.pom_total_mgC < 0) fail(path, lineno, "pom_total_mgC must be >= 0");
    } else {
      fail(path, lineno, "unknown key '" + key + "'");
    }
  }
  try {
    sc.bio.validate();
  } catch (const std::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return sc;
}

ConcentrationField dom_initial_field(const Scenario& sc, const PoreNetwork& net,
                                     const PlaneVolumeTable* table) {
  const std::size_t n = net.nodes.size();
  ConcentrationField c(n, 0.0);
  if (sc.dom_total_mgC <= 0.0 || n == 0) return c;

  switch (sc.dom_placement) {
    case Scenario::DomPlacement::uniform: {
      // Homogeneous in the concentration sense: equal c_i, mass per node
      // proportional to volume.
      const double conc = sc.dom_total_mgC / net.total_volume_um3();
      c.assign(n, conc);
      break;
    }
    case Scenario::DomPlacement::first_planes: {
      if (table == nullptr)
        throw InvariantError("dom_initial_field: plane placement needs a label image");
      return initial_field_first_planes(net, *table, sc.dom_total_mgC,
                                        sc.dom_first_planes);
    }
    case Scenario::DomPlacement::regions: {
      double target_volume = 0.0;
      for (std::uint32_t id : sc.dom_regions) {
        if (id < 1 || id > n)
          throw FormatError("dom_placement references unknown region " +
                            std::to_string(id));
        target_volume += net.nodes[id - 1].volume_um3;
      }
      const double conc = sc.dom_total_mgC / target_volume;
      for (std::uint32_t id : sc.dom_regions) c[id - 1] = conc;
      break;
    }
  }
  return c;
}

std::vector<std::uint32_t> biomass_spot_regions(const Scenario& sc,
                                                const PoreNetwork& net) {
  const std::size_t n = net.nodes.size();
  const std::size_t spots = std::min<std::size_t>(sc.biomass_spots, n);
  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);

  if (sc.biomass_placement == Scenario::BiomassPlacement::largest_regions) {
    std::stable_sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
      return net.nodes[a].volume_um3 > net.nodes[b].volume_um3;
    });
    ids.resize(spots);
    std::sort(ids.begin(), ids.end());
    return ids;
  }

  // Seeded partial Fisher-Yates: the first `spots` entries are a uniform
  // sample of distinct regions.
  std::mt19937_64 rng(sc.seed);
  for (std::size_t i = 0; i < spots; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  ids.resize(spots);
  std::sort(ids.begin(), ids.end());
  return ids;
}

SimState initial_state(const Scenario& sc, const PoreNetwork& net,
                       const PlaneVolumeTable* table) {
  const std::size_t n = net.nodes.size();
  SimState state(n);

  const ConcentrationField dom_c = dom_initial_field(sc, net, table);
  for (std::size_t i = 0; i < n; ++i)
    state.dom_mgC[i] = dom_c[i] * net.nodes[i].volume_um3;

  if (sc.biomass_total_mgC > 0.0 && n > 0) {
    const auto spots = biomass_spot_regions(sc, net);
    const double per_spot = sc.biomass_total_mgC / static_cast<double>(spots.size());
    for (std::uint32_t r : spots) state.bio_mgC[r] += per_spot;
  }

  const double pore_volume = net.total_volume_um3();
  if (pore_volume > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double share = net.nodes[i].volume_um3 / pore_volume;
      state.som_mgC[i] = sc.som_total_mgC * share;
      state.pom_mgC[i] = sc.pom_total_mgC * share;
    }
  }
  return state;
}

}  // namespace porenet
