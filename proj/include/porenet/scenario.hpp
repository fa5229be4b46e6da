#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "porenet/biology.hpp"
#include "porenet/plane_profile.hpp"

namespace porenet {

/// Versioned text scenario: line-oriented `key = value`, `#` comments.
/// Parse problems raise FormatError with the offending line number.
///
///   version = 1
///   dt_h = 0.24
///   duration_h = 120
///   output_every_h = 2.4
///   D_c_cm2_s = 6.73e-6
///   alpha = 0.35              # or "calibrate"
///   planes_axis = x
///   n_planes = 300
///   seed = 42
///   dom_total_mgC = 0.2895
///   dom_placement = uniform   # uniform | first_planes <n> | regions <i,j,..>
///   biology = on
///   mu_max_per_d = 9.6
///   half_saturation_gC_per_g = 0.001
///   respiration_per_d = 0.2
///   mortality_per_d = 0.5
///   dom_return_fraction = 0.55
///   k_pom_per_d = 0.3
///   k_som_per_d = 0.001
///   bulk_density_g_cm3 = 1.2
///   biomass_total_mgC = 0.00018
///   biomass_placement = random_spots 1000   # or largest_regions <n>
///   som_total_mgC = 0
///   pom_total_mgC = 0
struct Scenario {
  enum class DomPlacement { uniform, first_planes, regions };
  enum class BiomassPlacement { random_spots, largest_regions };

  double dt_h = 0.01;
  double duration_h = 1.0;
  double output_every_h = 0.0;  // 0 = auto (max(dt, duration/100))
  double D_c_um2_h = dc_cm2_s_to_um2_h(kDefaultDcCm2PerS);
  double alpha = kDefaultAlpha;
  bool calibrate = false;
  Axis planes_axis = Axis::x;
  int n_planes = 0;  // 0 = one slab per grid plane
  std::uint64_t seed = 0;

  double dom_total_mgC = 0.0;
  DomPlacement dom_placement = DomPlacement::uniform;
  int dom_first_planes = 2;
  std::vector<std::uint32_t> dom_regions;

  bool biology = false;
  BioParams bio{};
  double bulk_density_g_cm3 = 1.2;
  double biomass_total_mgC = 0.0;
  BiomassPlacement biomass_placement = BiomassPlacement::random_spots;
  int biomass_spots = 1000;
  double som_total_mgC = 0.0;
  double pom_total_mgC = 0.0;

  double effective_output_every() const {
    return output_every_h > 0.0 ? output_every_h
                                : std::max(dt_h, duration_h / 100.0);
  }
};

Scenario read_scenario(const std::filesystem::path& path);

/// DOM start field in the scenario's placement. `table` is only needed for
/// first_planes placement.
ConcentrationField dom_initial_field(const Scenario& sc, const PoreNetwork& net,
                                     const PlaneVolumeTable* table);

/// Region indices (0-based) receiving a biomass spot. random_spots samples
/// distinct regions uniformly with the scenario seed; largest_regions takes
/// the top-n by volume. A spot count above the region count selects every
/// region.
std::vector<std::uint32_t> biomass_spot_regions(const Scenario& sc,
                                                const PoreNetwork& net);

/// Full initial state: DOM placed per scenario, biomass split equally over
/// the spot regions, SOM/POM spread at uniform concentration.
SimState initial_state(const Scenario& sc, const PoreNetwork& net,
                       const PlaneVolumeTable* table);

}  // namespace porenet
