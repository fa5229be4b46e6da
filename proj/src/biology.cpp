#include "porenet/biology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace porenet {

void BioParams::validate() const {
  if (mu_max_per_d < 0 || half_saturation_gC_per_g < 0 || respiration_per_d < 0 ||
      mortality_per_d < 0 || k_pom_per_d < 0 || k_som_per_d < 0)
    throw std::invalid_argument("BioParams: rates must be >= 0");
  if (dom_return_fraction < 0.0 || dom_return_fraction > 1.0)
    throw std::invalid_argument("BioParams: dom_return_fraction must be in [0, 1]");
}

double SimState::total_carbon_mgC() const {
  double total = co2_mgC;
  for (std::size_t i = 0; i < dom_mgC.size(); ++i)
    total += dom_mgC[i] + som_mgC[i] + pom_mgC[i] + bio_mgC[i];
  return total;
}

void transform_step(SimState& state, const BioParams& params,
                    const std::vector<double>& node_soil_g, double dt_h) {
  params.validate();
  const std::size_t n = state.node_count();
  if (node_soil_g.size() != n)
    throw InvariantError("transform_step: soil mass vector does not match state");
  if (!(dt_h > 0.0)) throw std::invalid_argument("transform_step: dt must be > 0");

  const double dt_d = dt_h / 24.0;
  const int substeps = params.mu_max_per_d * dt_d > 0.1 ? 10 : 1;
  const double h = dt_d / substeps;

  for (int s = 0; s < substeps; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      double dom = state.dom_mgC[i];
      double som = state.som_mgC[i];
      double pom = state.pom_mgC[i];
      double bio = state.bio_mgC[i];

      // Monod saturation on the gC-per-g-soil basis.
      double saturation = 0.0;
      if (dom > 0.0 && node_soil_g[i] > 0.0) {
        const double conc = dom * 1e-3 / node_soil_g[i];
        saturation = conc / (params.half_saturation_gC_per_g + conc);
      }

      double growth = std::min(params.mu_max_per_d * saturation * bio * h, dom);
      double death = std::min(params.mortality_per_d * bio * h, bio);
      double respiration = std::min(params.respiration_per_d * bio * h, bio - death);
      const double dead_to_dom = params.dom_return_fraction * death;
      const double dead_to_som = death - dead_to_dom;
      const double pom_to_dom = std::min(params.k_pom_per_d * pom * h, pom);
      const double som_to_dom = std::min(params.k_som_per_d * som * h, som);

      state.dom_mgC[i] = dom - growth + dead_to_dom + pom_to_dom + som_to_dom;
      state.bio_mgC[i] = bio + growth - respiration - death;
      state.som_mgC[i] = som + dead_to_som - som_to_dom;
      state.pom_mgC[i] = pom - pom_to_dom;
      state.co2_mgC += respiration;
    }
  }
}

std::vector<TimeSeriesRow> run_decomposition(const PoreNetwork& net,
                                             SimState state,
                                             const DecompositionSetup& setup) {
  setup.diffusion.validate();
  setup.bio.validate();
  const std::size_t n = net.nodes.size();
  if (state.node_count() != n)
    throw InvariantError("run_decomposition: state does not match network");
  if (!(setup.duration_h > 0.0))
    throw std::invalid_argument("run_decomposition: duration must be > 0");

  const DiffusionSystem sys(net, build_conductances(net, setup.diffusion));
  const double dt = setup.diffusion.dt_h;
  const int n_steps = std::max(1, static_cast<int>(std::llround(setup.duration_h / dt)));
  const int out_every =
      std::max(1, static_cast<int>(std::llround(setup.output_every_h / dt)));

  std::vector<TimeSeriesRow> series;
  auto record = [&](double time_h) {
    TimeSeriesRow row;
    row.time_h = time_h;
    row.co2_mgC = state.co2_mgC;
    for (std::size_t i = 0; i < n; ++i) {
      row.dom_mgC += state.dom_mgC[i];
      row.som_mgC += state.som_mgC[i];
      row.pom_mgC += state.pom_mgC[i];
      row.bio_mgC += state.bio_mgC[i];
    }
    series.push_back(row);
  };
  record(0.0);

  ConcentrationField c(n);
  for (int step = 1; step <= n_steps; ++step) {
    // Diffusion acts on DOM only.
    for (std::size_t i = 0; i < n; ++i) c[i] = state.dom_mgC[i] / net.nodes[i].volume_um3;
    c = step_implicit(sys, c, nullptr, setup.cg_tol);
    for (std::size_t i = 0; i < n; ++i) state.dom_mgC[i] = c[i] * net.nodes[i].volume_um3;

    transform_step(state, setup.bio, setup.node_soil_g, dt);
    state.time_h = step * dt;
    if (step % out_every == 0 || step == n_steps) record(state.time_h);
  }
  return series;
}

std::vector<double> node_soil_mass_g(const PoreNetwork& net,
                                     double bulk_density_g_cm3) {
  if (!(bulk_density_g_cm3 > 0.0))
    throw std::invalid_argument("node_soil_mass_g: bulk density must be > 0");
  const double total_volume_cm3 = static_cast<double>(net.nx) * net.ny * net.nz *
                                  net.res.rx * net.res.ry * net.res.rz * 1e-12;
  const double total_soil_g = bulk_density_g_cm3 * total_volume_cm3;
  const double pore_volume = net.total_volume_um3();
  std::vector<double> soil(net.nodes.size(), 0.0);
  if (pore_volume <= 0.0) return soil;
  for (std::size_t i = 0; i < net.nodes.size(); ++i)
    soil[i] = total_soil_g * net.nodes[i].volume_um3 / pore_volume;
  return soil;
}

}  // namespace porenet
