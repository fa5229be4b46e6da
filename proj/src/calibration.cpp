#include "porenet/calibration.hpp"

#include <cmath>
#include <stdexcept>

namespace porenet {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("pearson: series must have equal nonzero length");
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0)
    throw SolverError("pearson: correlation undefined for a constant profile");
  return cov / std::sqrt(va * vb);
}

ConcentrationField initial_field_first_planes(const PoreNetwork& net,
                                              const PlaneVolumeTable& table,
                                              double mass, int n_first_planes) {
  if (n_first_planes < 1 || n_first_planes > table.n_planes())
    throw std::invalid_argument("initial_field_first_planes: bad slab count");
  double target_volume = 0.0;
  for (int p = 0; p < n_first_planes; ++p)
    target_volume += table.plane_pore_volume()[p];
  if (target_volume <= 0.0)
    throw InvariantError("initial_field_first_planes: no pore volume in target slabs");

  const double concentration = mass / target_volume;
  ConcentrationField c(net.nodes.size(), 0.0);
  for (std::size_t r = 0; r < net.nodes.size(); ++r) {
    double region_target = 0.0;
    for (int p = 0; p < n_first_planes; ++p) region_target += table.volume(r, p);
    if (region_target > 0.0)
      c[r] = concentration * region_target / net.nodes[r].volume_um3;
  }
  return c;
}

CalibrationScan calibrate_alpha(const PoreNetwork& net,
                                const PlaneVolumeTable& table,
                                const std::vector<double>& reference_profile,
                                const CalibrationSetup& setup) {
  if (reference_profile.size() != static_cast<std::size_t>(table.n_planes()))
    throw FormatError("calibrate_alpha: reference profile has " +
                      std::to_string(reference_profile.size()) +
                      " planes, table has " + std::to_string(table.n_planes()));
  if (!(setup.alpha_step > 0.0) || setup.alpha_min > setup.alpha_max)
    throw std::invalid_argument("calibrate_alpha: bad alpha grid");

  const int n_steps =
      std::max(1, static_cast<int>(std::llround(setup.duration_h / setup.dt_h)));
  const ConcentrationField c0 =
      initial_field_first_planes(net, table, setup.mass, setup.n_first_planes);

  CalibrationScan scan;
  const int k_begin = static_cast<int>(std::llround(setup.alpha_min / setup.alpha_step));
  const int k_end = static_cast<int>(std::llround(setup.alpha_max / setup.alpha_step));
  for (int k = k_begin; k <= k_end; ++k) {
    const double alpha = k * setup.alpha_step;
    DiffusionParams p;
    p.D_c_um2_h = setup.D_c_um2_h;
    p.dt_h = setup.dt_h;
    p.alpha = alpha;
    const DiffusionSystem sys(net, build_conductances(net, p));
    ConcentrationField c = c0;
    for (int s = 0; s < n_steps; ++s) c = step_implicit(sys, c);
    const double corr = pearson(plane_mass_profile(table, c), reference_profile);
    scan.correlations.emplace_back(alpha, corr);
    if (scan.correlations.size() == 1 || corr > scan.best_correlation) {
      scan.best_correlation = corr;
      scan.best_alpha = alpha;
    }
  }
  return scan;
}

}  // namespace porenet
