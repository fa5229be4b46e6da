#pragma once

#include <utility>
#include <vector>

#include "porenet/plane_profile.hpp"

namespace porenet {

/// Pearson correlation coefficient. Throws SolverError when either series is
/// constant (correlation undefined).
double pearson(const std::vector<double>& a, const std::vector<double>& b);

struct CalibrationSetup {
  double D_c_um2_h = dc_cm2_s_to_um2_h(kDefaultDcCm2PerS);
  double dt_h = 0.01;
  double duration_h = 1.0;
  double mass = 1.0;        // organic matter mass injected
  int n_first_planes = 2;   // injection slab count
  double alpha_min = 0.05;
  double alpha_max = 1.00;
  double alpha_step = 0.01;
};

struct CalibrationScan {
  std::vector<std::pair<double, double>> correlations;  // (alpha, corr)
  double best_alpha = 0.0;
  double best_correlation = 0.0;
};

/// Initial field for the calibration benchmark: the mass goes into the first
/// n slabs at uniform concentration (each region receives mass in proportion
/// to its pore volume inside those slabs).
ConcentrationField initial_field_first_planes(const PoreNetwork& net,
                                              const PlaneVolumeTable& table,
                                              double mass, int n_first_planes);

/// Grid-scans alpha, runs the implicit diffusion for the configured duration
/// and returns the alpha maximizing the Pearson correlation between the
/// simulated and the reference plane-mass profile. Ties keep the smaller
/// alpha.
CalibrationScan calibrate_alpha(const PoreNetwork& net,
                                const PlaneVolumeTable& table,
                                const std::vector<double>& reference_profile,
                                const CalibrationSetup& setup);

}  // namespace porenet
