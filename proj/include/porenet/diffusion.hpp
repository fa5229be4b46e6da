#pragma once

#include <cstdint>
#include <vector>

#include "porenet/pore_network.hpp"

namespace porenet {

/// Per-node concentration, mass per cubic micrometer, indexed like
/// PoreNetwork::nodes. Nonnegative fields stay nonnegative under both
/// schemes (explicit: within the stability bound).
using ConcentrationField = std::vector<double>;

/// Convert a molecular diffusion coefficient from cm^2/s to um^2/h
/// (1 cm^2/s = 1e8 um^2 * 3600 / h).
inline double dc_cm2_s_to_um2_h(double dc_cm2_s) { return dc_cm2_s * 3.6e11; }

/// Default molecular diffusion coefficient of DOM in water, 6.73e-6 cm^2/s.
inline constexpr double kDefaultDcCm2PerS = 6.73e-6;

/// Default diffusive overall conductance (calibrated constant).
inline constexpr double kDefaultAlpha = 0.35;

struct DiffusionParams {
  double D_c_um2_h = dc_cm2_s_to_um2_h(kDefaultDcCm2PerS);
  double dt_h = 0.01;
  double alpha = kDefaultAlpha;  // single scalar, constant across arcs

  void validate() const;
};

/// Per-arc volume-equivalent exchange per step:
/// theta_ij = alpha * D_c * s_ij / d_ij * dt. Aligned with net.arcs.
struct Conductances {
  std::vector<double> theta;
};

Conductances build_conductances(const PoreNetwork& net, const DiffusionParams& p);

/// Sparse symmetric view of one network + conductance set. The implicit
/// system is M c' = diag(v) c with M_ii = v_i + sum_j theta_ij and
/// M_ij = -theta_ij; M is symmetric positive definite and its column sums
/// equal v_j, which makes both schemes conserve sum_i v_i c_i.
class DiffusionSystem {
 public:
  DiffusionSystem(const PoreNetwork& net, const Conductances& th);

  std::size_t size() const { return volume_.size(); }
  const std::vector<double>& volumes() const { return volume_; }
  double theta_row_sum(std::size_t i) const { return theta_sum_[i]; }

  /// y = M x.
  void apply(const std::vector<double>& x, std::vector<double>& y) const;

  const std::vector<std::uint32_t>& arc_a() const { return arc_a_; }
  const std::vector<std::uint32_t>& arc_b() const { return arc_b_; }
  const std::vector<double>& arc_theta() const { return arc_theta_; }

 private:
  std::vector<double> volume_;
  std::vector<double> theta_sum_;
  std::vector<std::uint32_t> arc_a_, arc_b_;  // 0-based node indices
  std::vector<double> arc_theta_;
};

struct SolveReport {
  int iterations = 0;
  double rel_residual = 0.0;
};

/// One implicit step (backward scheme): solves M c' = diag(v) c by Jacobi-
/// preconditioned conjugate gradient to relative residual <= tol, capped at
/// 10 * node-count iterations (SolverError beyond the cap, with the residual
/// in the message).
ConcentrationField step_implicit(const DiffusionSystem& sys,
                                 const ConcentrationField& c,
                                 SolveReport* report = nullptr,
                                 double tol = 1e-12);

/// One explicit step: c_i' = ((v_i - sum_j theta_ij) c_i + sum_j theta_ij c_j)
/// / v_i, evaluated as antisymmetric arc fluxes. Throws StabilityError when
/// any v_i - sum_j theta_ij < 0.
ConcentrationField step_explicit(const DiffusionSystem& sys,
                                 const ConcentrationField& c);

/// Largest step time for which the explicit scheme keeps all coefficients
/// nonnegative: min_i v_i / (alpha * D_c * sum_j s_ij/d_ij). +infinity when
/// no node has arcs.
double max_stable_dt(const PoreNetwork& net, double D_c_um2_h, double alpha);

struct DtValidation {
  double max_rel_deviation = 0.0;  // implicit vs explicit, relative to max |c|
  int substeps = 1;                // explicit substeps per implicit step
};

/// Runs the implicit scheme for n_steps at p.dt_h and the explicit scheme at
/// dt/m (m chosen within the stability bound), then reports the maximum
/// relative deviation of the final fields.
DtValidation validate_dt(const PoreNetwork& net, const DiffusionParams& p,
                         const ConcentrationField& c0, int n_steps);

}  // namespace porenet
