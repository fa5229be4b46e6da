#include "porenet/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace porenet {

void DiffusionParams::validate() const {
  if (!(D_c_um2_h > 0.0))
    throw std::invalid_argument("DiffusionParams: D_c must be > 0");
  if (!(dt_h > 0.0)) throw std::invalid_argument("DiffusionParams: dt must be > 0");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("DiffusionParams: alpha must be in (0, 1]");
}

Conductances build_conductances(const PoreNetwork& net, const DiffusionParams& p) {
  p.validate();
  Conductances th;
  th.theta.reserve(net.arcs.size());
  for (const PoreArc& a : net.arcs) {
    if (!(a.dist_um > 0.0))
      throw InvariantError("build_conductances: arc " + std::to_string(a.a) +
                           "-" + std::to_string(a.b) + " has non-positive distance");
    th.theta.push_back(p.alpha * p.D_c_um2_h * a.area_um2 / a.dist_um * p.dt_h);
  }
  return th;
}

DiffusionSystem::DiffusionSystem(const PoreNetwork& net, const Conductances& th) {
  if (th.theta.size() != net.arcs.size())
    throw InvariantError("DiffusionSystem: conductances do not match network arcs");
  volume_.reserve(net.nodes.size());
  for (const PoreNode& n : net.nodes) {
    if (!(n.volume_um3 > 0.0))
      throw InvariantError("DiffusionSystem: node with non-positive volume");
    volume_.push_back(n.volume_um3);
  }
  theta_sum_.assign(net.nodes.size(), 0.0);
  arc_a_.reserve(net.arcs.size());
  arc_b_.reserve(net.arcs.size());
  arc_theta_.reserve(net.arcs.size());
  for (std::size_t e = 0; e < net.arcs.size(); ++e) {
    const PoreArc& a = net.arcs[e];
    const double theta = th.theta[e];
    if (theta < 0.0) throw InvariantError("DiffusionSystem: negative conductance");
    arc_a_.push_back(a.a - 1);
    arc_b_.push_back(a.b - 1);
    arc_theta_.push_back(theta);
    theta_sum_[a.a - 1] += theta;
    theta_sum_[a.b - 1] += theta;
  }
}

void DiffusionSystem::apply(const std::vector<double>& x,
                            std::vector<double>& y) const {
  const std::size_t p = size();
  y.resize(p);
  for (std::size_t i = 0; i < p; ++i) y[i] = (volume_[i] + theta_sum_[i]) * x[i];
  for (std::size_t e = 0; e < arc_theta_.size(); ++e) {
    y[arc_a_[e]] -= arc_theta_[e] * x[arc_b_[e]];
    y[arc_b_[e]] -= arc_theta_[e] * x[arc_a_[e]];
  }
}

ConcentrationField step_implicit(const DiffusionSystem& sys,
                                 const ConcentrationField& c,
                                 SolveReport* report, double tol) {
  const std::size_t p = sys.size();
  if (c.size() != p)
    throw InvariantError("step_implicit: field size does not match network");

  std::vector<double> b(p);
  double b_norm2 = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    b[i] = sys.volumes()[i] * c[i];
    b_norm2 += b[i] * b[i];
  }
  const double b_norm = std::sqrt(b_norm2);
  if (b_norm == 0.0) {
    if (report) *report = {0, 0.0};
    return ConcentrationField(p, 0.0);
  }

  std::vector<double> precond(p);
  for (std::size_t i = 0; i < p; ++i)
    precond[i] = 1.0 / (sys.volumes()[i] + sys.theta_row_sum(i));

  ConcentrationField x = c;  // warm start: previous field
  std::vector<double> r(p), z(p), d(p), q(p);
  sys.apply(x, q);
  double r_norm2 = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    r[i] = b[i] - q[i];
    r_norm2 += r[i] * r[i];
  }

  const int max_iterations = 10 * static_cast<int>(p);
  int iter = 0;
  double rz = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    z[i] = precond[i] * r[i];
    rz += r[i] * z[i];
  }
  d = z;

  while (std::sqrt(r_norm2) > tol * b_norm) {
    if (iter >= max_iterations)
      throw SolverError("conjugate gradient did not converge in " +
                        std::to_string(max_iterations) +
                        " iterations (relative residual " +
                        std::to_string(std::sqrt(r_norm2) / b_norm) + ")");
    sys.apply(d, q);
    double dq = 0.0;
    for (std::size_t i = 0; i < p; ++i) dq += d[i] * q[i];
    const double step = rz / dq;
    r_norm2 = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      x[i] += step * d[i];
      r[i] -= step * q[i];
      r_norm2 += r[i] * r[i];
    }
    double rz_next = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
      z[i] = precond[i] * r[i];
      rz_next += r[i] * z[i];
    }
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < p; ++i) d[i] = z[i] + beta * d[i];
    ++iter;
  }
  if (report) *report = {iter, std::sqrt(r_norm2) / b_norm};
  return x;
}

ConcentrationField step_explicit(const DiffusionSystem& sys,
                                 const ConcentrationField& c) {
  const std::size_t p = sys.size();
  if (c.size() != p)
    throw InvariantError("step_explicit: field size does not match network");

  for (std::size_t i = 0; i < p; ++i) {
    if (sys.volumes()[i] - sys.theta_row_sum(i) < 0.0)
      throw StabilityError(
          "explicit step unstable at node " + std::to_string(i + 1) +
          ": volume " + std::to_string(sys.volumes()[i]) +
          " um^3 < conductance sum " + std::to_string(sys.theta_row_sum(i)) +
          " um^3; reduce the step time");
  }

  // Antisymmetric arc fluxes: each flux enters one node and leaves the
  // other with the identical floating-point value, so mass is conserved up
  // to the final per-node rounding.
  std::vector<double> delta(p, 0.0);
  const auto& theta = sys.arc_theta();
  const auto& arc_a = sys.arc_a();
  const auto& arc_b = sys.arc_b();
  for (std::size_t e = 0; e < theta.size(); ++e) {
    const double flux = theta[e] * (c[arc_a[e]] - c[arc_b[e]]);
    delta[arc_a[e]] -= flux;
    delta[arc_b[e]] += flux;
  }
  ConcentrationField out(p);
  for (std::size_t i = 0; i < p; ++i)
    out[i] = c[i] + delta[i] / sys.volumes()[i];
  return out;
}

double max_stable_dt(const PoreNetwork& net, double D_c_um2_h, double alpha) {
  std::vector<double> exchange(net.nodes.size(), 0.0);  // sum_j s_ij / d_ij
  for (const PoreArc& a : net.arcs) {
    const double ratio = a.area_um2 / a.dist_um;
    exchange[a.a - 1] += ratio;
    exchange[a.b - 1] += ratio;
  }
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    if (exchange[i] <= 0.0) continue;
    bound = std::min(bound, net.nodes[i].volume_um3 / (alpha * D_c_um2_h * exchange[i]));
  }
  return bound;
}

DtValidation validate_dt(const PoreNetwork& net, const DiffusionParams& p,
                         const ConcentrationField& c0, int n_steps) {
  p.validate();
  DtValidation result;

  const Conductances th = build_conductances(net, p);
  const DiffusionSystem sys(net, th);
  ConcentrationField implicit_c = c0;
  for (int s = 0; s < n_steps; ++s) implicit_c = step_implicit(sys, implicit_c);

  // Explicit reference runs at dt/m with m chosen to sit at half the
  // stability bound.
  const double bound = max_stable_dt(net, p.D_c_um2_h, p.alpha);
  int m = 1;
  if (std::isfinite(bound) && p.dt_h > 0.5 * bound)
    m = static_cast<int>(std::ceil(p.dt_h / (0.5 * bound)));
  DiffusionParams fine = p;
  fine.dt_h = p.dt_h / m;
  const Conductances th_fine = build_conductances(net, fine);
  const DiffusionSystem sys_fine(net, th_fine);
  ConcentrationField explicit_c = c0;
  for (int s = 0; s < n_steps * m; ++s) explicit_c = step_explicit(sys_fine, explicit_c);

  double scale = 0.0;
  for (double v : implicit_c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  double max_dev = 0.0;
  for (std::size_t i = 0; i < implicit_c.size(); ++i)
    max_dev = std::max(max_dev, std::abs(implicit_c[i] - explicit_c[i]) / scale);

  result.max_rel_deviation = max_dev;
  result.substeps = m;
  return result;
}

}  // namespace porenet
