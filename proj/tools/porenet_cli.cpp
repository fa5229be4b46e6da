// Command-line surface of the pore-network pipeline. Stages exchange files
// (RAW volumes + sidecar metadata, u32 label images, JSON networks, CSV
// tables) so the geometry stages run once and simulation scenarios rerun
// cheaply on top. Exit codes: 0 ok, 2 I/O error, 3 format error, 4 solver
// error, 5 stability error, 1 anything else.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "porenet/biology.hpp"
#include "porenet/calibration.hpp"
#include "porenet/connectivity.hpp"
#include "porenet/manifest.hpp"
#include "porenet/partition.hpp"
#include "porenet/pore_network.hpp"
#include "porenet/raw_io.hpp"
#include "porenet/scenario.hpp"
#include "porenet/shapes.hpp"
#include "porenet/skeleton_graph.hpp"
#include "porenet/thinning.hpp"

namespace fs = std::filesystem;
using namespace porenet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitIo = 2;
constexpr int kExitFormat = 3;
constexpr int kExitSolver = 4;
constexpr int kExitStability = 5;

fs::path meta_or_default(const std::string& meta, const std::string& raw) {
  return meta.empty() ? default_meta_path(raw) : fs::path(meta);
}

// Runs `stage` unless the manifest says its inputs/outputs are unchanged.
bool manifest_gate(const std::string& manifest_path, const std::string& stage,
                   const std::vector<fs::path>& inputs, const std::string& params,
                   const std::vector<fs::path>& outputs) {
  if (manifest_path.empty()) return true;
  Manifest manifest{fs::path(manifest_path)};
  if (manifest.stage_up_to_date(stage, inputs, params, outputs)) {
    std::cout << "stage " << stage << " is up to date, skipping\n";
    return false;
  }
  return true;
}

void manifest_record(const std::string& manifest_path, const std::string& stage,
                     const std::vector<fs::path>& inputs, const std::string& params,
                     const std::vector<fs::path>& outputs) {
  if (manifest_path.empty()) return;
  Manifest manifest{fs::path(manifest_path)};
  manifest.record_stage(stage, inputs, params, outputs);
  manifest.save();
}

std::vector<double> read_profile_csv(const fs::path& path, int expected_planes) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reference profile: " + path.string());
  std::vector<double> profile;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.find_first_not_of("0123456789.,+-eE \t\r") !=
                           std::string::npos)
      continue;  // header
    std::stringstream ss(line);
    std::string plane_field, mass_field;
    if (!std::getline(ss, plane_field, ',') || !std::getline(ss, mass_field, ','))
      throw FormatError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'plane,mass'");
    try {
      profile.push_back(std::stod(mass_field));
    } catch (const std::exception&) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) +
                        ": bad mass value '" + mass_field + "'");
    }
  }
  if (static_cast<int>(profile.size()) != expected_planes)
    throw FormatError(path.string() + ": has " + std::to_string(profile.size()) +
                      " planes, scenario expects " + std::to_string(expected_planes));
  return profile;
}

void write_profile_csv(const fs::path& path, const std::vector<double>& profile) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write profile: " + path.string());
  out << "plane,mass\n";
  char buf[64];
  for (std::size_t p = 0; p < profile.size(); ++p) {
    std::snprintf(buf, sizeof buf, "%zu,%.12g\n", p, profile[p]);
    out << buf;
  }
}

struct LoadedLabels {
  Partition part;
  VolumeMeta meta;
};

LoadedLabels load_partition(const std::string& labels_path,
                            const std::string& meta_path) {
  const VolumeMeta meta = read_meta(meta_or_default(meta_path, labels_path));
  auto labels = load_labels(labels_path, meta);
  return {partition_from_labels(std::move(labels), meta.nx, meta.ny, meta.nz,
                                meta.res),
          meta};
}

int plane_count(const Scenario& sc, int flag_planes, const Partition& part,
                Axis axis) {
  const int dims[3] = {part.nx, part.ny, part.nz};
  if (flag_planes > 0) return flag_planes;
  if (sc.n_planes > 0) return sc.n_planes;
  return dims[static_cast<int>(axis)];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"porenet: pore-network extraction and graph-based "
               "diffusion/decomposition simulation"};
  app.require_subcommand(1);
  argv = app.ensure_utf8(argv);

  std::string manifest_path;
  app.add_option("--manifest", manifest_path,
                 "pipeline manifest (JSON); unchanged stages are skipped");

  // ---- makeshape ----------------------------------------------------------
  auto* cmd_shape = app.add_subcommand("makeshape", "generate a synthetic test volume");
  struct {
    std::string kind, out, axis = "z";
    std::vector<int> dims;
    std::vector<double> res{1.0};
    double radius = 0, length = 0, major_radius = 0, minor_radius = 0,
           cube_side = 0;
  } shape_opt;
  cmd_shape->add_option("--kind", shape_opt.kind,
                        "cylinder | torus | l-tube | cube-with-hole | y-tube")
      ->required();
  cmd_shape->add_option("--dims", shape_opt.dims, "grid size nx,ny,nz")
      ->required()->expected(3)->delimiter(',');
  cmd_shape->add_option("--res", shape_opt.res,
                        "voxel edge length(s) in um (1 or 3 values)")
      ->expected(1, 3)->delimiter(',');
  cmd_shape->add_option("--radius", shape_opt.radius, "tube/hole radius (voxels)");
  cmd_shape->add_option("--length", shape_opt.length, "cylinder length (voxels)");
  cmd_shape->add_option("--axis", shape_opt.axis, "cylinder/hole axis (x|y|z)");
  cmd_shape->add_option("--major-radius", shape_opt.major_radius, "torus ring radius");
  cmd_shape->add_option("--minor-radius", shape_opt.minor_radius, "torus tube radius");
  cmd_shape->add_option("--cube-side", shape_opt.cube_side, "cube edge (voxels)");
  cmd_shape->add_option("--out", shape_opt.out, "output RAW path")->required();
  cmd_shape->callback([&] {
    ShapeSpec spec;
    spec.kind = shape_kind_from_string(shape_opt.kind);
    spec.nx = shape_opt.dims[0];
    spec.ny = shape_opt.dims[1];
    spec.nz = shape_opt.dims[2];
    spec.res = shape_opt.res.size() == 3
                   ? Resolution{shape_opt.res[0], shape_opt.res[1], shape_opt.res[2]}
                   : Resolution{shape_opt.res[0], shape_opt.res[0], shape_opt.res[0]};
    spec.axis = static_cast<int>(axis_from_string(shape_opt.axis));
    spec.radius = shape_opt.radius;
    spec.length = shape_opt.length;
    spec.major_radius = shape_opt.major_radius;
    spec.minor_radius = shape_opt.minor_radius;
    spec.cube_side = shape_opt.cube_side;
    const VoxelGrid grid = make_shape(spec);
    save_raw(grid, shape_opt.out);
    std::cout << "pore voxels: " << grid.count() << "\n";
  });

  // ---- skeletonize --------------------------------------------------------
  auto* cmd_skel = app.add_subcommand("skeletonize",
                                      "compute the curvilinear skeleton of a volume");
  struct {
    std::string volume, meta, out, points_csv;
    int threads = 1;
  } skel_opt;
  cmd_skel->add_option("--volume", skel_opt.volume, "binary RAW volume")->required();
  cmd_skel->add_option("--meta", skel_opt.meta, "metadata (default <volume>.meta)");
  cmd_skel->add_option("--out", skel_opt.out, "skeleton mask RAW output")->required();
  cmd_skel->add_option("--points-csv", skel_opt.points_csv, "skeleton point list CSV");
  cmd_skel->add_option("--threads", skel_opt.threads, "worker threads");
  cmd_skel->callback([&] {
    const fs::path meta_path = meta_or_default(skel_opt.meta, skel_opt.volume);
    const std::vector<fs::path> inputs{skel_opt.volume, meta_path};
    std::vector<fs::path> outputs{skel_opt.out, default_meta_path(skel_opt.out)};
    if (!skel_opt.points_csv.empty()) outputs.push_back(skel_opt.points_csv);
    if (!manifest_gate(manifest_path, "skeletonize:" + skel_opt.out, inputs, "",
                       outputs))
      return;

    const VoxelGrid grid = load_raw(skel_opt.volume, meta_path);
    const VoxelGrid skeleton = thin(grid, skel_opt.threads);
    save_raw(skeleton, skel_opt.out);
    if (!skel_opt.points_csv.empty()) save_points_csv(skeleton, skel_opt.points_csv);

    const SkeletonGraph graph = build_graph(skeleton);
    std::cout << "skeleton points: " << skeleton.count() << "\n";
    std::cout << "ending nodes: " << graph.count_kind(NodeKind::ending) << "\n";
    std::cout << "interior nodes: " << graph.count_kind(NodeKind::interior) << "\n";
    manifest_record(manifest_path, "skeletonize:" + skel_opt.out, inputs, "", outputs);
  });

  // ---- segment ------------------------------------------------------------
  auto* cmd_seg = app.add_subcommand(
      "segment", "partition the pore space into regions from skeleton branches");
  struct {
    std::string volume, meta, skeleton, skeleton_meta, out, regions_csv, branches_csv;
    int threads = 1;
  } seg_opt;
  cmd_seg->add_option("--volume", seg_opt.volume, "binary RAW volume")->required();
  cmd_seg->add_option("--meta", seg_opt.meta, "metadata (default <volume>.meta)");
  cmd_seg->add_option("--skeleton", seg_opt.skeleton, "skeleton mask RAW")->required();
  cmd_seg->add_option("--skeleton-meta", seg_opt.skeleton_meta,
                      "skeleton metadata (default <skeleton>.meta)");
  cmd_seg->add_option("--out", seg_opt.out, "label image RAW output")->required();
  cmd_seg->add_option("--regions-csv", seg_opt.regions_csv, "region table CSV");
  cmd_seg->add_option("--branches-csv", seg_opt.branches_csv, "branch table CSV");
  cmd_seg->add_option("--threads", seg_opt.threads, "worker threads");
  cmd_seg->callback([&] {
    const fs::path vol_meta = meta_or_default(seg_opt.meta, seg_opt.volume);
    const fs::path skel_meta = meta_or_default(seg_opt.skeleton_meta, seg_opt.skeleton);
    const std::vector<fs::path> inputs{seg_opt.volume, vol_meta, seg_opt.skeleton,
                                       skel_meta};
    std::vector<fs::path> outputs{seg_opt.out, default_meta_path(seg_opt.out)};
    if (!seg_opt.regions_csv.empty()) outputs.push_back(seg_opt.regions_csv);
    if (!seg_opt.branches_csv.empty()) outputs.push_back(seg_opt.branches_csv);
    if (!manifest_gate(manifest_path, "segment:" + seg_opt.out, inputs, "", outputs))
      return;

    const VoxelGrid grid = load_raw(seg_opt.volume, vol_meta);
    const VoxelGrid skeleton = load_raw(seg_opt.skeleton, skel_meta);
    if (skeleton.nx() != grid.nx() || skeleton.ny() != grid.ny() ||
        skeleton.nz() != grid.nz())
      throw FormatError("segment: skeleton dims do not match volume dims");

    const SkeletonGraph graph = build_graph(skeleton);
    const std::vector<Branch> branches = extract_branches(graph);
    const Partition part = partition_pore_space(grid, graph, branches, seg_opt.threads);

    const VolumeMeta label_meta{part.nx, part.ny, part.nz, part.res, "u32le"};
    save_labels(part.labels, label_meta, seg_opt.out, default_meta_path(seg_opt.out));
    if (!seg_opt.regions_csv.empty()) save_regions_csv(part, seg_opt.regions_csv);
    if (!seg_opt.branches_csv.empty())
      save_branches_csv(graph, branches, seg_opt.branches_csv);

    std::cout << "branches: " << branches.size() << "\n";
    std::cout << "regions: " << part.regions.size() << "\n";
    std::cout << "splits: " << part.split_count(branches.size()) << "\n";
    manifest_record(manifest_path, "segment:" + seg_opt.out, inputs, "", outputs);
  });

  // ---- graphify -----------------------------------------------------------
  auto* cmd_graph = app.add_subcommand(
      "graphify", "build the attributed pore-network graph from a label image");
  struct {
    std::string labels, meta, out, nodes_csv, arcs_csv;
  } graph_opt;
  cmd_graph->add_option("--labels", graph_opt.labels, "label image RAW")->required();
  cmd_graph->add_option("--meta", graph_opt.meta, "metadata (default <labels>.meta)");
  cmd_graph->add_option("--out", graph_opt.out, "network JSON output")->required();
  cmd_graph->add_option("--nodes-csv", graph_opt.nodes_csv, "nodes CSV");
  cmd_graph->add_option("--arcs-csv", graph_opt.arcs_csv, "arcs CSV");
  cmd_graph->callback([&] {
    const fs::path meta_path = meta_or_default(graph_opt.meta, graph_opt.labels);
    const std::vector<fs::path> inputs{graph_opt.labels, meta_path};
    std::vector<fs::path> outputs{graph_opt.out};
    if (!graph_opt.nodes_csv.empty()) outputs.push_back(graph_opt.nodes_csv);
    if (!graph_opt.arcs_csv.empty()) outputs.push_back(graph_opt.arcs_csv);
    if (!manifest_gate(manifest_path, "graphify:" + graph_opt.out, inputs, "", outputs))
      return;

    const LoadedLabels loaded = load_partition(graph_opt.labels, graph_opt.meta);
    PoreNetwork net = build_network(loaded.part);
    net.source = graph_opt.labels;
    save_network_json(net, graph_opt.out);
    if (!graph_opt.nodes_csv.empty()) save_nodes_csv(net, graph_opt.nodes_csv);
    if (!graph_opt.arcs_csv.empty()) save_arcs_csv(net, graph_opt.arcs_csv);

    const NetworkStats stats = network_stats(net);
    std::cout << "nodes: " << stats.node_count << "\n";
    std::cout << "arcs: " << stats.arc_count << "\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "total pore volume (um^3): %.12g\n",
                  stats.total_volume_um3);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "mean degree: %.6g\n", stats.mean_degree);
    std::cout << buf;
    manifest_record(manifest_path, "graphify:" + graph_opt.out, inputs, "", outputs);
  });

  // ---- calibrate ----------------------------------------------------------
  auto* cmd_cal = app.add_subcommand(
      "calibrate", "fit the diffusive overall conductance against a reference profile");
  struct {
    std::string network, labels, meta, reference, scenario, out, planes_axis;
    int n_planes = 0;
  } cal_opt;
  cmd_cal->add_option("--network", cal_opt.network, "network JSON")->required();
  cmd_cal->add_option("--labels", cal_opt.labels, "label image RAW")->required();
  cmd_cal->add_option("--meta", cal_opt.meta, "metadata (default <labels>.meta)");
  cmd_cal->add_option("--reference", cal_opt.reference, "reference profile CSV")
      ->required();
  cmd_cal->add_option("--scenario", cal_opt.scenario, "scenario file")->required();
  cmd_cal->add_option("--planes-axis", cal_opt.planes_axis, "profile axis override");
  cmd_cal->add_option("--n-planes", cal_opt.n_planes, "plane count override");
  cmd_cal->add_option("--out", cal_opt.out, "alpha scan CSV");
  cmd_cal->callback([&] {
    const Scenario sc = read_scenario(cal_opt.scenario);
    const PoreNetwork net = load_network_json(cal_opt.network);
    const LoadedLabels loaded = load_partition(cal_opt.labels, cal_opt.meta);
    const Axis axis = cal_opt.planes_axis.empty() ? sc.planes_axis
                                                  : axis_from_string(cal_opt.planes_axis);
    const int planes = plane_count(sc, cal_opt.n_planes, loaded.part, axis);
    const PlaneVolumeTable table(loaded.part, axis, planes);
    const std::vector<double> reference = read_profile_csv(cal_opt.reference, planes);

    CalibrationSetup setup;
    setup.D_c_um2_h = sc.D_c_um2_h;
    setup.dt_h = sc.dt_h;
    setup.duration_h = sc.duration_h;
    setup.mass = sc.dom_total_mgC;
    setup.n_first_planes = sc.dom_first_planes;
    const CalibrationScan scan = calibrate_alpha(net, table, reference, setup);

    char buf[96];
    std::snprintf(buf, sizeof buf, "best alpha: %.2f\n", scan.best_alpha);
    std::cout << buf;
    std::snprintf(buf, sizeof buf, "correlation: %.6f\n", scan.best_correlation);
    std::cout << buf;
    if (!cal_opt.out.empty()) {
      std::ofstream out(cal_opt.out);
      if (!out) throw IoError("cannot write scan: " + cal_opt.out);
      out << "alpha,correlation\n";
      for (const auto& [alpha, corr] : scan.correlations) {
        std::snprintf(buf, sizeof buf, "%.2f,%.8f\n", alpha, corr);
        out << buf;
      }
    }
  });

  // ---- simulate -----------------------------------------------------------
  auto* cmd_sim = app.add_subcommand(
      "simulate", "run diffusion (and optionally microbial decomposition) on a network");
  struct {
    std::string network, labels, meta, scenario, out, profile_out, log, planes_axis;
    int n_planes = 0;
    std::int64_t seed = -1;
  } sim_opt;
  cmd_sim->add_option("--network", sim_opt.network, "network JSON")->required();
  cmd_sim->add_option("--labels", sim_opt.labels, "label image RAW")->required();
  cmd_sim->add_option("--meta", sim_opt.meta, "metadata (default <labels>.meta)");
  cmd_sim->add_option("--scenario", sim_opt.scenario, "scenario file")->required();
  cmd_sim->add_option("--out", sim_opt.out, "time series CSV output")->required();
  cmd_sim->add_option("--profile-out", sim_opt.profile_out, "final plane profile CSV");
  cmd_sim->add_option("--log", sim_opt.log, "solver log CSV");
  cmd_sim->add_option("--planes-axis", sim_opt.planes_axis, "profile axis override");
  cmd_sim->add_option("--n-planes", sim_opt.n_planes, "plane count override");
  cmd_sim->add_option("--seed", sim_opt.seed, "override scenario seed");
  cmd_sim->callback([&] {
    Scenario sc = read_scenario(sim_opt.scenario);
    if (sim_opt.seed >= 0) sc.seed = static_cast<std::uint64_t>(sim_opt.seed);
    if (sc.calibrate)
      throw FormatError("scenario requests alpha calibration; run `porenet "
                        "calibrate` and set the fitted value");

    const std::vector<fs::path> inputs{sim_opt.network, sim_opt.labels,
                                       meta_or_default(sim_opt.meta, sim_opt.labels),
                                       sim_opt.scenario};
    std::vector<fs::path> outputs{sim_opt.out};
    if (!sim_opt.profile_out.empty()) outputs.push_back(sim_opt.profile_out);
    const std::string params = "seed=" + std::to_string(sc.seed) +
                               ";axis=" + sim_opt.planes_axis +
                               ";planes=" + std::to_string(sim_opt.n_planes);
    if (!manifest_gate(manifest_path, "simulate:" + sim_opt.out, inputs, params,
                       outputs))
      return;

    const PoreNetwork net = load_network_json(sim_opt.network);
    const LoadedLabels loaded = load_partition(sim_opt.labels, sim_opt.meta);
    const Axis axis = sim_opt.planes_axis.empty() ? sc.planes_axis
                                                  : axis_from_string(sim_opt.planes_axis);
    const int planes = plane_count(sc, sim_opt.n_planes, loaded.part, axis);
    const PlaneVolumeTable table(loaded.part, axis, planes);

    std::ofstream out(sim_opt.out);
    if (!out) throw IoError("cannot write time series: " + sim_opt.out);
    std::optional<std::ofstream> log;
    if (!sim_opt.log.empty()) {
      log.emplace(sim_opt.log);
      if (!*log) throw IoError("cannot write solver log: " + sim_opt.log);
      *log << "step,time_h,cg_iterations,rel_residual\n";
    }
    char buf[256];

    if (sc.biology) {
      SimState state = initial_state(sc, net, &table);
      const double total0 = state.total_carbon_mgC();
      if (total0 <= 0.0)
        throw FormatError("scenario places no carbon; nothing to simulate");

      DecompositionSetup setup;
      setup.diffusion.D_c_um2_h = sc.D_c_um2_h;
      setup.diffusion.dt_h = sc.dt_h;
      setup.diffusion.alpha = sc.alpha;
      setup.bio = sc.bio;
      setup.duration_h = sc.duration_h;
      setup.output_every_h = sc.effective_output_every();
      setup.node_soil_g = node_soil_mass_g(net, sc.bulk_density_g_cm3);
      const auto series = run_decomposition(net, std::move(state), setup);

      out << "time_h,co2_pct,biomass_pct,dom_pct,som_pct,pom_pct\n";
      for (const TimeSeriesRow& row : series) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                      row.time_h, 100.0 * row.co2_mgC / total0,
                      100.0 * row.bio_mgC / total0, 100.0 * row.dom_mgC / total0,
                      100.0 * row.som_mgC / total0, 100.0 * row.pom_mgC / total0);
        out << buf;
      }
      std::cout << "steps: " << std::llround(sc.duration_h / sc.dt_h) << "\n";
      std::cout << "final CO2 %: " << 100.0 * series.back().co2_mgC / total0 << "\n";
    } else {
      DiffusionParams p;
      p.D_c_um2_h = sc.D_c_um2_h;
      p.dt_h = sc.dt_h;
      p.alpha = sc.alpha;
      const DiffusionSystem sys(net, build_conductances(net, p));
      ConcentrationField c = dom_initial_field(sc, net, &table);

      const int n_steps =
          std::max(1, static_cast<int>(std::llround(sc.duration_h / sc.dt_h)));
      const int out_every = std::max(
          1, static_cast<int>(std::llround(sc.effective_output_every() / sc.dt_h)));

      out << "time_h,total_mass_mgC";
      for (int pl = 0; pl < planes; ++pl) out << ",plane_" << pl;
      out << "\n";
      auto emit = [&](double time_h) {
        double total = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i)
          total += c[i] * net.nodes[i].volume_um3;
        std::snprintf(buf, sizeof buf, "%.12g,%.12g", time_h, total);
        out << buf;
        for (const double mass : plane_mass_profile(table, c)) {
          std::snprintf(buf, sizeof buf, ",%.12g", mass);
          out << buf;
        }
        out << "\n";
      };
      emit(0.0);
      for (int step = 1; step <= n_steps; ++step) {
        SolveReport report;
        c = step_implicit(sys, c, &report);
        if (log) {
          std::snprintf(buf, sizeof buf, "%d,%.12g,%d,%.3e\n", step, step * sc.dt_h,
                        report.iterations, report.rel_residual);
          *log << buf;
        }
        if (step % out_every == 0 || step == n_steps) emit(step * sc.dt_h);
      }
      if (!sim_opt.profile_out.empty())
        write_profile_csv(sim_opt.profile_out, plane_mass_profile(table, c));
      std::cout << "steps: " << n_steps << "\n";
    }
    manifest_record(manifest_path, "simulate:" + sim_opt.out, inputs, params, outputs);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const StabilityError& e) {
    std::cerr << "stability error: " << e.what() << "\n";
    return kExitStability;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOk;
}
