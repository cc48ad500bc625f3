// mixpos command line: single point positioning from mixed full and
// fractional pseudoranges, epoch chopping, measurement simulation and
// coverage grid scans.
//
// Exit codes:
//   0 success
//   1 schema / I/O / usage error
//   2 ambiguity-recovery gate failed
//   3 insufficient full measurements
//   4 solver did not converge
//   5 no visible satellites (simulate)
//   6 mixed vs conventional difference above threshold (compare)

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <set>

#include "mixpos/io.hpp"
#include "mixpos/mixed.hpp"
#include "mixpos/simulator.hpp"

namespace {

using namespace mixpos;

constexpr int kExitSchema = 1;
constexpr int kExitGateFailed = 2;
constexpr int kExitInsufficient = 3;
constexpr int kExitNonConvergence = 4;
constexpr int kExitNoVisible = 5;
constexpr int kExitCompareDiff = 6;

struct GateFlags {
  double alpha_m = GateConfig{}.alpha_m;
  double bab_bound_m = GateConfig{}.b_ab_bound_m;
  double max_uere_m = GateConfig{}.max_uere_m;

  void attach(CLI::App* cmd) {
    cmd->add_option("--alpha-m", alpha_m, "Half-cycle threshold alpha [m]");
    cmd->add_option("--bab-bound-m", bab_bound_m, "Inter-system offset bound [m]");
    cmd->add_option("--max-uere-m", max_uere_m, "Max per-measurement UERE [m]");
  }
  GateConfig to_config() const { return {alpha_m, bab_bound_m, max_uere_m}; }
};

struct SolverFlags {
  double tol_m = SolverConfig{}.update_norm_tol_m;
  int max_iter = SolverConfig{}.max_iterations;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tol-m", tol_m, "Update-norm convergence tolerance [m]");
    cmd->add_option("--max-iter", max_iter, "Maximum Gauss-Newton iterations");
  }
  SolverConfig to_config() const {
    SolverConfig c;
    c.update_norm_tol_m = tol_m;
    c.max_iterations = max_iter;
    return c;
  }
};

SimScenario load_scenario_arg(const std::string& arg) {
  if (arg == "nominal") return make_nominal_scenario();
  return io::load_scenario(arg);
}

void emit(const std::string& doc, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << doc << "\n";
  } else {
    io::write_file(out_path, doc + "\n");
  }
}

int run_solve(const std::string& epoch_path, const GateFlags& gate,
              const SolverFlags& solver) {
  const MeasurementEpoch epoch = io::load_epoch(epoch_path);
  for (const auto& v : validate_epoch(epoch)) {
    std::cerr << "warning: " << v.sat_id << ": " << v.message << "\n";
  }
  try {
    const MixedResult result = mixed_solve(epoch, gate.to_config(), solver.to_config());
    std::cout << io::mixed_result_to_json(result) << "\n";
    return 0;
  } catch (const GateFailedError& e) {
    std::cout << io::gate_failure_to_json(e.gate(), e.intermediate()) << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return kExitGateFailed;
  }
}

int run_chop(const std::string& epoch_path, double modulus_ms,
             const std::vector<std::string>& keep_full, const std::string& out_path) {
  MeasurementEpoch epoch = io::load_epoch(epoch_path);

  std::set<std::string> known_ids;
  for (const auto& obs : epoch.observations) known_ids.insert(obs.sat_id);
  bool keep_all = false;
  std::set<std::string> keep_ids;
  std::set<ConstellationId> keep_constellations;
  for (const auto& token : keep_full) {
    if (token == "all") {
      keep_all = true;
    } else if (token == "A") {
      keep_constellations.insert(ConstellationId::A);
    } else if (token == "B") {
      keep_constellations.insert(ConstellationId::B);
    } else if (known_ids.count(token)) {
      keep_ids.insert(token);
    } else {
      std::cerr << "error: --keep-full: unknown sat_id \"" << token << "\"\n";
      return kExitSchema;
    }
  }

  const Modulus modulus = Modulus::from_period_s(modulus_ms * 1e-3);
  for (auto& obs : epoch.observations) {
    if (!obs.is_full()) continue;
    if (keep_all || keep_ids.count(obs.sat_id) ||
        keep_constellations.count(obs.constellation)) {
      continue;
    }
    obs.pseudorange_m = wrap_to_fraction(obs.pseudorange_m, modulus);
    obs.kind = ObservationKind::Fractional;
    obs.modulus = modulus;
  }
  emit(io::epoch_to_json(epoch), out_path);
  return 0;
}

int run_simulate(const std::string& scenario_arg, double lat, double lon,
                 double height, double time_s, std::optional<std::uint64_t> seed,
                 const std::string& out_path, std::string truth_path) {
  SimScenario scenario = load_scenario_arg(scenario_arg);
  if (seed) scenario.rng_seed = *seed;

  const Eigen::Vector3d truth_pos = geodetic_to_ecef({lat, lon, height});
  const SynthesisResult sim =
      synthesize_epoch(scenario, truth_pos, time_s, default_frac_policy());
  if (sim.no_visible_satellites) {
    std::cerr << "error: no visible satellites at the requested point/time\n";
    return kExitNoVisible;
  }
  if (truth_path.empty()) {
    truth_path = (out_path.empty() || out_path == "-") ? "truth.json"
                                                       : out_path + ".truth.json";
  }
  emit(io::epoch_to_json(sim.epoch), out_path);
  io::write_file(truth_path, io::truth_to_json(sim.truth, time_s) + "\n");
  std::cerr << "truth sidecar written to " << truth_path << "\n";
  return 0;
}

int run_grid_scan(const std::string& scenario_arg, std::optional<double> time_s,
                  const std::vector<double>& worst_search, double grid_step_deg,
                  const GateFlags& gate, const std::string& out_path,
                  const std::string& format) {
  const SimScenario scenario = load_scenario_arg(scenario_arg);
  GridReport report;
  if (!worst_search.empty()) {
    auto [t_worst, r] = worst_epoch_search(scenario, worst_search[0], worst_search[1],
                                           worst_search[2], grid_step_deg,
                                           gate.to_config());
    report = std::move(r);
    std::cerr << "worst epoch: t=" << t_worst << " s\n";
  } else {
    report = grid_scan(scenario, time_s.value_or(0.0), grid_step_deg, gate.to_config());
  }
  if (!report.step_divides_evenly) {
    std::cerr << "warning: grid step does not divide 360 evenly\n";
  }
  std::cerr << "gate-pass " << report.n_gate_pass << " / >=4-visible "
            << report.n_visible4 << " (ratio " << report.pass_ratio << ")\n";
  emit(format == "geojson" ? io::grid_report_to_geojson(report)
                           : io::grid_report_to_csv(report),
       out_path);
  return 0;
}

int run_compare(const std::string& epoch_path, std::string truth_path,
                const GateFlags& gate, const SolverFlags& solver, double max_diff_m) {
  const MeasurementEpoch epoch = io::load_epoch(epoch_path);
  if (truth_path.empty()) truth_path = epoch_path + ".truth.json";
  const EpochTruth truth = io::load_truth(truth_path);

  if (truth.true_full_m.size() != epoch.observations.size()) {
    std::cerr << "error: truth sidecar lists " << truth.true_full_m.size()
              << " satellites, epoch has " << epoch.observations.size() << "\n";
    return kExitSchema;
  }

  // Conventional method: the same epoch with every pseudorange replaced by
  // its true (pre-chop) full value.
  std::vector<SatelliteObservation> conventional_obs;
  bool has_a = false, has_b = false;
  for (const auto& obs : epoch.observations) {
    auto it = truth.true_full_m.find(obs.sat_id);
    if (it == truth.true_full_m.end()) {
      std::cerr << "error: truth sidecar is missing sat_id \"" << obs.sat_id << "\"\n";
      return kExitSchema;
    }
    SatelliteObservation full = obs;
    full.pseudorange_m = it->second;
    full.kind = ObservationKind::Full;
    (full.constellation == ConstellationId::A ? has_a : has_b) = true;
    conventional_obs.push_back(std::move(full));
  }

  const MixedResult mixed = mixed_solve(epoch, gate.to_config(), solver.to_config());
  const PositionSolution conventional =
      solve_full(conventional_obs,
                 has_a && has_b ? UnknownLayout::DualConstellation
                                : UnknownLayout::SingleConstellation,
                 solver.to_config());

  const Eigen::Vector3d err_mixed = mixed.solution.position - truth.position;
  const Eigen::Vector3d err_conv = conventional.position - truth.position;
  const Eigen::Vector3d diff = mixed.solution.position - conventional.position;
  const double max_component = diff.cwiseAbs().maxCoeff();

  nlohmann::json j{
      {"mixed_error_m", {err_mixed.x(), err_mixed.y(), err_mixed.z()}},
      {"conventional_error_m", {err_conv.x(), err_conv.y(), err_conv.z()}},
      {"difference_m", {diff.x(), diff.y(), diff.z()}},
      {"max_component_difference_m", max_component},
      {"threshold_m", max_diff_m},
      {"identical", max_component <= max_diff_m}};
  std::cout << j.dump(2) << "\n";
  return max_component <= max_diff_m ? 0 : kExitCompareDiff;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single point positioning from mixed full and fractional pseudoranges"};
  app.require_subcommand(1);

  // solve
  std::string solve_epoch;
  GateFlags solve_gate;
  SolverFlags solve_solver;
  auto* solve = app.add_subcommand("solve", "Mixed full/fractional point solve");
  solve->add_option("epoch", solve_epoch, "Epoch JSON file")->required();
  solve_gate.attach(solve);
  solve_solver.attach(solve);

  // chop
  std::string chop_epoch, chop_out;
  double chop_modulus_ms = 1.0;
  std::vector<std::string> chop_keep;
  auto* chop = app.add_subcommand("chop", "Wrap full pseudoranges to fractions");
  chop->add_option("epoch", chop_epoch, "Epoch JSON file")->required();
  chop->add_option("--modulus-ms", chop_modulus_ms, "Chop modulus period [ms]");
  chop->add_option("--keep-full", chop_keep,
                   "sat_id, constellation (A|B) or 'all' to leave full");
  chop->add_option("--out,-o", chop_out, "Output file (default stdout)");

  // simulate
  std::string sim_scenario, sim_out, sim_truth_out;
  double sim_lat = 0.0, sim_lon = 0.0, sim_height = 0.0, sim_time = 0.0;
  std::optional<std::uint64_t> sim_seed;
  auto* simulate = app.add_subcommand("simulate", "Synthesize one measurement epoch");
  simulate->add_option("scenario", sim_scenario, "Scenario JSON file or 'nominal'")
      ->required();
  simulate->add_option("--truth-lat", sim_lat, "Receiver latitude [deg]")->required();
  simulate->add_option("--truth-lon", sim_lon, "Receiver longitude [deg]")->required();
  simulate->add_option("--truth-height", sim_height, "Receiver height [m]");
  simulate->add_option("--time", sim_time, "Epoch time [s]");
  simulate->add_option("--seed", sim_seed, "Override scenario RNG seed");
  simulate->add_option("--out,-o", sim_out, "Epoch output file (default stdout)");
  simulate->add_option("--truth-out", sim_truth_out, "Truth sidecar path");

  // grid-scan
  std::string grid_scenario, grid_out, grid_format = "csv";
  std::optional<double> grid_time;
  std::vector<double> grid_worst;
  double grid_step = 1.0;
  GateFlags grid_gate;
  auto* grid = app.add_subcommand("grid-scan", "Visibility/GDOP coverage scan");
  grid->add_option("scenario", grid_scenario, "Scenario JSON file or 'nominal'")
      ->required();
  auto* t_opt = grid->add_option("--time", grid_time, "Epoch time [s]");
  grid->add_option("--worst-epoch-search", grid_worst,
                   "t_start t_end t_step: scan for the worst epoch")
      ->expected(3)
      ->excludes(t_opt);
  grid->add_option("--grid-step-deg", grid_step, "Grid step [deg]");
  grid->add_option("--format", grid_format, "csv or geojson")
      ->check(CLI::IsMember({"csv", "geojson"}));
  grid->add_option("--out,-o", grid_out, "Output file (default stdout)");
  grid_gate.attach(grid);

  // compare
  std::string cmp_epoch, cmp_truth;
  double cmp_threshold = 1e-6;
  GateFlags cmp_gate;
  SolverFlags cmp_solver;
  auto* compare = app.add_subcommand(
      "compare", "Mixed vs conventional all-full solve against a truth sidecar");
  compare->add_option("epoch", cmp_epoch, "Epoch JSON file")->required();
  compare->add_option("--truth", cmp_truth,
                      "Truth sidecar (default <epoch>.truth.json)");
  compare->add_option("--max-diff-m", cmp_threshold,
                      "Max allowed per-component method difference [m]");
  cmp_gate.attach(compare);
  cmp_solver.attach(compare);

  // nominal-scenario
  std::string nom_out;
  auto* nominal = app.add_subcommand("nominal-scenario",
                                     "Write the built-in nominal scenario JSON");
  nominal->add_option("--out,-o", nom_out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(solve_epoch, solve_gate, solve_solver);
    if (chop->parsed()) return run_chop(chop_epoch, chop_modulus_ms, chop_keep, chop_out);
    if (simulate->parsed()) {
      return run_simulate(sim_scenario, sim_lat, sim_lon, sim_height, sim_time,
                          sim_seed, sim_out, sim_truth_out);
    }
    if (grid->parsed()) {
      return run_grid_scan(grid_scenario, grid_time, grid_worst, grid_step, grid_gate,
                           grid_out, grid_format);
    }
    if (compare->parsed()) {
      return run_compare(cmp_epoch, cmp_truth, cmp_gate, cmp_solver, cmp_threshold);
    }
    if (nominal->parsed()) {
      emit(mixpos::io::scenario_to_json(make_nominal_scenario()), nom_out);
      return 0;
    }
  } catch (const GateFailedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGateFailed;
  } catch (const NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::InsufficientMeasurements: return kExitInsufficient;
      case ErrorCode::NoVisibleSatellites: return kExitNoVisible;
      default: return kExitSchema;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  }
  return 0;
}
