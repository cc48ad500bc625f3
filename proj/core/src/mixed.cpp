#include "mixpos/mixed.hpp"

#include <cmath>
#include <limits>

#include "mixpos/geometry.hpp"

namespace mixpos {

double compute_beta(const GateConfig& gate) {
  if (!(gate.max_uere_m > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "compute_beta: max_uere_m must be > 0");
  }
  if (!(gate.alpha_m > gate.b_ab_bound_m) || gate.b_ab_bound_m < 0.0) {
    throw Error(ErrorCode::InvalidConfig,
                "compute_beta: requires alpha_m > b_ab_bound_m >= 0");
  }
  return (gate.alpha_m - gate.b_ab_bound_m) / gate.max_uere_m;
}

std::vector<RecoveryReport> recover_ambiguities(
    std::span<const SatelliteObservation> fractionals,
    const Eigen::Vector3d& est_pos, double est_clock_m) {
  std::vector<RecoveryReport> reports;
  reports.reserve(fractionals.size());
  for (const auto& obs : fractionals) {
    if (!obs.is_fractional()) {
      throw Error(ErrorCode::InvalidValue,
                  "recover_ambiguities: observation is not fractional");
    }
    const double predicted = (obs.sat_pos - est_pos).norm() + est_clock_m;
    RecoveryReport r;
    r.sat_id = obs.sat_id;
    r.fractional_m = obs.pseudorange_m;
    r.n = std::llround((predicted - obs.pseudorange_m) / obs.modulus.c_t_m);
    r.recovered_full_m = unwrap_with_integer(obs.pseudorange_m, r.n, obs.modulus);
    r.predicted_range_error_m =
        wrap_to_fraction(predicted - obs.pseudorange_m, obs.modulus);
    reports.push_back(std::move(r));
  }
  return reports;
}

MixedResult mixed_solve(const MeasurementEpoch& epoch, const GateConfig& gate,
                        const SolverConfig& solver_config) {
  const double beta = compute_beta(gate);

  std::vector<SatelliteObservation> fulls_a, fulls_b, fractionals;
  for (const auto& obs : epoch.observations) {
    if (obs.is_full()) {
      (obs.constellation == ConstellationId::A ? fulls_a : fulls_b).push_back(obs);
    } else {
      fractionals.push_back(obs);
    }
  }

  // Bootstrap set: the constellation providing >= 4 fulls; when both do, the
  // conventional dual solve over every full measurement dominates.
  std::vector<SatelliteObservation> bootstrap_obs;
  UnknownLayout bootstrap_layout = UnknownLayout::SingleConstellation;
  if (fulls_a.size() >= 4 && fulls_b.size() >= 4) {
    bootstrap_obs = fulls_a;
    bootstrap_obs.insert(bootstrap_obs.end(), fulls_b.begin(), fulls_b.end());
    bootstrap_layout = UnknownLayout::DualConstellation;
  } else if (fulls_a.size() >= 4) {
    bootstrap_obs = fulls_a;
  } else if (fulls_b.size() >= 4) {
    bootstrap_obs = fulls_b;
  } else {
    throw Error(ErrorCode::InsufficientMeasurements,
                "mixed_solve: no constellation provides 4 full measurements");
  }

  PositionSolution bootstrap;
  try {
    bootstrap = solve_full(bootstrap_obs, bootstrap_layout, solver_config);
  } catch (const SingularGeometryError&) {
    // Rank-deficient full geometry: infinite GDOP, report as a gate failure.
    GateRecord record{std::numeric_limits<double>::infinity(), beta, false};
    throw GateFailedError(record, std::nullopt,
                          "mixed_solve: full-measurement geometry is singular");
  } catch (const NonConvergenceError& e) {
    // A diverging bootstrap is only meaningful if its geometry would have
    // passed the gate anyway; otherwise classify as gate failure.
    double g = std::numeric_limits<double>::infinity();
    try {
      std::vector<Eigen::Vector3d> los;
      for (const auto& obs : bootstrap_obs) {
        los.push_back(los_unit_vector(obs.sat_pos, e.diagnostic().position));
      }
      g = gdop(LosSet(std::move(los))).gdop_trace;
    } catch (const Error&) {
    }
    if (g >= beta) {
      throw GateFailedError({g, beta, false}, e.diagnostic(),
                            "mixed_solve: full-measurement GDOP exceeds beta");
    }
    throw;
  }

  GateRecord record{bootstrap.gdop_full, beta, bootstrap.gdop_full < beta};
  if (!record.passed) {
    throw GateFailedError(record, bootstrap,
                          "mixed_solve: full-measurement GDOP exceeds beta");
  }

  auto recoveries =
      recover_ambiguities(fractionals, bootstrap.position, bootstrap.clock_bias_m);

  // Final solve over every observation, fractionals replaced by their
  // recovered full pseudoranges; b_AB returns as an unknown if B is present.
  std::vector<SatelliteObservation> final_obs;
  final_obs.reserve(epoch.observations.size());
  std::size_t next_recovery = 0;
  bool has_a = false, has_b = false;
  for (const auto& obs : epoch.observations) {
    SatelliteObservation full = obs;
    if (obs.is_fractional()) {
      full.pseudorange_m = recoveries[next_recovery++].recovered_full_m;
      full.kind = ObservationKind::Full;
    }
    (full.constellation == ConstellationId::A ? has_a : has_b) = true;
    final_obs.push_back(std::move(full));
  }
  const UnknownLayout final_layout = (has_a && has_b)
                                         ? UnknownLayout::DualConstellation
                                         : UnknownLayout::SingleConstellation;

  MixedResult result;
  result.gate = record;
  result.recoveries = std::move(recoveries);
  result.intermediate_full_only_solution = bootstrap;
  try {
    result.solution = solve_full(final_obs, final_layout, solver_config);
  } catch (const NonConvergenceError& e) {
    throw NonConvergenceError(
        bootstrap, std::string("mixed_solve: final solve did not converge (") +
                       e.what() + ")");
  }
  return result;
}

}  // namespace mixpos
