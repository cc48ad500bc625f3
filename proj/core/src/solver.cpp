#include "mixpos/solver.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "mixpos/geometry.hpp"

namespace mixpos {

namespace {

PositionSolution make_solution(const Eigen::VectorXd& state, UnknownLayout layout,
                               int iterations, double update_norm) {
  PositionSolution sol;
  sol.position = state.head<3>();
  sol.clock_bias_m = state(3);
  if (layout == UnknownLayout::DualConstellation) sol.intersystem_offset_m = state(4);
  sol.iterations = iterations;
  sol.final_update_norm_m = update_norm;
  return sol;
}

}  // namespace

PositionSolution solve_full(std::span<const SatelliteObservation> observations,
                            UnknownLayout layout, const SolverConfig& config) {
  const auto n = static_cast<Eigen::Index>(observations.size());
  const Eigen::Index n_unknowns = layout == UnknownLayout::DualConstellation ? 5 : 4;

  for (const auto& obs : observations) {
    if (!obs.is_full()) {
      throw Error(ErrorCode::InvalidValue,
                  "solve_full: all observations must be full pseudoranges");
    }
  }
  if (n < n_unknowns) {
    throw Error(ErrorCode::InsufficientMeasurements,
                "solve_full: fewer observations than unknowns");
  }
  if (layout == UnknownLayout::DualConstellation) {
    bool has_a = false, has_b = false;
    for (const auto& obs : observations) {
      (obs.constellation == ConstellationId::A ? has_a : has_b) = true;
    }
    if (!has_a || !has_b) {
      throw Error(ErrorCode::InsufficientMeasurements,
                  "solve_full: dual layout needs observations from both constellations");
    }
  }

  Eigen::VectorXd state = Eigen::VectorXd::Zero(n_unknowns);
  if (config.initial_state) state = config.initial_state->head(n_unknowns);

  Eigen::MatrixXd h(n, n_unknowns);
  Eigen::VectorXd dz(n);
  double update_norm = std::numeric_limits<double>::infinity();
  int iter = 0;

  for (; iter < config.max_iterations; ++iter) {
    const Eigen::Vector3d pos = state.head<3>();
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& obs = observations[i];
      const Eigen::Vector3d d = obs.sat_pos - pos;
      const double range = d.norm();
      if (range < 1e-6) {
        throw Error(ErrorCode::DegenerateGeometry,
                    "solve_full: iterate coincides with a satellite position");
      }
      double predicted = range + state(3);
      h.row(i).head<3>() = -(d / range).transpose();
      h(i, 3) = 1.0;
      if (n_unknowns == 5) {
        const bool is_b = obs.constellation == ConstellationId::B;
        h(i, 4) = is_b ? 1.0 : 0.0;
        if (is_b) predicted += state(4);
      }
      dz(i) = obs.pseudorange_m - predicted;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-6 * sv(0)) {
      const double min_eig = sv(sv.size() - 1) * sv(sv.size() - 1);
      throw SingularGeometryError(min_eig, "solve_full: normal matrix rank deficient");
    }

    const Eigen::VectorXd dx = svd.solve(dz);
    state += dx;
    update_norm = dx.norm();
    if (update_norm < config.update_norm_tol_m) {
      ++iter;
      break;
    }
  }

  PositionSolution sol = make_solution(state, layout, iter, update_norm);
  if (update_norm >= config.update_norm_tol_m) {
    throw NonConvergenceError(sol, "solve_full: no convergence after max_iterations");
  }

  // Final residuals and GDOP of the converged geometry.
  std::vector<Eigen::Vector3d> los;
  los.reserve(observations.size());
  sol.residuals_m.reserve(observations.size());
  for (const auto& obs : observations) {
    const Eigen::Vector3d d = obs.sat_pos - sol.position;
    double predicted = d.norm() + sol.clock_bias_m;
    if (sol.intersystem_offset_m && obs.constellation == ConstellationId::B) {
      predicted += *sol.intersystem_offset_m;
    }
    sol.residuals_m.push_back(obs.pseudorange_m - predicted);
    los.push_back(d.normalized());
  }
  sol.gdop_full = gdop(LosSet(std::move(los))).gdop_trace;
  return sol;
}

}  // namespace mixpos
