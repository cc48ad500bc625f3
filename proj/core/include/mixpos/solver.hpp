#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>

#include "mixpos/model.hpp"

namespace mixpos {

/// SingleConstellation estimates [x, y, z, b]; DualConstellation adds the
/// inter-system offset b_AB applied to constellation-B rows.
enum class UnknownLayout { SingleConstellation, DualConstellation };

struct SolverConfig {
  int max_iterations = 20;
  double update_norm_tol_m = 1e-4;
  std::optional<Eigen::Matrix<double, 5, 1>> initial_state;  // [x,y,z,b,b_AB]
};

/// Thrown when Gauss-Newton does not converge within max_iterations.
/// Carries the last iterate as a diagnostic.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(PositionSolution diagnostic, const std::string& what)
      : Error(ErrorCode::NonConvergence, what), diagnostic_(std::move(diagnostic)) {}
  const PositionSolution& diagnostic() const { return diagnostic_; }

 private:
  PositionSolution diagnostic_;
};

/// Gauss-Newton point solver over full pseudoranges. Geometry rows are
/// [-e', 1] for constellation A and [-e', 1, 1] for B in the dual layout.
PositionSolution solve_full(std::span<const SatelliteObservation> observations,
                            UnknownLayout layout,
                            const SolverConfig& config = {});

}  // namespace mixpos
