#pragma once

#include <optional>
#include <span>

#include "mixpos/model.hpp"
#include "mixpos/solver.hpp"

namespace mixpos {

/// Parameters of the ambiguity-recovery success gate
/// beta = (alpha - |b_AB| bound) / max UERE.
struct GateConfig {
  double alpha_m = 149896.229;  // half modulus of the 1 ms code period
  double b_ab_bound_m = 330.0;  // |b_AB| bound for GPS/BDS
  double max_uere_m = 50.0;     // 3-sigma per-measurement error budget
};

double compute_beta(const GateConfig& gate);

struct GateRecord {
  double gdop_full = 0.0;
  double beta = 0.0;
  bool passed = false;
};

struct MixedResult {
  PositionSolution solution;
  std::vector<RecoveryReport> recoveries;
  GateRecord gate;
  PositionSolution intermediate_full_only_solution;
};

/// The full-measurement GDOP failed the gate (or the full geometry was
/// singular, reported as infinite GDOP). Carries the gate record and, when
/// the bootstrap solve converged, its solution.
class GateFailedError : public Error {
 public:
  GateFailedError(GateRecord gate, std::optional<PositionSolution> intermediate,
                  const std::string& what)
      : Error(ErrorCode::GateFailed, what),
        gate_(gate),
        intermediate_(std::move(intermediate)) {}
  const GateRecord& gate() const { return gate_; }
  const std::optional<PositionSolution>& intermediate() const { return intermediate_; }

 private:
  GateRecord gate_;
  std::optional<PositionSolution> intermediate_;
};

/// Round each fractional observation's ambiguity from a full-only position
/// and clock estimate: N = nearest integer to (||X_j - x|| + b - z_j) / c_T.
/// The inter-system offset is deliberately omitted here; the gate bounds its
/// effect below half a modulus.
std::vector<RecoveryReport> recover_ambiguities(
    std::span<const SatelliteObservation> fractionals,
    const Eigen::Vector3d& est_pos, double est_clock_m);

/// The mixed full/fractional positioning procedure: bootstrap solve on the
/// constellation providing >= 4 full measurements, GDOP gate, ambiguity
/// recovery of all fractionals, then a final solve over everything with the
/// inter-system offset restored as an unknown.
MixedResult mixed_solve(const MeasurementEpoch& epoch,
                        const GateConfig& gate = {},
                        const SolverConfig& solver_config = {});

}  // namespace mixpos
