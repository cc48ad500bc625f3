#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "mixpos/errors.hpp"

namespace mixpos {

/// Speed of light [m/s].
inline constexpr double kSpeedOfLight = 299792458.0;

/// The two navigation constellations handled by one epoch. A is the time
/// reference; the inter-system offset b_AB applies to B measurements.
enum class ConstellationId { A, B };

const char* to_string(ConstellationId id);

/// Ambiguity modulus of a fractional pseudorange: the light-travel distance
/// c_T of one code (or bit) period T.
struct Modulus {
  double c_t_m = 0.0;

  static Modulus from_period_s(double t_s) {
    if (!(t_s > 0.0)) throw Error(ErrorCode::InvalidValue, "modulus period must be > 0");
    return Modulus{kSpeedOfLight * t_s};
  }
  /// 1 ms code period, c_T = 299792.458 m.
  static Modulus one_millisecond() { return from_period_s(1e-3); }
};

enum class ObservationKind { Full, Fractional };

/// One satellite's ECEF position plus one pseudorange, either full or
/// fractional (known only modulo c_T).
struct SatelliteObservation {
  std::string sat_id;
  ConstellationId constellation = ConstellationId::A;
  Eigen::Vector3d sat_pos = Eigen::Vector3d::Zero();  // ECEF [m]
  double pseudorange_m = 0.0;
  ObservationKind kind = ObservationKind::Full;
  Modulus modulus{};  // meaningful iff kind == Fractional

  bool is_full() const { return kind == ObservationKind::Full; }
  bool is_fractional() const { return kind == ObservationKind::Fractional; }
};

/// Timestamped set of observations from up to two constellations.
struct MeasurementEpoch {
  double epoch_time_s = 0.0;
  std::vector<SatelliteObservation> observations;
};

/// Converged point solution. Clock terms are kept in meters throughout;
/// divide by c at the boundary when seconds are needed.
struct PositionSolution {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // ECEF [m]
  double clock_bias_m = 0.0;                           // bias to constellation A time
  std::optional<double> intersystem_offset_m;          // b_AB, dual solves only
  int iterations = 0;
  double final_update_norm_m = 0.0;
  double gdop_full = 0.0;
  std::vector<double> residuals_m;
};

/// Outcome of recovering one fractional observation's integer ambiguity.
struct RecoveryReport {
  std::string sat_id;
  double fractional_m = 0.0;            // the observed fractional value
  long long n = 0;                      // integer ambiguity N
  double recovered_full_m = 0.0;        // fractional + N * c_T
  double predicted_range_error_m = 0.0; // predicted-minus-observed, wrapped to [-c_T/2, c_T/2)
};

/// Wrap a full pseudorange to its fractional remainder in [-c_T/2, c_T/2).
/// Nearest-integer convention, half-boundary ties away from zero.
double wrap_to_fraction(double full_pr_m, const Modulus& modulus);

/// z_full = z_frac + N * c_T.
double unwrap_with_integer(double fractional_pr_m, long long n, const Modulus& modulus);

struct Violation {
  std::string sat_id;
  std::string message;
};

/// Sanity bounds for satellite position norms, configurable via
/// validate_epoch's options.
struct EpochValidationOptions {
  double min_sat_radius_m = 6.5e6;
  double max_sat_radius_m = 5.0e7;
};

/// Structural checks on an epoch: duplicate ids, out-of-band fractional
/// values, non-finite fields, implausible satellite radii. Never throws;
/// returns the full list of violations (empty if well formed).
std::vector<Violation> validate_epoch(const MeasurementEpoch& epoch,
                                      const EpochValidationOptions& opts = {});

}  // namespace mixpos
