#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>

#include "mixpos/geometry.hpp"
#include "mixpos/mixed.hpp"
#include "mixpos/model.hpp"

namespace mixpos {

inline constexpr double kEarthMu = 3.986004418e14;           // [m^3/s^2]
inline constexpr double kEarthRotationRate = 7.2921151467e-5;  // [rad/s]

/// Semi-major axis of an exactly geosynchronous circular orbit,
/// (mu / omega_e^2)^(1/3), about 42 164 172.37 m.
double geosynchronous_sma_m();

enum class OrbitKind { GEO, IGSO, MEO };

/// Circular / near-circular Keplerian elements, ECEF at t via back-rotation
/// of the Earth rotation angle.
struct OrbitalElements {
  double semi_major_axis_m = 0.0;
  double eccentricity = 0.0;
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  double arg_latitude_at_epoch_deg = 0.0;
  double epoch_s = 0.0;
  OrbitKind kind = OrbitKind::MEO;
};

/// FastNav marks satellites whose full pseudoranges are assumed available
/// early (high navigation data rate, e.g. BDS GEOs).
enum class NavDataRate { FastNav, SlowNav };

struct SimSatellite {
  std::string sat_id;
  OrbitalElements elements;
  NavDataRate rate = NavDataRate::SlowNav;
};

struct ConstellationConfig {
  ConstellationId id = ConstellationId::A;
  std::string label;
  std::vector<SimSatellite> satellites;
};

struct SimScenario {
  ConstellationConfig constellation_a;
  ConstellationConfig constellation_b;
  double clock_bias_s = 0.010;          // b, receiver bias to A time
  double intersystem_offset_s = 1.1e-6; // b_AB
  double noise_sigma_m = 1.3;
  std::uint64_t rng_seed = 0;
  double elevation_mask_deg = 5.0;
};

/// Nominal two-constellation scenario: a BDS-like constellation B
/// (5 GEO FastNav + 5 IGSO + 4 MEO) and a GPS-like constellation A
/// (24 MEO in 6 planes).
SimScenario make_nominal_scenario();

/// ECEF position at time t.
Eigen::Vector3d propagate(const OrbitalElements& elements, double t_s);

/// Observation kind policy: return the modulus to chop with, or nullopt to
/// keep the satellite's pseudorange full.
using FracPolicy =
    std::function<std::optional<Modulus>(const ConstellationConfig&, const SimSatellite&)>;

/// Default policy: FastNav satellites keep full pseudoranges, everything
/// else is chopped to 1 ms fractions.
FracPolicy default_frac_policy();
FracPolicy all_full_policy();

struct EpochTruth {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double clock_bias_m = 0.0;
  double intersystem_offset_m = 0.0;
  std::map<std::string, double> true_full_m;  // pre-wrap full pseudoranges
};

struct SynthesisResult {
  MeasurementEpoch epoch;
  EpochTruth truth;
  bool no_visible_satellites = false;
};

/// Synthesize one epoch of pseudoranges at truth_pos: Euclidean range plus
/// clock terms plus seeded Gaussian noise, chopped per policy. Only
/// satellites above the elevation mask are emitted.
SynthesisResult synthesize_epoch(const SimScenario& scenario,
                                 const Eigen::Vector3d& truth_pos, double t_s,
                                 const FracPolicy& policy);

enum class PointClass { FewerThan4Visible, GateFail, GatePass };

const char* to_string(PointClass c);

struct GridPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  int n_visible_fastnav = 0;
  std::optional<double> gdop;  // nullopt when geometry is singular
  PointClass cls = PointClass::FewerThan4Visible;
};

struct GridReport {
  double t_s = 0.0;
  double grid_step_deg = 0.0;
  std::vector<GridPoint> points;
  int n_gate_pass = 0;
  int n_visible4 = 0;       // points with >= 4 visible FastNav satellites
  double pass_ratio = 0.0;  // n_gate_pass / n_visible4 (0 if none visible)
  bool step_divides_evenly = true;
};

/// Classify every ground grid point (height 0 on the ellipsoid) by FastNav
/// visibility and full-measurement GDOP against the gate threshold.
/// Parallel over grid rows; output ordering is deterministic.
GridReport grid_scan(const SimScenario& scenario, double t_s,
                     double grid_step_deg, const GateConfig& gate);

/// Scan epochs in [t_start, t_end]. Returns the epoch minimizing the number
/// of gate-pass points (earliest wins ties) with its grid report.
std::pair<double, GridReport> worst_epoch_search(const SimScenario& scenario,
                                                 double t_start, double t_end,
                                                 double t_step,
                                                 double grid_step_deg,
                                                 const GateConfig& gate);

}  // namespace mixpos
