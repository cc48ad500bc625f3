#pragma once

// Shared helpers for the test suites: deterministic builders for synthetic
// epochs plus the published-example fixture (a handful of full-measurement
// GEOs and fractional satellites at prescribed true full pseudoranges).

#include <random>
#include <vector>

#include "mixpos/geometry.hpp"
#include "mixpos/mixed.hpp"
#include "mixpos/model.hpp"
#include "mixpos/simulator.hpp"

namespace mixpos::test {

inline SatelliteObservation full_obs(std::string id, ConstellationId c,
                                     const Eigen::Vector3d& sat_pos, double pr) {
  SatelliteObservation obs;
  obs.sat_id = std::move(id);
  obs.constellation = c;
  obs.sat_pos = sat_pos;
  obs.pseudorange_m = pr;
  obs.kind = ObservationKind::Full;
  return obs;
}

inline SatelliteObservation fractional_obs(std::string id, ConstellationId c,
                                           const Eigen::Vector3d& sat_pos, double pr,
                                           Modulus m = Modulus::one_millisecond()) {
  SatelliteObservation obs;
  obs.sat_id = std::move(id);
  obs.constellation = c;
  obs.sat_pos = sat_pos;
  obs.pseudorange_m = pr;
  obs.kind = ObservationKind::Fractional;
  obs.modulus = m;
  return obs;
}

/// Random unit vector, uniform on the sphere.
inline Eigen::Vector3d random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Vector3d v{n(rng), n(rng), n(rng)};
  while (v.norm() < 1e-6) v = {n(rng), n(rng), n(rng)};
  return v.normalized();
}

/// Random direction at >= min_elevation_deg above the local horizon of user.
inline Eigen::Vector3d random_sky_direction(std::mt19937_64& rng,
                                            const Eigen::Vector3d& user,
                                            double min_elevation_deg = 10.0) {
  for (;;) {
    const Eigen::Vector3d d = random_unit(rng);
    if (elevation_deg(user + d * 2.5e7, user) >= min_elevation_deg) return d;
  }
}

/// Noise-free full observations of n satellites spread over the sky of a
/// receiver at `truth`, with clock terms applied.
inline std::vector<SatelliteObservation> synthetic_fulls(
    std::mt19937_64& rng, const Eigen::Vector3d& truth, int n, ConstellationId c,
    double clock_m, double intersystem_m = 0.0, double noise_sigma = 0.0,
    double range_m = 2.5e7) {
  std::normal_distribution<double> noise(0.0, noise_sigma);
  std::vector<SatelliteObservation> obs;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector3d dir = random_sky_direction(rng, truth);
    const Eigen::Vector3d sat = truth + dir * range_m;
    double pr = range_m + clock_m;
    if (c == ConstellationId::B) pr += intersystem_m;
    if (noise_sigma > 0.0) pr += noise(rng);
    obs.push_back(full_obs(std::string(to_string(c)) + std::to_string(i + 1), c,
                           sat, pr));
  }
  return obs;
}

struct ReferenceRow {
  const char* sat_id;
  ConstellationId constellation;
  double full_m;
  double fractional_m;
};

/// The eight published example satellites: true full pseudorange and its
/// printed 1 ms fractional remainder.
inline const std::vector<ReferenceRow>& reference_rows() {
  static const std::vector<ReferenceRow> rows = {
      {"BDS 6", ConstellationId::B, 42578331.90, 7802.87},
      {"BDS 7", ConstellationId::B, 43977853.55, -91637.78},
      {"BDS 13", ConstellationId::B, 24920128.79, 37354.78},
      {"BDS 14", ConstellationId::B, 26122983.62, 41039.78},
      {"GPS 3", ConstellationId::A, 28345069.65, -135213.86},
      {"GPS 11", ConstellationId::A, 26047901.81, -34042.04},
      {"GPS 18", ConstellationId::A, 23974396.63, -9000.01},
      {"GPS 26", ConstellationId::A, 24044662.90, 61266.27},
  };
  return rows;
}

/// Values are printed to two decimals, so reproduction can be off by a full
/// print ulp; one row (GPS 26) lands exactly on the 0.01 boundary, hence the
/// tiny slack for the binary representation of the decimal inputs.
inline constexpr double kPrintTol = 0.01 + 1e-6;

/// Epoch from the published example: receiver at 30N 110E, clock bias 10 ms,
/// inter-system offset 1.1 us, GEO fulls with sigma = 1.3 m noise, and the
/// eight published satellites as 1 ms fractional observations placed at
/// distances matching their true full pseudoranges.
struct ReferenceFixture {
  MeasurementEpoch epoch;
  Eigen::Vector3d truth_pos;
  double clock_bias_m = 0.010 * kSpeedOfLight;
  double intersystem_offset_m = 1.1e-6 * kSpeedOfLight;
};

inline ReferenceFixture make_reference_epoch(std::uint64_t seed = 2015,
                                             double geo_noise_sigma = 1.3) {
  ReferenceFixture fx;
  fx.truth_pos = geodetic_to_ecef({30.0, 110.0, 0.0});
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, geo_noise_sigma);

  // Full measurements from the nominal BDS GEOs (constellation B).
  const SimScenario nominal = make_nominal_scenario();
  for (const auto& sat : nominal.constellation_b.satellites) {
    if (sat.rate != NavDataRate::FastNav) continue;
    const Eigen::Vector3d pos = propagate(sat.elements, 0.0);
    if (elevation_deg(pos, fx.truth_pos) < 5.0) continue;
    double pr = (pos - fx.truth_pos).norm() + fx.clock_bias_m + fx.intersystem_offset_m;
    if (geo_noise_sigma > 0.0) pr += noise(rng);
    fx.epoch.observations.push_back(
        full_obs(sat.sat_id, ConstellationId::B, pos, pr));
  }

  // The published satellites, placed along random sky directions so that
  // their true full pseudorange equals the reference value.
  for (const auto& row : reference_rows()) {
    double range = row.full_m - fx.clock_bias_m;
    if (row.constellation == ConstellationId::B) range -= fx.intersystem_offset_m;
    const Eigen::Vector3d dir = random_sky_direction(rng, fx.truth_pos);
    fx.epoch.observations.push_back(fractional_obs(
        row.sat_id, row.constellation, fx.truth_pos + dir * range, row.fractional_m));
  }
  return fx;
}

}  // namespace mixpos::test
