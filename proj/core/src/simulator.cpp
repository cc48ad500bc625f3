#include "mixpos/simulator.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace mixpos {

namespace {
constexpr double kDeg2Rad = std::numbers::pi / 180.0;
}

double geosynchronous_sma_m() {
  return std::cbrt(kEarthMu / (kEarthRotationRate * kEarthRotationRate));
}

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::FewerThan4Visible: return "few_visible";
    case PointClass::GateFail: return "gate_fail";
    case PointClass::GatePass: return "gate_pass";
  }
  return "?";
}

Eigen::Vector3d propagate(const OrbitalElements& el, double t_s) {
  if (!(el.semi_major_axis_m > 6.6e6)) {
    throw Error(ErrorCode::InvalidValue, "propagate: semi-major axis too small");
  }
  if (el.eccentricity < 0.0 || el.eccentricity >= 0.1) {
    throw Error(ErrorCode::InvalidValue, "propagate: eccentricity out of range");
  }

  const double n = std::sqrt(kEarthMu / std::pow(el.semi_major_axis_m, 3));
  const double u = el.arg_latitude_at_epoch_deg * kDeg2Rad + n * (t_s - el.epoch_s);
  const double inc = el.inclination_deg * kDeg2Rad;
  const double raan = el.raan_deg * kDeg2Rad;

  // In-plane position, rotated by inclination about x then RAAN about z.
  const Eigen::Vector3d in_plane(el.semi_major_axis_m * std::cos(u),
                                 el.semi_major_axis_m * std::sin(u), 0.0);
  const Eigen::Vector3d inertial =
      Eigen::AngleAxisd(raan, Eigen::Vector3d::UnitZ()) *
      (Eigen::AngleAxisd(inc, Eigen::Vector3d::UnitX()) * in_plane);

  // Inertial -> ECEF: back out the Earth rotation angle (zero at t = 0).
  return Eigen::AngleAxisd(-kEarthRotationRate * t_s, Eigen::Vector3d::UnitZ()) *
         inertial;
}

SimScenario make_nominal_scenario() {
  SimScenario s;
  const double geo_a = geosynchronous_sma_m();

  s.constellation_b.id = ConstellationId::B;
  s.constellation_b.label = "BDS";
  // Nominal GEO slots. Small distinct inclinations mimic real drifted GEOs;
  // with all-zero inclination the GEO-only geometry is rank deficient from
  // every ground point and the gate could never pass.
  const double geo_lons[] = {58.75, 80.0, 110.5, 140.0, 160.0};
  const double geo_incs[] = {1.0, 1.4, 1.8, 1.2, 1.6};
  for (int i = 0; i < 5; ++i) {
    OrbitalElements el;
    el.semi_major_axis_m = geo_a;
    el.inclination_deg = geo_incs[i];
    el.raan_deg = 72.0 * i;
    el.arg_latitude_at_epoch_deg = geo_lons[i] - el.raan_deg;
    el.kind = OrbitKind::GEO;
    s.constellation_b.satellites.push_back(
        {"B-GEO" + std::to_string(i + 1), el, NavDataRate::FastNav});
  }
  for (int i = 0; i < 5; ++i) {
    OrbitalElements el;
    el.semi_major_axis_m = geo_a;
    el.inclination_deg = 55.0;
    el.raan_deg = 72.0 * i;
    el.arg_latitude_at_epoch_deg = 118.0 - 72.0 * i;
    el.kind = OrbitKind::IGSO;
    s.constellation_b.satellites.push_back(
        {"B-IGSO" + std::to_string(i + 1), el, NavDataRate::SlowNav});
  }
  for (int i = 0; i < 4; ++i) {
    OrbitalElements el;
    el.semi_major_axis_m = 27906000.0;
    el.inclination_deg = 55.0;
    el.raan_deg = 90.0 * i;
    el.arg_latitude_at_epoch_deg = 90.0 * i;
    el.kind = OrbitKind::MEO;
    s.constellation_b.satellites.push_back(
        {"B-MEO" + std::to_string(i + 1), el, NavDataRate::SlowNav});
  }

  s.constellation_a.id = ConstellationId::A;
  s.constellation_a.label = "GPS";
  for (int plane = 0; plane < 6; ++plane) {
    for (int slot = 0; slot < 4; ++slot) {
      OrbitalElements el;
      el.semi_major_axis_m = 26560000.0;
      el.inclination_deg = 55.0;
      el.raan_deg = 60.0 * plane;
      el.arg_latitude_at_epoch_deg = 90.0 * slot + 15.0 * plane;
      el.kind = OrbitKind::MEO;
      s.constellation_a.satellites.push_back(
          {"A" + std::to_string(plane * 4 + slot + 1), el, NavDataRate::SlowNav});
    }
  }
  return s;
}

FracPolicy default_frac_policy() {
  return [](const ConstellationConfig&, const SimSatellite& sat) -> std::optional<Modulus> {
    if (sat.rate == NavDataRate::FastNav) return std::nullopt;
    return Modulus::one_millisecond();
  };
}

FracPolicy all_full_policy() {
  return [](const ConstellationConfig&, const SimSatellite&) -> std::optional<Modulus> {
    return std::nullopt;
  };
}

SynthesisResult synthesize_epoch(const SimScenario& scenario,
                                 const Eigen::Vector3d& truth_pos, double t_s,
                                 const FracPolicy& policy) {
  if (scenario.noise_sigma_m < 0.0) {
    throw Error(ErrorCode::InvalidValue, "synthesize_epoch: negative noise sigma");
  }

  SynthesisResult out;
  out.epoch.epoch_time_s = t_s;
  out.truth.position = truth_pos;
  out.truth.clock_bias_m = scenario.clock_bias_s * kSpeedOfLight;
  out.truth.intersystem_offset_m = scenario.intersystem_offset_s * kSpeedOfLight;

  // Epoch-specific stream so different epochs of one scenario decorrelate
  // while a fixed seed stays byte-reproducible.
  std::mt19937_64 rng(scenario.rng_seed ^ std::bit_cast<std::uint64_t>(t_s));
  std::normal_distribution<double> noise(0.0, scenario.noise_sigma_m);

  for (const ConstellationConfig* cc :
       {&scenario.constellation_a, &scenario.constellation_b}) {
    for (const auto& sat : cc->satellites) {
      const Eigen::Vector3d pos = propagate(sat.elements, t_s);
      if (elevation_deg(pos, truth_pos) < scenario.elevation_mask_deg) continue;

      double full = (pos - truth_pos).norm() + out.truth.clock_bias_m;
      if (cc->id == ConstellationId::B) full += out.truth.intersystem_offset_m;
      if (scenario.noise_sigma_m > 0.0) full += noise(rng);

      SatelliteObservation obs;
      obs.sat_id = sat.sat_id;
      obs.constellation = cc->id;
      obs.sat_pos = pos;
      if (auto modulus = policy(*cc, sat)) {
        obs.kind = ObservationKind::Fractional;
        obs.modulus = *modulus;
        obs.pseudorange_m = wrap_to_fraction(full, *modulus);
      } else {
        obs.kind = ObservationKind::Full;
        obs.pseudorange_m = full;
      }
      out.truth.true_full_m[sat.sat_id] = full;
      out.epoch.observations.push_back(std::move(obs));
    }
  }
  out.no_visible_satellites = out.epoch.observations.empty();
  return out;
}

GridReport grid_scan(const SimScenario& scenario, double t_s,
                     double grid_step_deg, const GateConfig& gate) {
  if (!(grid_step_deg > 0.0)) {
    throw Error(ErrorCode::InvalidValue, "grid_scan: grid step must be > 0");
  }
  const double beta = compute_beta(gate);

  std::vector<Eigen::Vector3d> fastnav_pos;
  for (const ConstellationConfig* cc :
       {&scenario.constellation_a, &scenario.constellation_b}) {
    for (const auto& sat : cc->satellites) {
      if (sat.rate == NavDataRate::FastNav) {
        fastnav_pos.push_back(propagate(sat.elements, t_s));
      }
    }
  }

  GridReport report;
  report.t_s = t_s;
  report.grid_step_deg = grid_step_deg;
  report.step_divides_evenly =
      std::abs(std::remainder(360.0, grid_step_deg)) < 1e-9;

  std::vector<double> lats, lons;
  for (double lat = -90.0; lat <= 90.0 + 1e-9; lat += grid_step_deg) lats.push_back(lat);
  for (double lon = -180.0; lon < 180.0 - 1e-9; lon += grid_step_deg) lons.push_back(lon);
  report.points.resize(lats.size() * lons.size());

  auto scan_row = [&](std::size_t row) {
    for (std::size_t col = 0; col < lons.size(); ++col) {
      GridPoint& pt = report.points[row * lons.size() + col];
      pt.lat_deg = lats[row];
      pt.lon_deg = lons[col];
      const Eigen::Vector3d user = geodetic_to_ecef({pt.lat_deg, pt.lon_deg, 0.0});

      std::vector<Eigen::Vector3d> los;
      for (const auto& sp : fastnav_pos) {
        if (elevation_deg(sp, user) >= scenario.elevation_mask_deg) {
          los.push_back(los_unit_vector(sp, user));
        }
      }
      pt.n_visible_fastnav = static_cast<int>(los.size());
      if (pt.n_visible_fastnav < 4) {
        pt.cls = PointClass::FewerThan4Visible;
        continue;
      }
      try {
        pt.gdop = gdop(LosSet(std::move(los))).gdop_trace;
        pt.cls = *pt.gdop < beta ? PointClass::GatePass : PointClass::GateFail;
      } catch (const SingularGeometryError&) {
        pt.gdop = std::nullopt;
        pt.cls = PointClass::GateFail;
      }
    }
  };

  const std::size_t n_threads =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), lats.size());
  std::vector<std::thread> workers;
  std::atomic<std::size_t> next_row{0};
  for (std::size_t i = 0; i < n_threads; ++i) {
    workers.emplace_back([&] {
      for (std::size_t row; (row = next_row.fetch_add(1)) < lats.size();) scan_row(row);
    });
  }
  for (auto& w : workers) w.join();

  for (const auto& pt : report.points) {
    if (pt.n_visible_fastnav >= 4) ++report.n_visible4;
    if (pt.cls == PointClass::GatePass) ++report.n_gate_pass;
  }
  report.pass_ratio = report.n_visible4 > 0
                          ? static_cast<double>(report.n_gate_pass) / report.n_visible4
                          : 0.0;
  return report;
}

std::pair<double, GridReport> worst_epoch_search(const SimScenario& scenario,
                                                 double t_start, double t_end,
                                                 double t_step,
                                                 double grid_step_deg,
                                                 const GateConfig& gate) {
  if (!(t_start < t_end) || !(t_step > 0.0)) {
    throw Error(ErrorCode::InvalidValue, "worst_epoch_search: bad time span");
  }
  double t_worst = t_start;
  GridReport worst;
  bool first = true;
  for (double t = t_start; t <= t_end + 1e-9; t += t_step) {
    GridReport r = grid_scan(scenario, t, grid_step_deg, gate);
    if (first || r.n_gate_pass < worst.n_gate_pass) {
      worst = std::move(r);
      t_worst = t;
      first = false;
    }
  }
  return {t_worst, std::move(worst)};
}

}  // namespace mixpos
