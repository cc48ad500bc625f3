#include "mixpos/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace mixpos::io {

using nlohmann::json;

namespace {

ConstellationId parse_constellation(const json& j, const std::string& where) {
  const auto s = j.get<std::string>();
  if (s == "A") return ConstellationId::A;
  if (s == "B") return ConstellationId::B;
  throw SchemaError(where + ": constellation must be \"A\" or \"B\", got \"" + s + "\"");
}

template <typename T>
T require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + ": missing field \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(where + "." + key + ": " + e.what());
  }
}

Eigen::Vector3d require_vec3(const json& j, const char* key, const std::string& where) {
  auto v = require<std::vector<double>>(j, key, where);
  if (v.size() != 3) throw SchemaError(where + "." + key + ": expected 3 elements");
  return {v[0], v[1], v[2]};
}

json vec3_to_json(const Eigen::Vector3d& v) { return json{v.x(), v.y(), v.z()}; }

json solution_to_json(const PositionSolution& sol) {
  json j{{"position_ecef_m", vec3_to_json(sol.position)},
         {"clock_bias_m", sol.clock_bias_m},
         {"clock_bias_s", sol.clock_bias_m / kSpeedOfLight},
         {"iterations", sol.iterations},
         {"final_update_norm_m", sol.final_update_norm_m},
         {"gdop_full", sol.gdop_full},
         {"residuals_m", sol.residuals_m}};
  if (sol.intersystem_offset_m) {
    j["intersystem_offset_m"] = *sol.intersystem_offset_m;
    j["intersystem_offset_s"] = *sol.intersystem_offset_m / kSpeedOfLight;
  }
  return j;
}

json gate_to_json(const GateRecord& gate) {
  return json{{"gdop", gate.gdop_full}, {"beta", gate.beta}, {"passed", gate.passed}};
}

json parse_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  out << content;
}

MeasurementEpoch parse_epoch_json(const std::string& text) {
  const json j = parse_text(text, "epoch file");
  MeasurementEpoch epoch;
  epoch.epoch_time_s = require<double>(j, "epoch_time_s", "epoch");
  if (!j.contains("observations") || !j.at("observations").is_array()) {
    throw SchemaError("epoch: missing or non-array \"observations\"");
  }
  int idx = 0;
  for (const auto& jo : j.at("observations")) {
    const std::string where = "observations[" + std::to_string(idx++) + "]";
    SatelliteObservation obs;
    obs.sat_id = require<std::string>(jo, "sat_id", where);
    if (!jo.contains("constellation")) {
      throw SchemaError(where + ": missing field \"constellation\"");
    }
    obs.constellation = parse_constellation(jo.at("constellation"), where);
    obs.sat_pos = require_vec3(jo, "sat_pos_ecef_m", where);
    obs.pseudorange_m = require<double>(jo, "pseudorange_m", where);
    const auto kind = require<std::string>(jo, "kind", where);
    if (kind == "full") {
      obs.kind = ObservationKind::Full;
      if (jo.contains("modulus_m")) {
        throw SchemaError(where + ": modulus_m not allowed for kind \"full\"");
      }
    } else if (kind == "fractional") {
      obs.kind = ObservationKind::Fractional;
      obs.modulus.c_t_m = require<double>(jo, "modulus_m", where);
    } else {
      throw SchemaError(where + ": kind must be \"full\" or \"fractional\"");
    }
    epoch.observations.push_back(std::move(obs));
  }
  return epoch;
}

MeasurementEpoch load_epoch(const std::string& path) {
  return parse_epoch_json(read_file(path));
}

std::string epoch_to_json(const MeasurementEpoch& epoch) {
  json obs_array = json::array();
  for (const auto& obs : epoch.observations) {
    json jo{{"sat_id", obs.sat_id},
            {"constellation", to_string(obs.constellation)},
            {"sat_pos_ecef_m", vec3_to_json(obs.sat_pos)},
            {"pseudorange_m", obs.pseudorange_m},
            {"kind", obs.is_full() ? "full" : "fractional"}};
    if (obs.is_fractional()) jo["modulus_m"] = obs.modulus.c_t_m;
    obs_array.push_back(std::move(jo));
  }
  return json{{"epoch_time_s", epoch.epoch_time_s}, {"observations", obs_array}}
      .dump(2);
}

std::string mixed_result_to_json(const MixedResult& result) {
  json recoveries = json::array();
  for (const auto& r : result.recoveries) {
    recoveries.push_back(json{{"sat_id", r.sat_id},
                              {"fractional_m", r.fractional_m},
                              {"n", r.n},
                              {"recovered_full_m", r.recovered_full_m},
                              {"predicted_range_error_m", r.predicted_range_error_m}});
  }
  json j = solution_to_json(result.solution);
  j["gate"] = gate_to_json(result.gate);
  j["recoveries"] = std::move(recoveries);
  j["intermediate_full_only"] = solution_to_json(result.intermediate_full_only_solution);
  return j.dump(2);
}

std::string gate_failure_to_json(const GateRecord& gate,
                                 const std::optional<PositionSolution>& intermediate) {
  json j{{"error", "gate_failed"}, {"gate", gate_to_json(gate)}};
  if (intermediate) j["intermediate_full_only"] = solution_to_json(*intermediate);
  return j.dump(2);
}

EpochTruth parse_truth_json(const std::string& text) {
  const json j = parse_text(text, "truth file");
  EpochTruth truth;
  truth.position = require_vec3(j, "position_ecef_m", "truth");
  truth.clock_bias_m = require<double>(j, "clock_bias_m", "truth");
  truth.intersystem_offset_m = require<double>(j, "intersystem_offset_m", "truth");
  if (!j.contains("true_full_m") || !j.at("true_full_m").is_object()) {
    throw SchemaError("truth: missing or non-object \"true_full_m\"");
  }
  for (const auto& [key, value] : j.at("true_full_m").items()) {
    truth.true_full_m[key] = value.get<double>();
  }
  return truth;
}

EpochTruth load_truth(const std::string& path) {
  return parse_truth_json(read_file(path));
}

std::string truth_to_json(const EpochTruth& truth, double epoch_time_s) {
  return json{{"epoch_time_s", epoch_time_s},
              {"position_ecef_m", vec3_to_json(truth.position)},
              {"clock_bias_m", truth.clock_bias_m},
              {"clock_bias_s", truth.clock_bias_m / kSpeedOfLight},
              {"intersystem_offset_m", truth.intersystem_offset_m},
              {"intersystem_offset_s", truth.intersystem_offset_m / kSpeedOfLight},
              {"true_full_m", truth.true_full_m}}
      .dump(2);
}

namespace {

OrbitKind parse_orbit_kind(const std::string& s, const std::string& where) {
  if (s == "GEO") return OrbitKind::GEO;
  if (s == "IGSO") return OrbitKind::IGSO;
  if (s == "MEO") return OrbitKind::MEO;
  throw SchemaError(where + ": kind must be GEO, IGSO or MEO");
}

const char* orbit_kind_name(OrbitKind k) {
  switch (k) {
    case OrbitKind::GEO: return "GEO";
    case OrbitKind::IGSO: return "IGSO";
    case OrbitKind::MEO: return "MEO";
  }
  return "?";
}

ConstellationConfig parse_constellation_config(const json& j, ConstellationId id,
                                               const std::string& where) {
  ConstellationConfig cc;
  cc.id = id;
  cc.label = j.value("label", std::string(to_string(id)));
  if (!j.contains("satellites") || !j.at("satellites").is_array()) {
    throw SchemaError(where + ": missing or non-array \"satellites\"");
  }
  int idx = 0;
  for (const auto& js : j.at("satellites")) {
    const std::string sw = where + ".satellites[" + std::to_string(idx++) + "]";
    SimSatellite sat;
    sat.sat_id = require<std::string>(js, "sat_id", sw);
    const auto rate = js.value("rate", std::string("slow"));
    if (rate == "fast") {
      sat.rate = NavDataRate::FastNav;
    } else if (rate == "slow") {
      sat.rate = NavDataRate::SlowNav;
    } else {
      throw SchemaError(sw + ": rate must be \"fast\" or \"slow\"");
    }
    if (!js.contains("elements")) throw SchemaError(sw + ": missing \"elements\"");
    const json& je = js.at("elements");
    sat.elements.semi_major_axis_m = require<double>(je, "semi_major_axis_m", sw);
    sat.elements.eccentricity = je.value("eccentricity", 0.0);
    sat.elements.inclination_deg = require<double>(je, "inclination_deg", sw);
    sat.elements.raan_deg = require<double>(je, "raan_deg", sw);
    sat.elements.arg_latitude_at_epoch_deg =
        require<double>(je, "arg_latitude_at_epoch_deg", sw);
    sat.elements.epoch_s = je.value("epoch_s", 0.0);
    sat.elements.kind =
        parse_orbit_kind(je.value("kind", std::string("MEO")), sw);
    cc.satellites.push_back(std::move(sat));
  }
  return cc;
}

json constellation_config_to_json(const ConstellationConfig& cc) {
  json sats = json::array();
  for (const auto& sat : cc.satellites) {
    sats.push_back(json{
        {"sat_id", sat.sat_id},
        {"rate", sat.rate == NavDataRate::FastNav ? "fast" : "slow"},
        {"elements",
         json{{"semi_major_axis_m", sat.elements.semi_major_axis_m},
              {"eccentricity", sat.elements.eccentricity},
              {"inclination_deg", sat.elements.inclination_deg},
              {"raan_deg", sat.elements.raan_deg},
              {"arg_latitude_at_epoch_deg", sat.elements.arg_latitude_at_epoch_deg},
              {"epoch_s", sat.elements.epoch_s},
              {"kind", orbit_kind_name(sat.elements.kind)}}}});
  }
  return json{{"label", cc.label}, {"satellites", std::move(sats)}};
}

}  // namespace

SimScenario parse_scenario_json(const std::string& text) {
  const json j = parse_text(text, "scenario file");
  SimScenario s;
  if (!j.contains("constellation_a") || !j.contains("constellation_b")) {
    throw SchemaError("scenario: needs \"constellation_a\" and \"constellation_b\"");
  }
  s.constellation_a = parse_constellation_config(j.at("constellation_a"),
                                                 ConstellationId::A, "constellation_a");
  s.constellation_b = parse_constellation_config(j.at("constellation_b"),
                                                 ConstellationId::B, "constellation_b");
  s.clock_bias_s = j.value("clock_bias_s", 0.010);
  s.intersystem_offset_s = j.value("intersystem_offset_s", 1.1e-6);
  s.noise_sigma_m = j.value("noise_sigma_m", 1.3);
  s.rng_seed = j.value("rng_seed", std::uint64_t{0});
  s.elevation_mask_deg = j.value("elevation_mask_deg", 5.0);
  return s;
}

SimScenario load_scenario(const std::string& path) {
  return parse_scenario_json(read_file(path));
}

std::string scenario_to_json(const SimScenario& s) {
  return json{{"constellation_a", constellation_config_to_json(s.constellation_a)},
              {"constellation_b", constellation_config_to_json(s.constellation_b)},
              {"clock_bias_s", s.clock_bias_s},
              {"intersystem_offset_s", s.intersystem_offset_s},
              {"noise_sigma_m", s.noise_sigma_m},
              {"rng_seed", s.rng_seed},
              {"elevation_mask_deg", s.elevation_mask_deg}}
      .dump(2);
}

std::string grid_report_to_csv(const GridReport& report) {
  std::ostringstream out;
  out.precision(10);
  out << "# t_s=" << report.t_s << " grid_step_deg=" << report.grid_step_deg
      << " n_gate_pass=" << report.n_gate_pass << " n_visible4=" << report.n_visible4
      << " pass_ratio=" << report.pass_ratio << "\n";
  out << "lat_deg,lon_deg,n_visible_fastnav,gdop,class\n";
  for (const auto& pt : report.points) {
    out << pt.lat_deg << ',' << pt.lon_deg << ',' << pt.n_visible_fastnav << ',';
    if (pt.gdop) out << *pt.gdop;
    out << ',' << to_string(pt.cls) << "\n";
  }
  return out.str();
}

std::string grid_report_to_geojson(const GridReport& report) {
  json features = json::array();
  for (const auto& pt : report.points) {
    json props{{"n_visible_fastnav", pt.n_visible_fastnav},
               {"class", to_string(pt.cls)}};
    props["gdop"] = pt.gdop ? json(*pt.gdop) : json(nullptr);
    features.push_back(
        json{{"type", "Feature"},
             {"geometry", json{{"type", "Point"},
                               {"coordinates", json{pt.lon_deg, pt.lat_deg}}}},
             {"properties", std::move(props)}});
  }
  return json{{"type", "FeatureCollection"},
              {"summary", json{{"t_s", report.t_s},
                               {"grid_step_deg", report.grid_step_deg},
                               {"n_gate_pass", report.n_gate_pass},
                               {"n_visible4", report.n_visible4},
                               {"pass_ratio", report.pass_ratio}}},
              {"features", std::move(features)}}
      .dump(2);
}

}  // namespace mixpos::io
