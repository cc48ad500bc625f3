#pragma once

#include <iosfwd>
#include <string>

#include "mixpos/mixed.hpp"
#include "mixpos/model.hpp"
#include "mixpos/simulator.hpp"

namespace mixpos::io {

/// Schema failures carry field-level diagnostics in what().
class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& what) : Error(ErrorCode::Schema, what) {}
};

// Epoch files
MeasurementEpoch parse_epoch_json(const std::string& text);
MeasurementEpoch load_epoch(const std::string& path);
std::string epoch_to_json(const MeasurementEpoch& epoch);

// Solution files
std::string mixed_result_to_json(const MixedResult& result);
std::string gate_failure_to_json(const GateRecord& gate,
                                 const std::optional<PositionSolution>& intermediate);

// Truth sidecars
EpochTruth parse_truth_json(const std::string& text);
EpochTruth load_truth(const std::string& path);
std::string truth_to_json(const EpochTruth& truth, double epoch_time_s);

// Scenario files
SimScenario parse_scenario_json(const std::string& text);
SimScenario load_scenario(const std::string& path);
std::string scenario_to_json(const SimScenario& scenario);

// Grid reports
std::string grid_report_to_csv(const GridReport& report);
std::string grid_report_to_geojson(const GridReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace mixpos::io
