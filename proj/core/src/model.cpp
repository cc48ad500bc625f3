#include "mixpos/model.hpp"

#include <cmath>
#include <set>

namespace mixpos {

const char* to_string(ConstellationId id) {
  return id == ConstellationId::A ? "A" : "B";
}

double wrap_to_fraction(double full_pr_m, const Modulus& modulus) {
  if (!std::isfinite(full_pr_m)) {
    throw Error(ErrorCode::InvalidValue, "wrap_to_fraction: non-finite pseudorange");
  }
  if (!(modulus.c_t_m > 0.0)) {
    throw Error(ErrorCode::InvalidValue, "wrap_to_fraction: modulus must be > 0");
  }
  const double c_t = modulus.c_t_m;
  // std::round ties away from zero, which maps +c_T/2 to -c_T/2 as required;
  // -c_T/2 itself lands on +c_T/2 and is folded back below.
  double frac = full_pr_m - std::round(full_pr_m / c_t) * c_t;
  if (frac >= c_t / 2.0) frac -= c_t;
  if (frac < -c_t / 2.0) frac += c_t;
  return frac;
}

double unwrap_with_integer(double fractional_pr_m, long long n, const Modulus& modulus) {
  return fractional_pr_m + static_cast<double>(n) * modulus.c_t_m;
}

std::vector<Violation> validate_epoch(const MeasurementEpoch& epoch,
                                      const EpochValidationOptions& opts) {
  std::vector<Violation> violations;
  std::set<std::string> seen;

  if (!std::isfinite(epoch.epoch_time_s)) {
    violations.push_back({"", "non-finite epoch_time_s"});
  }

  for (const auto& obs : epoch.observations) {
    if (!seen.insert(obs.sat_id).second) {
      violations.push_back({obs.sat_id, "duplicate id"});
    }
    if (!obs.sat_pos.allFinite() || !std::isfinite(obs.pseudorange_m)) {
      violations.push_back({obs.sat_id, "non-finite field"});
      continue;
    }
    const double r = obs.sat_pos.norm();
    if (r < opts.min_sat_radius_m || r > opts.max_sat_radius_m) {
      violations.push_back({obs.sat_id, "satellite radius out of sanity bounds"});
    }
    if (obs.is_fractional()) {
      if (!(obs.modulus.c_t_m > 0.0) || !std::isfinite(obs.modulus.c_t_m)) {
        violations.push_back({obs.sat_id, "invalid modulus"});
      } else if (obs.pseudorange_m < -obs.modulus.c_t_m / 2.0 ||
                 obs.pseudorange_m >= obs.modulus.c_t_m / 2.0) {
        violations.push_back({obs.sat_id, "out of band fractional value"});
      }
    }
  }
  return violations;
}

}  // namespace mixpos
