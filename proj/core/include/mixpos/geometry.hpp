#pragma once

#include <Eigen/Core>
#include <vector>

#include "mixpos/errors.hpp"

namespace mixpos {

// WGS-84 ellipsoid
inline constexpr double kWgs84A = 6378137.0;
inline constexpr double kWgs84F = 1.0 / 298.257223563;
inline constexpr double kWgs84B = kWgs84A * (1.0 - kWgs84F);
inline constexpr double kWgs84E2 = kWgs84F * (2.0 - kWgs84F);

struct GeoPoint {
  double latitude_deg = 0.0;   // [-90, 90]
  double longitude_deg = 0.0;  // [-180, 180)
  double height_m = 0.0;
};

/// A set of unit line-of-sight vectors. Norms are checked at construction.
class LosSet {
 public:
  LosSet() = default;
  explicit LosSet(std::vector<Eigen::Vector3d> unit_vectors);

  const std::vector<Eigen::Vector3d>& vectors() const { return vectors_; }
  std::size_t size() const { return vectors_.size(); }

 private:
  std::vector<Eigen::Vector3d> vectors_;
};

/// Unit vector from user towards satellite.
Eigen::Vector3d los_unit_vector(const Eigen::Vector3d& sat_pos,
                                const Eigen::Vector3d& user_pos);

Eigen::Vector3d geodetic_to_ecef(const GeoPoint& p);
GeoPoint ecef_to_geodetic(const Eigen::Vector3d& x);

/// Elevation of the satellite above the user's local (ellipsoidal) horizon,
/// in degrees, in [-90, 90].
double elevation_deg(const Eigen::Vector3d& sat_pos,
                     const Eigen::Vector3d& user_pos);

struct GdopResult {
  double gdop_trace = 0.0;  // sqrt(trace((H'H)^-1)), H rows [-e', 1]
  double gdop_eigen = 0.0;  // sqrt(sum 1/lambda_i) over the 4 eigenvalues of H'H
  Eigen::Vector4d eigenvalues = Eigen::Vector4d::Zero();  // ascending
};

/// GDOP of the given line-of-sight geometry, both formulations. Throws
/// SingularGeometryError when the smallest eigenvalue of H'H is below
/// 1e-12 times the largest.
GdopResult gdop(const LosSet& los);

}  // namespace mixpos
