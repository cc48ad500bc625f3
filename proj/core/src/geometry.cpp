#include "mixpos/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

namespace mixpos {

namespace {
constexpr double kDeg2Rad = std::numbers::pi / 180.0;
constexpr double kRad2Deg = 180.0 / std::numbers::pi;
}  // namespace

LosSet::LosSet(std::vector<Eigen::Vector3d> unit_vectors)
    : vectors_(std::move(unit_vectors)) {
  for (const auto& v : vectors_) {
    if (std::abs(v.norm() - 1.0) > 1e-9) {
      throw Error(ErrorCode::InvalidValue, "LosSet: vector is not unit norm");
    }
  }
}

Eigen::Vector3d los_unit_vector(const Eigen::Vector3d& sat_pos,
                                const Eigen::Vector3d& user_pos) {
  const Eigen::Vector3d d = sat_pos - user_pos;
  const double r = d.norm();
  if (r < 1e-6) {
    throw Error(ErrorCode::DegenerateGeometry,
                "los_unit_vector: satellite and user positions coincide");
  }
  return d / r;
}

Eigen::Vector3d geodetic_to_ecef(const GeoPoint& p) {
  const double lat = p.latitude_deg * kDeg2Rad;
  const double lon = p.longitude_deg * kDeg2Rad;
  const double slat = std::sin(lat), clat = std::cos(lat);
  const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * slat * slat);
  return {(n + p.height_m) * clat * std::cos(lon),
          (n + p.height_m) * clat * std::sin(lon),
          (n * (1.0 - kWgs84E2) + p.height_m) * slat};
}

GeoPoint ecef_to_geodetic(const Eigen::Vector3d& x) {
  const double p = std::hypot(x.x(), x.y());
  GeoPoint g;
  g.longitude_deg = p > 0.0 ? std::atan2(x.y(), x.x()) * kRad2Deg : 0.0;
  if (g.longitude_deg >= 180.0) g.longitude_deg -= 360.0;

  if (p < 1e-9) {  // on (or at) the polar axis
    g.latitude_deg = x.z() >= 0.0 ? 90.0 : -90.0;
    g.height_m = std::abs(x.z()) - kWgs84B;
    return g;
  }

  // Iterative latitude/height refinement; converges to sub-micrometer in a
  // handful of iterations for any point outside the geocenter region.
  double lat = std::atan2(x.z(), p * (1.0 - kWgs84E2));
  double h = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double slat = std::sin(lat);
    const double clat = std::cos(lat);
    const double n = kWgs84A / std::sqrt(1.0 - kWgs84E2 * slat * slat);
    // p/cos(lat) loses precision near the poles; switch to the z form there
    h = std::abs(slat) > 0.7 ? x.z() / slat - n * (1.0 - kWgs84E2)
                             : p / clat - n;
    const double lat_new = std::atan2(x.z(), p * (1.0 - kWgs84E2 * n / (n + h)));
    if (std::abs(lat_new - lat) < 1e-14) {
      lat = lat_new;
      break;
    }
    lat = lat_new;
  }
  g.latitude_deg = lat * kRad2Deg;
  g.height_m = h;
  return g;
}

double elevation_deg(const Eigen::Vector3d& sat_pos,
                     const Eigen::Vector3d& user_pos) {
  if (user_pos.norm() < 1e3) {
    throw Error(ErrorCode::DegenerateGeometry,
                "elevation_deg: user position at the geocenter");
  }
  const GeoPoint g = ecef_to_geodetic(user_pos);
  const double lat = g.latitude_deg * kDeg2Rad;
  const double lon = g.longitude_deg * kDeg2Rad;
  const Eigen::Vector3d up(std::cos(lat) * std::cos(lon),
                           std::cos(lat) * std::sin(lon), std::sin(lat));
  const Eigen::Vector3d e = los_unit_vector(sat_pos, user_pos);
  const double s = std::clamp(up.dot(e), -1.0, 1.0);
  return std::asin(s) * kRad2Deg;
}

GdopResult gdop(const LosSet& los) {
  const auto& vecs = los.vectors();
  if (vecs.size() < 4) {
    throw Error(ErrorCode::InsufficientMeasurements,
                "gdop: at least 4 line-of-sight vectors required");
  }

  Eigen::MatrixXd h(vecs.size(), 4);
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    h.row(i) << -vecs[i].transpose(), 1.0;
  }
  const Eigen::Matrix4d hth = h.transpose() * h;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(hth);
  const Eigen::Vector4d lambda = eig.eigenvalues();  // ascending
  if (lambda(0) < 1e-12 * lambda(3)) {
    throw SingularGeometryError(lambda(0), "gdop: rank-deficient geometry");
  }

  GdopResult result;
  result.eigenvalues = lambda;
  result.gdop_trace = std::sqrt(hth.inverse().trace());
  result.gdop_eigen = std::sqrt(lambda.cwiseInverse().sum());
  return result;
}

}  // namespace mixpos
