#pragma once

#include <stdexcept>
#include <string>

namespace mixpos {

enum class ErrorCode {
  InvalidValue,
  InvalidConfig,
  DegenerateGeometry,
  SingularGeometry,
  InsufficientMeasurements,
  GateFailed,
  NonConvergence,
  NoVisibleSatellites,
  Schema,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Geometry matrix is rank deficient. Carries the smallest eigenvalue of
/// H'H that triggered the rank test.
class SingularGeometryError : public Error {
 public:
  SingularGeometryError(double smallest_eigenvalue, const std::string& what)
      : Error(ErrorCode::SingularGeometry, what),
        smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

}  // namespace mixpos
