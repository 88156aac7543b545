#pragma once

#include <stdexcept>
#include <string>

namespace kcone {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

class ParseError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ParseError"; }
};

class DimensionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DimensionError"; }
};

// Raised when a class is rejected as a cone point. Subclasses name the
// failed necessary condition.
class InadmissiblePoint : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "InadmissiblePoint"; }
};

class NonPositiveVolume : public InadmissiblePoint {
 public:
  using InadmissiblePoint::InadmissiblePoint;
  const char* kind() const noexcept override { return "NonPositiveVolume"; }
};

class IndefiniteMetric : public InadmissiblePoint {
 public:
  using InadmissiblePoint::InadmissiblePoint;
  const char* kind() const noexcept override { return "IndefiniteMetric"; }
};

class DegeneratePlane : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DegeneratePlane"; }
};

class LeftCone : public InadmissiblePoint {
 public:
  LeftCone(double t, const std::string& why)
      : InadmissiblePoint("geodesic left the cone at t=" + std::to_string(t) + ": " + why), t_(t) {}
  const char* kind() const noexcept override { return "LeftCone"; }
  double t() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace kcone
