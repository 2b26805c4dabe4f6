#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace dyniso {

enum class ErrorKind {
  kInvalidArgument,
  kInvalidActuator,
  kDegenerateGeometry,
  kIllConditionedDynamics,
  kParse,
  kIo,
  kSingularEllipsoid,
  kInfeasibleAcceleration,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by margin queries when Q has no usable inverse. Carries the eigenvector
// of the smallest eigenvalue so callers can name the weak axis.
class SingularEllipsoidError : public Error {
 public:
  SingularEllipsoidError(const std::string& what, const Eigen::Vector3d& weak_axis)
      : Error(ErrorKind::kSingularEllipsoid, what), weak_axis_(weak_axis) {}

  const Eigen::Vector3d& weak_axis() const { return weak_axis_; }

 private:
  Eigen::Vector3d weak_axis_;
};

class InfeasibleAccelerationError : public Error {
 public:
  InfeasibleAccelerationError(const std::string& what, double residual)
      : Error(ErrorKind::kInfeasibleAcceleration, what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// Input-file diagnostics: which file, which field, which rule was broken.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, const std::string& field, const std::string& message)
      : Error(ErrorKind::kParse, format(file, field, message)), file_(file), field_(field) {}

  const std::string& file() const { return file_; }
  const std::string& field() const { return field_; }

 private:
  static std::string format(const std::string& file, const std::string& field, const std::string& message) {
    std::string out = file.empty() ? std::string("<input>") : file;
    if (!field.empty()) out += ": field '" + field + "'";
    return out + ": " + message;
  }

  std::string file_;
  std::string field_;
};

}  // namespace dyniso
