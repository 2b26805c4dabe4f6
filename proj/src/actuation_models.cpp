#include "dyniso/actuation_models.hpp"

#include <cmath>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "dyniso/errors.hpp"

namespace dyniso {

namespace {

constexpr double kZeroDirectionNorm = 1e-6;
constexpr double kSymmetryRelTol = 1e-9;
constexpr double kSpdRatio = 1e-12;

// Unit direction, or an error when the input is within 1e-6 of zero.
Vec3 unit_direction(const Vec3& d, std::size_t index) {
  const double norm = d.norm();
  if (!std::isfinite(norm) || norm < kZeroDirectionNorm) {
    throw Error(ErrorKind::kInvalidActuator, fmt::format("actuator {} has a zero or non-finite direction", index));
  }
  if (std::abs(norm - 1.0) <= 1e-15) return d;
  return d / norm;
}

void check_limit(double limit, const std::string& what) {
  if (!(limit > 0.0) || !std::isfinite(limit)) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("{} limit must be positive and finite (got {})", what, limit));
  }
}

void check_spd(const Eigen::MatrixXd& inertia) {
  const double scale = std::max(1.0, inertia.norm());
  if ((inertia - inertia.transpose()).norm() > kSymmetryRelTol * scale) {
    throw Error(ErrorKind::kIllConditionedDynamics, "inertia matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (inertia + inertia.transpose()), Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo <= kSpdRatio * hi) {
    throw Error(ErrorKind::kIllConditionedDynamics,
                fmt::format("inertia matrix is not positive definite (eigenvalues in [{:.6g}, {:.6g}])", lo, hi));
  }
}

}  // namespace

std::string_view to_string(Bound bound) { return bound == Bound::kBilateral ? "bilateral" : "unilateral"; }

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kRadialLegs:
      return "radial_legs";
    case Family::kMultirotor:
      return "multirotor";
    case Family::kTensegrity:
      return "tensegrity";
    case Family::kGeneric:
      return "generic";
  }
  return "unknown";
}

std::optional<Bound> parse_bound(std::string_view name) {
  if (name == "bilateral") return Bound::kBilateral;
  if (name == "unilateral") return Bound::kUnilateral;
  return std::nullopt;
}

std::optional<Family> parse_family(std::string_view name) {
  if (name == "radial_legs") return Family::kRadialLegs;
  if (name == "multirotor") return Family::kMultirotor;
  if (name == "tensegrity") return Family::kTensegrity;
  if (name == "generic") return Family::kGeneric;
  return std::nullopt;
}

void validate(const Morphology& morph) {
  if (!(morph.mass > 0.0) || !std::isfinite(morph.mass)) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("mass must be positive (got {})", morph.mass));
  }
  switch (morph.family) {
    case Family::kRadialLegs:
    case Family::kMultirotor: {
      const auto* acts = std::get_if<std::vector<ActuatorSpec>>(&morph.actuation);
      if (acts == nullptr) {
        throw Error(ErrorKind::kInvalidArgument,
                    fmt::format("family {} requires an actuator list", to_string(morph.family)));
      }
      if (acts->empty()) throw Error(ErrorKind::kInvalidArgument, "actuator list is empty");
      for (std::size_t i = 0; i < acts->size(); ++i) {
        unit_direction((*acts)[i].direction, i);
        check_limit((*acts)[i].limit, fmt::format("actuator {}", i));
      }
      break;
    }
    case Family::kTensegrity: {
      const auto* t = std::get_if<TensegritySpec>(&morph.actuation);
      if (t == nullptr) throw Error(ErrorKind::kInvalidArgument, "family tensegrity requires nodes and elements");
      if (t->elements.empty()) throw Error(ErrorKind::kInvalidArgument, "tensegrity has no actuated elements");
      for (std::size_t i = 0; i < t->elements.size(); ++i) {
        const auto& e = t->elements[i];
        if (e.ends[0] >= t->nodes.size() || e.ends[1] >= t->nodes.size()) {
          throw Error(ErrorKind::kInvalidArgument, fmt::format("element {} references a missing node", i));
        }
        if (e.ends[0] == e.ends[1]) {
          throw Error(ErrorKind::kInvalidArgument, fmt::format("element {} connects a node to itself", i));
        }
        check_limit(e.limit, fmt::format("element {}", i));
      }
      break;
    }
    case Family::kGeneric: {
      const auto* d = std::get_if<DynamicsSpec>(&morph.actuation);
      if (d == nullptr) throw Error(ErrorKind::kInvalidArgument, "family generic requires a dynamics block");
      const auto n = d->jacobian_or_map.cols();
      if (n == 0) throw Error(ErrorKind::kInvalidArgument, "dynamics map has no columns");
      if (d->limits.size() != n) {
        throw Error(ErrorKind::kInvalidArgument,
                    fmt::format("dynamics has {} columns but {} limits", n, d->limits.size()));
      }
      for (Eigen::Index i = 0; i < n; ++i) check_limit(d->limits[i], fmt::format("joint {}", i));
      if (d->inertia) {
        if (d->inertia->rows() != n || d->inertia->cols() != n) {
          throw Error(ErrorKind::kInvalidArgument, fmt::format("inertia must be {}x{}", n, n));
        }
        check_spd(*d->inertia);
      }
      break;
    }
  }
}

AccelerationMap::AccelerationMap(Eigen::Matrix3Xd columns, Eigen::VectorXd limits, std::vector<Bound> bounds,
                                 double mass)
    : columns_(std::move(columns)), limits_(std::move(limits)), bounds_(std::move(bounds)), mass_(mass) {
  const auto n = columns_.cols();
  if (n < 1) throw Error(ErrorKind::kInvalidArgument, "acceleration map needs at least one column");
  if (limits_.size() != n || static_cast<Eigen::Index>(bounds_.size()) != n) {
    throw Error(ErrorKind::kInvalidArgument, "acceleration map columns, limits and bounds differ in length");
  }
  for (Eigen::Index i = 0; i < n; ++i) check_limit(limits_[i], fmt::format("column {}", i));
  if (!columns_.allFinite()) throw Error(ErrorKind::kInvalidArgument, "acceleration map has non-finite entries");
}

bool AccelerationMap::all_bilateral() const {
  for (auto b : bounds_) {
    if (b != Bound::kBilateral) return false;
  }
  return true;
}

AccelerationMap AccelerationMap::with_duplicated_column(std::size_t index, std::size_t copies) const {
  if (index >= size()) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("column index {} out of range (n = {})", index, size()));
  }
  if (copies == 0) throw Error(ErrorKind::kInvalidArgument, "copies must be at least 1");
  const auto n = columns_.cols();
  const auto extra = static_cast<Eigen::Index>(copies);
  const auto j = static_cast<Eigen::Index>(index);
  Eigen::Matrix3Xd cols(3, n + extra);
  Eigen::VectorXd lims(n + extra);
  cols.leftCols(n) = columns_;
  lims.head(n) = limits_;
  std::vector<Bound> bnds = bounds_;
  for (Eigen::Index c = 0; c < extra; ++c) {
    cols.col(n + c) = columns_.col(j);
    lims[n + c] = limits_[j];
    bnds.push_back(bounds_[index]);
  }
  return AccelerationMap(std::move(cols), std::move(lims), std::move(bnds), mass_);
}

AccelerationMap AccelerationMap::with_column(const Vec3& column, double limit, Bound bound) const {
  const auto n = columns_.cols();
  Eigen::Matrix3Xd cols(3, n + 1);
  Eigen::VectorXd lims(n + 1);
  cols.leftCols(n) = columns_;
  cols.col(n) = column;
  lims.head(n) = limits_;
  lims[n] = limit;
  std::vector<Bound> bnds = bounds_;
  bnds.push_back(bound);
  return AccelerationMap(std::move(cols), std::move(lims), std::move(bnds), mass_);
}

AccelerationMap AccelerationMap::rotated(const Eigen::Matrix3d& rotation) const {
  return AccelerationMap(rotation * columns_, limits_, bounds_, mass_);
}

AccelerationMap compose_from_dynamics(const Eigen::Matrix3Xd& jacobian, const Eigen::MatrixXd& inertia,
                                      const Eigen::VectorXd& limits) {
  const auto n = jacobian.cols();
  if (inertia.rows() != n || inertia.cols() != n || limits.size() != n) {
    throw Error(ErrorKind::kInvalidArgument,
                fmt::format("dimension mismatch: J_c is 3x{}, M is {}x{}, {} limits", n, inertia.rows(),
                            inertia.cols(), limits.size()));
  }
  check_spd(inertia);
  // M symmetric, so A = J M^-1 = (M^-1 J^T)^T.
  Eigen::LDLT<Eigen::MatrixXd> ldlt(0.5 * (inertia + inertia.transpose()));
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::kIllConditionedDynamics, "inertia factorization failed");
  Eigen::MatrixXd solved = ldlt.solve(jacobian.transpose());
  Eigen::Matrix3Xd columns = solved.transpose();
  return AccelerationMap(std::move(columns), limits, std::vector<Bound>(static_cast<std::size_t>(n), Bound::kBilateral));
}

AccelerationMap build_acceleration_map(const Morphology& morph) {
  validate(morph);
  const double inv_mass = 1.0 / morph.mass;

  if (const auto* acts = std::get_if<std::vector<ActuatorSpec>>(&morph.actuation)) {
    const auto n = static_cast<Eigen::Index>(acts->size());
    Eigen::Matrix3Xd cols(3, n);
    Eigen::VectorXd lims(n);
    std::vector<Bound> bnds;
    bnds.reserve(acts->size());
    for (std::size_t i = 0; i < acts->size(); ++i) {
      const auto& a = (*acts)[i];
      cols.col(static_cast<Eigen::Index>(i)) = unit_direction(a.direction, i) * inv_mass;
      lims[static_cast<Eigen::Index>(i)] = a.limit;
      bnds.push_back(a.bounds);
    }
    return AccelerationMap(std::move(cols), std::move(lims), std::move(bnds), morph.mass);
  }

  if (const auto* t = std::get_if<TensegritySpec>(&morph.actuation)) {
    const auto n = static_cast<Eigen::Index>(t->elements.size());
    Eigen::Matrix3Xd cols(3, n);
    Eigen::VectorXd lims(n);
    for (std::size_t i = 0; i < t->elements.size(); ++i) {
      const auto& e = t->elements[i];
      const Vec3 d = t->nodes[e.ends[1]] - t->nodes[e.ends[0]];
      const double len = d.norm();
      if (!(len > 1e-12)) {
        throw Error(ErrorKind::kDegenerateGeometry, fmt::format("tensegrity element {} has zero length", i));
      }
      cols.col(static_cast<Eigen::Index>(i)) = d / len * inv_mass;
      lims[static_cast<Eigen::Index>(i)] = e.limit;
    }
    // Cables fold into bilateral columns: the grounded endpoint can always be
    // chosen so the cable pulls along +u. The result is an upper bound.
    return AccelerationMap(std::move(cols), std::move(lims),
                           std::vector<Bound>(t->elements.size(), Bound::kBilateral), morph.mass);
  }

  const auto& d = std::get<DynamicsSpec>(morph.actuation);
  if (d.inertia) {
    AccelerationMap composed = compose_from_dynamics(d.jacobian_or_map, *d.inertia, d.limits);
    return AccelerationMap(composed.columns(), composed.limits(), composed.bounds(), morph.mass);
  }
  return AccelerationMap(d.jacobian_or_map, d.limits,
                         std::vector<Bound>(static_cast<std::size_t>(d.jacobian_or_map.cols()), Bound::kBilateral),
                         morph.mass);
}

Morphology radial_legs(std::string name, const std::vector<Vec3>& directions, double mass, double limit) {
  Morphology m;
  m.name = std::move(name);
  m.family = Family::kRadialLegs;
  m.mass = mass;
  std::vector<ActuatorSpec> acts;
  acts.reserve(directions.size());
  for (const auto& d : directions) acts.push_back({d, limit, Bound::kBilateral});
  m.actuation = std::move(acts);
  return m;
}

}  // namespace dyniso
