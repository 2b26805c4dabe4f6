#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "dyniso/geometry_sampling.hpp"

namespace dyniso {

enum class Bound { kBilateral, kUnilateral };
enum class Family { kRadialLegs, kMultirotor, kTensegrity, kGeneric };

std::string_view to_string(Bound bound);
std::string_view to_string(Family family);
std::optional<Bound> parse_bound(std::string_view name);
std::optional<Family> parse_family(std::string_view name);

struct ActuatorSpec {
  Vec3 direction = Vec3::UnitZ();
  double limit = 1.0;
  Bound bounds = Bound::kBilateral;
};

enum class ElementKind { kRod, kCable };

struct TensegrityElement {
  ElementKind kind = ElementKind::kCable;
  std::array<std::size_t, 2> ends{0, 0};
  double limit = 1.0;
};

struct TensegritySpec {
  std::vector<Vec3> nodes;
  std::vector<TensegrityElement> elements;
};

// Either (jacobian, inertia) or a direct 3 x n map. Limits are per joint.
struct DynamicsSpec {
  Eigen::Matrix3Xd jacobian_or_map;
  std::optional<Eigen::MatrixXd> inertia;
  Eigen::VectorXd limits;

  bool has_inertia() const { return inertia.has_value(); }
};

using ActuationGroup = std::variant<std::vector<ActuatorSpec>, TensegritySpec, DynamicsSpec>;

struct Morphology {
  std::string name;
  Family family = Family::kRadialLegs;
  double mass = 1.0;
  ActuationGroup actuation;
};

// Checks the family/group pairing, mass, limits, tensegrity indices and, for
// generic (J_c, M) input, symmetry of M. Throws Error with a message naming
// the offending field. Does not modify the morphology.
void validate(const Morphology& morph);

/// Columns of A (acceleration per unit actuator effort), per-column limits and
/// bound types. Immutable once built.
class AccelerationMap {
 public:
  AccelerationMap(Eigen::Matrix3Xd columns, Eigen::VectorXd limits, std::vector<Bound> bounds, double mass = 1.0);

  std::size_t size() const { return static_cast<std::size_t>(columns_.cols()); }
  const Eigen::Matrix3Xd& columns() const { return columns_; }
  auto column(std::size_t i) const { return columns_.col(static_cast<Eigen::Index>(i)); }
  const Eigen::VectorXd& limits() const { return limits_; }
  const std::vector<Bound>& bounds() const { return bounds_; }
  double mass() const { return mass_; }
  bool all_bilateral() const;

  // A copy with `copies` duplicates of column `index` appended.
  AccelerationMap with_duplicated_column(std::size_t index, std::size_t copies) const;
  // A copy with one extra column.
  AccelerationMap with_column(const Vec3& column, double limit, Bound bound) const;
  // Every column rotated by R.
  AccelerationMap rotated(const Eigen::Matrix3d& rotation) const;

 private:
  Eigen::Matrix3Xd columns_;
  Eigen::VectorXd limits_;
  std::vector<Bound> bounds_;
  double mass_;
};

AccelerationMap build_acceleration_map(const Morphology& morph);

// A = J_c M^-1 through an LDLT solve of M X = J_c^T. Rejects M whose smallest
// eigenvalue is <= 1e-12 times the largest.
AccelerationMap compose_from_dynamics(const Eigen::Matrix3Xd& jacobian, const Eigen::MatrixXd& inertia,
                                      const Eigen::VectorXd& limits);

// Radial-legs morphology with unit-limit legs along the given directions.
Morphology radial_legs(std::string name, const std::vector<Vec3>& directions, double mass = 1.0, double limit = 1.0);

}  // namespace dyniso
