#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Core>

#include "dyniso/actuation_models.hpp"
#include "dyniso/isotropy_core.hpp"

namespace dyniso {

/// Acceleration ellipsoid Q = sum_i limit_i^2 A_i A_i^T with its sorted
/// eigen-decomposition. This is the ellipsoidal approximation of the attainable
/// set; it is not the minimum-volume enclosing ellipsoid of the zonotope.
struct Ellipsoid {
  Eigen::Matrix3d shape = Eigen::Matrix3d::Zero();
  Eigen::Vector3d eigenvalues = Eigen::Vector3d::Zero();    // descending, clamped at 0
  Eigen::Matrix3d eigenvectors = Eigen::Matrix3d::Identity();  // column k pairs with eigenvalues[k]
  double condition = 0.0;  // lambda_1 / lambda_3, +inf when lambda_3 == 0
  double eta_ellipsoid = 0.0;  // sqrt(lambda_3 / lambda_1), 0 when lambda_1 == 0

  Eigen::Vector3d weak_axis() const { return eigenvectors.col(2); }
};

Ellipsoid shape_matrix(const AccelerationMap& map);
// Decomposes an arbitrary symmetric PSD matrix with the same conventions.
Ellipsoid ellipsoid_from_shape(const Eigen::Matrix3d& shape);

struct MarginReport {
  double margin = 1.0;
  double quadratic_form = 0.0;  // a^T Q^-1 a
  bool feasible = true;
};

/// margin = 1 - a^T Q^-1 a. Throws SingularEllipsoidError when
/// lambda_3 <= 1e-12 lambda_1.
MarginReport stability_margin(const Ellipsoid& ell, const Vec3& a_req);

struct DisturbanceBound {
  double bound = 0.0;        // sqrt(lambda_3), acceleration units, proportionality constant 1
  double cross_check = 0.0;  // eta_ellipsoid * sqrt(lambda_1)
};

DisturbanceBound max_disturbance_bound(const Ellipsoid& ell);

struct EffortReport {
  Eigen::VectorXd torque;
  double effort = 0.0;  // ||tau*||^2
  Eigen::Vector3d decomposition = Eigen::Vector3d::Zero();  // alpha_k^2 / lambda_k over Q's eigenframe
  double residual = 0.0;                                     // ||A tau* - a_des||
  bool saturated = false;                                    // some |tau*_i| > limit_i
  std::optional<double> effort_exact;      // a^T (A A^T)^-1 a when A has full row rank
  std::optional<double> effort_ellipsoid;  // a^T Q^-1 a when Q is invertible
};

/// tau* = A^+ a_des through a complete orthogonal decomposition of A. Throws
/// InfeasibleAccelerationError when the residual exceeds 1e-9 max(1, ||a||).
/// Limits are not enforced; they only set the saturation flag.
EffortReport min_energy_torque(const AccelerationMap& map, const Vec3& a_des);

struct RedundancyComparison {
  AccelerationMap augmented;
  Ellipsoid before;
  Ellipsoid after;
};

/// Appends `copies` duplicates of column `source_index` and compares the
/// ellipsoids before and after.
RedundancyComparison redundancy_augment(const AccelerationMap& map, std::size_t source_index, std::size_t copies);

// Copies the ellipsoid spectrum into a sampled isotropy report.
void attach_ellipsoid(IsotropyReport& report, const Ellipsoid& ell);

}  // namespace dyniso
