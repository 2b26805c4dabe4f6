#include "dyniso/ellipsoid_analysis.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <fmt/format.h>

#include "dyniso/errors.hpp"

namespace dyniso {

namespace {

constexpr double kSingularRatio = 1e-12;
constexpr double kRoundoffRatio = 1e-15;
constexpr double kClampAbs = 1e-14;
constexpr double kReconstructTol = 1e-12;
constexpr double kFeasibleRel = 1e-9;

bool decomposition_ok(const Eigen::Matrix3d& shape, const Eigen::Vector3d& values, const Eigen::Matrix3d& vectors) {
  const double scale = std::max(shape.norm(), std::numeric_limits<double>::min());
  const double recon = (vectors * values.asDiagonal() * vectors.transpose() - shape).norm() / scale;
  const double ortho = (vectors.transpose() * vectors - Eigen::Matrix3d::Identity()).norm();
  return recon <= kReconstructTol && ortho <= kReconstructTol;
}

bool invertible(const Ellipsoid& ell) {
  return ell.eigenvalues[0] > 0.0 && ell.eigenvalues[2] > kSingularRatio * ell.eigenvalues[0];
}

}  // namespace

Ellipsoid ellipsoid_from_shape(const Eigen::Matrix3d& shape_in) {
  Ellipsoid ell;
  ell.shape = 0.5 * (shape_in + shape_in.transpose());

  // Closed form first; fall back to the iterative QR solver when the direct
  // solution does not reconstruct Q to 1e-12.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig;
  eig.computeDirect(ell.shape);
  if (eig.info() != Eigen::Success || !decomposition_ok(ell.shape, eig.eigenvalues(), eig.eigenvectors())) {
    eig.compute(ell.shape);
  }

  // Eigen returns ascending order.
  for (int k = 0; k < 3; ++k) {
    ell.eigenvalues[k] = eig.eigenvalues()[2 - k];
    ell.eigenvectors.col(k) = eig.eigenvectors().col(2 - k);
  }
  const double top = std::max(ell.eigenvalues[0], 0.0);
  for (int k = 0; k < 3; ++k) {
    double& v = ell.eigenvalues[k];
    if (v < 0.0 && v > -kClampAbs * std::max(1.0, top)) v = 0.0;
    if (std::abs(v) <= kRoundoffRatio * top) v = 0.0;
  }
  if (ell.eigenvectors.determinant() < 0.0) ell.eigenvectors.col(2) *= -1.0;

  const double l1 = ell.eigenvalues[0];
  const double l3 = ell.eigenvalues[2];
  ell.condition = l3 > 0.0 ? l1 / l3 : std::numeric_limits<double>::infinity();
  ell.eta_ellipsoid = l1 > 0.0 ? std::sqrt(std::max(l3, 0.0) / l1) : 0.0;
  return ell;
}

Ellipsoid shape_matrix(const AccelerationMap& map) {
  const Eigen::Matrix3Xd weighted = map.columns() * map.limits().asDiagonal();
  return ellipsoid_from_shape(weighted * weighted.transpose());
}

MarginReport stability_margin(const Ellipsoid& ell, const Vec3& a_req) {
  if (!invertible(ell)) {
    const Vec3 w = ell.weak_axis();
    throw SingularEllipsoidError(
        fmt::format("acceleration ellipsoid is singular (lambda = [{:.6g}, {:.6g}, {:.6g}]); weak axis ({:.6f}, {:.6f}, {:.6f})",
                    ell.eigenvalues[0], ell.eigenvalues[1], ell.eigenvalues[2], w.x(), w.y(), w.z()),
        w);
  }
  // a^T Q^-1 a in the eigenframe.
  const Eigen::Vector3d alpha = ell.eigenvectors.transpose() * a_req;
  MarginReport r;
  r.quadratic_form = 0.0;
  for (int k = 0; k < 3; ++k) r.quadratic_form += alpha[k] * alpha[k] / ell.eigenvalues[k];
  r.margin = 1.0 - r.quadratic_form;
  r.feasible = r.margin >= 0.0;
  return r;
}

DisturbanceBound max_disturbance_bound(const Ellipsoid& ell) {
  DisturbanceBound b;
  b.bound = std::sqrt(std::max(ell.eigenvalues[2], 0.0));
  b.cross_check = ell.eta_ellipsoid * std::sqrt(std::max(ell.eigenvalues[0], 0.0));
  return b;
}

EffortReport min_energy_torque(const AccelerationMap& map, const Vec3& a_des) {
  const Eigen::MatrixXd a = map.columns();
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);

  EffortReport r;
  r.torque = cod.solve(Eigen::VectorXd(a_des));
  r.residual = (a * r.torque - a_des).norm();
  const double allowed = kFeasibleRel * std::max(1.0, a_des.norm());
  if (!(r.residual <= allowed)) {
    throw InfeasibleAccelerationError(
        fmt::format("desired acceleration is outside the column space of A (least-squares residual {:.6g})", r.residual),
        r.residual);
  }
  r.effort = r.torque.squaredNorm();
  for (Eigen::Index i = 0; i < r.torque.size(); ++i) {
    if (std::abs(r.torque[i]) > map.limits()[i]) r.saturated = true;
  }

  if (cod.rank() == 3) {
    const Eigen::Matrix3d gram = a * a.transpose();
    r.effort_exact = a_des.dot(gram.ldlt().solve(a_des));
  }

  const Ellipsoid ell = shape_matrix(map);
  const Eigen::Vector3d alpha = ell.eigenvectors.transpose() * a_des;
  for (int k = 0; k < 3; ++k) {
    // Axes with no authority carry no component of a feasible a_des.
    const bool live = ell.eigenvalues[k] > kSingularRatio * ell.eigenvalues[0];
    r.decomposition[k] = live ? alpha[k] * alpha[k] / ell.eigenvalues[k] : 0.0;
  }
  if (invertible(ell)) r.effort_ellipsoid = r.decomposition.sum();
  return r;
}

RedundancyComparison redundancy_augment(const AccelerationMap& map, std::size_t source_index, std::size_t copies) {
  AccelerationMap augmented = map.with_duplicated_column(source_index, copies);
  Ellipsoid before = shape_matrix(map);
  Ellipsoid after = shape_matrix(augmented);
  return RedundancyComparison{std::move(augmented), before, after};
}

void attach_ellipsoid(IsotropyReport& report, const Ellipsoid& ell) {
  report.eta_ellipsoid = ell.eta_ellipsoid;
  report.eigenvalues = ell.eigenvalues;
}

}  // namespace dyniso
