#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "dyniso/ellipsoid_analysis.hpp"
#include "dyniso/errors.hpp"
#include "dyniso/fixtures.hpp"
#include "oracles.hpp"

using namespace dyniso;

namespace {

AccelerationMap octahedral() { return build_acceleration_map(fixtures::octahedron6()); }
AccelerationMap quadrotor() { return build_acceleration_map(fixtures::quadrotor4()); }

// Outer-product sum written out term by term.
Eigen::Matrix3d naive_shape(const AccelerationMap& map) {
  Eigen::Matrix3d q = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double l = map.limits()[static_cast<Eigen::Index>(i)];
    const Vec3 c = map.column(i);
    for (int r = 0; r < 3; ++r)
      for (int s = 0; s < 3; ++s) q(r, s) += l * l * c[r] * c[s];
  }
  return q;
}

}  // namespace

TEST(ShapeMatrix, Octahedral) {
  const Ellipsoid e = shape_matrix(octahedral());
  EXPECT_LE((e.shape - 2.0 * Eigen::Matrix3d::Identity()).norm(), 1e-15);
  EXPECT_NEAR(e.eigenvalues[0], 2.0, 1e-14);
  EXPECT_NEAR(e.eigenvalues[2], 2.0, 1e-14);
  EXPECT_NEAR(e.eta_ellipsoid, 1.0, 1e-14);
  EXPECT_NEAR(e.condition, 1.0, 1e-14);
}

TEST(ShapeMatrix, ExtraActuatorAlongX) {
  const AccelerationMap map = octahedral().with_duplicated_column(0, 1);
  const Ellipsoid e = shape_matrix(map);
  EXPECT_LE((e.shape - Eigen::Vector3d(3, 2, 2).asDiagonal().toDenseMatrix()).norm(), 1e-15);
  EXPECT_NEAR(e.eigenvalues[0], 3.0, 1e-14);
  EXPECT_NEAR(e.eta_ellipsoid, std::sqrt(2.0 / 3.0), 1e-14);
  EXPECT_NEAR(std::abs(e.eigenvectors.col(0).x()), 1.0, 1e-14);
}

TEST(ShapeMatrix, QuadrotorIsRankOne) {
  const Ellipsoid e = shape_matrix(quadrotor());
  EXPECT_LE((e.shape - Eigen::Vector3d(0, 0, 4).asDiagonal().toDenseMatrix()).norm(), 1e-15);
  EXPECT_EQ(e.eigenvalues[1], 0.0);
  EXPECT_EQ(e.eigenvalues[2], 0.0);
  EXPECT_EQ(e.eta_ellipsoid, 0.0);
  EXPECT_TRUE(std::isinf(e.condition));
}

TEST(ShapeMatrix, MatchesNaiveSumAndTrace) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    const AccelerationMap map = oracle::random_map(rng, 3 + static_cast<std::size_t>(t % 9), t % 2 == 0);
    const Ellipsoid e = shape_matrix(map);
    const Eigen::Matrix3d q = naive_shape(map);
    EXPECT_LE((e.shape - q).norm(), 1e-12 * q.norm());
    double trace = 0.0;
    for (std::size_t i = 0; i < map.size(); ++i) {
      const double l = map.limits()[static_cast<Eigen::Index>(i)];
      trace += l * l * map.column(i).squaredNorm();
    }
    EXPECT_NEAR(e.eigenvalues.sum(), trace, 1e-12 * trace);
    EXPECT_GE(e.eigenvalues[0], e.eigenvalues[1]);
    EXPECT_GE(e.eigenvalues[1], e.eigenvalues[2]);
    EXPECT_GE(e.eigenvalues[2], 0.0);
    const Eigen::Matrix3d v = e.eigenvectors;
    EXPECT_LE((v.transpose() * v - Eigen::Matrix3d::Identity()).norm(), 1e-12);
    EXPECT_NEAR(v.determinant(), 1.0, 1e-12);
    EXPECT_LE((v * e.eigenvalues.asDiagonal() * v.transpose() - e.shape).norm(), 1e-12 * e.shape.norm());
  }
}

TEST(ShapeMatrix, RotationAndScaleInvariance) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 20; ++t) {
    const AccelerationMap map = oracle::random_map(rng, 6, false);
    const Ellipsoid e = shape_matrix(map);
    const Ellipsoid r = shape_matrix(map.rotated(oracle::random_rotation(rng)));
    EXPECT_NEAR(r.eta_ellipsoid, e.eta_ellipsoid, 1e-10);
    const AccelerationMap scaled(map.columns(), 2.5 * map.limits(), map.bounds());
    EXPECT_NEAR(shape_matrix(scaled).eta_ellipsoid, e.eta_ellipsoid, 1e-12);
  }
}

TEST(ShapeMatrix, NegativeRoundOffIsClamped) {
  Eigen::Matrix3d q = Eigen::Vector3d(1.0, 1.0, -1e-16).asDiagonal();
  const Ellipsoid e = ellipsoid_from_shape(q);
  EXPECT_EQ(e.eigenvalues[2], 0.0);
}

TEST(StabilityMargin, Octahedral) {
  const Ellipsoid e = shape_matrix(octahedral());
  EXPECT_DOUBLE_EQ(stability_margin(e, Vec3::Zero()).margin, 1.0);
  EXPECT_NEAR(stability_margin(e, Vec3(std::sqrt(2.0), 0, 0)).margin, 0.0, 1e-15);
  const MarginReport r = stability_margin(e, Vec3(std::sqrt(0.5), 0, 0));
  EXPECT_NEAR(r.margin, 0.75, 1e-15);
  EXPECT_TRUE(r.feasible);
  EXPECT_FALSE(stability_margin(e, Vec3(0, 0, 2)).feasible);
}

TEST(StabilityMargin, AgreesWithLinearSolve) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 30; ++t) {
    const AccelerationMap map = oracle::random_map(rng, 7, false);
    const Ellipsoid e = shape_matrix(map);
    const Vec3 a = 0.5 * oracle::random_unit(rng);
    const double direct = a.dot(naive_shape(map).ldlt().solve(a));
    EXPECT_NEAR(stability_margin(e, a).quadratic_form, direct, 1e-9 * std::max(1.0, direct));
  }
}

TEST(StabilityMargin, SingularEllipsoidReportsWeakAxis) {
  try {
    stability_margin(shape_matrix(quadrotor()), Vec3(0, 0, 1));
    FAIL();
  } catch (const SingularEllipsoidError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularEllipsoid);
    EXPECT_NEAR(std::abs(e.weak_axis().z()), 0.0, 1e-12);
    EXPECT_NEAR(e.weak_axis().norm(), 1.0, 1e-12);
  }
}

TEST(DisturbanceBound, Octahedral) {
  const DisturbanceBound b = max_disturbance_bound(shape_matrix(octahedral()));
  EXPECT_NEAR(b.bound, std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(b.cross_check, b.bound, 1e-14);
}

TEST(DisturbanceBound, CrossCheckOnRandomMaps) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 30; ++t) {
    const DisturbanceBound b = max_disturbance_bound(shape_matrix(oracle::random_map(rng, 5, false)));
    EXPECT_NEAR(b.bound, b.cross_check, 1e-12 * std::max(1.0, b.bound));
  }
}

TEST(MinEnergyTorque, IdentityMap) {
  const AccelerationMap map(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Ones(), std::vector<Bound>(3, Bound::kBilateral));
  const EffortReport r = min_energy_torque(map, Vec3(1, 2, 3));
  EXPECT_LE((r.torque - Eigen::Vector3d(1, 2, 3)).norm(), 1e-14);
  EXPECT_NEAR(r.effort, 14.0, 1e-13);
  EXPECT_TRUE(r.saturated);
  ASSERT_TRUE(r.effort_exact.has_value());
  EXPECT_NEAR(*r.effort_exact, 14.0, 1e-13);
}

TEST(MinEnergyTorque, OctahedralSplitsEvenly) {
  const EffortReport r = min_energy_torque(octahedral(), Vec3(1, 0, 0));
  Eigen::VectorXd expected(6);
  expected << 0.5, -0.5, 0, 0, 0, 0;
  EXPECT_LE((r.torque - expected).norm(), 1e-14);
  EXPECT_NEAR(r.effort, 0.5, 1e-14);
  EXPECT_FALSE(r.saturated);
  EXPECT_NEAR(r.decomposition.sum(), 0.5, 1e-14);
  ASSERT_TRUE(r.effort_ellipsoid.has_value());
  EXPECT_NEAR(*r.effort_ellipsoid, 0.5, 1e-14);
}

TEST(MinEnergyTorque, NullSpacePerturbationsCostMore) {
  std::mt19937_64 rng(35);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    const AccelerationMap map = oracle::random_map(rng, 8, false);
    const Vec3 a = oracle::random_unit(rng);
    const EffortReport r = min_energy_torque(map, a);
    EXPECT_LE(r.residual, 1e-12);
    const Eigen::MatrixXd ns = oracle::null_space(map.columns());
    ASSERT_EQ(ns.cols(), 5);
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd z(ns.cols());
      for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = g(rng);
      const Eigen::VectorXd tau = r.torque + 0.1 * ns * z;
      EXPECT_LE((map.columns() * tau - a).norm(), 1e-10);
      EXPECT_GT(tau.squaredNorm(), r.effort);
    }
    ASSERT_TRUE(r.effort_exact.has_value());
    EXPECT_NEAR(*r.effort_exact, r.effort, 1e-10 * std::max(1.0, r.effort));
  }
}

TEST(MinEnergyTorque, InfeasibleOutsideTheRange) {
  try {
    min_energy_torque(quadrotor(), Vec3(1, 0, 0));
    FAIL();
  } catch (const InfeasibleAccelerationError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInfeasibleAcceleration);
    EXPECT_NEAR(e.residual(), 1.0, 1e-12);
  }
  // Inside the range of a rank-deficient map the solution still exists.
  const EffortReport r = min_energy_torque(quadrotor(), Vec3(0, 0, 2));
  EXPECT_NEAR(r.effort, 1.0, 1e-14);
  EXPECT_FALSE(r.effort_exact.has_value());
}

TEST(RedundancyAugment, DuplicatingWeakAxisHelps) {
  const AccelerationMap base = octahedral().with_duplicated_column(0, 1).with_duplicated_column(2, 1);
  const Ellipsoid before = shape_matrix(base);
  // Find a column aligned with the weak axis.
  std::size_t weak = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double c = std::abs(base.column(i).normalized().dot(before.weak_axis()));
    if (c > best) best = c, weak = i;
  }
  const RedundancyComparison cmp = redundancy_augment(base, weak, 1);
  EXPECT_EQ(cmp.augmented.size(), base.size() + 1);
  EXPECT_GT(cmp.after.eta_ellipsoid, cmp.before.eta_ellipsoid);
  EXPECT_THROW(redundancy_augment(base, 0, 0), Error);
}

TEST(RedundancyAugment, DuplicatingStrongestAxisNeverHelps) {
  std::mt19937_64 rng(36);
  for (int t = 0; t < 100; ++t) {
    const AccelerationMap map = oracle::random_map(rng, 5 + static_cast<std::size_t>(t % 6), false);
    const Ellipsoid e = shape_matrix(map);
    std::size_t strong = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < map.size(); ++i) {
      const Vec3 c = map.column(i);
      const double align = std::abs(c.normalized().dot(e.eigenvectors.col(0)));
      if (align > best) best = align, strong = i;
    }
    // Only exactly-aligned duplicates are guaranteed not to help, so build one.
    const Vec3 aligned = e.eigenvectors.col(0) * map.column(strong).norm();
    const AccelerationMap more = map.with_column(aligned, 1.0, Bound::kBilateral);
    EXPECT_LE(shape_matrix(more).eta_ellipsoid, e.eta_ellipsoid + 1e-12);
  }
}

TEST(AttachEllipsoid, CopiesSpectrum) {
  IsotropyReport r;
  const Ellipsoid e = shape_matrix(octahedral().with_duplicated_column(0, 1));
  attach_ellipsoid(r, e);
  EXPECT_EQ(r.eta_ellipsoid, e.eta_ellipsoid);
  EXPECT_EQ(r.eigenvalues, e.eigenvalues);
}
