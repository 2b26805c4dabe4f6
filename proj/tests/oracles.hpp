#pragma once

// Test-only reference computations. Nothing here calls the closed-form
// support function, the pseudoinverse path or the analytic Thomson gradient.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dyniso/actuation_models.hpp"

namespace oracle {

using dyniso::Vec3;

// max over all 2^n vertices of the actuator box of u^T A tau. Unilateral
// coordinates range over {0, limit}, bilateral over {-limit, +limit}.
inline double box_vertex_max(const dyniso::AccelerationMap& map, const Vec3& u) {
  const std::size_t n = map.size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Eigen::VectorXd tau(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const double lim = map.limits()[static_cast<Eigen::Index>(i)];
      const bool hi = (mask >> i) & 1U;
      if (map.bounds()[i] == dyniso::Bound::kUnilateral) {
        tau[static_cast<Eigen::Index>(i)] = hi ? lim : 0.0;
      } else {
        tau[static_cast<Eigen::Index>(i)] = hi ? lim : -lim;
      }
    }
    const Vec3 a = map.columns() * tau;
    best = std::max(best, u.dot(a));
  }
  return best;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  for (;;) {
    Vec3 v(g(rng), g(rng), g(rng));
    if (v.norm() > 1e-6) return v.normalized();
  }
}

inline dyniso::AccelerationMap random_map(std::mt19937_64& rng, std::size_t n, bool allow_unilateral) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> lim(0.2, 3.0);
  std::bernoulli_distribution coin(0.5);
  Eigen::Matrix3Xd cols(3, static_cast<Eigen::Index>(n));
  Eigen::VectorXd limits(static_cast<Eigen::Index>(n));
  std::vector<dyniso::Bound> bounds;
  for (std::size_t i = 0; i < n; ++i) {
    cols.col(static_cast<Eigen::Index>(i)) = Vec3(g(rng), g(rng), g(rng));
    limits[static_cast<Eigen::Index>(i)] = lim(rng);
    bounds.push_back(allow_unilateral && coin(rng) ? dyniso::Bound::kUnilateral : dyniso::Bound::kBilateral);
  }
  return dyniso::AccelerationMap(cols, limits, bounds);
}

// Random proper rotation from a normalized quaternion.
inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q.toRotationMatrix();
}

// Direct sum of inverse pairwise distances.
inline double coulomb_energy(const std::vector<Vec3>& p) {
  double e = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) e += 1.0 / (p[i] - p[j]).norm();
  }
  return e;
}

// Central difference of E along a tangent direction t at point `index`,
// retracting to the sphere by normalization.
inline double directional_derivative_fd(std::vector<Vec3> p, std::size_t index, const Vec3& t, double h) {
  const Vec3 base = p[index];
  p[index] = (base + h * t).normalized();
  const double plus = coulomb_energy(p);
  p[index] = (base - h * t).normalized();
  const double minus = coulomb_energy(p);
  return (plus - minus) / (2.0 * h);
}

// Orthonormal basis of the null space of A via a full SVD.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-10 * sv[0]) ++rank;
  }
  return svd.matrixV().rightCols(a.cols() - rank);
}

}  // namespace oracle
