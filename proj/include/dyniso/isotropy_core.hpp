#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "dyniso/actuation_models.hpp"
#include "dyniso/geometry_sampling.hpp"

namespace dyniso {

// How unilateral columns enter the support function. kOneSided is
// max(0, c_i) * limit; kPaperCompat uses |c_i| * limit as for bilateral columns.
enum class UnilateralRule { kOneSided, kPaperCompat };

/// c_i(u) = u^T A_i for every column. Throws Error(kInvalidArgument) unless
/// |‖u‖ - 1| <= 1e-9.
Eigen::VectorXd directional_sensitivity(const AccelerationMap& map, const Vec3& u);

/// Support function of the attainable set along u: each actuator saturated at
/// its limit in the sign that maximizes u^T A tau. Always >= 0.
double directional_max_acceleration(const AccelerationMap& map, const Vec3& u,
                                    UnilateralRule rule = UnilateralRule::kOneSided);

struct AccelerationCloud {
  DirectionSet directions;
  Eigen::VectorXd magnitudes;
  Eigen::VectorXd normalized;  // magnitudes / global max, or all zero if degenerate
  std::size_t argmin_index = 0;
  std::size_t argmax_index = 0;
  bool degenerate = false;  // global maximum is zero
};

AccelerationCloud acceleration_cloud(const AccelerationMap& map, const DirectionSet& dirs,
                                     UnilateralRule rule = UnilateralRule::kOneSided);

struct IsotropyReport {
  double eta = 0.0;
  double a_min = 0.0;
  double a_max = 0.0;
  Vec3 u_min = Vec3::Zero();
  Vec3 u_max = Vec3::Zero();
  std::size_t sample_count = 0;
  Sampler sampler = Sampler::kFibonacci;
  std::uint64_t seed = 0;
  // rank(A) < 3 or the cloud is identically zero; eta is forced to 0.
  bool degenerate = false;
  // Filled by attach_ellipsoid().
  double eta_ellipsoid = 0.0;
  Eigen::Vector3d eigenvalues = Eigen::Vector3d::Zero();
};

// True when A diag(limits) has rank < 3 (smallest singular value <= 1e-12
// times the largest) or is zero.
bool is_rank_deficient(const AccelerationMap& map);

IsotropyReport isotropy_score(const AccelerationMap& map, const DirectionSet& dirs,
                              UnilateralRule rule = UnilateralRule::kOneSided);
IsotropyReport isotropy_score(const AccelerationCloud& cloud, bool rank_deficient);

std::vector<IsotropyReport> isotropy_sequence(const std::vector<AccelerationMap>& maps, const DirectionSet& dirs,
                                              UnilateralRule rule = UnilateralRule::kOneSided);

}  // namespace dyniso
