#include "dyniso/isotropy_core.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "dyniso/errors.hpp"

namespace dyniso {

namespace {

constexpr double kUnitTol = 1e-9;
constexpr std::size_t kCompensatedThreshold = 64;

void require_unit(const Vec3& u) {
  const double norm = u.norm();
  if (!(std::abs(norm - 1.0) <= kUnitTol)) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("query direction must be unit length (norm {:.17g})", norm));
  }
}

double contribution(double c, double limit, Bound bound, UnilateralRule rule) {
  if (bound == Bound::kUnilateral && rule == UnilateralRule::kOneSided) return c > 0.0 ? c * limit : 0.0;
  return std::abs(c) * limit;
}

// Support function without the unit check; the cloud loop checks once per set.
double support(const AccelerationMap& map, const Vec3& u, UnilateralRule rule) {
  const auto& cols = map.columns();
  const auto& lims = map.limits();
  const auto& bnds = map.bounds();
  const std::size_t n = map.size();
  if (n <= kCompensatedThreshold) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<Eigen::Index>(i);
      sum += contribution(u.dot(cols.col(j)), lims[j], bnds[i], rule);
    }
    return sum;
  }
  // Neumaier summation for wide maps.
  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    const double term = contribution(u.dot(cols.col(j)), lims[j], bnds[i], rule);
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

Eigen::VectorXd directional_sensitivity(const AccelerationMap& map, const Vec3& u) {
  require_unit(u);
  return map.columns().transpose() * u;
}

double directional_max_acceleration(const AccelerationMap& map, const Vec3& u, UnilateralRule rule) {
  require_unit(u);
  return support(map, u, rule);
}

AccelerationCloud acceleration_cloud(const AccelerationMap& map, const DirectionSet& dirs, UnilateralRule rule) {
  if (dirs.empty()) throw Error(ErrorKind::kInvalidArgument, "direction set is empty");
  for (const auto& u : dirs.directions) require_unit(u);

  AccelerationCloud cloud;
  cloud.directions = dirs;
  const auto count = static_cast<std::ptrdiff_t>(dirs.size());
  cloud.magnitudes.resize(count);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    cloud.magnitudes[k] = support(map, dirs.directions[static_cast<std::size_t>(k)], rule);
  }

  // Strict comparisons keep the lowest index on ties.
  for (std::ptrdiff_t k = 1; k < count; ++k) {
    if (cloud.magnitudes[k] < cloud.magnitudes[static_cast<Eigen::Index>(cloud.argmin_index)]) {
      cloud.argmin_index = static_cast<std::size_t>(k);
    }
    if (cloud.magnitudes[k] > cloud.magnitudes[static_cast<Eigen::Index>(cloud.argmax_index)]) {
      cloud.argmax_index = static_cast<std::size_t>(k);
    }
  }

  const double peak = cloud.magnitudes[static_cast<Eigen::Index>(cloud.argmax_index)];
  cloud.degenerate = !(peak > 0.0);
  if (cloud.degenerate) {
    cloud.normalized = Eigen::VectorXd::Zero(count);
  } else {
    cloud.normalized = cloud.magnitudes / peak;
    cloud.normalized[static_cast<Eigen::Index>(cloud.argmax_index)] = 1.0;
  }
  return cloud;
}

bool is_rank_deficient(const AccelerationMap& map) {
  const Eigen::Matrix3Xd weighted = map.columns() * map.limits().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(weighted);
  const auto& sv = svd.singularValues();
  if (sv.size() < 3) return true;
  if (!(sv[0] > 0.0)) return true;
  return sv[2] <= 1e-12 * sv[0];
}

IsotropyReport isotropy_score(const AccelerationCloud& cloud, bool rank_deficient) {
  IsotropyReport r;
  r.sample_count = cloud.directions.size();
  r.sampler = cloud.directions.sampler;
  r.seed = cloud.directions.seed;
  r.a_min = cloud.magnitudes[static_cast<Eigen::Index>(cloud.argmin_index)];
  r.a_max = cloud.magnitudes[static_cast<Eigen::Index>(cloud.argmax_index)];
  r.u_min = cloud.directions[cloud.argmin_index];
  r.u_max = cloud.directions[cloud.argmax_index];
  r.degenerate = rank_deficient || cloud.degenerate;
  r.eta = r.degenerate ? 0.0 : r.a_min / r.a_max;
  return r;
}

IsotropyReport isotropy_score(const AccelerationMap& map, const DirectionSet& dirs, UnilateralRule rule) {
  return isotropy_score(acceleration_cloud(map, dirs, rule), is_rank_deficient(map));
}

std::vector<IsotropyReport> isotropy_sequence(const std::vector<AccelerationMap>& maps, const DirectionSet& dirs,
                                              UnilateralRule rule) {
  if (maps.empty()) throw Error(ErrorKind::kInvalidArgument, "map sequence is empty");
  std::vector<IsotropyReport> out;
  out.reserve(maps.size());
  for (const auto& m : maps) out.push_back(isotropy_score(m, dirs, rule));
  return out;
}

}  // namespace dyniso
