#include "dyniso/geometry_sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dyniso/errors.hpp"
#include "dyniso/rng.hpp"

namespace dyniso {

std::string_view to_string(Sampler sampler) {
  switch (sampler) {
    case Sampler::kFibonacci:
      return "fibonacci";
    case Sampler::kUniformRandom:
      return "random";
  }
  return "unknown";
}

std::optional<Sampler> parse_sampler(std::string_view name) {
  if (name == "fibonacci") return Sampler::kFibonacci;
  if (name == "random" || name == "uniform_random") return Sampler::kUniformRandom;
  return std::nullopt;
}

std::vector<Vec3> fibonacci_lattice(std::size_t count) {
  std::vector<Vec3> out;
  out.reserve(count);
  if (count == 1) {
    out.emplace_back(0.0, 0.0, 1.0);
    return out;
  }
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  const double denom = static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) {
    const double z = 1.0 - 2.0 * static_cast<double>(k) / denom;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double theta = golden_angle * static_cast<double>(k);
    Vec3 u(r * std::cos(theta), r * std::sin(theta), z);
    out.push_back(u.normalized());
  }
  return out;
}

DirectionSet sample_directions(std::size_t count, Sampler sampler, std::uint64_t seed) {
  if (count == 0) throw Error(ErrorKind::kInvalidArgument, "direction count must be at least 1");

  DirectionSet set;
  set.sampler = sampler;
  set.seed = sampler == Sampler::kFibonacci ? 0 : seed;

  if (sampler == Sampler::kFibonacci) {
    set.directions = fibonacci_lattice(count);
    return set;
  }

  Xoshiro256 rng(seed);
  set.directions.reserve(count);
  while (set.directions.size() < count) {
    Vec3 g(rng.normal(), rng.normal(), rng.normal());
    const double norm = g.norm();
    if (norm < 1e-12) continue;
    set.directions.push_back(g / norm);
  }
  return set;
}

DirectionValidation validate_directions(const DirectionSet& set) {
  DirectionValidation report;
  Vec3 mean = Vec3::Zero();
  for (const auto& u : set.directions) {
    report.max_norm_deviation = std::max(report.max_norm_deviation, std::abs(u.norm() - 1.0));
    mean += u;
  }
  if (!set.empty()) mean /= static_cast<double>(set.size());
  report.mean_vector_norm = mean.norm();

  if (set.size() >= 2) {
    // Largest cosine between distinct directions gives the smallest angle.
    double max_cos = -2.0;
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (std::size_t j = i + 1; j < set.size(); ++j) {
        const double c = set[i].dot(set[j]) / (set[i].norm() * set[j].norm());
        if (c > max_cos) {
          max_cos = c;
          bi = i;
          bj = j;
        }
      }
    }
    const Vec3& a = set[bi];
    const Vec3& b = set[bj];
    report.min_pairwise_angle_deg = std::atan2(a.cross(b).norm(), a.dot(b)) * 180.0 / std::numbers::pi;
  }
  return report;
}

}  // namespace dyniso
