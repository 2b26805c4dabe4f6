#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace dyniso {

using Vec3 = Eigen::Vector3d;

enum class Sampler { kFibonacci, kUniformRandom };

std::string_view to_string(Sampler sampler);
// Accepts "fibonacci", "random" and "uniform_random".
std::optional<Sampler> parse_sampler(std::string_view name);

inline constexpr std::size_t kDefaultSampleCount = 2048;

// K unit directions plus the sampler and seed needed to regenerate them.
struct DirectionSet {
  std::vector<Vec3> directions;
  Sampler sampler = Sampler::kFibonacci;
  std::uint64_t seed = 0;  // ignored for the fibonacci lattice

  std::size_t size() const { return directions.size(); }
  bool empty() const { return directions.empty(); }
  const Vec3& operator[](std::size_t k) const { return directions[k]; }
};

/// Fibonacci (golden-angle) spiral lattice with z_k = 1 - 2k/(K-1), so both
/// poles are included for K >= 2. Independent of any seed.
std::vector<Vec3> fibonacci_lattice(std::size_t count);

/// Samples K directions. The uniform_random sampler normalizes 3-vectors of
/// standard normals drawn from Xoshiro256 seeded with `seed`.
/// Throws Error(kInvalidArgument) when count == 0.
DirectionSet sample_directions(std::size_t count, Sampler sampler = Sampler::kFibonacci, std::uint64_t seed = 0);

struct DirectionValidation {
  double max_norm_deviation = 0.0;
  // Minimum angle between two distinct directions; empty for K < 2.
  std::optional<double> min_pairwise_angle_deg;
  double mean_vector_norm = 0.0;
};

DirectionValidation validate_directions(const DirectionSet& set);

}  // namespace dyniso
