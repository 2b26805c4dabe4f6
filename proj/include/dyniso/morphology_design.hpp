#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dyniso/actuation_models.hpp"
#include "dyniso/geometry_sampling.hpp"

namespace dyniso {

struct SpherePointSet {
  std::vector<Vec3> points;
  double energy = 0.0;  // sum over pairs of 1 / ||p_i - p_j||
};

/// Thomson (Coulomb) energy. Throws Error(kInvalidArgument) for fewer than two
/// points and Error(kDegenerateGeometry) when two points are within 1e-9.
double thomson_energy(std::span<const Vec3> points);

// Euclidean gradient projected onto the tangent plane at each point.
std::vector<Vec3> thomson_riemannian_gradient(std::span<const Vec3> points);

struct ThomsonOptions {
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  double tolerance = 1e-12;  // stop when one step lowers the energy by less than this
  std::size_t max_iterations = 50000;
};

struct ThomsonResult {
  SpherePointSet best;
  std::vector<double> restart_energies;  // final energy of each restart, restart order
  double best_initial_energy = 0.0;      // lowest energy among the random starts
  std::size_t best_restart = 0;

  double restart_variance() const;
};

/// Tangent-space gradient descent with backtracking and renormalization,
/// restarted from seeded uniform configurations. The best result is rotated to
/// its principal axes and sorted lexicographically.
ThomsonResult minimize_thomson(std::size_t count, const ThomsonOptions& options = {});

// Principal-axis alignment followed by a lexicographic sort.
std::vector<Vec3> canonical_orientation(std::vector<Vec3> points);

/// Radial-legs morphology with `leg_count` unit legs. Directions come from a
/// spherical cap around a seeded pole whose half-angle grows from 5 degrees
/// (spread = 0) to the full sphere (spread = 1); each leg is the best of 64
/// cap candidates by distance to the legs already placed, counting d and -d
/// as the same leg axis.
Morphology random_morphology(std::size_t leg_count, std::uint64_t seed, double spread);

struct SweepRecord {
  std::size_t leg_count = 0;
  std::size_t variant_index = 0;
  std::uint64_t seed = 0;  // seed handed to random_morphology
  double spread = 0.0;
  double eta = 0.0;
  double eta_ellipsoid = 0.0;
  double thomson_energy = 0.0;
  std::string file;  // set when the morphology is written out
};

struct SweepVariant {
  SweepRecord record;
  Morphology morphology;
};

// Spread of variant k out of count_per: stratum midpoints (k + 0.5) / count_per.
double sweep_spread(std::size_t variant_index, std::size_t count_per);
std::uint64_t sweep_variant_seed(std::uint64_t seed, std::size_t leg_count, std::size_t variant_index);

/// count_per variants per leg count, ordered by (leg_count as listed,
/// variant_index). Every variant derives its generator state from
/// (seed, leg_count, index) so the output does not depend on thread count.
std::vector<SweepVariant> morphology_sweep(const std::vector<std::size_t>& leg_counts, std::size_t count_per,
                                           std::uint64_t seed, std::size_t samples = kDefaultSampleCount);

struct LegCountRow {
  std::size_t leg_count = 0;
  double eta = 0.0;
  double eta_ellipsoid = 0.0;
  double thomson_energy = 0.0;
};

std::vector<LegCountRow> isotropy_vs_legcount(const std::vector<std::size_t>& leg_counts, std::size_t restarts,
                                              std::uint64_t seed, std::size_t samples = kDefaultSampleCount);

}  // namespace dyniso
