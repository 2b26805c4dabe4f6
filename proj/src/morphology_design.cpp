#include "dyniso/morphology_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "dyniso/ellipsoid_analysis.hpp"
#include "dyniso/errors.hpp"
#include "dyniso/isotropy_core.hpp"
#include "dyniso/rng.hpp"

namespace dyniso {

namespace {

constexpr double kCoincident = 1e-9;
constexpr std::size_t kCandidates = 64;
constexpr double kMinCapAngle = 5.0 * std::numbers::pi / 180.0;

Vec3 random_unit(Xoshiro256& rng) {
  for (;;) {
    Vec3 g(rng.normal(), rng.normal(), rng.normal());
    const double n = g.norm();
    if (n > 1e-12) return g / n;
  }
}

// Energy without the degeneracy check, for the inner optimizer loop. Returns
// +inf if two points coincide.
double energy_unchecked(const std::vector<Vec3>& p) {
  double e = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const double d = (p[i] - p[j]).norm();
      if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
      e += 1.0 / d;
    }
  }
  return e;
}

void gradient_into(const std::vector<Vec3>& p, std::vector<Vec3>& g) {
  g.assign(p.size(), Vec3::Zero());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const Vec3 diff = p[i] - p[j];
      const double d = diff.norm();
      const Vec3 f = diff / (d * d * d);
      g[i] -= f;
      g[j] += f;
    }
  }
  for (std::size_t i = 0; i < p.size(); ++i) g[i] -= g[i].dot(p[i]) * p[i];
}

struct Descent {
  std::vector<Vec3> points;
  double energy = 0.0;
};

Descent descend(std::vector<Vec3> p, const ThomsonOptions& opt) {
  std::vector<Vec3> g;
  std::vector<Vec3> trial(p.size());
  double e = energy_unchecked(p);
  double step = 0.1 / static_cast<double>(p.size());

  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    gradient_into(p, g);
    double trial_e = e;
    for (;;) {
      for (std::size_t i = 0; i < p.size(); ++i) trial[i] = (p[i] - step * g[i]).normalized();
      trial_e = energy_unchecked(trial);
      if (trial_e < e) break;
      step *= 0.5;
      if (step < 1e-18) break;
    }
    if (!(trial_e < e)) break;
    const double decrease = e - trial_e;
    p.swap(trial);
    e = trial_e;
    step *= 2.0;
    if (decrease < opt.tolerance) break;
  }
  return {std::move(p), e};
}

}  // namespace

double thomson_energy(std::span<const Vec3> points) {
  if (points.size() < 2) throw Error(ErrorKind::kInvalidArgument, "Thomson energy needs at least two points");
  double e = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = (points[i] - points[j]).norm();
      if (!(d > kCoincident)) {
        throw Error(ErrorKind::kDegenerateGeometry, fmt::format("points {} and {} coincide", i, j));
      }
      e += 1.0 / d;
    }
  }
  return e;
}

std::vector<Vec3> thomson_riemannian_gradient(std::span<const Vec3> points) {
  std::vector<Vec3> p(points.begin(), points.end());
  std::vector<Vec3> g;
  gradient_into(p, g);
  return g;
}

double ThomsonResult::restart_variance() const {
  if (restart_energies.size() < 2) return 0.0;
  const double mean = std::accumulate(restart_energies.begin(), restart_energies.end(), 0.0) /
                      static_cast<double>(restart_energies.size());
  double acc = 0.0;
  for (double e : restart_energies) acc += (e - mean) * (e - mean);
  return acc / static_cast<double>(restart_energies.size() - 1);
}

std::vector<Vec3> canonical_orientation(std::vector<Vec3> points) {
  if (points.empty()) return points;
  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& p : points) scatter += p * p.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  Eigen::Matrix3d frame;
  for (int k = 0; k < 3; ++k) frame.col(k) = eig.eigenvectors().col(2 - k);

  // Orient each axis so the third moment of the projections is non-negative.
  for (int k = 0; k < 2; ++k) {
    double m3 = 0.0;
    for (const auto& p : points) m3 += std::pow(p.dot(frame.col(k)), 3);
    if (m3 < -1e-9) frame.col(k) *= -1.0;
  }
  if (frame.determinant() < 0.0) frame.col(2) *= -1.0;

  for (auto& p : points) p = (frame.transpose() * p).normalized();
  std::sort(points.begin(), points.end(), [](const Vec3& a, const Vec3& b) {
    if (a.x() != b.x()) return a.x() < b.x();
    if (a.y() != b.y()) return a.y() < b.y();
    return a.z() < b.z();
  });
  return points;
}

ThomsonResult minimize_thomson(std::size_t count, const ThomsonOptions& options) {
  if (count < 2) throw Error(ErrorKind::kInvalidArgument, "Thomson minimization needs at least two points");
  if (options.restarts < 1) throw Error(ErrorKind::kInvalidArgument, "restarts must be at least 1");

  const auto restarts = static_cast<std::ptrdiff_t>(options.restarts);
  std::vector<Descent> results(options.restarts);
  std::vector<double> initial(options.restarts);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t r = 0; r < restarts; ++r) {
    Xoshiro256 rng(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
    std::vector<Vec3> start(count);
    for (auto& p : start) p = random_unit(rng);
    initial[static_cast<std::size_t>(r)] = energy_unchecked(start);
    results[static_cast<std::size_t>(r)] = descend(std::move(start), options);
  }

  ThomsonResult out;
  out.best_initial_energy = *std::min_element(initial.begin(), initial.end());
  out.restart_energies.reserve(results.size());
  for (std::size_t r = 0; r < results.size(); ++r) {
    out.restart_energies.push_back(results[r].energy);
    if (results[r].energy < results[out.best_restart].energy) out.best_restart = r;
  }
  out.best.points = canonical_orientation(results[out.best_restart].points);
  out.best.energy = thomson_energy(out.best.points);
  return out;
}

Morphology random_morphology(std::size_t leg_count, std::uint64_t seed, double spread) {
  if (leg_count < 3) throw Error(ErrorKind::kInvalidArgument, "random morphologies need at least 3 legs");
  if (!(spread >= 0.0 && spread <= 1.0)) throw Error(ErrorKind::kInvalidArgument, "spread must lie in [0, 1]");

  Xoshiro256 rng(seed);
  const Vec3 pole = random_unit(rng);
  // Orthonormal frame around the pole.
  const Vec3 helper = std::abs(pole.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = pole.cross(helper).normalized();
  const Vec3 e2 = pole.cross(e1);
  const double half_angle = kMinCapAngle + spread * (std::numbers::pi - kMinCapAngle);
  const double cos_cap = std::cos(half_angle);

  // Uniform on the cap: z uniform in [cos_cap, 1], azimuth uniform.
  auto cap_sample = [&]() -> Vec3 {
    const double z = 1.0 - rng.uniform() * (1.0 - cos_cap);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    return (z * pole + r * std::cos(phi) * e1 + r * std::sin(phi) * e2).normalized();
  };

  std::vector<Vec3> legs;
  legs.reserve(leg_count);
  legs.push_back(cap_sample());
  while (legs.size() < leg_count) {
    Vec3 best = Vec3::Zero();
    double best_gap = -1.0;
    for (std::size_t c = 0; c < kCandidates; ++c) {
      const Vec3 cand = cap_sample();
      double gap = std::numeric_limits<double>::infinity();
      for (const auto& p : legs) gap = std::min({gap, (cand - p).norm(), (cand + p).norm()});
      if (gap > best_gap) {
        best_gap = gap;
        best = cand;
      }
    }
    legs.push_back(best);
  }
  return radial_legs(fmt::format("random-{}-{:016x}-s{:.6f}", leg_count, seed, spread), legs);
}

double sweep_spread(std::size_t variant_index, std::size_t count_per) {
  return (static_cast<double>(variant_index) + 0.5) / static_cast<double>(count_per);
}

std::uint64_t sweep_variant_seed(std::uint64_t seed, std::size_t leg_count, std::size_t variant_index) {
  return derive_seed(derive_seed(seed, leg_count), variant_index);
}

std::vector<SweepVariant> morphology_sweep(const std::vector<std::size_t>& leg_counts, std::size_t count_per,
                                           std::uint64_t seed, std::size_t samples) {
  if (leg_counts.empty()) throw Error(ErrorKind::kInvalidArgument, "leg count list is empty");
  if (count_per == 0) throw Error(ErrorKind::kInvalidArgument, "variants per leg count must be positive");
  for (auto n : leg_counts) {
    if (n < 3) throw Error(ErrorKind::kInvalidArgument, fmt::format("leg count {} is below 3", n));
  }

  const DirectionSet dirs = sample_directions(samples);
  const std::size_t total = leg_counts.size() * count_per;
  std::vector<SweepVariant> out(total);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t flat = 0; flat < static_cast<std::ptrdiff_t>(total); ++flat) {
    const auto f = static_cast<std::size_t>(flat);
    const std::size_t n = leg_counts[f / count_per];
    const std::size_t k = f % count_per;
    SweepVariant& v = out[f];
    v.record.leg_count = n;
    v.record.variant_index = k;
    v.record.spread = sweep_spread(k, count_per);
    v.record.seed = sweep_variant_seed(seed, n, k);
    v.morphology = random_morphology(n, v.record.seed, v.record.spread);
    const AccelerationMap map = build_acceleration_map(v.morphology);
    v.record.eta = isotropy_score(map, dirs).eta;
    v.record.eta_ellipsoid = shape_matrix(map).eta_ellipsoid;
    const auto& acts = std::get<std::vector<ActuatorSpec>>(v.morphology.actuation);
    std::vector<Vec3> pts;
    pts.reserve(acts.size());
    for (const auto& a : acts) pts.push_back(a.direction);
    v.record.thomson_energy = energy_unchecked(pts);
  }
  return out;
}

std::vector<LegCountRow> isotropy_vs_legcount(const std::vector<std::size_t>& leg_counts, std::size_t restarts,
                                              std::uint64_t seed, std::size_t samples) {
  const DirectionSet dirs = sample_directions(samples);
  std::vector<std::size_t> sorted = leg_counts;
  std::sort(sorted.begin(), sorted.end());
  std::vector<LegCountRow> rows;
  rows.reserve(sorted.size());
  for (auto n : sorted) {
    if (n < 3) throw Error(ErrorKind::kInvalidArgument, fmt::format("leg count {} is below 3", n));
    ThomsonOptions opt;
    opt.restarts = restarts;
    opt.seed = seed;
    const ThomsonResult t = minimize_thomson(n, opt);
    const AccelerationMap map = build_acceleration_map(radial_legs(fmt::format("thomson-{}", n), t.best.points));
    rows.push_back({n, isotropy_score(map, dirs).eta, shape_matrix(map).eta_ellipsoid, t.best.energy});
  }
  return rows;
}

}  // namespace dyniso
