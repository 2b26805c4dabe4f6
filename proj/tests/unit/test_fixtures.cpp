#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "dyniso/ellipsoid_analysis.hpp"
#include "dyniso/fixtures.hpp"
#include "dyniso/isotropy_core.hpp"
#include "dyniso/morphology_io.hpp"

using namespace dyniso;

namespace {

double min_pair_distance(const std::vector<Vec3>& p) {
  double best = 1e9;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) best = std::min(best, (p[i] - p[j]).norm());
  return best;
}

}  // namespace

TEST(Fixtures, VertexSetsAreUnitAndCentred) {
  for (const auto& set : {fixtures::octahedron_vertices(), fixtures::icosahedron_vertices(),
                          fixtures::dodecahedron_vertices(), fixtures::rhombic_triacontahedron_vertices()}) {
    Vec3 sum = Vec3::Zero();
    for (const auto& p : set) {
      EXPECT_NEAR(p.norm(), 1.0, 1e-15);
      sum += p;
    }
    EXPECT_LE(sum.norm(), 1e-14);
  }
  EXPECT_EQ(fixtures::icosahedron_vertices().size(), 12u);
  EXPECT_EQ(fixtures::dodecahedron_vertices().size(), 20u);
  EXPECT_EQ(fixtures::rhombic_triacontahedron_vertices().size(), 32u);
}

TEST(Fixtures, EdgeLengthsMatchThePlatonicSolids) {
  const double phi = std::numbers::phi;
  // Circumradius 1: icosahedron edge 1 / sin(2 pi / 5), dodecahedron edge 4 / (sqrt(3) (1 + sqrt(5))).
  EXPECT_NEAR(min_pair_distance(fixtures::icosahedron_vertices()), 2.0 / std::sqrt(phi * phi + 1.0), 1e-14);
  EXPECT_NEAR(min_pair_distance(fixtures::dodecahedron_vertices()), 4.0 / (std::sqrt(3.0) * (1.0 + std::sqrt(5.0))),
              1e-14);
}

TEST(Fixtures, PlatonicEllipsoidsAreSpheres) {
  for (auto m : {fixtures::octahedron6(), fixtures::icosahedron12(), fixtures::dodecahedron20(),
                 fixtures::rhombic_triacontahedron32(), fixtures::tensegrity6bar()}) {
    EXPECT_NEAR(shape_matrix(build_acceleration_map(m)).eta_ellipsoid, 1.0, 1e-12) << m.name;
  }
}

TEST(Fixtures, CubeRotorPointsAlongDiagonals) {
  const AccelerationMap map = build_acceleration_map(fixtures::cube_rotor8());
  ASSERT_EQ(map.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(map.bounds()[i], Bound::kUnilateral);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(std::abs(map.column(i)[k]), 1.0 / std::sqrt(3.0), 1e-15);
  }
}

TEST(Fixtures, TensegrityIsotropy) {
  const auto r = isotropy_score(build_acceleration_map(fixtures::tensegrity6bar()), sample_directions(2048));
  EXPECT_NEAR(r.eta, 0.867, 0.02);
}

TEST(Fixtures, NamesAreUnique) {
  const auto all = fixtures::all();
  EXPECT_EQ(all.size(), 7u);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) EXPECT_NE(all[i].file_stem, all[j].file_stem);
}

TEST(Fixtures, CheckedInFilesMatchConstructions) {
  const std::filesystem::path dir = DYNISO_FIXTURE_DIR;
  for (const auto& f : fixtures::all()) {
    const auto path = dir / (f.file_stem + ".json");
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    const Morphology loaded = load_morphology(path);
    EXPECT_EQ(morphology_to_json(loaded), morphology_to_json(f.morphology)) << f.file_stem;
  }
}
