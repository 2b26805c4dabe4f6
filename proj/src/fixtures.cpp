#include "dyniso/fixtures.hpp"

#include <cmath>

namespace dyniso::fixtures {

namespace {

const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

std::vector<Vec3> normalized(std::vector<Vec3> v) {
  for (auto& p : v) p.normalize();
  return v;
}

Morphology rotors(std::string name, const std::vector<Vec3>& dirs) {
  Morphology m = radial_legs(std::move(name), dirs);
  m.family = Family::kMultirotor;
  for (auto& a : std::get<std::vector<ActuatorSpec>>(m.actuation)) a.bounds = Bound::kUnilateral;
  return m;
}

}  // namespace

std::vector<Vec3> octahedron_vertices() {
  return {Vec3::UnitX(), -Vec3::UnitX(), Vec3::UnitY(), -Vec3::UnitY(), Vec3::UnitZ(), -Vec3::UnitZ()};
}

std::vector<Vec3> icosahedron_vertices() {
  std::vector<Vec3> v;
  for (double a : {-1.0, 1.0}) {
    for (double b : {-1.0, 1.0}) {
      v.emplace_back(0.0, a, b * kPhi);
      v.emplace_back(a, b * kPhi, 0.0);
      v.emplace_back(b * kPhi, 0.0, a);
    }
  }
  return normalized(std::move(v));
}

std::vector<Vec3> dodecahedron_vertices() {
  std::vector<Vec3> v;
  for (double x : {-1.0, 1.0}) {
    for (double y : {-1.0, 1.0}) {
      for (double z : {-1.0, 1.0}) v.emplace_back(x, y, z);
    }
  }
  for (double a : {-1.0, 1.0}) {
    for (double b : {-1.0, 1.0}) {
      v.emplace_back(0.0, a / kPhi, b * kPhi);
      v.emplace_back(a / kPhi, b * kPhi, 0.0);
      v.emplace_back(a * kPhi, 0.0, b / kPhi);
    }
  }
  return normalized(std::move(v));
}

std::vector<Vec3> rhombic_triacontahedron_vertices() {
  std::vector<Vec3> v = icosahedron_vertices();
  const auto d = dodecahedron_vertices();
  v.insert(v.end(), d.begin(), d.end());
  return v;
}

Morphology octahedron6() { return radial_legs("octahedron-6", octahedron_vertices()); }
Morphology icosahedron12() { return radial_legs("icosahedron-12", icosahedron_vertices()); }
Morphology dodecahedron20() { return radial_legs("dodecahedron-20", dodecahedron_vertices()); }
Morphology rhombic_triacontahedron32() {
  return radial_legs("rhombic-triacontahedron-32", rhombic_triacontahedron_vertices());
}

Morphology quadrotor4() { return rotors("quadrotor-4", std::vector<Vec3>(4, Vec3::UnitZ())); }

Morphology cube_rotor8() {
  std::vector<Vec3> dirs;
  for (double x : {-1.0, 1.0}) {
    for (double y : {-1.0, 1.0}) {
      for (double z : {-1.0, 1.0}) dirs.emplace_back(x, y, z);
    }
  }
  return rotors("cube-rotor-8", normalized(std::move(dirs)));
}

Morphology tensegrity6bar() {
  // Nodes at cyclic permutations of (0, +-1/2, +-1). Rods join (0, a/2, -1)
  // to (0, a/2, 1) and its permutations; the 24 cables are the shortest
  // node pairs not joined by a rod or by a short 2r edge.
  TensegritySpec t;
  const double r = 0.5;
  for (double a : {-1.0, 1.0}) {
    for (double b : {-1.0, 1.0}) {
      t.nodes.emplace_back(0.0, a * r, b);
      t.nodes.emplace_back(b, 0.0, a * r);
      t.nodes.emplace_back(a * r, b, 0.0);
    }
  }
  const double cable_length = std::sqrt(1.0 + r * r + (1.0 - r) * (1.0 - r));
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < t.nodes.size(); ++j) {
      if (std::abs((t.nodes[i] - t.nodes[j]).norm() - cable_length) < 1e-12) {
        t.elements.push_back({ElementKind::kCable, {i, j}, 1.0});
      }
    }
  }
  Morphology m;
  m.name = "tensegrity-6bar";
  m.family = Family::kTensegrity;
  m.mass = 1.0;
  m.actuation = std::move(t);
  return m;
}

std::vector<NamedFixture> all() {
  return {
      {"octahedron-6", octahedron6()},
      {"icosahedron-12", icosahedron12()},
      {"dodecahedron-20", dodecahedron20()},
      {"rhombic-triacontahedron-32", rhombic_triacontahedron32()},
      {"quadrotor-4", quadrotor4()},
      {"cube-rotor-8", cube_rotor8()},
      {"tensegrity-6bar", tensegrity6bar()},
  };
}

}  // namespace dyniso::fixtures
