#pragma once

#include <string>
#include <vector>

#include "dyniso/actuation_models.hpp"

namespace dyniso::fixtures {

// Unit-sphere vertex sets from closed-form golden-ratio constructions.
std::vector<Vec3> octahedron_vertices();
std::vector<Vec3> icosahedron_vertices();
std::vector<Vec3> dodecahedron_vertices();
// 12 icosahedral (5-fold) plus 20 dodecahedral (3-fold) vertices, all
// projected to the unit sphere.
std::vector<Vec3> rhombic_triacontahedron_vertices();

Morphology octahedron6();
Morphology icosahedron12();
Morphology dodecahedron20();
Morphology rhombic_triacontahedron32();
// Four coplanar rotors thrusting along +z; unilateral.
Morphology quadrotor4();
// Eight unilateral rotors thrusting along the cube body diagonals.
Morphology cube_rotor8();
// Six-bar expanded octahedron with its 24 cables actuated; rods are passive
// and not listed.
Morphology tensegrity6bar();

struct NamedFixture {
  std::string file_stem;
  Morphology morphology;
};

std::vector<NamedFixture> all();

}  // namespace dyniso::fixtures
