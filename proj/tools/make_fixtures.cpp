// Regenerates the bundled reference morphologies under the given directory.
#include <filesystem>
#include <iostream>

#include "dyniso/fixtures.hpp"
#include "dyniso/morphology_io.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);
  for (const auto& f : dyniso::fixtures::all()) {
    const auto path = dir / (f.file_stem + ".json");
    dyniso::save_morphology(f.morphology, path);
    std::cout << path.string() << '\n';
  }
  return 0;
}
