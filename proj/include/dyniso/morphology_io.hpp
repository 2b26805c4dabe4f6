#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "dyniso/actuation_models.hpp"

namespace dyniso {

// Morphology documents are JSON objects with `name`, `family`, `mass` and
// exactly one of `actuators`, `tensegrity` or `dynamics`. Unknown fields are
// rejected with a ParseError naming the field. `source` labels diagnostics.
Morphology morphology_from_json(const nlohmann::json& doc, const std::string& source = {});
nlohmann::json morphology_to_json(const Morphology& morph);

Morphology load_morphology(const std::filesystem::path& path);
void save_morphology(const Morphology& morph, const std::filesystem::path& path);

// A map stored as a generic morphology with a direct `map` block. Per-column
// bounds are kept in an optional `bounds` array.
nlohmann::json acceleration_map_to_json(const AccelerationMap& map, const std::string& name = "map");
AccelerationMap acceleration_map_from_json(const nlohmann::json& doc, const std::string& source = {});

}  // namespace dyniso
