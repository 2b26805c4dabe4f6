#include "dyniso/morphology_io.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "dyniso/errors.hpp"

namespace dyniso {

using nlohmann::json;

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    throw ParseError(source_, field, message);
  }

  void require_object(const json& j, const std::string& field) const {
    if (!j.is_object()) fail(field, "expected an object");
  }

  void only_keys(const json& j, const std::string& prefix, std::initializer_list<const char*> allowed) const {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j.items()) {
      if (!ok.count(key)) fail(prefix.empty() ? key : prefix + "." + key, "unknown field");
    }
  }

  const json& at(const json& j, const std::string& prefix, const char* key) const {
    auto it = j.find(key);
    if (it == j.end()) fail(prefix.empty() ? key : prefix + "." + key, "missing required field");
    return *it;
  }

  double number(const json& j, const std::string& field) const {
    if (!j.is_number()) fail(field, "expected a number");
    return j.get<double>();
  }

  std::string string(const json& j, const std::string& field) const {
    if (!j.is_string()) fail(field, "expected a string");
    return j.get<std::string>();
  }

  Vec3 vec3(const json& j, const std::string& field) const {
    if (!j.is_array() || j.size() != 3) fail(field, "expected an array of 3 numbers");
    return Vec3(number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]"));
  }

  Eigen::MatrixXd matrix(const json& j, const std::string& field, Eigen::Index rows) const {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
      fail(field, fmt::format("expected {} rows", rows));
    }
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) fail(field, "rows must be non-empty arrays");
    Eigen::MatrixXd m(rows, static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < rows; ++r) {
      const auto& row = j[static_cast<std::size_t>(r)];
      const std::string rf = fmt::format("{}[{}]", field, r);
      if (!row.is_array() || row.size() != cols) fail(rf, fmt::format("expected {} entries", cols));
      for (std::size_t c = 0; c < cols; ++c) m(r, static_cast<Eigen::Index>(c)) = number(row[c], rf);
    }
    return m;
  }

  Eigen::VectorXd vector(const json& j, const std::string& field) const {
    if (!j.is_array() || j.empty()) fail(field, "expected a non-empty array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], field);
    return v;
  }

 private:
  std::string source_;
};

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

std::vector<ActuatorSpec> read_actuators(const Reader& rd, const json& j, Family family) {
  if (!j.is_array() || j.empty()) rd.fail("actuators", "expected a non-empty array");
  const Bound default_bound = family == Family::kMultirotor ? Bound::kUnilateral : Bound::kBilateral;
  std::vector<ActuatorSpec> acts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = fmt::format("actuators[{}]", i);
    const auto& a = j[i];
    rd.require_object(a, p);
    rd.only_keys(a, p, {"direction", "limit", "bounds"});
    ActuatorSpec spec;
    spec.direction = rd.vec3(rd.at(a, p, "direction"), p + ".direction");
    const double norm = spec.direction.norm();
    if (!(norm >= 1e-6)) rd.fail(p + ".direction", "direction has zero length");
    if (std::abs(norm - 1.0) > 1e-15) spec.direction /= norm;
    spec.limit = rd.number(rd.at(a, p, "limit"), p + ".limit");
    if (!(spec.limit > 0.0)) rd.fail(p + ".limit", "limit must be positive");
    spec.bounds = default_bound;
    if (a.contains("bounds")) {
      auto b = parse_bound(rd.string(a["bounds"], p + ".bounds"));
      if (!b) rd.fail(p + ".bounds", "expected \"bilateral\" or \"unilateral\"");
      spec.bounds = *b;
    }
    acts.push_back(spec);
  }
  return acts;
}

TensegritySpec read_tensegrity(const Reader& rd, const json& j) {
  rd.require_object(j, "tensegrity");
  rd.only_keys(j, "tensegrity", {"nodes", "elements"});
  TensegritySpec t;
  const auto& nodes = rd.at(j, "tensegrity", "nodes");
  if (!nodes.is_array() || nodes.size() < 2) rd.fail("tensegrity.nodes", "expected at least two nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) t.nodes.push_back(rd.vec3(nodes[i], fmt::format("tensegrity.nodes[{}]", i)));
  const auto& elements = rd.at(j, "tensegrity", "elements");
  if (!elements.is_array() || elements.empty()) rd.fail("tensegrity.elements", "expected a non-empty array");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string p = fmt::format("tensegrity.elements[{}]", i);
    const auto& e = elements[i];
    rd.require_object(e, p);
    rd.only_keys(e, p, {"kind", "ends", "limit"});
    TensegrityElement el;
    const std::string kind = rd.string(rd.at(e, p, "kind"), p + ".kind");
    if (kind == "rod") {
      el.kind = ElementKind::kRod;
    } else if (kind == "cable") {
      el.kind = ElementKind::kCable;
    } else {
      rd.fail(p + ".kind", "expected \"rod\" or \"cable\"");
    }
    const auto& ends = rd.at(e, p, "ends");
    if (!ends.is_array() || ends.size() != 2 || !ends[0].is_number_unsigned() || !ends[1].is_number_unsigned()) {
      rd.fail(p + ".ends", "expected two non-negative node indices");
    }
    el.ends = {ends[0].get<std::size_t>(), ends[1].get<std::size_t>()};
    if (el.ends[0] >= t.nodes.size() || el.ends[1] >= t.nodes.size()) rd.fail(p + ".ends", "node index out of range");
    if (el.ends[0] == el.ends[1]) rd.fail(p + ".ends", "endpoints must be distinct nodes");
    el.limit = rd.number(rd.at(e, p, "limit"), p + ".limit");
    if (!(el.limit > 0.0)) rd.fail(p + ".limit", "limit must be positive");
    t.elements.push_back(el);
  }
  return t;
}

DynamicsSpec read_dynamics(const Reader& rd, const json& j) {
  rd.require_object(j, "dynamics");
  rd.only_keys(j, "dynamics", {"jacobian", "inertia", "map", "limits"});
  const bool has_jac = j.contains("jacobian");
  const bool has_map = j.contains("map");
  if (has_jac == has_map) rd.fail("dynamics", "exactly one of 'jacobian' or 'map' is required");
  DynamicsSpec d;
  if (has_jac) {
    d.jacobian_or_map = rd.matrix(j["jacobian"], "dynamics.jacobian", 3);
    const auto n = d.jacobian_or_map.cols();
    if (!j.contains("inertia")) rd.fail("dynamics.inertia", "required together with 'jacobian'");
    d.inertia = rd.matrix(j["inertia"], "dynamics.inertia", n);
    if (d.inertia->cols() != n) rd.fail("dynamics.inertia", fmt::format("expected a {}x{} matrix", n, n));
  } else {
    if (j.contains("inertia")) rd.fail("dynamics.inertia", "only valid together with 'jacobian'");
    d.jacobian_or_map = rd.matrix(j["map"], "dynamics.map", 3);
  }
  d.limits = rd.vector(rd.at(j, "dynamics", "limits"), "dynamics.limits");
  if (d.limits.size() != d.jacobian_or_map.cols()) {
    rd.fail("dynamics.limits", fmt::format("expected {} entries", d.jacobian_or_map.cols()));
  }
  for (Eigen::Index i = 0; i < d.limits.size(); ++i) {
    if (!(d.limits[i] > 0.0)) rd.fail("dynamics.limits", "limits must be positive");
  }
  return d;
}

}  // namespace

Morphology morphology_from_json(const json& doc, const std::string& source) {
  Reader rd(source);
  rd.require_object(doc, "");
  rd.only_keys(doc, "", {"name", "family", "mass", "actuators", "tensegrity", "dynamics"});

  Morphology m;
  m.name = rd.string(rd.at(doc, "", "name"), "name");
  const std::string fam = rd.string(rd.at(doc, "", "family"), "family");
  auto family = parse_family(fam);
  if (!family) rd.fail("family", "expected radial_legs, multirotor, tensegrity or generic");
  m.family = *family;
  m.mass = rd.number(rd.at(doc, "", "mass"), "mass");
  if (!(m.mass > 0.0)) rd.fail("mass", "mass must be positive");

  const int groups = static_cast<int>(doc.contains("actuators")) + static_cast<int>(doc.contains("tensegrity")) +
                     static_cast<int>(doc.contains("dynamics"));
  if (groups != 1) rd.fail("", "exactly one of 'actuators', 'tensegrity' or 'dynamics' must be present");

  switch (m.family) {
    case Family::kRadialLegs:
    case Family::kMultirotor:
      if (!doc.contains("actuators")) rd.fail("actuators", fmt::format("required for family {}", fam));
      m.actuation = read_actuators(rd, doc["actuators"], m.family);
      break;
    case Family::kTensegrity:
      if (!doc.contains("tensegrity")) rd.fail("tensegrity", "required for family tensegrity");
      m.actuation = read_tensegrity(rd, doc["tensegrity"]);
      break;
    case Family::kGeneric:
      if (!doc.contains("dynamics")) rd.fail("dynamics", "required for family generic");
      m.actuation = read_dynamics(rd, doc["dynamics"]);
      break;
  }

  try {
    validate(m);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    rd.fail("", e.what());
  }
  return m;
}

json morphology_to_json(const Morphology& morph) {
  json doc;
  doc["name"] = morph.name;
  doc["family"] = std::string(to_string(morph.family));
  doc["mass"] = morph.mass;
  if (const auto* acts = std::get_if<std::vector<ActuatorSpec>>(&morph.actuation)) {
    json arr = json::array();
    for (const auto& a : *acts) {
      arr.push_back({{"direction", vec3_json(a.direction)}, {"limit", a.limit}, {"bounds", std::string(to_string(a.bounds))}});
    }
    doc["actuators"] = std::move(arr);
  } else if (const auto* t = std::get_if<TensegritySpec>(&morph.actuation)) {
    json nodes = json::array();
    for (const auto& p : t->nodes) nodes.push_back(vec3_json(p));
    json elements = json::array();
    for (const auto& e : t->elements) {
      elements.push_back({{"kind", e.kind == ElementKind::kRod ? "rod" : "cable"},
                          {"ends", json::array({e.ends[0], e.ends[1]})},
                          {"limit", e.limit}});
    }
    doc["tensegrity"] = {{"nodes", std::move(nodes)}, {"elements", std::move(elements)}};
  } else {
    const auto& d = std::get<DynamicsSpec>(morph.actuation);
    json dyn;
    if (d.inertia) {
      dyn["jacobian"] = matrix_json(d.jacobian_or_map);
      dyn["inertia"] = matrix_json(*d.inertia);
    } else {
      dyn["map"] = matrix_json(d.jacobian_or_map);
    }
    dyn["limits"] = vector_json(d.limits);
    doc["dynamics"] = std::move(dyn);
  }
  return doc;
}

Morphology load_morphology(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "", "cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), "", std::string("malformed JSON: ") + e.what());
  }
  return morphology_from_json(doc, path.string());
}

void save_morphology(const Morphology& morph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << morphology_to_json(morph).dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

json acceleration_map_to_json(const AccelerationMap& map, const std::string& name) {
  Morphology m;
  m.name = name;
  m.family = Family::kGeneric;
  m.mass = map.mass();
  m.actuation = DynamicsSpec{map.columns(), std::nullopt, map.limits()};
  json doc = morphology_to_json(m);
  if (!map.all_bilateral()) {
    json bounds = json::array();
    for (auto b : map.bounds()) bounds.push_back(std::string(to_string(b)));
    doc["map_bounds"] = std::move(bounds);
  }
  return doc;
}

AccelerationMap acceleration_map_from_json(const json& doc, const std::string& source) {
  json body = doc;
  std::vector<Bound> bounds;
  if (body.is_object() && body.contains("map_bounds")) {
    for (const auto& b : body["map_bounds"]) {
      auto parsed = b.is_string() ? parse_bound(b.get<std::string>()) : std::nullopt;
      if (!parsed) throw ParseError(source, "map_bounds", "expected bound names");
      bounds.push_back(*parsed);
    }
    body.erase("map_bounds");
  }
  AccelerationMap map = build_acceleration_map(morphology_from_json(body, source));
  if (bounds.empty()) return map;
  if (bounds.size() != map.size()) throw ParseError(source, "map_bounds", "length differs from the map");
  return AccelerationMap(map.columns(), map.limits(), std::move(bounds), map.mass());
}

}  // namespace dyniso
