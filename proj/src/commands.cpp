#include "dyniso/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "dyniso/ellipsoid_analysis.hpp"
#include "dyniso/errors.hpp"
#include "dyniso/morphology_design.hpp"
#include "dyniso/morphology_io.hpp"
#include "dyniso/reporting.hpp"

namespace dyniso::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kIo:
      return kExitIo;
    case ErrorKind::kSingularEllipsoid:
    case ErrorKind::kInfeasibleAcceleration:
      return kExitInfeasible;
    default:
      return kExitInput;
  }
}

// Runs a command body and maps exceptions to exit codes.
template <typename F>
int guarded(Streams io, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    io.err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

RunManifest base_manifest(const GlobalOptions& g, std::string subcommand) {
  RunManifest m;
  m.subcommand = std::move(subcommand);
  m.flags["samples"] = std::to_string(g.samples);
  m.flags["sampler"] = std::string(to_string(g.sampler));
  m.flags["seed"] = std::to_string(g.seed);
  m.flags["paper_compat"] = g.paper_compat ? "true" : "false";
  m.flags["out"] = g.out.string();
  if (!g.no_timestamp) m.timestamp = utc_timestamp();
  return m;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  f << content;
  f.flush();
  if (!f) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

// Writes the artifact to --out (or the output stream) and, for file outputs
// that cannot embed a manifest, a `<out>.manifest.json` beside it.
void emit(const GlobalOptions& g, Streams io, const std::string& content, const RunManifest* sidecar) {
  if (g.out.empty()) {
    io.out << content;
    io.out.flush();
    return;
  }
  write_file(g.out, content);
  if (sidecar != nullptr) {
    fs::path side = g.out;
    side += ".manifest.json";
    write_file(side, sidecar->to_json().dump(2) + "\n");
  }
}

struct LoadedMap {
  Morphology morphology;
  AccelerationMap map;
  std::string hash;
};

LoadedMap load_map(const fs::path& path) {
  Morphology m = load_morphology(path);
  AccelerationMap map = build_acceleration_map(m);
  return {std::move(m), std::move(map), file_sha256(path)};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

Vec3 parse_vec3(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trimmed(item);
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      vals.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument, fmt::format("cannot parse '{}' as a number in '{}'", item, text));
    }
  }
  if (vals.size() != 3) {
    throw Error(ErrorKind::kInvalidArgument, fmt::format("expected three comma-separated numbers, got '{}'", text));
  }
  return Vec3(vals[0], vals[1], vals[2]);
}

std::vector<std::size_t> parse_count_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trimmed(item);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw Error(ErrorKind::kInvalidArgument, fmt::format("'{}' is not a positive integer", item));
    }
  }
  if (out.empty()) throw Error(ErrorKind::kInvalidArgument, "empty count list");
  return out;
}

int cmd_analyze(const GlobalOptions& g, const fs::path& morphology, Streams io) {
  return guarded(io, [&] {
    const LoadedMap in = load_map(morphology);
    const DirectionSet dirs = sample_directions(g.samples, g.sampler, g.seed);
    IsotropyReport report = isotropy_score(in.map, dirs, g.rule());
    const Ellipsoid ell = shape_matrix(in.map);
    attach_ellipsoid(report, ell);

    RunManifest manifest = base_manifest(g, "analyze");
    manifest.flags["morphology"] = morphology.string();
    manifest.input_hash = in.hash;

    json doc;
    doc["morphology"] = {{"name", in.morphology.name},
                         {"family", std::string(to_string(in.morphology.family))},
                         {"actuators", in.map.size()}};
    doc["report"] = isotropy_report_json(report, ell);
    doc["manifest"] = manifest.to_json();
    emit(g, io, doc.dump(2) + "\n", nullptr);
    return int{kExitOk};
  });
}

int cmd_cloud(const GlobalOptions& g, const fs::path& morphology, const std::string& format, Streams io) {
  return guarded(io, [&] {
    if (format != "csv" && format != "ply") {
      throw Error(ErrorKind::kInvalidArgument, fmt::format("unknown cloud format '{}' (expected csv or ply)", format));
    }
    const LoadedMap in = load_map(morphology);
    const DirectionSet dirs = sample_directions(g.samples, g.sampler, g.seed);
    const AccelerationCloud cloud = acceleration_cloud(in.map, dirs, g.rule());

    RunManifest manifest = base_manifest(g, "cloud");
    manifest.flags["morphology"] = morphology.string();
    manifest.flags["format"] = format;
    manifest.input_hash = in.hash;
    manifest.extra["degenerate"] = cloud.degenerate;

    std::ostringstream body;
    if (format == "csv") {
      write_cloud_csv(body, cloud);
    } else {
      write_cloud_ply(body, cloud,
                      fmt::format("{} samples={} sampler={} seed={}", in.morphology.name, dirs.size(),
                                  to_string(dirs.sampler), dirs.seed));
    }
    emit(g, io, body.str(), &manifest);
    return int{kExitOk};
  });
}

int cmd_design(const GlobalOptions& g, std::size_t legs, std::size_t restarts, Streams io) {
  return guarded(io, [&] {
    if (legs < 3) throw Error(ErrorKind::kInvalidArgument, fmt::format("design needs at least 3 legs (got {})", legs));
    ThomsonOptions opt;
    opt.restarts = restarts;
    opt.seed = g.seed;
    const ThomsonResult t = minimize_thomson(legs, opt);
    const Morphology m = radial_legs(fmt::format("thomson-{}", legs), t.best.points);

    RunManifest manifest = base_manifest(g, "design");
    manifest.flags["legs"] = std::to_string(legs);
    manifest.flags["restarts"] = std::to_string(restarts);
    manifest.extra["thomson_energy"] = t.best.energy;
    manifest.extra["restart_energy_variance"] = t.restart_variance();
    manifest.extra["best_restart"] = t.best_restart;
    emit(g, io, morphology_to_json(m).dump(2) + "\n", &manifest);
    if (g.out.empty()) io.err << "thomson_energy " << format_double(t.best.energy) << '\n';
    return int{kExitOk};
  });
}

int cmd_sweep(const GlobalOptions& g, const std::vector<std::size_t>& leg_counts, std::size_t count_per,
              bool emit_morphologies, Streams io) {
  return guarded(io, [&] {
    std::vector<SweepVariant> variants = morphology_sweep(leg_counts, count_per, g.seed, g.samples);

    if (emit_morphologies) {
      const fs::path base = g.out.empty() ? fs::path(".") : g.out.parent_path();
      const fs::path dir = base / "morphologies";
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw Error(ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());
      for (auto& v : variants) {
        const std::string rel = fmt::format("morphologies/legs{}-v{:04d}.json", v.record.leg_count, v.record.variant_index);
        write_file(base / rel, morphology_to_json(v.morphology).dump(2) + "\n");
        v.record.file = rel;
      }
    }

    std::vector<SweepRecord> records;
    records.reserve(variants.size());
    for (auto& v : variants) records.push_back(std::move(v.record));

    RunManifest manifest = base_manifest(g, "sweep");
    std::string counts;
    for (std::size_t i = 0; i < leg_counts.size(); ++i) counts += (i ? "," : "") + std::to_string(leg_counts[i]);
    manifest.flags["leg_counts"] = counts;
    manifest.flags["count_per"] = std::to_string(count_per);
    manifest.flags["emit_morphologies"] = emit_morphologies ? "true" : "false";
    manifest.extra["records"] = records.size();

    std::ostringstream body;
    write_sweep_csv(body, records);
    emit(g, io, body.str(), &manifest);
    return int{kExitOk};
  });
}

int cmd_margin(const GlobalOptions& g, const fs::path& morphology, const std::string& accel, Streams io) {
  return guarded(io, [&] {
    const Vec3 a_req = parse_vec3(accel);
    const LoadedMap in = load_map(morphology);
    const MarginReport r = stability_margin(shape_matrix(in.map), a_req);

    RunManifest manifest = base_manifest(g, "margin");
    manifest.flags["morphology"] = morphology.string();
    manifest.flags["a_req"] = accel;
    manifest.input_hash = in.hash;

    json doc = margin_report_json(r);
    doc["a_req"] = vec3_json(a_req);
    doc["morphology"] = in.morphology.name;
    doc["manifest"] = manifest.to_json();
    const std::string text = doc.dump(2) + "\n";
    if (!g.out.empty()) emit(g, io, text, nullptr);
    io.out << text;
    return int{kExitOk};
  });
}

int cmd_effort(const GlobalOptions& g, const fs::path& morphology, const std::string& accel, Streams io) {
  return guarded(io, [&] {
    const Vec3 a_des = parse_vec3(accel);
    const LoadedMap in = load_map(morphology);
    const EffortReport r = min_energy_torque(in.map, a_des);

    RunManifest manifest = base_manifest(g, "effort");
    manifest.flags["morphology"] = morphology.string();
    manifest.flags["a_des"] = accel;
    manifest.input_hash = in.hash;

    json doc = effort_report_json(r);
    doc["a_des"] = vec3_json(a_des);
    doc["morphology"] = in.morphology.name;
    doc["manifest"] = manifest.to_json();
    const std::string text = doc.dump(2) + "\n";
    if (!g.out.empty()) emit(g, io, text, nullptr);
    io.out << text;
    return int{kExitOk};
  });
}

int cmd_sequence(const GlobalOptions& g, const fs::path& manifest_path, Streams io) {
  return guarded(io, [&] {
    std::ifstream list(manifest_path);
    if (!list) throw ParseError(manifest_path.string(), "", "cannot open sequence manifest");
    const fs::path base = manifest_path.parent_path();

    std::vector<fs::path> files;
    std::string line;
    while (std::getline(list, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      fs::path p = line.substr(first, last - first + 1);
      files.push_back(p.is_absolute() ? p : base / p);
    }
    if (files.empty()) throw ParseError(manifest_path.string(), "", "sequence manifest lists no morphology files");

    std::vector<AccelerationMap> maps;
    std::vector<std::string> names;
    for (const auto& f : files) {
      Morphology m = load_morphology(f);
      maps.push_back(build_acceleration_map(m));
      names.push_back(m.name);
    }
    const DirectionSet dirs = sample_directions(g.samples, g.sampler, g.seed);
    const std::vector<IsotropyReport> reports = isotropy_sequence(maps, dirs, g.rule());

    std::vector<SequenceRow> rows;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      rows.push_back({i, csv_field(names[i]), reports[i].eta, shape_matrix(maps[i]).eta_ellipsoid});
    }

    RunManifest manifest = base_manifest(g, "sequence");
    manifest.flags["manifest"] = manifest_path.string();
    manifest.input_hash = file_sha256(manifest_path);
    std::ostringstream body;
    write_sequence_csv(body, rows);
    emit(g, io, body.str(), &manifest);
    return int{kExitOk};
  });
}

int run(int argc, const char* const* argv, Streams io) {
  CLI::App app{"Dynamic isotropy analysis and actuator layout design"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::string sampler = "fibonacci";
  std::string out;
  app.add_option("--samples", g.samples, "Number of sampled directions K")->check(CLI::PositiveNumber);
  app.add_option("--sampler", sampler, "Direction sampler")->check(CLI::IsMember({"fibonacci", "random"}));
  app.add_option("--seed", g.seed, "Seed for random sampling and design");
  app.add_flag("--paper-compat", g.paper_compat, "Score unilateral actuators with |c_i| (bilateral closed form)");
  app.add_option("--out", out, "Output path (default: standard output)");
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit the timestamp from manifests");

  std::string morphology;
  std::string accel;
  std::string format = "csv";
  std::size_t legs = 0;
  std::size_t restarts = 32;
  std::string leg_counts = "12,20,32";
  std::size_t count_per = 512;
  bool emit_morphologies = false;

  auto* analyze = app.add_subcommand("analyze", "Score dynamic isotropy and the acceleration ellipsoid");
  analyze->add_option("morphology", morphology, "Morphology JSON file")->required();

  auto* cloud = app.add_subcommand("cloud", "Export the acceleration cloud");
  cloud->add_option("morphology", morphology, "Morphology JSON file")->required();
  cloud->add_option("--format", format, "csv or ply");

  auto* design = app.add_subcommand("design", "Thomson-optimal radial-legs layout");
  design->add_option("legs", legs, "Number of legs")->required();
  design->add_option("--restarts", restarts, "Random restarts")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Randomized morphology sweep");
  sweep->add_option("--leg-counts", leg_counts, "Comma-separated leg counts");
  sweep->add_option("--count-per", count_per, "Variants per leg count")->check(CLI::PositiveNumber);
  sweep->add_flag("--emit-morphologies", emit_morphologies, "Write one morphology JSON per record");

  auto* margin = app.add_subcommand("margin", "Stability margin for a required acceleration");
  margin->add_option("morphology", morphology, "Morphology JSON file")->required();
  margin->add_option("a_req", accel, "Required acceleration x,y,z")->required();

  auto* effort = app.add_subcommand("effort", "Minimum-energy actuator command");
  effort->add_option("morphology", morphology, "Morphology JSON file")->required();
  effort->add_option("a_des", accel, "Desired acceleration x,y,z")->required();

  auto* sequence = app.add_subcommand("sequence", "Isotropy over an ordered list of morphologies");
  sequence->add_option("manifest", morphology, "Text file listing morphology files, one per line")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    io.out << o.str();
    io.err << er.str();
    return code == 0 ? int{kExitOk} : int{kExitInput};
  }

  g.sampler = *parse_sampler(sampler);
  g.out = out;

  if (analyze->parsed()) return cmd_analyze(g, morphology, io);
  if (cloud->parsed()) return cmd_cloud(g, morphology, format, io);
  if (design->parsed()) return cmd_design(g, legs, restarts, io);
  if (sweep->parsed()) {
    std::vector<std::size_t> counts;
    try {
      counts = parse_count_list(leg_counts);
    } catch (const Error& e) {
      io.err << "error: " << e.what() << '\n';
      return kExitInput;
    }
    return cmd_sweep(g, counts, count_per, emit_morphologies, io);
  }
  if (margin->parsed()) return cmd_margin(g, morphology, accel, io);
  if (effort->parsed()) return cmd_effort(g, morphology, accel, io);
  if (sequence->parsed()) return cmd_sequence(g, morphology, io);
  return kExitInput;
}

}  // namespace dyniso::cli
