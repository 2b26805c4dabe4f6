#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dyniso/ellipsoid_analysis.hpp"
#include "dyniso/isotropy_core.hpp"
#include "dyniso/morphology_design.hpp"

namespace dyniso {

inline constexpr std::string_view kToolVersion = "1.0.0";

// 17 significant digits, the round-trip precision of a double.
std::string format_double(double value);

std::string sha256_hex(std::string_view bytes);
// Hash of a file's bytes; throws Error(kIo) if it cannot be read.
std::string file_sha256(const std::filesystem::path& path);
std::string utc_timestamp();

struct RunManifest {
  std::string tool_version{kToolVersion};
  std::string subcommand;
  std::map<std::string, std::string> flags;
  std::string input_hash;                // empty when the run has no input file
  std::optional<std::string> timestamp;  // omitted under --no-timestamp
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
};

nlohmann::json vec3_json(const Vec3& v);
nlohmann::json isotropy_report_json(const IsotropyReport& report, const Ellipsoid& ell);
nlohmann::json margin_report_json(const MarginReport& report);
nlohmann::json effort_report_json(const EffortReport& report);

void write_cloud_csv(std::ostream& out, const AccelerationCloud& cloud);
// ASCII PLY; vertex = u_k * normalized_k with a float property a_norm.
void write_cloud_ply(std::ostream& out, const AccelerationCloud& cloud, const std::string& comment = {});
void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);

struct SequenceRow {
  std::size_t index = 0;
  std::string name;
  double eta = 0.0;
  double eta_ellipsoid = 0.0;
};
void write_sequence_csv(std::ostream& out, const std::vector<SequenceRow>& rows);

}  // namespace dyniso
