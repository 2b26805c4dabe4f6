#include "dyniso/reporting.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "dyniso/errors.hpp"

namespace dyniso {

using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

std::string format_double(double value) { return fmt::format("{:.17g}", value); }

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::kIo, "SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                     tm.tm_hour, tm.tm_min, tm.tm_sec);
}

json RunManifest::to_json() const {
  json j;
  j["tool_version"] = tool_version;
  j["subcommand"] = subcommand;
  j["flags"] = flags;
  j["input_sha256"] = input_hash;
  if (timestamp) j["timestamp"] = *timestamp;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json isotropy_report_json(const IsotropyReport& r, const Ellipsoid& ell) {
  json j;
  j["eta"] = r.eta;
  j["degenerate"] = r.degenerate;
  j["a_min"] = r.a_min;
  j["a_max"] = r.a_max;
  j["u_min"] = vec3_json(r.u_min);
  j["u_max"] = vec3_json(r.u_max);
  j["sampling"] = {{"samples", r.sample_count}, {"sampler", std::string(to_string(r.sampler))}, {"seed", r.seed}};
  json e;
  e["note"] = "ellipsoidal approximation Q = sum limit_i^2 A_i A_i^T; eta_ellipsoid = sqrt(lambda_3 / lambda_1)";
  e["eta_ellipsoid"] = ell.eta_ellipsoid;
  e["eigenvalues"] = vec3_json(ell.eigenvalues);
  json vecs = json::array();
  for (int k = 0; k < 3; ++k) vecs.push_back(vec3_json(ell.eigenvectors.col(k)));
  e["eigenvectors"] = std::move(vecs);
  e["condition"] = finite_or_null(ell.condition);
  json q = json::array();
  for (int row = 0; row < 3; ++row) q.push_back(vec3_json(ell.shape.row(row).transpose()));
  e["shape"] = std::move(q);
  e["disturbance_bound"] = max_disturbance_bound(ell).bound;
  j["ellipsoid"] = std::move(e);
  return j;
}

json margin_report_json(const MarginReport& r) {
  return {{"margin", r.margin}, {"quadratic_form", r.quadratic_form}, {"feasible", r.feasible}};
}

json effort_report_json(const EffortReport& r) {
  json j;
  j["torque"] = vector_json(r.torque);
  j["effort"] = r.effort;
  j["decomposition"] = vec3_json(r.decomposition);
  j["residual"] = r.residual;
  j["saturated"] = r.saturated;
  j["effort_exact"] = r.effort_exact ? json(*r.effort_exact) : json(nullptr);
  j["effort_ellipsoid"] = r.effort_ellipsoid ? json(*r.effort_ellipsoid) : json(nullptr);
  return j;
}

void write_cloud_csv(std::ostream& out, const AccelerationCloud& cloud) {
  out << "ux,uy,uz,a_max,a_norm\n";
  for (std::size_t k = 0; k < cloud.directions.size(); ++k) {
    const Vec3& u = cloud.directions[k];
    const auto i = static_cast<Eigen::Index>(k);
    out << format_double(u.x()) << ',' << format_double(u.y()) << ',' << format_double(u.z()) << ','
        << format_double(cloud.magnitudes[i]) << ',' << format_double(cloud.normalized[i]) << '\n';
  }
}

void write_cloud_ply(std::ostream& out, const AccelerationCloud& cloud, const std::string& comment) {
  out << "ply\nformat ascii 1.0\n";
  if (!comment.empty()) out << "comment " << comment << '\n';
  out << "element vertex " << cloud.directions.size() << '\n'
      << "property double x\nproperty double y\nproperty double z\nproperty double a_norm\nend_header\n";
  for (std::size_t k = 0; k < cloud.directions.size(); ++k) {
    const double s = cloud.normalized[static_cast<Eigen::Index>(k)];
    const Vec3 p = cloud.directions[k] * s;
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << ' '
        << format_double(s) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "leg_count,variant_index,seed,spread,eta,eta_ellipsoid,thomson_energy,file\n";
  for (const auto& r : records) {
    out << r.leg_count << ',' << r.variant_index << ',' << r.seed << ',' << format_double(r.spread) << ','
        << format_double(r.eta) << ',' << format_double(r.eta_ellipsoid) << ',' << format_double(r.thomson_energy)
        << ',' << r.file << '\n';
  }
}

void write_sequence_csv(std::ostream& out, const std::vector<SequenceRow>& rows) {
  out << "index,name,eta,eta_ellipsoid\n";
  for (const auto& r : rows) {
    out << r.index << ',' << r.name << ',' << format_double(r.eta) << ',' << format_double(r.eta_ellipsoid) << '\n';
  }
}

}  // namespace dyniso
