#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dyniso/geometry_sampling.hpp"
#include "dyniso/isotropy_core.hpp"

namespace dyniso::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 2,
  kExitIo = 3,
  kExitInfeasible = 4,
};

struct GlobalOptions {
  std::size_t samples = kDefaultSampleCount;
  Sampler sampler = Sampler::kFibonacci;
  std::uint64_t seed = 0;
  bool paper_compat = false;
  std::filesystem::path out;  // empty: standard output
  bool no_timestamp = false;

  UnilateralRule rule() const { return paper_compat ? UnilateralRule::kPaperCompat : UnilateralRule::kOneSided; }
};

// Each command writes its artifact to options.out (or `stdout` when empty),
// reports problems on `stderr`, and returns an ExitCode.
struct Streams {
  std::ostream& out;
  std::ostream& err;
};

int cmd_analyze(const GlobalOptions& g, const std::filesystem::path& morphology, Streams io);
int cmd_cloud(const GlobalOptions& g, const std::filesystem::path& morphology, const std::string& format, Streams io);
int cmd_design(const GlobalOptions& g, std::size_t legs, std::size_t restarts, Streams io);
int cmd_sweep(const GlobalOptions& g, const std::vector<std::size_t>& leg_counts, std::size_t count_per,
              bool emit_morphologies, Streams io);
int cmd_margin(const GlobalOptions& g, const std::filesystem::path& morphology, const std::string& accel, Streams io);
int cmd_effort(const GlobalOptions& g, const std::filesystem::path& morphology, const std::string& accel, Streams io);
int cmd_sequence(const GlobalOptions& g, const std::filesystem::path& manifest, Streams io);

// Parses "x,y,z". Throws Error(kInvalidArgument) on malformed input.
Vec3 parse_vec3(const std::string& text);
std::vector<std::size_t> parse_count_list(const std::string& text);

// Full command-line entry point (subcommand dispatch, global flags).
int run(int argc, const char* const* argv, Streams io);

}  // namespace dyniso::cli
