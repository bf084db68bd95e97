#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmf/config.hpp"

namespace rmf::cli {

/// Process exit codes.
enum Exit : int {
  ok = 0,
  check_failed = 1,   // verify found a failing check
  error = 2,          // bad input or a module error
  truncated = 3,      // solve stopped at a singularity; partial output written
  inadmissible = 4,   // no admissible reconstruction case at the start
};

int cmd_frame(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_reconstruct(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);
int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out, std::ostream& log);

struct VerifyOptions {
  bool quick = false;
  bool flip_adjoint_sign = false;
};
int cmd_verify(const RunConfig& cfg, const VerifyOptions& o, const std::filesystem::path& out, std::ostream& log);

/// Parses arguments, builds the RunConfig (config file, then --set, then
/// dedicated flags), runs the subcommand and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmf::cli
