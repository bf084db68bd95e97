#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmf {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a CLI run depends on. Serialized as `key = value` lines;
/// initial conditions are stored as `ic.<name> = value`.
struct RunConfig {
  std::string command;

  // Curve input (frame, sweep).
  std::string curve = "helix";   // catalog name when curve_file is empty
  std::string curve_file;
  double curve_a = 1.0;          // helix radius
  double curve_b = 1.0;          // helix pitch parameter
  double curve_radius = 1.0;     // circle radius
  int curve_modes = 4;           // random_fourier
  double t0 = 0.0;
  double length = 10.0;
  std::string frame = "rm";      // rm | fs | both

  // Lagrangian and integration (solve).
  std::string lagrangian;
  double lambda_constant = 0.0;
  std::map<std::string, double> ics;
  double s0 = 0.0;
  double span = 5.0;
  double ds = 1e-3;
  std::string method = "rk45";   // rk4 | rk45
  double rtol = 1e-12;
  double atol = 1e-10;

  // Reconstruction and mesh.
  std::string trajectory_file;   // empty: solve first
  double psi0 = 0.0;
  std::vector<double> p0{0.0, 0.0, 0.0};
  bool oracle = true;
  double tube_radius = 0.05;
  int n_around = 16;
  bool ply = false;

  std::uint64_t seed = 0;
  std::string output = "out";

  std::string to_string() const;
  static RunConfig from_string(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  /// Applies one `key=value` assignment. Throws ConfigError on an unknown key
  /// or a malformed value.
  void set(const std::string& key, const std::string& value);
  bool operator==(const RunConfig&) const = default;
};

}  // namespace rmf
