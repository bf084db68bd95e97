#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmf/curves.hpp"

namespace rmf::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits; round-trips every double.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Index of a header, or nullopt.
  std::optional<std::size_t> find(const std::string& name) const;
  const std::vector<double>& column(const std::string& name) const;
  void add(std::string name, std::vector<double> values);
};

void write_csv(std::ostream& os, const CsvTable& t);
void write_csv(const std::filesystem::path& path, const CsvTable& t);
/// Numeric CSV with one header line; blank lines and lines starting with '#'
/// are skipped.
CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::filesystem::path& path);

/// Points of a curve from CSV columns x, y, z plus an optional parameter
/// column named s (uniform arc length) or t (any parametrization).
struct CurveInput {
  std::vector<Vec3> points;
  std::vector<double> param;
  bool arclength = false;  // first column is s
};

CurveInput read_curve_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// Relative output directories are placed under $RMF_OUTPUT_ROOT when set.
/// The directory is created.
std::filesystem::path resolve_output_dir(const std::string& dir);

}  // namespace rmf::io
