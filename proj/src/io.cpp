#include "rmf/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rmf::io {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::optional<std::size_t> CsvTable::find(const std::string& name) const {
  for (std::size_t i = 0; i < headers.size(); ++i)
    if (headers[i] == name) return i;
  return std::nullopt;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  auto i = find(name);
  if (!i) throw IoError("missing CSV column '" + name + "'");
  return columns[*i];
}

void CsvTable::add(std::string name, std::vector<double> values) {
  if (!columns.empty() && values.size() != rows()) throw IoError("column '" + name + "' has the wrong length");
  headers.push_back(std::move(name));
  columns.push_back(std::move(values));
}

void write_csv(std::ostream& os, const CsvTable& t) {
  for (std::size_t j = 0; j < t.headers.size(); ++j) os << (j ? "," : "") << t.headers[j];
  os << "\n";
  for (std::size_t i = 0; i < t.rows(); ++i) {
    for (std::size_t j = 0; j < t.columns.size(); ++j) os << (j ? "," : "") << format_double(t.columns[j][i]);
    os << "\n";
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& t) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  write_csv(os, t);
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto cells = split(s);
    if (!have_header) {
      t.headers = cells;
      t.columns.resize(cells.size());
      have_header = true;
      continue;
    }
    if (cells.size() != t.headers.size())
      throw IoError("line " + std::to_string(lineno) + ": expected " + std::to_string(t.headers.size()) +
                    " fields, got " + std::to_string(cells.size()));
    for (std::size_t j = 0; j < cells.size(); ++j) {
      char* end = nullptr;
      const double v = std::strtod(cells[j].c_str(), &end);
      if (cells[j].empty() || end != cells[j].c_str() + cells[j].size())
        throw IoError("line " + std::to_string(lineno) + ": '" + cells[j] + "' is not a number");
      t.columns[j].push_back(v);
    }
  }
  if (!have_header) throw IoError("CSV has no header");
  return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  return read_csv(is);
}

CurveInput read_curve_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  CurveInput in;
  const auto& x = t.column("x");
  const auto& y = t.column("y");
  const auto& z = t.column("z");
  for (std::size_t i = 0; i < t.rows(); ++i) in.points.emplace_back(x[i], y[i], z[i]);
  if (t.find("s")) {
    in.param = t.column("s");
    in.arclength = true;
  } else if (t.find("t")) {
    in.param = t.column("t");
  }
  return in;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path.string());
  os << text;
}

std::filesystem::path resolve_output_dir(const std::string& dir) {
  std::filesystem::path p(dir.empty() ? "." : dir);
  if (p.is_relative()) {
    if (const char* root = std::getenv("RMF_OUTPUT_ROOT"); root && *root) p = std::filesystem::path(root) / p;
  }
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw IoError("cannot create " + p.string() + ": " + ec.message());
  return p;
}

}  // namespace rmf::io
