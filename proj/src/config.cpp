#include "rmf/config.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace rmf {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size()) throw ConfigError(key + ": '" + v + "' is not a number");
  return x;
}

template <class T>
T parse_int(const std::string& key, const std::string& v) {
  T x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key + ": '" + v + "' is not an integer");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": '" + v + "' is not a boolean");
}

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> put;
};

#define RMF_STR(name) \
  Field { #name, [](const RunConfig& c) { return c.name; }, [](RunConfig& c, const std::string& v) { c.name = v; } }
#define RMF_DBL(name)                                                   \
  Field {                                                               \
    #name, [](const RunConfig& c) { return fmt(c.name); },              \
        [](RunConfig& c, const std::string& v) { c.name = parse_double(#name, v); } \
  }
#define RMF_INT(name)                                                                 \
  Field {                                                                             \
    #name, [](const RunConfig& c) { return std::to_string(c.name); },                 \
        [](RunConfig& c, const std::string& v) { c.name = parse_int<decltype(c.name)>(#name, v); } \
  }
#define RMF_BOOL(name)                                                          \
  Field {                                                                       \
    #name, [](const RunConfig& c) { return std::string(c.name ? "true" : "false"); }, \
        [](RunConfig& c, const std::string& v) { c.name = parse_bool(#name, v); }     \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      RMF_STR(command),
      RMF_STR(curve),
      RMF_STR(curve_file),
      RMF_DBL(curve_a),
      RMF_DBL(curve_b),
      RMF_DBL(curve_radius),
      RMF_INT(curve_modes),
      RMF_DBL(t0),
      RMF_DBL(length),
      RMF_STR(frame),
      RMF_STR(lagrangian),
      RMF_DBL(lambda_constant),
      RMF_DBL(s0),
      RMF_DBL(span),
      RMF_DBL(ds),
      RMF_STR(method),
      RMF_DBL(rtol),
      RMF_DBL(atol),
      RMF_STR(trajectory_file),
      RMF_DBL(psi0),
      Field{"p0",
            [](const RunConfig& c) { return fmt(c.p0[0]) + "," + fmt(c.p0[1]) + "," + fmt(c.p0[2]); },
            [](RunConfig& c, const std::string& v) {
              std::vector<double> out;
              std::stringstream ss(v);
              std::string cell;
              while (std::getline(ss, cell, ',')) out.push_back(parse_double("p0", trim(cell)));
              if (out.size() != 3) throw ConfigError("p0: expected three comma-separated numbers");
              c.p0 = out;
            }},
      RMF_BOOL(oracle),
      RMF_DBL(tube_radius),
      RMF_INT(n_around),
      RMF_BOOL(ply),
      RMF_INT(seed),
      RMF_STR(output),
  };
  return f;
}

#undef RMF_STR
#undef RMF_DBL
#undef RMF_INT
#undef RMF_BOOL

}  // namespace

void RunConfig::set(const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in), value = trim(value_in);
  if (key.rfind("ic.", 0) == 0) {
    if (key.size() == 3) throw ConfigError("empty initial-condition name");
    ics[key.substr(3)] = parse_double(key, value);
    return;
  }
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.put(*this, value);
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + key + "'");
}

std::string RunConfig::to_string() const {
  std::ostringstream os;
  for (const auto& f : fields()) os << f.key << " = " << f.get(*this) << "\n";
  for (const auto& [k, v] : ics) os << "ic." << k << " = " << fmt(v) << "\n";
  return os.str();
}

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    try {
      c.set(s.substr(0, eq), s.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return from_string(ss.str());
}

void RunConfig::save(const std::filesystem::path& path) const {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write " + path.string());
  os << to_string();
}

}  // namespace rmf
