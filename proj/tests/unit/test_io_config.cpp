#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rmf/config.hpp"
#include "rmf/io.hpp"

using namespace rmf;
namespace fs = std::filesystem;

TEST_CASE("doubles are written with 17 significant digits and read back exactly") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) CHECK(std::stod(io::format_double(x)) == x);
  io::CsvTable t;
  t.add("s", {0.0, 0.1, 0.2});
  t.add("k1", {1.0 / 3.0, -1e-17, 2.0});
  std::stringstream ss;
  io::write_csv(ss, t);
  CHECK(ss.str().rfind("s,k1\n", 0) == 0);
  const auto back = io::read_csv(ss);
  CHECK(back.headers == t.headers);
  CHECK(back.columns == t.columns);
  CHECK(back.column("k1")[0] == 1.0 / 3.0);
  CHECK_THROWS_AS(back.column("k2"), io::IoError);
}

TEST_CASE("CSV comments, ragged rows and curve files") {
  std::stringstream good("# header comment\nx,y,z\n1,2,3\n4,5,6\n");
  CHECK(io::read_csv(good).rows() == 2);
  std::stringstream bad("x,y\n1,2\n3\n");
  CHECK_THROWS_AS(io::read_csv(bad), io::IoError);
  const fs::path p = fs::temp_directory_path() / "rmf_test_curve.csv";
  {
    std::ofstream os(p);
    os << "s,x,y,z\n0,0,0,0\n0.5,0.5,0,0\n1,1,0,0\n";
  }
  const auto c = io::read_curve_csv(p);
  CHECK(c.arclength);
  CHECK(c.points.size() == 3);
  CHECK(c.points[2].x() == 1.0);
  fs::remove(p);
}

TEST_CASE("RunConfig round trips losslessly") {
  RunConfig c;
  c.command = "reconstruct";
  c.lagrangian = "k1*D(k2,1) - D(k1,1)*k2";
  c.ics = {{"k1", 1.0}, {"k2_ss", 0.1 + 0.2}, {"mu", -1e-300}};
  c.ds = 1.0 / 3.0;
  c.p0 = {0.1, 0.2, 0.3};
  c.ply = true;
  c.seed = 18446744073709551615ull;
  c.output = "some dir/with spaces";
  CHECK(RunConfig::from_string(c.to_string()) == c);
  const fs::path p = fs::temp_directory_path() / "rmf_test.cfg";
  c.save(p);
  CHECK(RunConfig::load(p) == c);
  fs::remove(p);
}

TEST_CASE("RunConfig rejects unknown keys and malformed values") {
  RunConfig c;
  CHECK_THROWS_AS(c.set("nonsense", "1"), ConfigError);
  CHECK_THROWS_AS(c.set("ds", "fast"), ConfigError);
  CHECK_THROWS_AS(c.set("p0", "1,2"), ConfigError);
  c.set("ic.k1_s", "0.5");
  CHECK(c.ics.at("k1_s") == 0.5);
  CHECK_THROWS_AS(RunConfig::from_string("span 3\n"), ConfigError);
  CHECK(RunConfig::from_string("# only a comment\n\nspan = 3\n").span == 3.0);
}

TEST_CASE("output directories resolve against the output root") {
  const fs::path root = fs::temp_directory_path() / "rmf_test_root";
  setenv("RMF_OUTPUT_ROOT", root.c_str(), 1);
  const auto d = io::resolve_output_dir("a/b");
  CHECK(d == root / "a/b");
  CHECK(fs::is_directory(d));
  const auto abs = io::resolve_output_dir((root / "abs").string());
  CHECK(abs == root / "abs");
  unsetenv("RMF_OUTPUT_ROOT");
  fs::remove_all(root);
}
