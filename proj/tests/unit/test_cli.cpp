#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "rmf/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run rmf_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "rmf");
  std::ostringstream out, err;
  const int code = rmf::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempRoot {
  fs::path root = fs::temp_directory_path() / "rmf_cli_test";
  TempRoot() {
    fs::remove_all(root);
    setenv("RMF_OUTPUT_ROOT", root.c_str(), 1);
  }
  ~TempRoot() {
    unsetenv("RMF_OUTPUT_ROOT");
    fs::remove_all(root);
  }
  std::string slurp(const fs::path& p) const {
    std::ifstream is(root / p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
  }
};

}  // namespace

TEST_CASE("frame on the helix writes small residuals") {
  TempRoot t;
  const auto r = rmf_cli({"frame", "--curve", "helix", "--length", "5", "-o", "helix"});
  REQUIRE(r.code == 0);
  const auto j = rmf::io::read_json(t.root / "helix/residuals.json");
  for (const auto& group : {"rm", "fs", "gauge"})
    for (const auto& [k, v] : j[group].items())
      if (v.is_number_float()) CHECK(v.get<double>() <= 1e-5);
  CHECK(fs::exists(t.root / "helix/frames.csv"));
  CHECK(fs::exists(t.root / "helix/invariants.csv"));
  CHECK(fs::exists(t.root / "helix/run.cfg"));
}

TEST_CASE("frame: Frenet-Serret on a line exits 2") {
  TempRoot t;
  const auto r = rmf_cli({"frame", "--curve", "line", "--frame", "fs", "-o", "line"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Frenet-Serret") != std::string::npos);
}

TEST_CASE("frame: circle from CSV has constant theta") {
  TempRoot t;
  fs::create_directories(t.root);
  {
    std::ofstream os(t.root / "circle.csv");
    os << "x,y,z\n";
    for (int i = 0; i <= 2000; ++i) {
      const double a = 2.0 * M_PI * i / 2000.0;
      os << rmf::io::format_double(std::cos(a)) << "," << rmf::io::format_double(std::sin(a)) << ",0\n";
    }
  }
  const auto r = rmf_cli({"frame", "--curve-file", (t.root / "circle.csv").string(), "--ds", "0.01", "-o", "c"});
  REQUIRE(r.code == 0);
  const auto inv = rmf::io::read_csv(t.root / "c/invariants.csv");
  const auto& th = inv.column("theta");
  for (double x : th) CHECK(x == doctest::Approx(th.front()).epsilon(1e-6));
}

TEST_CASE("solve: conservation, truncation and zero span") {
  TempRoot t;
  auto r = rmf_cli({"solve", "--fixture", "curvature_torsion", "--span", "2", "-o", "ct"});
  REQUIRE(r.code == 0);
  const auto j = rmf::io::read_json(t.root / "ct/noether.json");
  CHECK(j["relative_drift"].get<double>() <= 1e-6);
  const std::string el = t.slurp("ct/el_system.txt");
  CHECK(el.find("k2_sss") != std::string::npos);
  CHECK(fs::exists(t.root / "ct/first_integrals.csv"));

  r = rmf_cli({"solve", "--fixture", "tan_squared", "-o", "ts"});
  CHECK(r.code == 3);
  CHECK(rmf::io::read_json(t.root / "ts/noether.json")["truncated"].get<bool>());
  CHECK(rmf::io::read_json(t.root / "ts/noether.json")["relative_drift"].get<double>() <= 1e-6);

  r = rmf_cli({"solve", "--fixture", "elastic_helix", "--span", "0", "-o", "z"});
  CHECK(r.code == 0);
  CHECK(r.out.find("warning") != std::string::npos);
  CHECK(rmf::io::read_csv(t.root / "z/trajectory.csv").rows() == 0);
}

TEST_CASE("solve: bad input exits 2") {
  TempRoot t;
  CHECK(rmf_cli({"solve", "-L", "k1 +* k2", "-o", "x"}).code == 2);
  CHECK(rmf_cli({"solve", "-L", "(k1^2+k2^2)/2", "--ic", "k1=1", "-o", "x"}).code == 2);
  CHECK(rmf_cli({"solve", "--set", "no_such_key=1", "-o", "x"}).code == 2);
  CHECK(rmf_cli({"bogus"}).code == 2);
}

TEST_CASE("reconstruct: end to end with oracle, and straight line") {
  TempRoot t;
  auto r = rmf_cli({"reconstruct", "--fixture", "elastic_helix", "--span", "4", "-o", "eh"});
  REQUIRE(r.code == 0);
  const auto j = rmf::io::read_json(t.root / "eh/reconstruction_report.json");
  CHECK(j["method"] == "noether");
  CHECK(j["oracle"]["rms_vs_direct"].get<double>() <= 1e-4);
  CHECK(j["mesh"]["valid"].get<bool>());
  CHECK(fs::exists(t.root / "eh/sweep.obj"));
  CHECK(fs::exists(t.root / "eh/curve.csv"));
  CHECK(fs::exists(t.root / "eh/frame.csv"));

  r = rmf_cli({"reconstruct", "--fixture", "tan_squared", "-o", "ts"});
  CHECK(r.code == 0);
  CHECK(rmf::io::read_json(t.root / "ts/reconstruction_report.json")["mesh"]["valid"].get<bool>());

  r = rmf_cli({"reconstruct", "-L", "(k1^2+k2^2)/2", "--ic", "k1=0", "--ic", "k2=0", "--ic", "k1_s=0", "--ic",
               "k2_s=0", "--ic", "mu=0", "--span", "2", "--ply", "-o", "line"});
  REQUIRE(r.code == 0);
  const auto l = rmf::io::read_json(t.root / "line/reconstruction_report.json");
  CHECK(l["method"] == "direct");
  CHECK(l["mesh"]["euler_characteristic"] == 0);
  CHECK(fs::exists(t.root / "line/sweep.ply"));
}

TEST_CASE("reconstruct from a trajectory file") {
  TempRoot t;
  REQUIRE(rmf_cli({"solve", "--fixture", "curvature_torsion", "--span", "1", "-o", "a"}).code == 0);
  const auto r = rmf_cli({"reconstruct", "--fixture", "curvature_torsion", "--trajectory",
                          (t.root / "a/trajectory.csv").string(), "-o", "b"});
  REQUIRE(r.code == 0);
  const auto j = rmf::io::read_json(t.root / "b/reconstruction_report.json");
  CHECK(j["oracle"]["rms_vs_direct"].get<double>() <= 1e-4);
}

TEST_CASE("identical config gives byte-identical output") {
  TempRoot t;
  REQUIRE(rmf_cli({"solve", "--fixture", "derivative_cross", "--span", "1", "-o", "a"}).code == 0);
  REQUIRE(rmf_cli({"solve", "--config", (t.root / "a/run.cfg").string(), "-o", "b"}).code == 0);
  for (const char* f : {"trajectory.csv", "noether.json", "first_integrals.csv", "el_system.txt"})
    CHECK(t.slurp(fs::path("a") / f) == t.slurp(fs::path("b") / f));
  REQUIRE(rmf_cli({"sweep", "--curve", "fourier", "--seed", "4", "--length", "3", "-o", "c"}).code == 0);
  REQUIRE(rmf_cli({"sweep", "--curve", "fourier", "--seed", "4", "--length", "3", "-o", "d"}).code == 0);
  CHECK(t.slurp("c/sweep.obj") == t.slurp("d/sweep.obj"));
}

TEST_CASE("sweep with both frames on the inflection curve") {
  TempRoot t;
  const auto r = rmf_cli({"sweep", "--curve", "inflection", "--t0", "-0.5", "--length", "0.99", "--frame", "both",
                          "-o", "s"});
  REQUIRE(r.code == 0);
  const auto j = rmf::io::read_json(t.root / "s/sweep_report.json");
  CHECK(j["fs"]["twist_max"].get<double>() >= 10 * j["rm"]["twist_max"].get<double>());
  CHECK(fs::exists(t.root / "s/sweep_rm.obj"));
  CHECK(fs::exists(t.root / "s/sweep_fs.obj"));
}

TEST_CASE("verify: quick run passes, sign flip fails the adjoint identity") {
  TempRoot t;
  auto r = rmf_cli({"verify", "--quick", "-o", "v"});
  CHECK(r.code == 0);
  CHECK(rmf::io::read_json(t.root / "v/verify.json")["passed"].get<bool>());
  r = rmf_cli({"verify", "--quick", "--inject-adjoint-sign-flip", "-o", "w"});
  CHECK(r.code == 1);
  const auto j = rmf::io::read_json(t.root / "w/verify.json");
  CHECK(j["failed"] == json::array({"adjoint identity"}));
}
