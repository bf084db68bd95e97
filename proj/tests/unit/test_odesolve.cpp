#include <doctest.h>

#include <cmath>

#include "rmf/odesolve.hpp"

using namespace rmf::ode;

namespace {

OdeProblem harmonic() {
  OdeProblem p;
  p.rhs = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  p.y0 = {0.0, 1.0};
  p.tol = {1e-12, 1e-12};
  return p;
}

}  // namespace

TEST_CASE("rk45 integrates the harmonic oscillator to tolerance") {
  const auto grid = uniform_grid(0.0, 10.0, 0.01);
  const auto sol = integrate(harmonic(), grid, Method::rk45_adaptive);
  REQUIRE(sol.ok());
  REQUIRE(sol.s.size() == grid.size());
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(sol.y[i][0] - std::sin(grid[i])));
  CHECK(err < 1e-9);
}

TEST_CASE("rk4 error drops sixteenfold when h halves") {
  auto err_at = [](double h) {
    const auto grid = uniform_grid(0.0, 2.0, h);
    const auto sol = integrate(harmonic(), grid, Method::rk4_fixed);
    return std::abs(sol.y.back()[0] - std::sin(2.0));
  };
  const double ratio = err_at(0.1) / err_at(0.05);
  CHECK(ratio == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("integration runs backwards on a decreasing grid") {
  auto p = harmonic();
  p.y0 = {std::sin(3.0), std::cos(3.0)};
  auto grid = uniform_grid(0.0, 3.0, 0.01);
  for (double& s : grid) s = 3.0 - s;
  const auto sol = integrate(p, grid, Method::rk45_adaptive);
  REQUIRE(sol.ok());
  CHECK(sol.y.back()[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sol.y.back()[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("guard stops with the prefix kept") {
  OdeProblem p;
  p.rhs = [](double, std::span<const double> y, std::span<double> dy) { dy[0] = y[0] * y[0]; };
  p.y0 = {1.0};
  p.guard = [](double, std::span<const double> y) -> std::optional<std::string> {
    if (std::abs(y[0]) > 100.0) return "blow-up";
    return std::nullopt;
  };
  // y = 1/(1 - s) blows up at s = 1.
  const auto sol = integrate(p, uniform_grid(0.0, 2.0, 0.001), Method::rk45_adaptive);
  CHECK(sol.status == Status::stopped);
  CHECK(sol.message == "blow-up");
  CHECK(sol.s.back() < 1.0);
  CHECK(sol.s.back() > 0.98);
}

TEST_CASE("quadrature is exact for cubics and fourth order otherwise") {
  const double h = 0.1;
  const auto grid = uniform_grid(0.0, 1.3, h);  // odd interval count closes with 3/8
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = grid[i] * grid[i] * grid[i] - grid[i];
  const auto cum = cumulative_quadrature(f, h);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double s = grid[i];
    CHECK(cum[i] == doctest::Approx(s * s * s * s / 4 - s * s / 2).epsilon(1e-12));
  }
  auto err = [](double hh) {
    const auto g = uniform_grid(0.0, 1.0, hh);
    std::vector<double> e(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) e[i] = std::exp(g[i]);
    return std::abs(quadrature(e, hh) - (std::exp(1.0) - 1.0));
  };
  CHECK(std::log2(err(0.05) / err(0.025)) > 3.8);
}

TEST_CASE("uniform grid keeps the spacing exact") {
  const auto g = uniform_grid(0.0, 1.0, 0.3);
  CHECK(g.size() == 4);
  CHECK(g.back() == doctest::Approx(0.9));
  CHECK(uniform_grid(0.0, 1.0, 0.1).size() == 11);
  CHECK_THROWS(uniform_grid(1.0, 0.0, 0.1));
  CHECK_THROWS(integrate(harmonic(), std::vector<double>{0.0, 1.0, 0.5}));
}
