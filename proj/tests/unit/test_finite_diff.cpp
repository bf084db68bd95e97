#include <doctest.h>

#include <cmath>
#include <vector>

#include "rmf/finite_diff.hpp"

using namespace rmf;

TEST_CASE("Fornberg weights reproduce the central stencils") {
  const std::vector<double> nodes{-1, 0, 1};
  const auto w1 = fd::weights(0.0, nodes, 1);
  CHECK(w1[0] == doctest::Approx(-0.5));
  CHECK(w1[1] == doctest::Approx(0.0));
  CHECK(w1[2] == doctest::Approx(0.5));
  const auto w2 = fd::weights(0.0, nodes, 2);
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(w2[1] == doctest::Approx(-2.0));
  CHECK(w2[2] == doctest::Approx(1.0));
}

TEST_CASE("derivatives of sin at every node including the ends") {
  for (int m = 1; m <= 3; ++m) {
    auto err = [m](double h) {
      std::vector<double> f;
      for (double s = 0.0; s <= 2.0 + 1e-12; s += h) f.push_back(std::sin(s));
      const auto d = fd::derivative(f, h, m, 4);
      double e = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i)
        e = std::max(e, std::abs(d[i] - std::sin(i * h + m * M_PI / 2)));
      return e;
    };
    const double order = std::log2(err(0.02) / err(0.01));
    CHECK(order > 3.5);
  }
}

TEST_CASE("vector derivative matches componentwise") {
  std::vector<Eigen::Vector3d> p;
  const double h = 0.01;
  for (int i = 0; i <= 200; ++i) p.emplace_back(std::cos(i * h), std::sin(i * h), i * h);
  const auto d = fd::derivative(std::span<const Eigen::Vector3d>(p), h);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(d[i].x() == doctest::Approx(-std::sin(i * h)).epsilon(1e-7));
    CHECK(d[i].z() == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(fd::boundary_width(1, 4) == 2);
}
