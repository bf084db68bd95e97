#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rmf/curves.hpp"
#include "rmf/frames.hpp"

using namespace rmf;

TEST_CASE("helix: Frenet-Serret curvature and torsion have the closed form") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
    const auto c = frames::sample_curve(curves::helix(a, b), 0.0, 5.0, 1e-3);
    const auto fs = frames::frenet_frame(c);
    for (std::size_t i = 0; i < c.size(); i += 97) {
      CHECK(fs.gauge.kappa[i] == doctest::Approx(a / (a * a + b * b)).epsilon(1e-9));
      CHECK(fs.gauge.tau[i] == doctest::Approx(b / (a * a + b * b)).epsilon(1e-7));
    }
  }
}

TEST_CASE("sample_curve is arc-length parametrized") {
  const auto c = frames::sample_curve(curves::random_fourier(3), 0.0, 4.0, 1e-3);
  for (std::size_t i = 0; i < c.size(); i += 50) CHECK(c.d1[i].norm() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(c.s.back() == doctest::Approx(4.0));
}

TEST_CASE("planar circle: RM normal stays e_z and theta is constant") {
  const auto c = frames::sample_curve(curves::circle(2.0), 0.0, 10.0, 1e-3);
  const auto f = frames::rm_frame_integrate(c, Vec3(0, 0, 1));
  const auto g = frames::rm_invariants(f, c);
  for (std::size_t i = 0; i < c.size(); i += 100) {
    CHECK((f.row(i, 1) - Vec3(0, 0, 1)).norm() < 1e-10);
    CHECK(g.theta[i] == doctest::Approx(g.theta[0]).epsilon(1e-10));
    CHECK(std::hypot(g.kappa1[i], g.kappa2[i]) == doctest::Approx(0.5).epsilon(1e-10));
  }
}

TEST_CASE("RM invariants rotate with the initial angle") {
  const auto c = frames::sample_curve(curves::helix(), 0.0, 3.0, 1e-3);
  const auto f0 = frames::rm_frame_integrate(c, frames::initial_normal(c, 0.0));
  const auto f1 = frames::rm_family(f0, 0.7);
  const auto g0 = frames::rm_invariants(f0, c), g1 = frames::rm_invariants(f1, c);
  for (std::size_t i = 0; i < c.size(); i += 111) {
    // kappa1 + i kappa2 picks up the phase -0.7 when the normal turns by 0.7.
    const double k1 = std::cos(0.7) * g0.kappa1[i] + std::sin(0.7) * g0.kappa2[i];
    CHECK(g1.kappa1[i] == doctest::Approx(k1).epsilon(1e-9));
    CHECK(std::hypot(g1.kappa1[i], g1.kappa2[i]) == doctest::Approx(0.5).epsilon(1e-9));
  }
  CHECK(frames::diagnose(f1, c).max_rm_entry < 1e-8);
}

TEST_CASE("Frenet-Serret frame fails on a straight line") {
  const auto c = frames::sample_curve(curves::line(), 0.0, 1.0, 1e-2);
  CHECK_THROWS_AS(frames::frenet_frame(c), frames::InflectionPoint);
  const auto f = frames::rm_frame_integrate(c, frames::initial_normal(c, 0.0));
  CHECK(frames::diagnose(f, c).max_rm_entry < 1e-12);
}

TEST_CASE("raw points resampled at uniform arc length") {
  std::vector<Vec3> raw;
  for (int i = 0; i <= 4000; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 4000.0;
    raw.emplace_back(std::cos(t), std::sin(t), 0.0);
  }
  const auto c = frames::reparametrize_arclength(raw, 1e-2);
  CHECK(c.s.back() == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-3));
  for (std::size_t i = 0; i < c.size(); i += 37) CHECK(c.p[i].norm() == doctest::Approx(1.0).epsilon(1e-6));
  const auto f = frames::rm_frame_integrate(c, Vec3(0, 0, 1));
  const auto g = frames::rm_invariants(f, c);
  for (std::size_t i = 5; i + 5 < c.size(); i += 37) CHECK(g.theta[i] == doctest::Approx(g.theta[5]).epsilon(1e-6));
}

TEST_CASE("gauge relations on the helix") {
  const double h = 1e-3;
  const auto c = frames::sample_curve(curves::helix(), 0.0, 5.0, h);
  const auto fs = frames::frenet_frame(c);
  const auto g = frames::rm_invariants(frames::rm_frame_integrate(c, frames::initial_normal(c, 0.3)), c);
  const auto rep = frames::gauge_relations(fs.gauge, g, h);
  CHECK(rep.max_kappa_residual < 1e-9);
  CHECK(rep.max_tau_residual < 1e-6);
  CHECK(rep.max_theta_residual < 1e-6);
}
