#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/LU>

#include "rmf/checks/fixtures.hpp"
#include "rmf/checks/oracles.hpp"
#include "rmf/odesolve.hpp"
#include "rmf/reconstruct.hpp"

using namespace rmf;

TEST_CASE("Cayley map lands in SO(3)") {
  const Mat3 r = recon::cayley_phi(Eigen::Vector4d(0, 0, 0, 1));
  CHECK((r - Mat3(Vec3(-1, -1, 1).asDiagonal())).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((recon::cayley_phi(Eigen::Vector4d(1, 0, 0, 0)) - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int i = 0; i < 10; ++i) {
    const Mat3 q = recon::cayley_phi(Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng)));
    CHECK((q * q.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(q.determinant() == doctest::Approx(1.0));
  }
}

TEST_CASE("axis-angle rotation") {
  const Mat3 r = recon::rotation(std::numbers::pi / 2, Vec3(0, 0, 2));
  CHECK((r * Vec3(1, 0, 0) - Vec3(0, 1, 0)).norm() < 1e-15);
  const Vec3 a(1, 2, 3);
  CHECK((recon::rotation(0.4, a) * recon::rotation(-0.4, a) - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("both case frames satisfy sigma c1 = w1 for every angle") {
  const Vec3 w1(0.3, -0.4, 0.5), c1(0.1, 0.6, -0.3 * std::sqrt(2.0) / 1.0);
  const Vec3 c1n = c1.normalized() * w1.norm();
  for (auto k : {recon::Case::one, recon::Case::two})
    for (double psi : {0.0, 0.8, -2.0}) {
      const Mat3 s = recon::case_frame(k, w1, c1n, psi);
      CHECK((s * c1n - w1).norm() < 1e-14);
      CHECK((s * s.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(recon::case_angle(k, s, w1, c1n) == doctest::Approx(std::remainder(psi, 2 * std::numbers::pi)));
    }
}

TEST_CASE("direct reconstruction: unit circle and straight line") {
  const auto s = ode::uniform_grid(0.0, 2.0 * std::numbers::pi, 2.0 * std::numbers::pi / 6000);
  const std::vector<double> one(s.size(), 1.0), zero(s.size(), 0.0);
  const auto c = recon::reconstruct_direct(s, one, zero);
  for (std::size_t i = 0; i < s.size(); i += 100) {
    CHECK((c.curve.p[i] - Vec3(0, 1, 0)).norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(c.curve.p[i].z()) < 1e-12);
  }
  CHECK((c.curve.p.back() - c.curve.p.front()).norm() < 1e-10);
  const auto l = recon::reconstruct_direct(s, zero, zero);
  CHECK((l.curve.p.back() - Vec3(s.back(), 0, 0)).norm() < 1e-12);
}

TEST_CASE("Noether reconstruction of the elastic helix matches the direct one") {
  auto fx = checks::elastic_helix();
  fx.span = 6.0;
  const auto p = checks::prepare(fx);
  const auto traj = checks::solve_fixture(p);
  const auto in = recon::noether_input(p.system, traj);
  const auto sg = recon::reconstruct_sigma(in, in.v.front(), 0.0);
  CHECK(sg.max_c1_residual < 1e-8);
  CHECK((sg.frame.sigma.front() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  const auto pos = recon::reconstruct_position(sg.frame, in, in.v.front());
  const auto d = recon::reconstruct_direct(traj);
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) worst = std::max(worst, (pos.curve.p[i] - d.curve.p[i]).norm());
  CHECK(worst < 1e-6);
  CHECK(pos.max_dual_path_difference < 1e-6);
  // Helix of radius 1: distance to the axis through the centre stays constant.
  const auto fit = checks::procrustes(pos.curve.p, traj.position);
  CHECK(fit.rms < 1e-6);
}

TEST_CASE("zero c1 is rejected") {
  recon::NoetherInput in;
  in.s = {0.0, 0.1, 0.2};
  in.h = 0.1;
  in.k1 = in.k2 = {0.0, 0.0, 0.0};
  in.v.assign(3, var::Vec6{});
  CHECK_THROWS_AS(recon::reconstruct_sigma(in, var::Vec6{}, 0.0), recon::ReconstructionError);
}

TEST_CASE("first integrals are constant along the worked examples") {
  for (const auto& fx : checks::worked_examples()) {
    auto f = fx;
    f.span = 1.0;
    const auto p = checks::prepare(f);
    const auto traj = checks::solve_fixture(p);
    const auto st = var::conservation_constants(p.system, traj);
    const auto fi = recon::first_integrals(st.v_values, st.c);
    CHECK(fi.max_relative_norm < 1e-6);
    CHECK(fi.max_relative_pairing < 1e-6);
  }
}
