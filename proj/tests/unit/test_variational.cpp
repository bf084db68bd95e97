#include <doctest.h>

#include <cmath>

#include "rmf/checks/fixtures.hpp"
#include "rmf/variational.hpp"

using namespace rmf;
using jet::Expr;

TEST_CASE("elastic rod system") {
  const auto sys = var::assemble_el_system(jet::parse_lagrangian("(k1^2 + k2^2)/2"));
  CHECK(sys.reduced[0].is_zero());
  CHECK(sys.reduced[3].is_zero());
  CHECK(sys.order1 == 2);
  CHECK(sys.order2 == 2);
  const auto names = sys.state_names();
  CHECK(names == std::vector<std::string>{"k1", "k1_s", "k2", "k2_s", "mu"});
  CHECK(jet::equivalent(sys.mu_s, Expr()));
}

TEST_CASE("jet names") {
  CHECK(var::jet_name({jet::Base::kappa1, 2}) == "k1_ss");
  CHECK(var::parse_jet_name("k2_3") == jet::JetVar{jet::Base::kappa2, 3});
  CHECK(var::parse_jet_name("k2_sss") == jet::JetVar{jet::Base::kappa2, 3});
  CHECK(var::parse_jet_name("mu") == jet::JetVar{jet::Base::mu, 0});
  CHECK_FALSE(var::parse_jet_name("k3").has_value());
}

TEST_CASE("helix is an elastic extremal with constant invariants") {
  // In the RM frame of the helix k1 + i k2 = kappa e^{i tau s}.
  const auto p = checks::prepare(checks::elastic_helix());
  const auto traj = checks::solve_fixture(p);
  REQUIRE_FALSE(traj.truncated);
  for (std::size_t i = 0; i < traj.size(); i += 500) {
    CHECK(traj.k1[i] == doctest::Approx(0.5 * std::cos(0.5 * traj.s[i])).epsilon(1e-8));
    CHECK(traj.k2[i] == doctest::Approx(0.5 * std::sin(0.5 * traj.s[i])).epsilon(1e-8));
    CHECK(traj.mu[i] == doctest::Approx(0.25).epsilon(1e-10));
  }
  const auto st = var::conservation_constants(p.system, traj);
  CHECK(st.relative_drift < 1e-7);
}

TEST_CASE("closed form mu for curvature_torsion") {
  const auto p = checks::prepare(checks::curvature_torsion());
  REQUIRE(p.system.mu_closed);
  CHECK(p.ics.at("mu") == doctest::Approx(1.25));
  const auto d = checks::prepare(checks::derivative_cross());
  CHECK(d.ics.at("mu") == doctest::Approx(-1.0));
}

TEST_CASE("missing initial conditions are an error, unknown ones a warning") {
  const auto sys = var::assemble_el_system(jet::parse_lagrangian("(k1^2 + k2^2)/2"));
  CHECK_THROWS(var::solve_el(sys, {{"k1", 1.0}}, 0.0, 1.0, 0.01));
  const auto t = var::solve_el(sys, {{"k1", 1.0}, {"k1_s", 0}, {"k2", 0}, {"k2_s", 0}, {"mu", 0}, {"zeta", 1}}, 0.0,
                               1.0, 0.01);
  CHECK_FALSE(t.warnings.empty());
  const auto z = var::solve_el(sys, {{"k1", 1.0}, {"k1_s", 0}, {"k2", 0}, {"k2_s", 0}, {"mu", 0}}, 0.0, 0.0, 0.01);
  CHECK(z.size() == 0);
  CHECK_FALSE(z.warnings.empty());
}

TEST_CASE("singular top-order coefficient is reported") {
  // L = k1^2: E^Y, E^Z contain k1_ss but no derivative of k2.
  CHECK_THROWS_AS(var::assemble_el_system(jet::parse_lagrangian("k1^2")), var::NonSolvableTopOrder);
}

TEST_CASE("tan_squared stops at its singularity with partial output") {
  const auto p = checks::prepare(checks::tan_squared());
  const auto traj = checks::solve_fixture(p);
  CHECK(traj.truncated);
  CHECK(traj.s.back() > 1.0);
  CHECK(traj.s.back() < 1.2);
  CHECK_FALSE(traj.message.empty());
}

TEST_CASE("Noether matrix and adjoint transform") {
  Eigen::Matrix<double, 6, 6> expect = Eigen::Matrix<double, 6, 6>::Zero();
  const double k1 = 0.3, k2 = -0.7;
  expect(0, 1) = k1;
  expect(0, 2) = k2;
  expect(1, 0) = -k1;
  expect(2, 0) = -k2;
  expect(3, 4) = -k1;
  expect(3, 5) = k2;
  expect(4, 3) = k1;
  expect(5, 3) = -k2;
  expect(4, 2) = -1;
  expect(5, 1) = -1;
  CHECK((var::noether_matrix(k1, k2) - expect).cwiseAbs().maxCoeff() == 0.0);
  const var::Vec6 v{1, 2, 3, 4, 5, 6};
  const auto c = var::adjoint_transform(Mat3::Identity(), Vec3::Zero(), v);
  for (int k = 0; k < 6; ++k) CHECK(c[k] == doctest::Approx(v[k]));
}

TEST_CASE("Noether ODE rows on the worked examples") {
  for (const auto& fx : checks::worked_examples()) {
    auto f = fx;
    f.span = 1.0;
    const auto p = checks::prepare(f);
    const auto rep = var::check_diffv(p.system, checks::solve_fixture(p));
    CHECK(rep.rows56_symbolic_zero);
    for (int k = 0; k < 4; ++k) CHECK(rep.max_residual[k] < 1e-6);
  }
}

TEST_CASE("syzygy compatibility: exact for static, small for rigid motion") {
  CHECK(var::check_syzygy_compatibility(var::static_family(), 0, 3, 0.3, 0.02, 0.02).max_residual == 0.0);
  CHECK(var::check_syzygy_compatibility(var::rigid_motion_family(), 0, 3, 0.3, 0.01, 0.01).max_residual < 1e-4);
}
