#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "rmf/variational.hpp"

namespace rmf::checks {

/// A Lagrangian with initial conditions for the extremal solve.
struct Fixture {
  std::string name;
  std::string lagrangian;               // grammar form
  std::map<std::string, double> ics;    // mu(0) filled from the closed form when absent
  double span = 5.0;
};

/// Reference closed forms for a fixture, in grammar form with `mu`, `lambda`
/// allowed. Empty strings are not checked.
struct ReferenceForms {
  std::string e_y, e_z;           // Euler-Lagrange equations (= 0)
  std::string lambda, mu;         // multipliers
  std::array<std::string, 6> v;   // Noether vector
};

/// L = (k2/k1)^2 / 2, i.e. tan(theta)^2 / 2.
Fixture tan_squared();
/// L = k1 k2_s - k1_s k2, i.e. kappa^2 tau.
Fixture curvature_torsion();
/// L = k1_s k2_ss - k1_ss k2_s.
Fixture derivative_cross();
/// L = (k1^2 + k2^2)/2 on the helix of radius 1 and pitch 1 (kappa = tau = 1/2).
Fixture elastic_helix();

/// The three worked Lagrangians (not the helix).
std::vector<Fixture> worked_examples();

ReferenceForms reference_forms(const std::string& fixture_name);

/// Parses the fixture Lagrangian, assembles the system and completes mu(0).
struct PreparedFixture {
  Fixture fixture;
  var::ELSystem system;
  std::map<std::string, double> ics;
};

PreparedFixture prepare(const Fixture& f);

/// RK45 (rtol 1e-12, atol 1e-10) with the frame carried in the state, output
/// every ds.
var::InvariantTrajectory solve_fixture(const PreparedFixture& p, double ds = 1e-3);

}  // namespace rmf::checks
