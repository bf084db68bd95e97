#include "rmf/checks/fixtures.hpp"

namespace rmf::checks {

Fixture tan_squared() {
  return {"tan_squared",
          "(k2/k1)^2/2",
          {{"k1", 1.0}, {"k2", 0.5}, {"k1_s", 1.0}, {"k2_s", 1.0}, {"mu", 1.0}},
          5.0};
}

Fixture curvature_torsion() {
  return {"curvature_torsion",
          "k1*D(k2,1) - D(k1,1)*k2",
          {{"k1", 1.0}, {"k2", 0.5}, {"k1_s", 1.0}, {"k2_s", 1.0}, {"k1_ss", 1.0}, {"k2_ss", 1.0}},
          5.0};
}

Fixture derivative_cross() {
  return {"derivative_cross",
          "D(k1,1)*D(k2,2) - D(k1,2)*D(k2,1)",
          {{"k1", 1.0},
           {"k2", 0.5},
           {"k1_s", 1.0},
           {"k2_s", 1.0},
           {"k1_ss", 1.0},
           {"k2_ss", 1.0},
           {"k1_sss", 1.0},
           {"k2_sss", 1.0},
           {"k1_ssss", 1.0},
           {"k2_ssss", 1.0}},
          5.0};
}

Fixture elastic_helix() {
  return {"elastic_helix",
          "(k1^2 + k2^2)/2",
          {{"k1", 0.5}, {"k2", 0.0}, {"k1_s", 0.0}, {"k2_s", 0.25}, {"mu", 0.25}},
          10.0};
}

std::vector<Fixture> worked_examples() { return {tan_squared(), curvature_torsion(), derivative_cross()}; }

ReferenceForms reference_forms(const std::string& name) {
  ReferenceForms f;
  if (name == "tan_squared") {
    f.e_y =
        "(-12*D(k1,1)^2/k1^5 + 3*D(k1,2)/k1^4 - 1/(2*k1))*k2^2"
        " + (12*D(k1,1)*D(k2,1)/k1^4 - 2*D(k2,2)/k1^3 + D(mu,1))*k2"
        " - 2*D(k2,1)^2/k1^3 + mu*D(k2,1)";
    f.e_z =
        "-k2^3/(2*k1^2) + (6*D(k1,1)^2/k1^4 - 2*D(k1,2)/k1^3)*k2 + D(k2,2)/k1^2"
        " - 4*D(k1,1)*D(k2,1)/k1^3 - D(mu,1)*k1 - mu*D(k1,1)";
    f.lambda = "(k2/k1)^2/2";
    f.v = {"(k2/k1)^2/2",
           "-(k2/k1^4)*(k1^4*mu - 2*k1*D(k2,1) + 3*k2*D(k1,1))",
           "-D(k2,1)/k1^2 + 2*k2*D(k1,1)/k1^3 + mu*k1",
           "mu",
           "k2/k1^2",
           "-k2^2/k1^3"};
  } else if (name == "curvature_torsion") {
    f.e_y = "2*D(k2,3) + 3*D(k2,1)*(k1^2 + k2^2)";
    f.e_z = "-2*D(k1,3) - 3*D(k1,1)*(k1^2 + k2^2)";
    f.lambda = "2*(D(k1,1)*k2 - k1*D(k2,1))";
    f.mu = "k1^2 + k2^2";
    f.v = {"2*(D(k1,1)*k2 - k1*D(k2,1))",
           "-2*D(k2,2) - k2*(k1^2 + k2^2)",
           // +2 k1_ss: with -2 the third Noether row D v3 + k2 v1 does not vanish on extremals.
           "2*D(k1,2) + k1*(k1^2 + k2^2)",
           "k1^2 + k2^2",
           "-2*D(k1,1)",
           "2*D(k2,1)"};
  } else if (name == "derivative_cross") {
    const std::string lambda = "2*D(k2,3)*k1 - 2*D(k1,1)*D(k2,2) + 2*D(k2,1)*D(k1,2) - 2*k2*D(k1,3)";
    const std::string mu = "D(k1,1)^2 + D(k2,1)^2 - 2*(k1*D(k1,2) + k2*D(k2,2))";
    // The highest derivative is the fifth: D^2 applied to E^{k1} = -2 k2_sss.
    f.e_y = "-2*D(k2,5) + D(k2*(" + mu + "),1) - k1*(" + lambda + ")";
    f.e_z = "2*D(k1,5) - D(k1*(" + mu + "),1) - k2*(" + lambda + ")";
    f.lambda = lambda;
    f.mu = mu;
    f.v = {lambda, "2*D(k2,4) - mu*k2", "-2*D(k1,4) + mu*k1", "mu", "2*D(k1,3)", "-2*D(k2,3)"};
  } else {
    throw std::invalid_argument("no reference forms for '" + name + "'");
  }
  return f;
}

PreparedFixture prepare(const Fixture& f) {
  PreparedFixture p;
  p.fixture = f;
  p.system = var::assemble_el_system(jet::parse_lagrangian(f.lagrangian));
  p.ics = f.ics;
  if (!p.ics.count("mu"))
    if (auto mu0 = var::closed_form_mu(p.system, p.ics)) p.ics["mu"] = *mu0;
  return p;
}

var::InvariantTrajectory solve_fixture(const PreparedFixture& p, double ds) {
  var::SolveOptions opts;
  opts.method = ode::Method::rk45_adaptive;
  opts.carry_frame = true;
  return var::solve_el(p.system, p.ics, 0.0, p.fixture.span, ds, opts);
}

}  // namespace rmf::checks
