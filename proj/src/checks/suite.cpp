#include "rmf/checks/suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/LU>

#include "rmf/checks/fixtures.hpp"
#include "rmf/checks/oracles.hpp"
#include "rmf/config.hpp"
#include "rmf/finite_diff.hpp"
#include "rmf/frames.hpp"
#include "rmf/jet_json.hpp"
#include "rmf/linop.hpp"
#include "rmf/mesh.hpp"
#include "rmf/reconstruct.hpp"
#include "rmf/variational.hpp"

namespace rmf::checks {

namespace {

using jet::Base;
using jet::Expr;
using jet::JetVar;
using Clock = std::chrono::steady_clock;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

template <class F>
CheckResult timed(int id, std::string name, F body) {
  CheckResult r;
  r.id = id;
  r.name = std::move(name);
  r.metrics = nlohmann::json::object();
  const auto t0 = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.summary = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return r;
}

frames::CurveSamples arclength_samples(std::shared_ptr<const curves::ParametricCurve> c, double t0, double length,
                                       double h) {
  return frames::sample_curve(std::move(c), t0, length, h);
}

frames::FrameField rm_frame(const frames::CurveSamples& c) {
  return frames::rm_frame_integrate(c, frames::initial_normal(c, 0.0));
}

// mu^(k) -> D^(k-1) mu_s, then optionally mu -> closed form.
Expr normalize(const Expr& e, const var::ELSystem& sys, const Expr* mu_form) {
  Expr out = e;
  for (int k = jet::max_order(e, Base::mu); k >= 1; --k)
    out = jet::substitute(out, JetVar{Base::mu, k}, jet::total_derivative(sys.mu_s, k - 1));
  if (mu_form) out = jet::substitute(out, Base::mu, *mu_form);
  return out;
}

Expr parse_form(const std::string& s) {
  jet::ParseOptions o;
  o.allow_multipliers = true;
  return jet::parse_expression(s, o);
}

}  // namespace

CheckResult check_rm_properties(const SuiteOptions& o) {
  return timed(1, "rotation-minimizing frame properties", [&](CheckResult& r) {
    const int curves_n = o.quick ? 3 : 20;
    const auto t0 = Clock::now();
    double vt = 0.0, vn = 0.0, rm = 0.0;
    for (int seed = 0; seed < curves_n; ++seed) {
      const auto c = arclength_samples(curves::random_fourier(static_cast<std::uint64_t>(seed)), 0.0, 10.0, 1e-3);
      const auto f = rm_frame(c);
      const auto d = frames::diagnose(f, c);
      vt = std::max(vt, d.max_v_dot_t);
      vn = std::max(vn, d.max_v_norm);
      rm = std::max(rm, d.max_rm_entry);
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    r.metrics = {{"curves", curves_n}, {"max_v_dot_t", vt}, {"max_v_norm_error", vn}, {"max_rm_entry", rm}};
    r.passed = vt <= 1e-8 && vn <= 1e-8 && rm <= 1e-6 && secs <= 10.0;
    r.summary = std::to_string(curves_n) + " curves: |V.P'| " + sci(vt) + ", ||V|-1| " + sci(vn) +
                ", |(s's^-1)_23| " + sci(rm);
  });
}

CheckResult check_gauge_relations(const SuiteOptions&) {
  return timed(2, "gauge relations on the helix", [&](CheckResult& r) {
    const double h = 1e-3;
    const auto c = arclength_samples(curves::helix(1.0, 1.0), 0.0, 10.0, h);
    const auto fs = frames::frenet_frame(c);
    const auto f = rm_frame(c);
    const auto g = frames::rm_invariants(f, c);
    const auto rep = frames::gauge_relations(fs.gauge, g, h);
    const auto d1 = fd::derivative(std::span<const double>(g.kappa1), h);
    const auto d2 = fd::derivative(std::span<const double>(g.kappa2), h);
    const auto th = fd::derivative(std::span<const double>(g.theta), h);
    double kappa_err = 0.0, tau_err = 0.0, theta_err = 0.0;
    const std::size_t b = 2;
    for (std::size_t i = b; i + b < c.size(); ++i) {
      const double k2 = g.kappa1[i] * g.kappa1[i] + g.kappa2[i] * g.kappa2[i];
      kappa_err = std::max(kappa_err, std::abs(std::sqrt(k2) - 0.5));
      tau_err = std::max(tau_err, std::abs((g.kappa1[i] * d2[i] - d1[i] * g.kappa2[i]) / k2 - 0.5));
      theta_err = std::max(theta_err, std::abs(th[i] - 0.5));
    }
    r.metrics = {{"kappa_vs_closed_form", kappa_err},
                 {"tau_vs_closed_form", tau_err},
                 {"theta_s_minus_tau", theta_err},
                 {"kappa_vs_frenet", rep.max_kappa_residual},
                 {"tau_vs_frenet", rep.max_tau_residual},
                 {"theta_s_vs_frenet", rep.max_theta_residual}};
    const double worst = std::max({kappa_err, tau_err, theta_err, rep.max_kappa_residual, rep.max_tau_residual,
                                   rep.max_theta_residual});
    r.passed = worst <= 1e-5;
    r.summary = "kappa " + sci(kappa_err) + ", tau " + sci(tau_err) + ", theta_s - tau " + sci(theta_err) +
                " (vs closed form 1/2)";
  });
}

CheckResult check_euler_operator(const SuiteOptions& o) {
  return timed(3, "Euler operator vs Gateaux derivative", [&](CheckResult& r) {
    const int n = o.quick ? 3 : 10;
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    nlohmann::json cases = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      const Expr L = random_polynomial_lagrangian(rng, 3);
      const Trig k1 = Trig::random(rng, 3), k2 = Trig::random(rng, 3);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      const Bump phi{u(rng), 1.0 + 0.25 * u(rng), 8};
      for (Base b : {Base::kappa1, Base::kappa2}) {
        const auto cmp = gateaux_compare(L, b, k1, k2, phi);
        worst = std::max(worst, cmp.relative_error);
        cases.push_back({{"lagrangian", L.str()},
                         {"variable", jet::base_name(b)},
                         {"symbolic", cmp.symbolic},
                         {"numeric", cmp.numeric},
                         {"relative_error", cmp.relative_error}});
      }
    }
    r.metrics = {{"lagrangians", n}, {"max_relative_error", worst}, {"cases", cases}};
    r.passed = worst <= 1e-6;
    r.summary = std::to_string(n) + " random Lagrangians, max relative error " + sci(worst);
  });
}

CheckResult check_el_regression(const SuiteOptions&) {
  return timed(4, "Euler-Lagrange regression against reference forms", [&](CheckResult& r) {
    bool ok = true;
    std::string failed;
    for (const auto& fx : worked_examples()) {
      const auto p = prepare(fx);
      const auto& sys = p.system;
      const auto pub = reference_forms(fx.name);
      std::optional<Expr> mu_form;
      if (!pub.mu.empty()) mu_form = parse_form(pub.mu);
      const Expr* mf = mu_form ? &*mu_form : nullptr;
      nlohmann::json m;
      auto compare = [&](const std::string& what, const Expr& ours, const std::string& theirs) {
        const bool same = jet::equivalent(normalize(ours, sys, mf), normalize(parse_form(theirs), sys, mf));
        m[what] = same;
        if (!same) {
          ok = false;
          failed += " " + fx.name + "." + what;
        }
      };
      compare("e_y", sys.reduced[1], pub.e_y);
      compare("e_z", sys.reduced[2], pub.e_z);
      compare("lambda", sys.lambda, pub.lambda);
      if (mu_form) {
        const bool same = sys.mu_closed && jet::equivalent(*sys.mu_closed, *mu_form);
        m["mu"] = same;
        if (!same) {
          ok = false;
          failed += " " + fx.name + ".mu";
        }
      }
      const auto v = var::noether_vector(sys);
      for (int k = 0; k < 6; ++k) compare("v" + std::to_string(k + 1), v[k], pub.v[k]);
      r.metrics[fx.name] = m;
    }
    r.passed = ok;
    r.summary = ok ? "E^Y, E^Z, lambda, mu and v(I) equal the reference forms for all three examples"
                   : "mismatch:" + failed;
  });
}

CheckResult check_adjoint_identity(const SuiteOptions& o) {
  return timed(5, "adjoint identity", [&](CheckResult& r) {
    const int pairs = o.quick ? 3 : 10;
    const double h = 1e-3;
    const auto grid = ode::uniform_grid(0.0, 10.0, h);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int p = 0; p < pairs; ++p) {
      const Trig t1 = Trig::random(rng, 3), t2 = Trig::random(rng, 3);
      std::vector<double> k1(grid.size()), k2(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        k1[i] = t1.derivative(grid[i], 0);
        k2[i] = t2.derivative(grid[i], 0);
      }
      const auto H = linop::syzygy_grid_operator(k1, k2, h, 4, false);
      const auto Hs = linop::syzygy_grid_operator(k1, k2, h, 4, true, o.flip_adjoint_sign);
      linop::GridOperator::Field phi, psi;
      for (int k = 0; k < 4; ++k) {
        const Bump bp{5.0 + 2.0 * u(rng), 1.0 + 0.5 * u(rng), 8};
        const Bump bq{5.0 + 2.0 * u(rng), 1.0 + 0.5 * u(rng), 8};
        const double ap = u(rng), aq = u(rng);
        phi[k].resize(grid.size());
        psi[k].resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
          phi[k][i] = ap * bp.derivative(grid[i], 0);
          psi[k][i] = aq * bq.derivative(grid[i], 0);
        }
      }
      const auto hphi = H.apply(phi);
      const auto hpsi = Hs.apply(psi);
      double lhs = 0.0, rhs = 0.0;
      for (int k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < grid.size(); ++i) {
          lhs += hphi[k][i] * psi[k][i] * h;
          rhs += phi[k][i] * hpsi[k][i] * h;
        }
      worst = std::max(worst, std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}));
    }
    bool row1 = true;
    for (const auto& fx : worked_examples()) {
      const auto p = prepare(fx);
      row1 = row1 && p.system.reduced[0].is_zero();
    }
    r.metrics = {{"pairs", pairs}, {"max_relative_mismatch", worst}, {"row1_vanishes_symbolically", row1}};
    r.passed = worst <= 1e-6 && row1;
    r.summary = std::to_string(pairs) + " pairs, <H phi, psi> - <phi, H* psi> " + sci(worst) +
                (row1 ? ", row 1 of H* E(L) is 0 for all examples" : ", row 1 of H* E(L) does not vanish");
  });
}

CheckResult check_conservation(const SuiteOptions& o) {
  return timed(6, "conservation-law drift", [&](CheckResult& r) {
    bool ok = true;
    std::string text;
    for (const auto& fx0 : worked_examples()) {
      Fixture fx = fx0;
      if (o.quick) fx.span = std::min(fx.span, 1.0);
      const auto t0 = Clock::now();
      const auto p = prepare(fx);
      const auto traj = solve_fixture(p);
      const auto st = var::conservation_constants(p.system, traj);
      const auto fi = recon::first_integrals(st.v_values, st.c);
      const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
      const double worst = std::max({st.relative_drift, fi.max_relative_norm, fi.max_relative_pairing});
      const bool pass = worst <= 1e-6 && secs <= 30.0 && traj.size() > 1;
      ok = ok && pass;
      r.metrics[fx.name] = {{"span_reached", traj.s.empty() ? 0.0 : traj.s.back()},
                            {"truncated", traj.truncated},
                            {"message", traj.message},
                            {"c", st.c},
                            {"c_relative_drift", st.relative_drift},
                            {"first_integral_norm_drift", fi.max_relative_norm},
                            {"first_integral_pairing_drift", fi.max_relative_pairing},
                            {"within_time_limit", secs <= 30.0}};
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s%s s<=%.3g drift %s", text.empty() ? "" : "; ", fx.name.c_str(),
                    traj.s.empty() ? 0.0 : traj.s.back(), sci(worst).c_str());
      text += buf;
    }
    r.passed = ok;
    r.summary = text;
  });
}

CheckResult check_noether_ode(const SuiteOptions& o) {
  return timed(7, "Noether vector ODE structure", [&](CheckResult& r) {
    bool ok = true;
    std::string text;
    for (const auto& fx0 : worked_examples()) {
      Fixture fx = fx0;
      if (o.quick) fx.span = std::min(fx.span, 1.0);
      const auto p = prepare(fx);
      const auto traj = solve_fixture(p);
      const auto rep = var::check_diffv(p.system, traj);
      double rows = 0.0;
      for (int k = 0; k < 4; ++k) rows = std::max(rows, rep.max_residual[k]);
      const bool pass = rep.rows56_symbolic_zero && rows <= 1e-6;
      ok = ok && pass;
      r.metrics[fx.name] = {{"rows56_symbolic_zero", rep.rows56_symbolic_zero},
                            {"rows1to4_max_residual", rows},
                            {"per_row", rep.max_residual}};
      text += (text.empty() ? "" : "; ") + fx.name + " rows 1-4 " + sci(rows) +
              (rep.rows56_symbolic_zero ? ", rows 5-6 = 0" : ", rows 5-6 nonzero");
    }
    r.passed = ok;
    r.summary = text;
  });
}

CheckResult check_round_trip(const SuiteOptions& o) {
  return timed(8, "helix reconstruction round trip", [&](CheckResult& r) {
    const double h = 1e-3, length = o.quick ? 4.0 : 10.0;
    const auto c = arclength_samples(curves::helix(1.0, 1.0), 0.0, length, h);
    const auto f = rm_frame(c);
    const auto g = frames::rm_invariants(f, c);
    const auto fx = prepare(elastic_helix());
    const std::vector<double> mu(c.size(), 0.25);
    const auto traj = var::trajectory_from_samples(fx.system, g.kappa1, g.kappa2, mu, 0.0, h);
    const auto in = recon::noether_input(fx.system, traj);
    const var::Vec6 cst = in.v.front();
    const auto sg = recon::reconstruct_sigma(in, cst, 0.0);
    const auto pos = recon::reconstruct_position(sg.frame, in, cst);
    const auto dir = recon::reconstruct_direct(c.s, g.kappa1, g.kappa2);
    const auto vs_orig = procrustes(pos.curve.p, c.p);
    const auto vs_direct = procrustes(pos.curve.p, dir.curve.p);
    r.metrics = {{"rms_vs_original", vs_orig.rms},
                 {"rms_vs_direct", vs_direct.rms},
                 {"max_sigma_c1_minus_w1", sg.max_c1_residual},
                 {"frame_distance_vs_direct", recon::frame_distance(sg.frame, dir.frame)},
                 {"dual_path_difference", pos.max_dual_path_difference},
                 {"case_switches", sg.switches.size()}};
    r.passed = vs_orig.rms <= 1e-4 && vs_direct.rms <= 1e-4 && sg.max_c1_residual <= 1e-6;
    r.summary = "RMS vs original " + sci(vs_orig.rms) + ", vs direct " + sci(vs_direct.rms) + ", |sigma c1 - w1| " +
                sci(sg.max_c1_residual);
  });
}

CheckResult check_syzygy_convergence(const SuiteOptions&) {
  return timed(9, "syzygy compatibility convergence", [&](CheckResult& r) {
    const auto fam = var::helix_pitch_family();
    std::vector<double> res;
    for (double h : {0.04, 0.02, 0.01}) res.push_back(var::check_syzygy_compatibility(fam, 0.0, 3.0, 0.3, h, h).max_residual);
    const double o1 = std::log2(res[0] / res[1]), o2 = std::log2(res[1] / res[2]);
    r.metrics = {{"h", {0.04, 0.02, 0.01}}, {"residual", res}, {"orders", {o1, o2}}};
    r.passed = std::min(o1, o2) >= 1.9;
    char buf[160];
    std::snprintf(buf, sizeof buf, "residuals %s %s %s, observed orders %.3f %.3f", sci(res[0]).c_str(),
                  sci(res[1]).c_str(), sci(res[2]).c_str(), o1, o2);
    r.summary = buf;
  });
}

CheckResult check_sweep_surface(const SuiteOptions&) {
  return timed(10, "sweep surface torus and twist", [&](CheckResult& r) {
    const double h = 1e-3, tube = 0.25;
    const auto c = arclength_samples(curves::circle(1.0), 0.0, 2.0 * std::numbers::pi, h);
    const auto f = frames::rm_frame_integrate(c, Vec3(0.0, 0.0, 1.0));
    const auto m = mesh::sweep_surface(c, f, tube, 32);
    const double dev = torus_deviation(m.vertices, 1.0, tube);
    const auto st = mesh::mesh_stats(m);

    const auto base = curves::inflection_curve();
    const double len = curves::ArclengthCurve(base, -0.5, 0.5).length();
    const auto ci = arclength_samples(base, -0.5, len, h);
    const auto fs = frames::frenet_frame(ci).frame;
    const auto rm = rm_frame(ci);
    const auto tw_fs = recon::twist_metric(fs), tw_rm = recon::twist_metric(rm);
    const double ratio = tw_fs.max_angle / std::max(tw_rm.max_angle, 1e-300);
    r.metrics = {{"torus_max_deviation", dev},
                 {"mesh_valid", st.valid()},
                 {"euler_characteristic", st.euler_characteristic},
                 {"frenet_twist_max", tw_fs.max_angle},
                 {"rm_twist_max", tw_rm.max_angle},
                 {"twist_ratio", ratio}};
    r.passed = dev <= 1e-6 && st.valid() && st.euler_characteristic == 0 && ratio >= 10.0;
    r.summary = "torus deviation " + sci(dev) + ", twist FS/RM " + sci(tw_fs.max_angle) + "/" +
                sci(tw_rm.max_angle) + " = " + sci(ratio);
  });
}

std::vector<CheckResult> run_acceptance(const SuiteOptions& o) {
  return {check_rm_properties(o),   check_gauge_relations(o), check_euler_operator(o), check_el_regression(o),
          check_adjoint_identity(o), check_conservation(o),    check_noether_ode(o),    check_round_trip(o),
          check_syzygy_convergence(o), check_sweep_surface(o)};
}

std::vector<CheckResult> run_properties(const SuiteOptions&) {
  std::vector<CheckResult> out;
  out.push_back(timed(0, "expression parse/print/JSON round trip", [](CheckResult& r) {
    bool ok = true;
    for (const auto& fx : worked_examples()) {
      const Expr e = jet::parse_lagrangian(fx.lagrangian);
      ok = ok && jet::equivalent(jet::parse_lagrangian(e.str()), e);
      ok = ok && jet::equivalent(jet::expr_from_json(jet::to_json(e)), e);
      ok = ok && jet::structurally_equal(jet::simplify(jet::simplify(e)), jet::simplify(e));
    }
    r.passed = ok;
    r.summary = ok ? "all worked Lagrangians round-trip" : "round trip failed";
  }));
  out.push_back(timed(0, "Cayley map and rotations", [](CheckResult& r) {
    Mat3 expect = Vec3(-1.0, -1.0, 1.0).asDiagonal();
    double err = (recon::cayley_phi(Eigen::Vector4d(0, 0, 0, 1)) - expect).cwiseAbs().maxCoeff();
    err = std::max(err, (recon::rotation(std::numbers::pi, Vec3(0, 0, 1)) - expect).cwiseAbs().maxCoeff());
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int i = 0; i < 20; ++i) {
      const Mat3 q = recon::cayley_phi(Eigen::Vector4d(g(rng), g(rng), g(rng), g(rng)));
      err = std::max(err, (q * q.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff());
      err = std::max(err, std::abs(q.determinant() - 1.0));
      const Vec3 a(g(rng), g(rng), g(rng));
      const double psi = g(rng);
      err = std::max(err, (recon::rotation(psi, a) * recon::rotation(-psi, a) - Mat3::Identity()).cwiseAbs().maxCoeff());
    }
    r.metrics = {{"max_error", err}};
    r.passed = err <= 1e-12;
    r.summary = "max error " + sci(err);
  }));
  out.push_back(timed(0, "direct reconstruction of constant curvature", [](CheckResult& r) {
    const auto s = ode::uniform_grid(0.0, 6.0, 1e-3);
    const std::vector<double> one(s.size(), 1.0), zero(s.size(), 0.0);
    const auto circ = recon::reconstruct_direct(s, one, zero);
    double err = 0.0;
    for (const auto& p : circ.curve.p) err = std::max({err, std::abs((p - Vec3(0, 1, 0)).norm() - 1.0), std::abs(p.z())});
    const auto line = recon::reconstruct_direct(s, zero, zero);
    for (std::size_t i = 0; i < s.size(); ++i) err = std::max(err, (line.curve.p[i] - Vec3(s[i], 0, 0)).norm());
    r.metrics = {{"max_error", err}};
    r.passed = err <= 1e-9;
    r.summary = "unit circle and line recovered to " + sci(err);
  }));
  out.push_back(timed(0, "RM frame family stays rotation minimizing", [](CheckResult& r) {
    const auto c = arclength_samples(curves::helix(1.0, 1.0), 0.0, 5.0, 1e-3);
    const auto f = rm_frame(c);
    double worst = 0.0;
    for (double psi : {0.3, 1.0, 2.5}) worst = std::max(worst, frames::diagnose(frames::rm_family(f, psi), c).max_rm_entry);
    r.metrics = {{"max_rm_entry", worst}};
    r.passed = worst <= 1e-6;
    r.summary = "max |(s's^-1)_23| " + sci(worst);
  }));
  out.push_back(timed(0, "syzygy residual on trivial evolutions", [](CheckResult& r) {
    const double st = var::check_syzygy_compatibility(var::static_family(), 0.0, 3.0, 0.3, 0.01, 0.01).max_residual;
    const double rg = var::check_syzygy_compatibility(var::rigid_motion_family(), 0.0, 3.0, 0.3, 0.01, 0.01).max_residual;
    r.metrics = {{"static", st}, {"rigid_motion", rg}};
    r.passed = st <= 1e-12 && rg <= 1e-4;
    r.summary = "static " + sci(st) + ", rigid motion " + sci(rg);
  }));
  out.push_back(timed(0, "cylinder mesh validity", [](CheckResult& r) {
    const auto c = arclength_samples(curves::line(), 0.0, 2.0, 1e-2);
    frames::FrameField f;
    f.sigma.assign(c.size(), Mat3::Identity());
    const auto m = mesh::sweep_surface(c, f, 0.1, 12);
    const auto st = mesh::mesh_stats(m);
    r.metrics = {{"euler_characteristic", st.euler_characteristic},
                 {"boundary_edges", st.boundary_edges},
                 {"degenerate", st.degenerate_triangles}};
    r.passed = st.valid() && st.euler_characteristic == 0 && st.boundary_edges == 24;
    r.summary = "Euler characteristic " + std::to_string(st.euler_characteristic) + ", boundary edges " +
                std::to_string(st.boundary_edges);
  }));
  out.push_back(timed(0, "run configuration round trip", [](CheckResult& r) {
    RunConfig c;
    c.command = "solve";
    c.lagrangian = "(k2/k1)^2/2";
    c.ics = {{"k1", 1.0}, {"k2", 0.1 + 0.2}};
    c.ds = 1.0 / 3.0;
    c.p0 = {0.1, -2.0, 1e-300};
    const RunConfig back = RunConfig::from_string(c.to_string());
    r.passed = back == c;
    r.summary = r.passed ? "lossless" : "configuration changed on round trip";
  }));
  return out;
}

std::string format_line(const CheckResult& r) {
  char head[96];
  if (r.id > 0)
    std::snprintf(head, sizeof head, "[%s] %2d %s: ", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str());
  else
    std::snprintf(head, sizeof head, "[%s]    %s: ", r.passed ? "PASS" : "FAIL", r.name.c_str());
  char tail[32];
  std::snprintf(tail, sizeof tail, " (%.2f s)", r.seconds);
  return head + r.summary + tail;
}

nlohmann::json to_json(const std::vector<CheckResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"summary", r.summary}, {"metrics", r.metrics}});
  }
  return {{"passed", all}, {"checks", arr}};
}

}  // namespace rmf::checks
