#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmf/checks/fixtures.hpp"
#include "rmf/checks/oracles.hpp"
#include "rmf/checks/suite.hpp"
#include "rmf/curves.hpp"
#include "rmf/finite_diff.hpp"
#include "rmf/frames.hpp"
#include "rmf/io.hpp"
#include "rmf/mesh.hpp"
#include "rmf/reconstruct.hpp"
#include "rmf/variational.hpp"

namespace rmf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

frames::CurveSamples load_curve(const RunConfig& cfg) {
  if (!cfg.curve_file.empty()) {
    const auto in = io::read_curve_csv(cfg.curve_file);
    if (in.points.size() < 5) throw io::IoError(cfg.curve_file + ": need at least 5 points");
    if (in.arclength) {
      bool uniform = true;
      const double h = in.param[1] - in.param[0];
      for (std::size_t i = 1; i < in.param.size(); ++i)
        uniform = uniform && std::abs(in.param[i] - in.param[i - 1] - h) <= 1e-9 * std::max(1.0, std::abs(h));
      if (uniform) return frames::from_uniform_samples(in.points, h, in.param[0]);
    }
    return frames::reparametrize_arclength(in.points, cfg.ds);
  }
  curves::CatalogParams p;
  p.a = cfg.curve_a;
  p.b = cfg.curve_b;
  p.radius = cfg.curve_radius;
  p.seed = cfg.seed;
  p.modes = cfg.curve_modes;
  return frames::sample_curve(curves::from_catalog(cfg.curve, p), cfg.t0, cfg.length, cfg.ds);
}

bool wants(const RunConfig& cfg, const char* kind) {
  if (cfg.frame != "rm" && cfg.frame != "fs" && cfg.frame != "both")
    throw ConfigError("frame must be rm, fs or both, got '" + cfg.frame + "'");
  return cfg.frame == kind || cfg.frame == "both";
}

void add_frame_columns(io::CsvTable& t, const std::string& prefix, const frames::FrameField& f) {
  static const char* rows[] = {"t", "n", "b"};
  static const char* comps[] = {"x", "y", "z"};
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) {
      std::vector<double> col(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) col[i] = f.sigma[i](r, k);
      t.add(prefix + rows[r] + comps[k], std::move(col));
    }
}

void add_points(io::CsvTable& t, std::span<const Vec3> p) {
  std::vector<double> x(p.size()), y(p.size()), z(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    x[i] = p[i].x();
    y[i] = p[i].y();
    z[i] = p[i].z();
  }
  t.add("x", std::move(x));
  t.add("y", std::move(y));
  t.add("z", std::move(z));
}

json diagnostics_json(const frames::FrameDiagnostics& d, frames::FrameKind kind) {
  json j = {{"orthonormality", d.max_orthonormality},
            {"determinant", d.max_det_error},
            {"skew_symmetry", d.max_skew},
            {"normal_dot_tangent", d.max_v_dot_t},
            {"normal_length", d.max_v_norm}};
  if (kind == frames::FrameKind::rotation_minimizing)
    j["rm_constraint"] = d.max_rm_entry;
  else
    j["fs_constraint"] = d.max_fs_entry;
  return j;
}

json vec_json(const var::Vec6& v) { return json(std::vector<double>(v.begin(), v.end())); }

jet::Expr constant_expr(double x) {
  if (x == 0.0) return jet::Expr();
  const jet::Expr a = jet::Expr::decimal(io::format_double(std::abs(x)));
  return x < 0 ? jet::Expr::constant(-1) * a : a;
}

var::ELSystem build_system(const RunConfig& cfg) {
  if (cfg.lagrangian.empty()) throw ConfigError("no Lagrangian given (set lagrangian or use --fixture)");
  return var::assemble_el_system(jet::parse_lagrangian(cfg.lagrangian), constant_expr(cfg.lambda_constant));
}

std::map<std::string, double> complete_ics(const var::ELSystem& sys, const RunConfig& cfg, std::ostream& log) {
  auto ics = cfg.ics;
  if (!ics.count("mu"))
    if (auto mu0 = var::closed_form_mu(sys, ics)) {
      ics["mu"] = *mu0;
      log << "mu(0) = " << io::format_double(*mu0) << " from the closed form of mu\n";
    }
  return ics;
}

var::InvariantTrajectory solve(const var::ELSystem& sys, const RunConfig& cfg, std::ostream& log) {
  var::SolveOptions opts;
  if (cfg.method == "rk4")
    opts.method = ode::Method::rk4_fixed;
  else if (cfg.method == "rk45")
    opts.method = ode::Method::rk45_adaptive;
  else
    throw ConfigError("method must be rk4 or rk45, got '" + cfg.method + "'");
  opts.tol = {cfg.rtol, cfg.atol};
  opts.carry_frame = true;
  opts.p0 = Vec3(cfg.p0[0], cfg.p0[1], cfg.p0[2]);
  auto traj = var::solve_el(sys, complete_ics(sys, cfg, log), cfg.s0, cfg.span, cfg.ds, opts);
  for (const auto& w : traj.warnings) log << "warning: " << w << "\n";
  if (traj.truncated) log << "warning: " << traj.message << "\n";
  return traj;
}

void write_trajectory(const fs::path& path, const var::InvariantTrajectory& traj) {
  io::CsvTable t;
  t.add("s", traj.s);
  for (std::size_t k = 0; k < traj.state_vars.size(); ++k) {
    std::vector<double> col(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) col[i] = traj.state[i][k];
    t.add(var::jet_name(traj.state_vars[k]), std::move(col));
  }
  if (!t.find("k2")) t.add("k2", traj.k2);
  if (!t.find("mu")) t.add("mu", traj.mu);
  t.add("lambda", traj.lambda);
  if (traj.has_frame()) add_points(t, traj.position);
  io::write_csv(path, t);
}

var::InvariantTrajectory read_trajectory(const var::ELSystem& sys, const fs::path& path) {
  const auto t = io::read_csv(path);
  for (const char* need : {"s", "k1", "k2", "mu"})
    if (!t.find(need)) throw io::IoError(path.string() + ": missing column '" + need + "'");
  const auto& s = t.column("s");
  if (s.size() < 5) throw io::IoError(path.string() + ": need at least 5 rows");
  const double h = s[1] - s[0];
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs(s[i] - s[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw io::IoError(path.string() + ": s must be uniformly spaced");
  return var::trajectory_from_samples(sys, t.column("k1"), t.column("k2"), t.column("mu"), s[0], h);
}

json mesh_json(const mesh::MeshStats& st) {
  return {{"vertices", st.vertices},
          {"triangles", st.triangles},
          {"edges", st.edges},
          {"degenerate_triangles", st.degenerate_triangles},
          {"boundary_edges", st.boundary_edges},
          {"non_manifold_edges", st.non_manifold_edges},
          {"inconsistent_edges", st.inconsistent_edges},
          {"euler_characteristic", st.euler_characteristic},
          {"min_area", st.min_area},
          {"valid", st.valid()}};
}

mesh::MeshStats write_mesh(const fs::path& base, const frames::CurveSamples& c, const frames::FrameField& f,
                           const RunConfig& cfg) {
  const auto m = mesh::sweep_surface(c, f, cfg.tube_radius, cfg.n_around);
  mesh::write_obj(base.string() + ".obj", m);
  if (cfg.ply) mesh::write_ply(base.string() + ".ply", m);
  return mesh::mesh_stats(m);
}

}  // namespace

int cmd_frame(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto c = load_curve(cfg);
  const bool rm_wanted = wants(cfg, "rm"), fs_wanted = wants(cfg, "fs");
  const auto rm = frames::rm_frame_integrate(c, frames::initial_normal(c, cfg.psi0));
  const auto g = frames::rm_invariants(rm, c);

  std::optional<frames::FrenetResult> fsr;
  try {
    fsr = frames::frenet_frame(c);
  } catch (const frames::InflectionPoint& e) {
    if (fs_wanted) throw;
    log << "note: no Frenet-Serret frame (" << e.what() << "); gauge residuals skipped\n";
  }

  io::CsvTable frames_csv;
  frames_csv.add("s", c.s);
  add_points(frames_csv, c.p);
  if (rm_wanted) add_frame_columns(frames_csv, "rm_", rm);
  if (fs_wanted) add_frame_columns(frames_csv, "fs_", fsr->frame);
  io::write_csv(out / "frames.csv", frames_csv);

  // kappa and tau from the RM invariants; Frenet-Serret values are in residuals.json.
  const std::size_t n = c.size();
  const auto d1 = fd::derivative(std::span<const double>(g.kappa1), c.h);
  const auto d2 = fd::derivative(std::span<const double>(g.kappa2), c.h);
  std::vector<double> kappa(n), tau(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k2 = g.kappa1[i] * g.kappa1[i] + g.kappa2[i] * g.kappa2[i];
    kappa[i] = std::sqrt(k2);
    tau[i] = k2 > 1e-12 ? (g.kappa1[i] * d2[i] - d1[i] * g.kappa2[i]) / k2 : std::nan("");
  }
  io::CsvTable inv;
  inv.add("s", c.s);
  inv.add("kappa", kappa);
  inv.add("tau", tau);
  inv.add("k1", g.kappa1);
  inv.add("k2", g.kappa2);
  inv.add("theta", g.theta);
  io::write_csv(out / "invariants.csv", inv);

  json res = {{"nodes", n}, {"h", c.h}};
  res["rm"] = diagnostics_json(frames::diagnose(rm, c), frames::FrameKind::rotation_minimizing);
  if (fsr) {
    res["fs"] = diagnostics_json(frames::diagnose(fsr->frame, c), frames::FrameKind::frenet_serret);
    const auto gr = frames::gauge_relations(fsr->gauge, g, c.h);
    res["gauge"] = {{"kappa", gr.max_kappa_residual},
                    {"tau", gr.max_tau_residual},
                    {"theta_s_minus_tau", gr.max_theta_residual},
                    {"skipped_nodes", gr.skipped_nodes}};
  }
  io::write_json(out / "residuals.json", res);
  log << "frame: " << n << " nodes written to " << out.string() << "\n";
  return ok;
}

int cmd_solve(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto sys = build_system(cfg);
  io::write_text(out / "el_system.txt", sys.text());
  const auto traj = solve(sys, cfg, log);
  write_trajectory(out / "trajectory.csv", traj);

  json nj = {{"status", ode::to_string(traj.status)},
             {"truncated", traj.truncated},
             {"message", traj.message},
             {"warnings", traj.warnings},
             {"nodes", traj.size()},
             {"span_reached", traj.s.empty() ? 0.0 : traj.s.back() - traj.s.front()}};
  const auto v = var::noether_vector(sys);
  json vs = json::array();
  for (const auto& e : v) vs.push_back(e.str());
  nj["v"] = vs;

  io::CsvTable fi_csv;
  fi_csv.add("s", traj.s);
  if (traj.size() >= 2 && traj.has_frame()) {
    const auto st = var::conservation_constants(sys, traj);
    const auto fi = recon::first_integrals(st.v_values, st.c);
    nj["c"] = vec_json(st.c);
    nj["drift"] = vec_json(st.drift);
    nj["relative_drift"] = st.relative_drift;
    nj["first_integrals"] = {{"norm_c1", fi.norm_c1},
                             {"pairing_c", fi.pairing_c},
                             {"relative_drift_norm", fi.max_relative_norm},
                             {"relative_drift_pairing", fi.max_relative_pairing},
                             {"relative_vs_c", fi.max_relative_vs_c}};
    fi_csv.add("norm_w1", fi.norm_w1);
    fi_csv.add("pairing", fi.pairing);
    log << "solve: c relative drift " << io::format_double(st.relative_drift) << "\n";
  } else {
    fi_csv.add("norm_w1", {});
    fi_csv.add("pairing", {});
    if (traj.size() < 2) log << "warning: empty trajectory, no conservation data\n";
  }
  io::write_csv(out / "first_integrals.csv", fi_csv);
  io::write_json(out / "noether.json", nj);
  log << "solve: " << traj.size() << " nodes written to " << out.string() << "\n";
  return traj.truncated ? truncated : ok;
}

int cmd_reconstruct(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto sys = build_system(cfg);
  var::InvariantTrajectory traj;
  if (cfg.trajectory_file.empty()) {
    traj = solve(sys, cfg, log);
    write_trajectory(out / "trajectory.csv", traj);
  } else {
    traj = read_trajectory(sys, cfg.trajectory_file);
  }
  if (traj.size() < 3) throw recon::ReconstructionError("trajectory has fewer than 3 nodes");

  const auto in = recon::noether_input(sys, traj);
  const Vec3 p0(cfg.p0[0], cfg.p0[1], cfg.p0[2]);
  const var::Vec6 v0 = in.v.front();
  json rep = {{"nodes", in.s.size()}, {"psi0", cfg.psi0}, {"p0", cfg.p0}};
  json warnings = json::array();
  if (traj.truncated) warnings.push_back(traj.message);

  frames::FrameField frame;
  frames::CurveSamples curve;
  std::vector<bool> algebraic;
  try {
    const auto sg = recon::reconstruct_sigma(in, v0, cfg.psi0);
    // c1 = w1(s0) fixes the rotation up to psi0; c2 must match the frame actually chosen at s0.
    const var::Vec6 c = var::adjoint_transform(sg.frame.sigma.front(), p0, v0);
    const auto pos = recon::reconstruct_position(sg.frame, in, c, p0);
    frame = sg.frame;
    curve = pos.curve;
    algebraic = pos.algebraic;
    json sw = json::array();
    for (const auto& x : sg.switches)
      sw.push_back({{"s", x.s}, {"from", static_cast<int>(x.from)}, {"to", static_cast<int>(x.to)}, {"jump", x.jump}});
    rep["method"] = "noether";
    rep["c"] = vec_json(c);
    rep["initial_case"] = static_cast<int>(sg.cases.front());
    rep["case_switches"] = sw;
    rep["max_sigma_c1_minus_w1"] = sg.max_c1_residual;
    rep["max_orthonormality"] = sg.max_orthonormality;
    rep["dual_path_difference"] = pos.max_dual_path_difference;
    for (const auto& w : sg.warnings) warnings.push_back(w);
  } catch (const recon::CaseInadmissible&) {
    throw;
  } catch (const recon::ReconstructionError& e) {
    // c1 = 0: the conservation laws do not determine the frame; integrate it directly.
    warnings.push_back(std::string(e.what()) + "; using the direct frame equation");
    const auto d = recon::reconstruct_direct(traj, Mat3::Identity(), p0);
    frame = d.frame;
    curve = d.curve;
    algebraic.assign(curve.size(), false);
    rep["method"] = "direct";
  }

  if (cfg.oracle && rep["method"] == "noether") {
    const auto d = recon::reconstruct_direct(traj, frame.sigma.front(), p0);
    double raw = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) raw += (curve.p[i] - d.curve.p[i]).squaredNorm();
    raw = std::sqrt(raw / static_cast<double>(curve.size()));
    rep["oracle"] = {{"rms_vs_direct", raw},
                     {"rms_vs_direct_aligned", checks::procrustes(curve.p, d.curve.p).rms},
                     {"frame_distance_vs_direct", recon::frame_distance(frame, d.frame)}};
  }

  io::CsvTable cc;
  cc.add("s", curve.s);
  add_points(cc, curve.p);
  std::vector<double> alg(algebraic.begin(), algebraic.end());
  cc.add("algebraic", alg);
  io::write_csv(out / "curve.csv", cc);
  io::CsvTable fc;
  fc.add("s", curve.s);
  add_frame_columns(fc, "", frame);
  io::write_csv(out / "frame.csv", fc);

  rep["mesh"] = mesh_json(write_mesh(out / "sweep", curve, frame, cfg));
  rep["warnings"] = warnings;
  io::write_json(out / "reconstruction_report.json", rep);
  for (const auto& w : warnings) log << "warning: " << w.get<std::string>() << "\n";
  log << "reconstruct: " << curve.size() << " nodes (" << rep["method"].get<std::string>() << ") written to "
      << out.string() << "\n";
  return ok;
}

int cmd_sweep(const RunConfig& cfg, const fs::path& out, std::ostream& log) {
  const auto c = load_curve(cfg);
  json rep = {{"nodes", c.size()}, {"tube_radius", cfg.tube_radius}, {"n_around", cfg.n_around}};
  const bool both = cfg.frame == "both";
  if (wants(cfg, "rm")) {
    const auto f = frames::rm_frame_integrate(c, frames::initial_normal(c, cfg.psi0));
    const auto tw = recon::twist_metric(f);
    rep["rm"] = {{"mesh", mesh_json(write_mesh(out / (both ? "sweep_rm" : "sweep"), c, f, cfg))},
                 {"twist_max", tw.max_angle},
                 {"twist_mean", tw.mean_angle}};
  }
  if (wants(cfg, "fs")) {
    const auto f = frames::frenet_frame(c).frame;
    const auto tw = recon::twist_metric(f);
    rep["fs"] = {{"mesh", mesh_json(write_mesh(out / (both ? "sweep_fs" : "sweep"), c, f, cfg))},
                 {"twist_max", tw.max_angle},
                 {"twist_mean", tw.mean_angle}};
  }
  io::write_json(out / "sweep_report.json", rep);
  log << "sweep: " << c.size() << " rings written to " << out.string() << "\n";
  return ok;
}

int cmd_verify(const RunConfig&, const VerifyOptions& o, const fs::path& out, std::ostream& log) {
  checks::SuiteOptions so;
  so.quick = o.quick;
  so.flip_adjoint_sign = o.flip_adjoint_sign;
  auto results = checks::run_acceptance(so);
  for (auto& r : checks::run_properties(so)) results.push_back(std::move(r));
  std::vector<std::string> failed;
  for (const auto& r : results) {
    log << checks::format_line(r) << "\n";
    if (!r.passed) failed.push_back(r.name);
  }
  json j = checks::to_json(results);
  j["quick"] = o.quick;
  j["adjoint_sign_flip"] = o.flip_adjoint_sign;
  j["failed"] = failed;
  io::write_json(out / "verify.json", j);
  log << (failed.empty() ? "verify: all checks passed" : "verify: " + std::to_string(failed.size()) + " failed")
      << "\n";
  return failed.empty() ? ok : check_failed;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rotation-minimizing frames, invariant variational problems and curve reconstruction", "rmf"};
  app.require_subcommand(1);

  std::string config_file, output, fixture;
  std::vector<std::string> sets, ics;
  std::map<std::string, std::string> flags;
  VerifyOptions vo;
  bool ply = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config,-c", config_file, "key = value configuration file");
    sub->add_option("--set", sets, "override a configuration key (key=value)")->take_all();
    sub->add_option("--output,-o", output, "output directory (relative to $RMF_OUTPUT_ROOT when set)");
    sub->add_option("--seed", flags["seed"], "random seed");
  };
  auto curve_opts = [&](CLI::App* sub) {
    sub->add_option("--curve", flags["curve"], "catalog curve: line, circle, helix, inflection, fourier");
    sub->add_option("--curve-file", flags["curve_file"], "CSV with x,y,z (and optional s or t)");
    sub->add_option("--t0", flags["t0"], "start parameter on the catalog curve");
    sub->add_option("--length", flags["length"], "arc length to sample");
    sub->add_option("--ds", flags["ds"], "arc-length spacing");
    sub->add_option("--frame", flags["frame"], "rm, fs or both");
    sub->add_option("--psi0", flags["psi0"], "initial normal angle");
  };
  auto solve_opts = [&](CLI::App* sub) {
    sub->add_option("--fixture", fixture, "built-in example: tan_squared, curvature_torsion, derivative_cross, elastic_helix");
    sub->add_option("--lagrangian,-L", flags["lagrangian"], "Lagrangian in k1, k2, D(k,n)");
    sub->add_option("--lambda-constant", flags["lambda_constant"], "integration constant of lambda");
    sub->add_option("--ic", ics, "initial condition name=value (k1, k1_s, k2_ss, mu, ...)")->take_all();
    sub->add_option("--span", flags["span"], "integration length");
    sub->add_option("--ds", flags["ds"], "output spacing");
    sub->add_option("--method", flags["method"], "rk4 or rk45");
  };

  auto* frame = app.add_subcommand("frame", "RM and Frenet-Serret frames and invariants of a curve");
  common(frame);
  curve_opts(frame);
  auto* solve = app.add_subcommand("solve", "solve the Euler-Lagrange system of an invariant Lagrangian");
  common(solve);
  solve_opts(solve);
  auto* reconstruct = app.add_subcommand("reconstruct", "rebuild the extremal curve from its conservation laws");
  common(reconstruct);
  solve_opts(reconstruct);
  reconstruct->add_option("--trajectory", flags["trajectory_file"], "trajectory CSV (solve first when omitted)");
  reconstruct->add_option("--psi0", flags["psi0"], "initial angle of the reconstructed frame");
  reconstruct->add_option("--tube-radius", flags["tube_radius"], "sweep tube radius");
  reconstruct->add_flag("--ply", ply, "also write sweep.ply");
  auto* sweep = app.add_subcommand("sweep", "tube surface swept along a curve by a frame");
  common(sweep);
  curve_opts(sweep);
  sweep->add_option("--tube-radius", flags["tube_radius"], "tube radius");
  sweep->add_option("--around", flags["n_around"], "vertices per ring");
  sweep->add_flag("--ply", ply, "also write PLY");
  auto* verify = app.add_subcommand("verify", "run the acceptance and property checks");
  common(verify);
  verify->add_flag("--quick", vo.quick, "fewer random cases and shorter spans");
  verify->add_flag("--inject-adjoint-sign-flip", vo.flip_adjoint_sign, "mutation test: wrong sign in the adjoint");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : error;
  }

  try {
    RunConfig cfg;
    if (!config_file.empty()) cfg = RunConfig::load(config_file);
    cfg.command = app.get_subcommands().front()->get_name();
    if (!fixture.empty()) {
      checks::Fixture fx;
      if (fixture == "tan_squared")
        fx = checks::tan_squared();
      else if (fixture == "curvature_torsion")
        fx = checks::curvature_torsion();
      else if (fixture == "derivative_cross")
        fx = checks::derivative_cross();
      else if (fixture == "elastic_helix")
        fx = checks::elastic_helix();
      else
        throw ConfigError("unknown fixture '" + fixture + "'");
      cfg.lagrangian = fx.lagrangian;
      cfg.ics = fx.ics;
      cfg.span = fx.span;
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& [k, v] : flags)
      if (!v.empty()) cfg.set(k, v);
    if (ply) cfg.ply = true;
    for (const auto& s : ics) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--ic expects name=value, got '" + s + "'");
      cfg.set("ic." + s.substr(0, eq), s.substr(eq + 1));
    }
    if (!output.empty()) cfg.output = output;

    const fs::path dir = io::resolve_output_dir(cfg.output);
    cfg.save(dir / "run.cfg");
    if (cfg.command == "frame") return cmd_frame(cfg, dir, out);
    if (cfg.command == "solve") return cmd_solve(cfg, dir, out);
    if (cfg.command == "reconstruct") return cmd_reconstruct(cfg, dir, out);
    if (cfg.command == "sweep") return cmd_sweep(cfg, dir, out);
    return cmd_verify(cfg, vo, dir, out);
  } catch (const recon::CaseInadmissible& e) {
    err << "error: " << e.what() << "\n";
    return inadmissible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return error;
  }
}

}  // namespace rmf::cli
