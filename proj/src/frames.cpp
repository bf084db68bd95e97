#include "rmf/frames.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <Eigen/Geometry>

#include "rmf/finite_diff.hpp"
#include "rmf/odesolve.hpp"

namespace rmf::frames {

namespace {

constexpr int kAccuracy = 4;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

CurveSamples sample_grid(std::shared_ptr<const curves::ParametricCurve> c, const std::vector<double>& grid) {
  CurveSamples out;
  out.s = grid;
  out.h = grid.size() > 1 ? grid[1] - grid[0] : 0.0;
  const std::size_t n = grid.size();
  out.p.resize(n);
  out.d1.resize(n);
  out.d2.resize(n);
  out.d3.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.p[i] = c->eval(grid[i], 0);
    out.d1[i] = c->eval(grid[i], 1);
    out.d2[i] = c->eval(grid[i], 2);
    out.d3[i] = c->eval(grid[i], 3);
  }
  out.source = std::move(c);
  return out;
}

// Composite Gauss-Legendre arc length of `c` over [a, b].
double arclength(const curves::ParametricCurve& c, double a, double b) {
  static constexpr double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                  0.9061798459386640};
  static constexpr double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                  0.2369268850561891};
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / 0.02)));
  const double step = (b - a) / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double mid = a + (i + 0.5) * step;
    for (int j = 0; j < 5; ++j) acc += w[j] * c.eval(mid + 0.5 * step * x[j], 1).norm();
  }
  return acc * 0.5 * step;
}

struct Hermite {
  Vec3 value, slope;
};

// Cubic Hermite on [0, h] at fraction th of the interval.
Hermite hermite(const Vec3& y0, const Vec3& y1, const Vec3& m0, const Vec3& m1, double h, double th) {
  const double t2 = th * th, t3 = t2 * th;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + th, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const double d00 = 6 * t2 - 6 * th, d10 = 3 * t2 - 4 * th + 1, d01 = -6 * t2 + 6 * th, d11 = 3 * t2 - 2 * th;
  return {h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1, (d00 * y0 + d01 * y1) / h + d10 * m0 + d11 * m1};
}

}  // namespace

CurveSamples sample(std::shared_ptr<const curves::ParametricCurve> arclength_curve, double s0, double s1, double h) {
  if (!(h > 0)) throw FrameError("grid spacing must be positive");
  return sample_grid(std::move(arclength_curve), ode::uniform_grid(s0, s1, h));
}

CurveSamples sample_curve(std::shared_ptr<const curves::ParametricCurve> curve, double t0, double length, double h) {
  if (!(length > 0)) throw FrameError("curve length must be positive");
  const double target = length + 2 * h;
  double t1 = t0 + target / std::max(curve->eval(t0, 1).norm(), 1e-12);
  double covered = arclength(*curve, t0, t1);
  for (int iter = 0; covered < target && iter < 200; ++iter) {
    t1 += (target - covered) / std::max(curve->eval(t1, 1).norm(), 1e-12) + 1e-9;
    covered = arclength(*curve, t0, t1);
  }
  if (covered < target) throw FrameError("could not bracket the requested arc length");
  auto ac = std::make_shared<curves::ArclengthCurve>(curve, t0, t1);
  return sample(ac, 0.0, length, h);
}

CurveSamples reparametrize_arclength(std::span<const Vec3> raw, double target_ds) {
  if (!(target_ds > 0)) throw FrameError("target_ds must be positive");
  auto spline = curves::chord_spline(raw);
  auto ac = std::make_shared<curves::ArclengthCurve>(spline, spline->t_min(), spline->t_max());
  const long n = static_cast<long>(std::floor(ac->length() / target_ds + 1e-9));
  if (n < 1) throw FrameError("curve shorter than one grid step");
  std::vector<double> grid(n + 1);
  for (long i = 0; i <= n; ++i) grid[i] = i * target_ds;
  return sample_grid(ac, grid);
}

CurveSamples from_uniform_samples(std::span<const Vec3> points, double h, double s0) {
  if (points.size() < 7) throw FrameError("need at least 7 uniformly spaced samples for derivatives");
  if (!(h > 0)) throw FrameError("grid spacing must be positive");
  CurveSamples out;
  out.h = h;
  out.p.assign(points.begin(), points.end());
  out.s.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out.s[i] = s0 + i * h;
  out.d1 = fd::derivative(points, h, 1, kAccuracy);
  out.d2 = fd::derivative(points, h, 2, kAccuracy);
  out.d3 = fd::derivative(points, h, 3, kAccuracy);
  return out;
}

const char* to_string(FrameKind k) {
  return k == FrameKind::frenet_serret ? "frenet_serret" : "rotation_minimizing";
}

InflectionPoint::InflectionPoint(std::size_t node, double s, double curvature)
    : std::runtime_error("Frenet-Serret frame undefined: |P''| = " + fmt(curvature) + " at node " +
                         std::to_string(node) + " (s = " + fmt(s) + ")"),
      node_(node) {}

FrenetResult frenet_frame(const CurveSamples& c, double eps_inflection) {
  FrenetResult r;
  r.frame.kind = FrameKind::frenet_serret;
  const std::size_t n = c.size();
  r.frame.sigma.resize(n);
  r.gauge.kappa.resize(n);
  r.gauge.tau.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = c.d2[i].norm();
    if (!(k > eps_inflection)) throw InflectionPoint(i, c.s[i], k);
    const Vec3 t = c.d1[i].normalized();
    const Vec3 nn = (c.d2[i] - c.d2[i].dot(t) * t).normalized();
    const Vec3 b = t.cross(nn);
    r.frame.sigma[i].row(0) = t;
    r.frame.sigma[i].row(1) = nn;
    r.frame.sigma[i].row(2) = b;
    r.gauge.kappa[i] = k;
    if (c.has_third()) r.gauge.tau[i] = c.d1[i].cross(c.d2[i]).dot(c.d3[i]) / (k * k);
  }
  if (!c.has_third()) {
    const auto cm = curvature_matrices(r.frame, c.h);
    for (std::size_t i = 0; i < n; ++i) r.gauge.tau[i] = cm[i](1, 2);
  }
  return r;
}

FrameField rm_frame_integrate(const CurveSamples& c, const Vec3& V0, const RmOptions& opts) {
  const std::size_t n = c.size();
  if (n == 0) throw FrameError("empty curve");
  const Vec3 t0 = c.d1[0];
  if (std::abs(V0.norm() - 1.0) > opts.ic_tol)
    throw FrameError("initial normal must have unit length (|V0| = " + fmt(V0.norm()) + ")");
  if (std::abs(V0.dot(t0)) > opts.ic_tol)
    throw FrameError("initial normal must be orthogonal to P'(s0) (V0.P' = " + fmt(V0.dot(t0)) + ")");
  if (opts.substeps < 1) throw FrameError("substeps must be >= 1");

  FrameField f;
  f.kind = FrameKind::rotation_minimizing;
  f.sigma.resize(n);
  auto assemble = [&](std::size_t i, const Vec3& v) {
    const Vec3 t = c.d1[i].normalized();
    f.sigma[i].row(0) = t;
    f.sigma[i].row(1) = v;
    f.sigma[i].row(2) = t.cross(v);
  };
  Vec3 v = V0;
  assemble(0, v);

  // (P', P'') at s_i + th * h
  auto tangent_data = [&](std::size_t i, double th, Vec3& t, Vec3& k) {
    if (th == 0.0) {
      t = c.d1[i];
      k = c.d2[i];
      return;
    }
    if (th == 1.0) {
      t = c.d1[i + 1];
      k = c.d2[i + 1];
      return;
    }
    if (c.source) {
      const double s = c.s[i] + th * c.h;
      t = c.source->eval(s, 1);
      k = c.source->eval(s, 2);
      return;
    }
    const Hermite ht = hermite(c.d1[i], c.d1[i + 1], c.d2[i], c.d2[i + 1], c.h, th);
    t = ht.value;
    k = c.has_third() ? hermite(c.d2[i], c.d2[i + 1], c.d3[i], c.d3[i + 1], c.h, th).value : ht.slope;
  };
  auto rhs = [](const Vec3& t, const Vec3& k, const Vec3& w) -> Vec3 { return -(k.dot(w)) * t; };

  const int m = opts.substeps;
  const double hh = c.h / m;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double a = static_cast<double>(j) / m, mid = (j + 0.5) / m, b = static_cast<double>(j + 1) / m;
      Vec3 ta, ka, tm, km, tb, kb;
      tangent_data(i, a, ta, ka);
      tangent_data(i, mid, tm, km);
      tangent_data(i, b, tb, kb);
      const Vec3 k1 = rhs(ta, ka, v);
      const Vec3 k2 = rhs(tm, km, v + 0.5 * hh * k1);
      const Vec3 k3 = rhs(tm, km, v + 0.5 * hh * k2);
      const Vec3 k4 = rhs(tb, kb, v + hh * k3);
      v += hh / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      if (opts.reproject) {
        const Vec3 tu = tb.normalized();
        v -= v.dot(tu) * tu;
        v.normalize();
      }
    }
    if (!v.allFinite()) throw FrameError("non-finite normal at node " + std::to_string(i + 1));
    assemble(i + 1, v);
  }
  return f;
}

Vec3 initial_normal(const CurveSamples& c, double psi0) {
  if (c.size() == 0) throw FrameError("empty curve");
  const Vec3 t = c.d1[0].normalized();
  int axis = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(t[k]) < std::abs(t[axis])) axis = k;
  const Vec3 e = Vec3::Unit(axis);
  const Vec3 nrm = (e - e.dot(t) * t).normalized();
  return std::cos(psi0) * nrm + std::sin(psi0) * t.cross(nrm);
}

std::vector<double> unwrap(std::span<const double> angles) {
  std::vector<double> out(angles.begin(), angles.end());
  for (std::size_t i = 1; i < out.size(); ++i) {
    double d = angles[i] - angles[i - 1];
    d = std::remainder(d, 2 * std::numbers::pi);
    out[i] = out[i - 1] + d;
  }
  return out;
}

GaugeData rm_invariants(const FrameField& f, const CurveSamples& c) {
  if (f.kind != FrameKind::rotation_minimizing) throw FrameError("rm_invariants needs a rotation minimizing frame");
  if (f.size() != c.size()) throw FrameError("frame and curve sizes differ");
  GaugeData g;
  const std::size_t n = c.size();
  g.kappa1.resize(n);
  g.kappa2.resize(n);
  g.kappa.resize(n);
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    g.kappa1[i] = c.d2[i].dot(f.row(i, 1));
    g.kappa2[i] = c.d2[i].dot(f.row(i, 2));
    g.kappa[i] = std::hypot(g.kappa1[i], g.kappa2[i]);
    raw[i] = std::atan2(g.kappa2[i], g.kappa1[i]);
  }
  g.theta = unwrap(raw);
  return g;
}

GaugeReport gauge_relations(const GaugeData& fs, const GaugeData& rm, double h, double kappa_min) {
  const std::size_t n = rm.kappa1.size();
  if (fs.kappa.size() != n || fs.tau.size() != n || rm.kappa2.size() != n)
    throw FrameError("gauge data computed on different grids");
  GaugeReport r;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.kappa_residual.assign(n, nan);
  r.tau_residual.assign(n, nan);
  r.theta_residual.assign(n, nan);
  const auto dk1 = fd::derivative(std::span<const double>(rm.kappa1), h, 1, kAccuracy);
  const auto dk2 = fd::derivative(std::span<const double>(rm.kappa2), h, 1, kAccuracy);
  std::vector<double> theta = rm.theta;
  if (theta.size() != n) {
    std::vector<double> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = std::atan2(rm.kappa2[i], rm.kappa1[i]);
    theta = unwrap(raw);
  }
  const auto dtheta = fd::derivative(std::span<const double>(theta), h, 1, kAccuracy);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = std::hypot(rm.kappa1[i], rm.kappa2[i]);
    r.kappa_residual[i] = std::abs(fs.kappa[i] - k);
    r.max_kappa_residual = std::max(r.max_kappa_residual, r.kappa_residual[i]);
    if (k < kappa_min) {
      ++r.skipped_nodes;
      continue;
    }
    const double tau = (rm.kappa1[i] * dk2[i] - dk1[i] * rm.kappa2[i]) / (k * k);
    r.tau_residual[i] = std::abs(tau - fs.tau[i]);
    r.theta_residual[i] = std::abs(dtheta[i] - fs.tau[i]);
    r.max_tau_residual = std::max(r.max_tau_residual, r.tau_residual[i]);
    r.max_theta_residual = std::max(r.max_theta_residual, r.theta_residual[i]);
  }
  return r;
}

FrameField rm_family(const FrameField& f, double psi0) {
  if (f.kind != FrameKind::rotation_minimizing) throw FrameError("rm_family needs a rotation minimizing frame");
  FrameField out = f;
  const double c = std::cos(psi0), s = std::sin(psi0);
  for (auto& m : out.sigma) {
    const Vec3 t = m.row(0).transpose();
    const Vec3 v = m.row(1).transpose();
    const Vec3 w = c * v + s * t.cross(v);
    m.row(1) = w;
    m.row(2) = t.cross(w);
  }
  return out;
}

std::vector<Mat3> curvature_matrices(const FrameField& f, double h) {
  const std::size_t n = f.size();
  std::vector<Mat3> d(n, Mat3::Zero());
  std::vector<double> entry(n);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      for (std::size_t i = 0; i < n; ++i) entry[i] = f.sigma[i](a, b);
      const auto de = fd::derivative(std::span<const double>(entry), h, 1, kAccuracy);
      for (std::size_t i = 0; i < n; ++i) d[i](a, b) = de[i];
    }
  std::vector<Mat3> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = d[i] * f.sigma[i].transpose();
  return out;
}

FrameDiagnostics diagnose(const FrameField& f, const CurveSamples& c, int boundary) {
  FrameDiagnostics d;
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Mat3& m = f.sigma[i];
    d.max_orthonormality =
        std::max(d.max_orthonormality, (m * m.transpose() - Mat3::Identity()).cwiseAbs().rowwise().sum().maxCoeff());
    d.max_det_error = std::max(d.max_det_error, std::abs(m.determinant() - 1.0));
    const Vec3 v = m.row(1).transpose();
    if (i < c.size()) d.max_v_dot_t = std::max(d.max_v_dot_t, std::abs(v.dot(c.d1[i])));
    d.max_v_norm = std::max(d.max_v_norm, std::abs(v.norm() - 1.0));
  }
  if (n >= 7) {
    const auto cm = curvature_matrices(f, c.h);
    for (std::size_t i = static_cast<std::size_t>(boundary); i + boundary < n; ++i) {
      d.max_skew = std::max(d.max_skew, (cm[i] + cm[i].transpose()).cwiseAbs().maxCoeff());
      d.max_rm_entry = std::max(d.max_rm_entry, std::abs(cm[i](1, 2)));
      d.max_fs_entry = std::max(d.max_fs_entry, std::abs(cm[i](0, 2)));
    }
  }
  return d;
}

}  // namespace rmf::frames
