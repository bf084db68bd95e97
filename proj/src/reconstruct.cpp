#include "rmf/reconstruct.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Geometry>

#include "rmf/finite_diff.hpp"
#include "rmf/odesolve.hpp"

namespace rmf::recon {

namespace {

const Vec3 kE3(0.0, 0.0, 1.0);

double sign_of(Case k) { return k == Case::one ? 1.0 : -1.0; }

Vec3 w1_of(const Vec6& v) { return {v[0], v[1], v[2]}; }
Vec3 w2_of(const Vec6& v) { return {v[3], v[4], v[5]}; }

const Mat3& dmat() {
  static const Mat3 d = Vec3(1.0, -1.0, 1.0).asDiagonal();
  return d;
}

bool admissible(Case k, const Vec3& w1, const Vec3& c1, double r, double eps) {
  const Vec3 shift = sign_of(k) * r * kE3;
  return (w1 + shift).norm() >= eps && (c1 + shift).norm() >= eps;
}

Case other(Case k) { return k == Case::one ? Case::two : Case::one; }

std::vector<double> integrate_segment(std::span<const double> f, double h) {
  if (f.size() >= 3) return ode::cumulative_quadrature(f, h);
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i) out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
  return out;
}

Mat3 curvature_matrix(double k1, double k2) {
  Mat3 q;
  q << 0, k1, k2, -k1, 0, 0, -k2, 0, 0;
  return q;
}

frames::CurveSamples curve_from_frame(std::span<const double> s, double h, const std::vector<Mat3>& sigma,
                                      std::vector<Vec3> p, std::span<const double> k1, std::span<const double> k2) {
  frames::CurveSamples c;
  c.s.assign(s.begin(), s.end());
  c.h = h;
  c.p = std::move(p);
  c.d1.resize(sigma.size());
  c.d2.resize(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    c.d1[i] = sigma[i].row(0).transpose();
    c.d2[i] = k1[i] * sigma[i].row(1).transpose() + k2[i] * sigma[i].row(2).transpose();
  }
  return c;
}

}  // namespace

Mat3 cayley_phi(const Eigen::Vector4d& x) {
  const double n = x.norm();
  if (!(n > 0.0)) throw ReconstructionError("zero quaternion");
  const Eigen::Vector4d q = x / n;
  const double a = q[0], b = q[1], c = q[2], d = q[3];
  Mat3 m;
  m << a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c),
      2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b),
      2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d;
  return m;
}

Mat3 rotation(double psi, const Vec3& axis) {
  const double n = axis.norm();
  if (!(n > 0.0)) throw ReconstructionError("zero rotation axis");
  const Vec3 u = std::sin(0.5 * psi) * axis / n;
  return cayley_phi(Eigen::Vector4d(std::cos(0.5 * psi), u.x(), u.y(), u.z()));
}

NoetherInput noether_input(const var::ELSystem& sys, const var::InvariantTrajectory& traj) {
  NoetherInput in;
  in.s = traj.s;
  in.h = traj.h;
  in.k1 = traj.k1;
  in.k2 = traj.k2;
  in.v = var::noether_values(sys, traj);
  return in;
}

Mat3 case_frame(Case k, const Vec3& w1, const Vec3& c1, double psi) {
  const double sg = sign_of(k);
  const double r = c1.norm();
  constexpr double pi = std::numbers::pi;
  return rotation(pi, w1 + sg * r * kE3) * rotation(sg * psi, kE3) * rotation(pi, c1 + sg * r * kE3);
}

double case_angle(Case k, const Mat3& sigma, const Vec3& w1, const Vec3& c1) {
  const double sg = sign_of(k);
  const double r = c1.norm();
  constexpr double pi = std::numbers::pi;
  const Mat3 m = rotation(pi, w1 + sg * r * kE3) * sigma * rotation(pi, c1 + sg * r * kE3);
  return sg * std::atan2(m(1, 0), m(0, 0));
}

double case_rate(Case k, const Vec3& w1, double r, double k1, double k2) {
  if (k == Case::one) return -k1 + w1.y() * k2 / (r + w1.z());
  return k1 + w1.y() * k2 / (r - w1.z());
}

SigmaResult reconstruct_sigma(const NoetherInput& in, const Vec6& c, double psi0, const SigmaOptions& opts) {
  const std::size_t n = in.s.size();
  if (in.v.size() != n || in.k1.size() != n || in.k2.size() != n)
    throw ReconstructionError("reconstruction input arrays differ in length");
  SigmaResult res;
  res.frame.kind = frames::FrameKind::rotation_minimizing;
  if (n == 0) return res;
  const Vec3 c1 = w1_of(c);
  const double r = c1.norm();
  if (!(r > 0.0)) throw ReconstructionError("c1 = 0: the frame is not determined by the conservation laws");
  const double eps = opts.switch_fraction * r;

  // Cases depend only on w1, so the segments are fixed before integrating psi.
  res.cases.resize(n);
  Case cur;
  if (admissible(Case::one, w1_of(in.v[0]), c1, r, eps))
    cur = Case::one;
  else if (admissible(Case::two, w1_of(in.v[0]), c1, r, eps))
    cur = Case::two;
  else
    throw CaseInadmissible("no admissible case at the start", in.s[0]);
  std::vector<std::size_t> starts{0};
  res.cases[0] = cur;
  for (std::size_t i = 1; i < n; ++i) {
    if (!admissible(cur, w1_of(in.v[i]), c1, r, eps)) {
      if (!admissible(other(cur), w1_of(in.v[i - 1]), c1, r, eps) ||
          !admissible(other(cur), w1_of(in.v[i]), c1, r, eps)) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "no admissible case near s = %.6g", in.s[i]);
        throw CaseInadmissible(buf, in.s[i]);
      }
      cur = other(cur);
      starts.push_back(i - 1);
    }
    res.cases[i] = cur;
  }
  starts.push_back(n - 1);

  res.psi.assign(n, 0.0);
  res.frame.sigma.resize(n);
  double psi_start = psi0;
  for (std::size_t seg = 0; seg + 1 < starts.size(); ++seg) {
    const std::size_t a = starts[seg], b = starts[seg + 1];
    const Case k = seg == 0 ? res.cases[0] : res.cases[a + 1];
    if (seg > 0) {
      const Mat3 old = res.frame.sigma[a];
      psi_start = case_angle(k, old, w1_of(in.v[a]), c1);
      const Mat3 fresh = case_frame(k, w1_of(in.v[a]), c1, psi_start);
      const double jump = (fresh - old).norm();
      res.switches.push_back({a, in.s[a], other(k), k, jump});
      res.max_switch_jump = std::max(res.max_switch_jump, jump);
    }
    std::vector<double> f(b - a + 1);
    for (std::size_t i = a; i <= b; ++i) f[i - a] = case_rate(k, w1_of(in.v[i]), r, in.k1[i], in.k2[i]);
    const auto integral = integrate_segment(f, in.h);
    for (std::size_t i = a; i <= b; ++i) {
      res.psi[i] = psi_start + integral[i - a];
      res.frame.sigma[i] = case_frame(k, w1_of(in.v[i]), c1, res.psi[i]);
    }
    if (b == a) res.frame.sigma[a] = case_frame(k, w1_of(in.v[a]), c1, psi_start);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Mat3& sg = res.frame.sigma[i];
    res.max_c1_residual = std::max(res.max_c1_residual, (sg * c1 - w1_of(in.v[i])).norm());
    res.max_orthonormality =
        std::max(res.max_orthonormality, (sg * sg.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff());
  }
  if (res.max_c1_residual > opts.residual_tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "|sigma c1 - w1| reaches %.3g", res.max_c1_residual);
    res.warnings.emplace_back(buf);
  }
  return res;
}

PositionResult reconstruct_position(const frames::FrameField& frame, const NoetherInput& in, const Vec6& c,
                                    const Vec3& p0, double eps_alg) {
  const std::size_t n = frame.size();
  if (in.v.size() != n || in.s.size() != n) throw ReconstructionError("frame and invariants differ in length");
  PositionResult res;
  if (n == 0) return res;
  std::array<std::vector<double>, 3> tang;
  for (auto& t : tang) t.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k) tang[k][i] = frame.sigma[i](0, k);
  std::array<std::vector<double>, 3> quad;
  for (int k = 0; k < 3; ++k) quad[k] = integrate_segment(tang[k], in.h);

  const Vec3 c1 = w1_of(c), c2 = w2_of(c);
  const bool use_alg = std::abs(c1.z()) >= eps_alg * c1.norm() && c1.norm() > 0.0;
  std::vector<Vec3> p(n);
  res.quadrature_only.resize(n);
  res.algebraic.assign(n, use_alg);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 pq = p0 + Vec3(quad[0][i], quad[1][i], quad[2][i]);
    res.quadrature_only[i] = pq;
    if (!use_alg) {
      p[i] = pq;
      continue;
    }
    const double z = pq.z();
    const Vec3 rhs = dmat() * c2 - frame.sigma[i].transpose() * dmat() * w2_of(in.v[i]);
    const double y = (rhs.x() + z * c1.y()) / c1.z();
    const double x = (z * c1.x() - rhs.y()) / c1.z();
    p[i] = Vec3(x, y, z);
    res.max_dual_path_difference = std::max(res.max_dual_path_difference, (p[i] - pq).norm());
  }
  res.curve = curve_from_frame(in.s, in.h, frame.sigma, std::move(p), in.k1, in.k2);
  return res;
}

DirectResult reconstruct_direct(std::span<const double> s, std::span<const double> k1, std::span<const double> k2,
                                const Mat3& sigma0, const Vec3& p0, std::span<const double> k1s,
                                std::span<const double> k2s) {
  const std::size_t n = s.size();
  if (k1.size() != n || k2.size() != n) throw ReconstructionError("curvature arrays differ in length");
  DirectResult res;
  res.frame.kind = frames::FrameKind::rotation_minimizing;
  if (n == 0) return res;
  const double h = n > 1 ? s[1] - s[0] : 0.0;
  std::vector<double> d1, d2;
  if (k1s.size() != n || k2s.size() != n) {
    if (n >= 7) {
      d1 = fd::derivative(k1, h, 1, 4);
      d2 = fd::derivative(k2, h, 1, 4);
    } else {
      d1.assign(n, 0.0);
      d2.assign(n, 0.0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        d1[i] = (k1[i + 1] - k1[i]) / h;
        d2[i] = (k2[i + 1] - k2[i]) / h;
      }
      if (n > 1) {
        d1[n - 1] = d1[n - 2];
        d2[n - 1] = d2[n - 2];
      }
    }
    k1s = d1;
    k2s = d2;
  }
  auto& sig = res.frame.sigma;
  sig.resize(n);
  sig[0] = sigma0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double a1 = 0.5 * (k1[i] + k1[i + 1]) + h / 8.0 * (k1s[i] - k1s[i + 1]);
    const double a2 = 0.5 * (k2[i] + k2[i + 1]) + h / 8.0 * (k2s[i] - k2s[i + 1]);
    const Mat3 q0 = curvature_matrix(k1[i], k2[i]);
    const Mat3 qm = curvature_matrix(a1, a2);
    const Mat3 q1 = curvature_matrix(k1[i + 1], k2[i + 1]);
    const Mat3& y = sig[i];
    const Mat3 f1 = q0 * y;
    const Mat3 f2 = qm * (y + 0.5 * h * f1);
    const Mat3 f3 = qm * (y + 0.5 * h * f2);
    const Mat3 f4 = q1 * (y + h * f3);
    sig[i + 1] = y + h / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
  }
  std::array<std::vector<double>, 3> tang;
  for (auto& t : tang) t.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k) tang[k][i] = sig[i](0, k);
  std::vector<Vec3> p(n, p0);
  if (n > 1) {
    std::array<std::vector<double>, 3> quad;
    for (int k = 0; k < 3; ++k) quad[k] = integrate_segment(tang[k], h);
    for (std::size_t i = 0; i < n; ++i) p[i] = p0 + Vec3(quad[0][i], quad[1][i], quad[2][i]);
  }
  res.curve = curve_from_frame(s, h, sig, std::move(p), k1, k2);
  return res;
}

DirectResult reconstruct_direct(const var::InvariantTrajectory& traj, const Mat3& sigma0, const Vec3& p0) {
  const std::size_t n = traj.size();
  std::vector<double> d1(n), d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    d1[i] = traj.at(i, {jet::Base::kappa1, 1});
    d2[i] = traj.at(i, {jet::Base::kappa2, 1});
  }
  return reconstruct_direct(traj.s, traj.k1, traj.k2, sigma0, p0, d1, d2);
}

FirstIntegrals first_integrals(std::span<const Vec6> v, const Vec6& c) {
  FirstIntegrals fi;
  const Vec3 c1 = w1_of(c), c2 = w2_of(c);
  fi.norm_c1 = c1.squaredNorm();
  fi.pairing_c = c1.dot(dmat() * c2);
  fi.norm_w1.resize(v.size());
  fi.pairing.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec3 w1 = w1_of(v[i]), w2 = w2_of(v[i]);
    fi.norm_w1[i] = w1.squaredNorm();
    fi.pairing[i] = w1.dot(dmat() * w2);
  }
  if (v.empty()) return fi;
  const double n0 = fi.norm_w1[0], p0 = fi.pairing[0];
  for (std::size_t i = 0; i < v.size(); ++i) {
    fi.max_relative_norm = std::max(fi.max_relative_norm, std::abs(fi.norm_w1[i] - n0) / std::max(1.0, std::abs(n0)));
    fi.max_relative_pairing =
        std::max(fi.max_relative_pairing, std::abs(fi.pairing[i] - p0) / std::max(1.0, std::abs(p0)));
    fi.max_relative_vs_c =
        std::max({fi.max_relative_vs_c, std::abs(fi.norm_w1[i] - fi.norm_c1) / std::max(1.0, std::abs(fi.norm_c1)),
                  std::abs(fi.pairing[i] - fi.pairing_c) / std::max(1.0, std::abs(fi.pairing_c))});
  }
  return fi;
}

TwistStats twist_metric(const frames::FrameField& frame) {
  TwistStats t;
  if (frame.size() < 2) return t;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < frame.size(); ++i) {
    const Vec3 a = frame.row(i, 1), b = frame.row(i + 1, 1);
    const double ang = std::atan2(a.cross(b).norm(), a.dot(b));
    t.max_angle = std::max(t.max_angle, ang);
    sum += ang;
  }
  t.mean_angle = sum / static_cast<double>(frame.size() - 1);
  return t;
}

double frame_distance(const frames::FrameField& a, const frames::FrameField& b) {
  if (a.size() != b.size()) throw ReconstructionError("frames differ in length");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a.sigma[i] - b.sigma[i]).norm());
  return d;
}

}  // namespace rmf::recon
