#include "rmf/checks/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "rmf/odesolve.hpp"

namespace rmf::checks {

double Trig::derivative(double s, int m) const {
  double out = m == 0 ? c0 : 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    // d^m/ds^m cos(ws) = w^m cos(ws + m pi/2)
    const double phase = w[k] * s + m * 0.5 * std::numbers::pi;
    out += std::pow(w[k], m) * (a[k] * std::cos(phase) + b[k] * std::sin(phase));
  }
  return out;
}

Trig Trig::random(std::mt19937_64& rng, int modes) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Trig t;
  t.c0 = 1.0 + 0.5 * u(rng);
  for (int k = 1; k <= modes; ++k) {
    t.w.push_back(0.5 * k + 0.25 * u(rng));
    t.a.push_back(u(rng) / k);
    t.b.push_back(u(rng) / k);
  }
  return t;
}

double Bump::derivative(double s, int m) const {
  const double x = (s - center) / width;
  if (std::abs(x) >= 1.0) return 0.0;
  // Coefficients of (1 - x^2)^p as a polynomial in x, then differentiated m times.
  std::vector<double> c(2 * power + 1, 0.0);
  double binom = 1.0;
  for (int j = 0; j <= power; ++j) {
    c[2 * j] = (j % 2 ? -1.0 : 1.0) * binom;
    binom = binom * (power - j) / (j + 1);
  }
  for (int d = 0; d < m; ++d) {
    for (std::size_t i = 0; i + 1 < c.size(); ++i) c[i] = c[i + 1] * static_cast<double>(i + 1);
    c.back() = 0.0;
  }
  double v = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v / std::pow(width, m);
}

namespace {

using Slots = std::array<double, jet::kSlotCount>;

void fill_jets(Slots& slots, double s, const Trig& k1, const Trig& k2, const Bump& phi, jet::Base var, double eps,
               int order) {
  for (int m = 0; m <= order; ++m) {
    double a = k1.derivative(s, m), b = k2.derivative(s, m);
    const double p = eps == 0.0 ? 0.0 : eps * phi.derivative(s, m);
    if (var == jet::Base::kappa1)
      a += p;
    else
      b += p;
    slots[jet::slot({jet::Base::kappa1, m})] = a;
    slots[jet::slot({jet::Base::kappa2, m})] = b;
  }
}

}  // namespace

GateauxComparison gateaux_compare(const jet::Expr& L, jet::Base var, const Trig& k1, const Trig& k2,
                                  const Bump& phi, double eps, double h) {
  const jet::Expr e = jet::euler_operator(L, var);
  const jet::CompiledExpr cl(L), ce(e);
  const int order_l = std::max(0, jet::max_order(L));
  const int order_e = std::max(0, jet::max_order(e));
  const auto grid = ode::uniform_grid(phi.center - phi.width, phi.center + phi.width, h);

  auto functional = [&](double step) {
    std::vector<double> f(grid.size());
    Slots slots{};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      fill_jets(slots, grid[i], k1, k2, phi, var, step, order_l);
      f[i] = cl(slots);
    }
    return ode::quadrature(f, h);
  };
  GateauxComparison out;
  out.numeric = (-functional(2 * eps) + 8 * functional(eps) - 8 * functional(-eps) + functional(-2 * eps)) /
                (12 * eps);
  std::vector<double> g(grid.size());
  Slots slots{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fill_jets(slots, grid[i], k1, k2, phi, var, 0.0, order_e);
    g[i] = ce(slots) * phi.derivative(grid[i], 0);
  }
  out.symbolic = ode::quadrature(g, h);
  // Scale by the size of the pointwise variation and of L itself so that null
  // directions (exact derivatives, absent variables) compare in absolute terms.
  std::vector<double> dl(grid.size()), l0(grid.size());
  Slots up{}, dn{};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fill_jets(up, grid[i], k1, k2, phi, var, 0.0, order_l);
    l0[i] = std::abs(cl(up));
    fill_jets(up, grid[i], k1, k2, phi, var, eps, order_l);
    fill_jets(dn, grid[i], k1, k2, phi, var, -eps, order_l);
    dl[i] = std::abs(cl(up) - cl(dn)) / (2 * eps);
  }
  const double scale = std::max({std::abs(out.numeric), std::abs(out.symbolic), ode::quadrature(dl, h),
                                ode::quadrature(l0, h), 1e-8});
  out.relative_error = std::abs(out.symbolic - out.numeric) / scale;
  return out;
}

jet::Expr random_polynomial_lagrangian(std::mt19937_64& rng, int max_order) {
  std::uniform_int_distribution<int> n_terms(2, 4), degree(1, 3), order(0, max_order), base(0, 1), coef(-3, 3);
  jet::Expr L;
  const int terms = n_terms(rng);
  for (int t = 0; t < terms; ++t) {
    int c = 0;
    while (c == 0) c = coef(rng);
    jet::Expr term = jet::Expr::constant(c);
    const int d = degree(rng);
    for (int k = 0; k < d; ++k) {
      const int o = order(rng);
      term = term * (base(rng) ? jet::Expr::k2(o) : jet::Expr::k1(o));
    }
    L = L + term;
  }
  return L;
}

RigidAlignment procrustes(std::span<const Vec3> from, std::span<const Vec3> to) {
  const std::size_t n = from.size();
  RigidAlignment r;
  if (n == 0 || to.size() != n) return r;
  Vec3 ca = Vec3::Zero(), cb = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    ca += from[i];
    cb += to[i];
  }
  ca /= static_cast<double>(n);
  cb /= static_cast<double>(n);
  Mat3 cov = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i) cov += (to[i] - cb) * (from[i] - ca).transpose();
  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0) d(2, 2) = -1.0;
  r.rotation = svd.matrixU() * d * svd.matrixV().transpose();
  r.translation = cb - r.rotation * ca;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = (r.rotation * from[i] + r.translation - to[i]).norm();
    sum += e * e;
    r.max_error = std::max(r.max_error, e);
  }
  r.rms = std::sqrt(sum / static_cast<double>(n));
  return r;
}

double torus_deviation(std::span<const Vec3> points, double major, double minor) {
  double d = 0.0;
  for (const auto& p : points) {
    const double rho = std::hypot(p.x(), p.y());
    d = std::max(d, std::abs(std::hypot(rho - major, p.z()) - minor));
  }
  return d;
}

}  // namespace rmf::checks
