#include "rmf/odesolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rmf::ode {

const char* to_string(Status status) {
  switch (status) {
    case Status::ok:
      return "ok";
    case Status::step_underflow:
      return "step_underflow";
    case Status::non_finite:
      return "non_finite";
    case Status::stopped:
      return "stopped";
  }
  return "unknown";
}

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::string where(double s) {
  std::ostringstream os;
  os.precision(17);
  os << "s = " << s;
  return os.str();
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw OdeError("integrate: empty output grid");
  if (grid.size() == 1) return;
  const double dir = grid[1] > grid[0] ? 1.0 : -1.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!((grid[i] - grid[i - 1]) * dir > 0.0)) throw OdeError("integrate: grid is not strictly monotone");
  }
}

// Fixed-step classical Runge-Kutta.
OdeSolution integrate_rk4(const OdeProblem& p, std::span<const double> grid) {
  const std::size_t n = p.y0.size();
  OdeSolution out;
  out.s.push_back(grid[0]);
  out.y.push_back(p.y0);
  out.s_reached = grid[0];

  State y = p.y0, k1(n), k2(n), k3(n), k4(n), tmp(n);
  const int sub = std::max(1, p.substeps);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double h = (grid[i] - grid[i - 1]) / sub;
    double s = grid[i - 1];
    for (int j = 0; j < sub; ++j) {
      p.rhs(s, y, k1);
      for (std::size_t m = 0; m < n; ++m) tmp[m] = y[m] + 0.5 * h * k1[m];
      p.rhs(s + 0.5 * h, tmp, k2);
      for (std::size_t m = 0; m < n; ++m) tmp[m] = y[m] + 0.5 * h * k2[m];
      p.rhs(s + 0.5 * h, tmp, k3);
      for (std::size_t m = 0; m < n; ++m) tmp[m] = y[m] + h * k3[m];
      p.rhs(s + h, tmp, k4);
      for (std::size_t m = 0; m < n; ++m) tmp[m] = y[m] + h / 6.0 * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
      s = (j + 1 == sub) ? grid[i] : s + h;
      if (!all_finite(tmp)) {
        out.status = Status::non_finite;
        out.message = "non-finite state at " + where(s);
        return out;
      }
      y = tmp;
      ++out.accepted_steps;
    }
    out.s.push_back(grid[i]);
    out.y.push_back(y);
    out.s_reached = grid[i];
    if (p.guard) {
      if (auto msg = p.guard(grid[i], y)) {
        out.status = Status::stopped;
        out.message = *msg;
        return out;
      }
    }
  }
  return out;
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

OdeSolution integrate_rk45(const OdeProblem& p, std::span<const double> grid) {
  const std::size_t n = p.y0.size();
  OdeSolution out;
  out.s.push_back(grid[0]);
  out.y.push_back(p.y0);
  out.s_reached = grid[0];
  if (grid.size() == 1) return out;

  const double s_end = grid.back();
  const double dir = s_end > grid[0] ? 1.0 : -1.0;
  const double span = std::abs(s_end - grid[0]);

  State y = p.y0, f0(n), k2(n), k3(n), k4(n), k5(n), k6(n), f1(n), y1(n), tmp(n);
  double s = grid[0];
  p.rhs(s, y, f0);
  if (!all_finite(f0)) {
    out.status = Status::non_finite;
    out.message = "non-finite right-hand side at " + where(s);
    return out;
  }

  // Initial step from the usual norm heuristic.
  auto scaled_norm = [&](std::span<const double> v, std::span<const double> ref) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      const double sc = p.tol.abs + p.tol.rel * std::abs(ref[m]);
      acc += (v[m] / sc) * (v[m] / sc);
    }
    return n ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
  };
  double h;
  {
    const double d0 = scaled_norm(y, y), d1 = scaled_norm(f0, y);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, span);
    if (p.max_step > 0) h = std::min(h, p.max_step);
  }

  std::size_t next = 1;
  bool last_rejection_non_finite = false;
  const double h_min_abs = 16.0 * std::numeric_limits<double>::epsilon();
  while (next < grid.size()) {
    if (p.max_step > 0) h = std::min(h, p.max_step);
    const double remaining = std::abs(s_end - s);
    if (h >= remaining) h = remaining;
    if (h < h_min_abs * std::max(1.0, std::abs(s))) {
      if (last_rejection_non_finite) {
        out.status = Status::non_finite;
        out.message = "non-finite right-hand side near " + where(s);
      } else {
        out.status = Status::step_underflow;
        out.message = "step size underflow at " + where(s);
      }
      return out;
    }
    const double hs = dir * h;

    for (std::size_t m = 0; m < n; ++m) tmp[m] = y[m] + hs * a21 * f0[m];
    p.rhs(s + c2 * hs, tmp, k2);
    for (std::size_t m = 0; m < n; ++m) tmp[m] = y[m] + hs * (a31 * f0[m] + a32 * k2[m]);
    p.rhs(s + c3 * hs, tmp, k3);
    for (std::size_t m = 0; m < n; ++m) tmp[m] = y[m] + hs * (a41 * f0[m] + a42 * k2[m] + a43 * k3[m]);
    p.rhs(s + c4 * hs, tmp, k4);
    for (std::size_t m = 0; m < n; ++m)
      tmp[m] = y[m] + hs * (a51 * f0[m] + a52 * k2[m] + a53 * k3[m] + a54 * k4[m]);
    p.rhs(s + c5 * hs, tmp, k5);
    for (std::size_t m = 0; m < n; ++m)
      tmp[m] = y[m] + hs * (a61 * f0[m] + a62 * k2[m] + a63 * k3[m] + a64 * k4[m] + a65 * k5[m]);
    p.rhs(s + hs, tmp, k6);
    for (std::size_t m = 0; m < n; ++m)
      y1[m] = y[m] + hs * (b1 * f0[m] + b3 * k3[m] + b4 * k4[m] + b5 * k5[m] + b6 * k6[m]);
    const double s1 = (h == remaining) ? s_end : s + hs;
    p.rhs(s1, y1, f1);

    bool finite = all_finite(y1) && all_finite(f1);
    double err = std::numeric_limits<double>::infinity();
    if (finite) {
      for (std::size_t m = 0; m < n; ++m)
        tmp[m] = hs * (e1 * f0[m] + e3 * k3[m] + e4 * k4[m] + e5 * k5[m] + e6 * k6[m] + e7 * f1[m]);
      double acc = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        const double sc = p.tol.abs + p.tol.rel * std::max(std::abs(y[m]), std::abs(y1[m]));
        acc += (tmp[m] / sc) * (tmp[m] / sc);
      }
      err = n ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
    }

    if (!finite || err > 1.0) {
      ++out.rejected_steps;
      last_rejection_non_finite = !finite;
      const double factor = finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
      h *= factor;
      continue;
    }

    last_rejection_non_finite = false;
    // Accepted: emit every grid node inside (s, s1] by cubic Hermite.
    while (next < grid.size() && (grid[next] - s1) * dir <= 0.0) {
      const double sg = grid[next];
      State yg(n);
      if (sg == s1) {
        yg = y1;
      } else {
        const double theta = (sg - s) / hs;
        const double t2 = theta * theta, t3 = t2 * theta;
        const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + theta, h01 = -2 * t3 + 3 * t2,
                     h11 = t3 - t2;
        for (std::size_t m = 0; m < n; ++m) yg[m] = h00 * y[m] + h10 * hs * f0[m] + h01 * y1[m] + h11 * hs * f1[m];
      }
      out.s.push_back(sg);
      out.y.push_back(std::move(yg));
      ++next;
    }

    s = s1;
    y.swap(y1);
    f0.swap(f1);
    out.s_reached = s;
    ++out.accepted_steps;

    if (p.guard) {
      if (auto msg = p.guard(s, y)) {
        out.status = Status::stopped;
        out.message = *msg;
        return out;
      }
    }
    const double factor = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
    h *= factor;
  }
  return out;
}

}  // namespace

OdeSolution integrate(const OdeProblem& problem, std::span<const double> grid, Method method) {
  if (!problem.rhs) throw OdeError("integrate: missing right-hand side");
  check_grid(grid);
  return method == Method::rk4_fixed ? integrate_rk4(problem, grid) : integrate_rk45(problem, grid);
}

std::vector<double> uniform_grid(double s0, double s1, double h) {
  if (!(h > 0.0)) throw OdeError("uniform_grid: step must be positive");
  std::vector<double> g;
  const double span = s1 - s0;
  if (span < 0.0) throw OdeError("uniform_grid: s1 < s0");
  const auto n = static_cast<std::size_t>(std::floor(span / h + 1e-9));
  g.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) g.push_back(s0 + static_cast<double>(i) * h);
  return g;
}

std::vector<double> cumulative_quadrature(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw std::invalid_argument("quadrature: need at least 3 nodes");
  std::vector<double> out(n, 0.0);
  // Even nodes: composite Simpson from 0.
  for (std::size_t i = 2; i < n; i += 2) out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
  // Node 1: cubic through nodes 0..3 (needs n >= 4); quadratic otherwise.
  if (n >= 4) {
    out[1] = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
  } else {
    out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
  }
  // Odd nodes >= 3: Simpson to i-3, then Simpson's 3/8 over the last three intervals.
  for (std::size_t i = 3; i < n; i += 2) {
    out[i] = out[i - 3] + 3.0 * h / 8.0 * (f[i - 3] + 3.0 * f[i - 2] + 3.0 * f[i - 1] + f[i]);
  }
  return out;
}

double quadrature(std::span<const double> f, double h) { return cumulative_quadrature(f, h).back(); }

}  // namespace rmf::ode
