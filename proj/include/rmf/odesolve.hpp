#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmf::ode {

using State = std::vector<double>;

/// Right-hand side y' = f(s, y). Writes f into `dy`, which has the same size as `y`.
using Rhs = std::function<void(double s, std::span<const double> y, std::span<double> dy)>;

/// Checked after every accepted step. Returning a message stops the integration
/// with Status::stopped and keeps everything computed so far.
using Guard = std::function<std::optional<std::string>(double s, std::span<const double> y)>;

enum class Method { rk4_fixed, rk45_adaptive };

enum class Status { ok, step_underflow, non_finite, stopped };

const char* to_string(Status status);

struct Tolerances {
  double abs = 1e-10;
  double rel = 1e-8;
};

struct OdeProblem {
  Rhs rhs;
  State y0;
  Tolerances tol;
  Guard guard;
  double max_step = 0.0;  // 0: unlimited (adaptive only)
  int substeps = 1;       // rk4_fixed: RK4 steps per grid interval
};

/// States on the requested grid. When the integration stops early, `s` and `y`
/// hold the prefix of the grid that was reached.
struct OdeSolution {
  std::vector<double> s;
  std::vector<State> y;
  Status status = Status::ok;
  std::string message;
  double s_reached = 0.0;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  bool ok() const { return status == Status::ok; }
};

class OdeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integrates `problem` from grid.front() to grid.back(). The grid must be
/// strictly monotone (increasing or decreasing) with at least one node.
/// rk4_fixed steps exactly between grid nodes; rk45_adaptive is Dormand-Prince
/// 5(4) with cubic Hermite dense output onto the grid.
OdeSolution integrate(const OdeProblem& problem, std::span<const double> grid,
                      Method method = Method::rk45_adaptive);

/// Uniform grid s0, s0 + h, ..., s0 + n h with n = floor((s1 - s0)/h + 1e-9). A
/// remainder shorter than h is dropped so the spacing is exactly h.
std::vector<double> uniform_grid(double s0, double s1, double h);

/// Cumulative integral of uniformly spaced samples, starting at 0 at the first
/// node. Composite Simpson; an odd number of intervals closes with the 3/8 rule.
/// Node 1 uses the fourth-order one-interval formula so every node is O(h^4).
std::vector<double> cumulative_quadrature(std::span<const double> f, double h);

/// Total integral with the same rule as cumulative_quadrature.
double quadrature(std::span<const double> f, double h);

}  // namespace rmf::ode
