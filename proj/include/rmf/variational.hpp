#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmf/frames.hpp"
#include "rmf/jet_expr.hpp"
#include "rmf/linop.hpp"
#include "rmf/odesolve.hpp"

namespace rmf::var {

using jet::Expr;
using jet::JetVar;

class NonSolvableTopOrder : public std::runtime_error {
 public:
  NonSolvableTopOrder(const std::string& why, std::string matrix)
      : std::runtime_error(why + "\n" + matrix), matrix_(std::move(matrix)) {}
  const std::string& matrix() const { return matrix_; }

 private:
  std::string matrix_;
};

class VariationalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Euler-Lagrange system of an invariant Lagrangian L(k1, k2, k1_s, ...)
/// under the arc-length and RM constraints.
struct ELSystem {
  Expr lagrangian;
  Expr e1, e2;                 // E^{k1}(L), E^{k2}(L)
  Expr lambda;                 // closed form including the constant
  Expr lambda_constant;
  Expr mu_s;                   // E^{k1} k2 - E^{k2} k1
  std::optional<Expr> mu_closed;  // antiderivative of mu_s when the heuristic finds one

  /// H*(lambda, E1, E2, mu) with lambda and mu as symbols: (E^X, E^Y, E^Z, E^V3).
  linop::ExprVec raw;
  /// Same with lambda replaced by its closed form and mu_s by mu_rhs. E^X and
  /// E^V3 vanish identically; E^Y, E^Z are the equations to integrate.
  linop::ExprVec reduced;

  /// True when L does not depend on k1, k2: the state is held constant.
  bool trivial = false;
  int order1 = 0, order2 = 0;  // highest derivative of k1, k2 in E^Y, E^Z
  Expr top1, top2;             // k1^(order1), k2^(order2) solved from E^Y = E^Z = 0
  Expr top_det;                // determinant of the top-derivative coefficient matrix
  std::array<std::array<Expr, 2>, 2> top_matrix;

  /// k1, ..., k1^(order1-1), k2, ..., k2^(order2-1), mu
  std::vector<JetVar> state;

  /// State names: k1, k1_s, k1_ss, ..., mu.
  std::vector<std::string> state_names() const;
  /// Human-readable equations.
  std::string text() const;
};

/// Builds the system from H*, substitutes lambda and mu_s and solves for the
/// top derivatives. Throws NonSolvableTopOrder when the top-derivative
/// coefficient matrix is identically singular or the equations are not
/// linear in the top derivatives.
ELSystem assemble_el_system(const Expr& L, const Expr& lambda_constant = Expr());

/// Name of a jet variable as used in IC maps and CSV headers: k1, k1_s, k1_ss, mu.
std::string jet_name(JetVar v);
/// Accepts k1, k1_s, k1_ss, k1_3, mu, lambda, ...
std::optional<JetVar> parse_jet_name(const std::string& name);

/// mu at the initial point from the closed form of mu (zero constant), when
/// mu_s integrates and `ics` gives every jet it needs.
std::optional<double> closed_form_mu(const ELSystem& sys, const std::map<std::string, double>& ics);

struct SolveOptions {
  ode::Method method = ode::Method::rk4_fixed;
  int substeps = 1;
  ode::Tolerances tol{1e-12, 1e-10};
  double singular_eps = 1e-6;     // |denominator variable| floor
  double det_eps = 1e-14;         // |top determinant| floor
  double blowup = 1e8;            // max |state component|
  int extra_orders = 2;           // jets beyond the state kept per node
  /// Integrates sigma' = Q sigma and P' = sigma row 1 alongside the invariants.
  bool carry_frame = false;
  Mat3 sigma0 = Mat3::Identity();
  Vec3 p0 = Vec3::Zero();
};

/// Numerical solution of an ELSystem with full jets per node.
struct InvariantTrajectory {
  std::vector<double> s;
  double h = 0.0;
  std::vector<JetVar> state_vars;
  std::vector<std::vector<double>> state;     // per node
  std::vector<std::array<double, jet::kSlotCount>> jets;  // per node, indexed by jet::slot
  int jet_order1 = 0, jet_order2 = 0;          // k1, k2 orders present in jets
  std::vector<double> k1, k2, mu, lambda;
  ode::Status status = ode::Status::ok;
  bool truncated = false;
  std::string message;
  std::vector<std::string> warnings;
  std::vector<Mat3> sigma;      // with SolveOptions::carry_frame
  std::vector<Vec3> position;

  std::size_t size() const { return s.size(); }
  bool has_frame() const { return !s.empty() && sigma.size() == s.size(); }
  /// Value of a jet variable at node i.
  double at(std::size_t i, JetVar v) const { return jets[i][jet::slot(v)]; }
};

/// Integrates from s0 over `span` with spacing ds. `ics` must name every
/// state variable; unknown names are reported as warnings. A singularity
/// (vanishing denominator, singular top matrix, blow-up) truncates the
/// trajectory with status stopped and a diagnostic message.
InvariantTrajectory solve_el(const ELSystem& sys, const std::map<std::string, double>& ics, double s0,
                             double span, double ds, const SolveOptions& opts = {});

/// Builds a trajectory from prescribed k1, k2 samples (jets by finite
/// differences) and mu samples, evaluating lambda and extended jets from sys.
InvariantTrajectory trajectory_from_samples(const ELSystem& sys, std::span<const double> k1,
                                            std::span<const double> k2, std::span<const double> mu, double s0,
                                            double h);

/// v(I) = (lambda, -D E1 - mu k2, -D E2 + mu k1, mu, E2, E1), lambda substituted.
std::array<Expr, 6> noether_vector(const Expr& L, const Expr& lambda_constant = Expr());
std::array<Expr, 6> noether_vector(const ELSystem& sys);

/// v(I) evaluated at every node of a trajectory.
std::vector<std::array<double, 6>> noether_values(const ELSystem& sys, const InvariantTrajectory& traj);

using Vec6 = std::array<double, 6>;

struct NoetherState {
  std::array<Expr, 6> v;
  std::vector<Vec6> v_values;
  std::vector<Vec6> c_values;  // Ad(rho)^{-1} v per node
  Vec6 c{};                    // median over nodes
  Vec6 drift{};                // max_i |c_k(s_i) - c_k|
  double relative_drift = 0.0; // max_k drift_k / max(1, ||c||_inf)
};

/// c1 = sigma^T w1, c2 = D (P x c1) + D sigma^T D w2, D = diag(1, -1, 1),
/// with w1 = v[0..2], w2 = v[3..5].
Vec6 adjoint_transform(const Mat3& sigma, const Vec3& p, const Vec6& v);
/// The 6x6 matrix of adjoint_transform.
Eigen::Matrix<double, 6, 6> adjoint_matrix(const Mat3& sigma, const Vec3& p);

NoetherState conservation_constants(const ELSystem& sys, const InvariantTrajectory& traj,
                                    const frames::FrameField& frame, const frames::CurveSamples& curve);
/// Uses the frame and curve carried by the trajectory.
NoetherState conservation_constants(const ELSystem& sys, const InvariantTrajectory& traj);

/// d/ds v = M(k1, k2) v along extremals, M = [[Q, 0], [-D[e1 x], D Q D]] with
/// Q the RM curvature matrix.
Eigen::Matrix<double, 6, 6> noether_matrix(double k1, double k2);

struct DiffvReport {
  bool rows56_symbolic_zero = false;
  std::array<double, 6> max_residual{};  // per row, numeric, interior nodes
  std::array<Expr, 6> symbolic_residual;  // with mu_s kept symbolic
};

/// Residual of d/ds v(I) - M v(I). Rows 5-6 vanish identically; rows 1-4 on
/// extremals only. `fd_derivative` differentiates v numerically instead of
/// symbolically (needed for trajectories that are not EL solutions).
DiffvReport check_diffv(const ELSystem& sys, const InvariantTrajectory& traj, bool fd_derivative = false);

/// Residuals of E^Y, E^Z along a trajectory with the top derivatives taken by
/// finite differences of the state (independent of the solved top expression).
std::array<double, 2> el_residuals(const ELSystem& sys, const InvariantTrajectory& traj);

/// Two-parameter family of curves P(s, t) with a normal field V(s, t) solving
/// the RM equation in s for every t; s is arc length for every t.
struct CurveFamily {
  std::string name;
  std::function<Vec3(double s, double t)> P;
  std::function<Vec3(double s, double t)> V;
};

/// Helix of radius a with pitch b(t) = b0 + b1 sin(t), arc-length parametrized,
/// with its closed-form RM normal.
CurveFamily helix_pitch_family(double a = 1.0, double b0 = 1.0, double b1 = 0.5);
/// R(t) P(s) + a(t) applied to a fixed helix.
CurveFamily rigid_motion_family();
/// A helix that does not depend on t.
CurveFamily static_family();

/// Invariantized evolution components (X_t, Y_t, Z_t, V3_t) per node.
struct EvolutionField {
  std::vector<double> s;
  std::array<std::vector<double>, 4> components;
};

EvolutionField evolution_field(const CurveFamily& fam, double s0, double s1, double t, double ds, double dt);

struct CompatibilityReport {
  double max_residual = 0.0;
  std::array<double, 4> row_max{};
  std::size_t nodes = 0;
};

/// Compares d/dt of (X', Y'', Z'', V3') invariants with H applied to the
/// evolution components, all by second-order central differences.
CompatibilityReport check_syzygy_compatibility(const CurveFamily& fam, double s0, double s1, double t0, double ds,
                                               double dt);

}  // namespace rmf::var
