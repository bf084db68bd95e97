#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rmf/curves.hpp"

namespace rmf::frames {

/// Curve sampled on a uniform arc-length grid.
struct CurveSamples {
  std::vector<double> s;
  double h = 0.0;
  std::vector<Vec3> p;
  std::vector<Vec3> d1, d2, d3;  // P', P'', P'''; d3 may be empty
  /// Arc-length parametrized source (s -> P), when known. Used for exact
  /// values between nodes.
  std::shared_ptr<const curves::ParametricCurve> source;

  std::size_t size() const { return s.size(); }
  bool has_third() const { return d3.size() == s.size() && !s.empty(); }
};

/// Exact samples of an arc-length parametrized curve on s0, s0 + h, ..., s1.
CurveSamples sample(std::shared_ptr<const curves::ParametricCurve> arclength_curve, double s0, double s1,
                    double h);
/// Arc-length samples of a curve given in any regular parametrization,
/// starting at t0 and covering `length`.
CurveSamples sample_curve(std::shared_ptr<const curves::ParametricCurve> curve, double t0, double length,
                          double h);
/// Chord-length spline through raw samples, resampled at uniform arc length
/// `target_ds` (the last spacing is shortened to end at the total length when
/// needed, so the grid stays uniform by dropping the remainder).
CurveSamples reparametrize_arclength(std::span<const Vec3> raw, double target_ds);
/// Samples already on a uniform arc-length grid; derivatives by fourth-order
/// finite differences.
CurveSamples from_uniform_samples(std::span<const Vec3> points, double h, double s0 = 0.0);

enum class FrameKind { frenet_serret, rotation_minimizing };
const char* to_string(FrameKind k);

/// Rows of sigma are (P', normal, P' x normal).
struct FrameField {
  FrameKind kind = FrameKind::rotation_minimizing;
  std::vector<Mat3> sigma;

  std::size_t size() const { return sigma.size(); }
  Vec3 row(std::size_t i, int r) const { return sigma[i].row(r).transpose(); }
};

struct GaugeData {
  std::vector<double> kappa, tau, theta;  // Frenet-Serret
  std::vector<double> kappa1, kappa2;     // rotation minimizing
};

class InflectionPoint : public std::runtime_error {
 public:
  InflectionPoint(std::size_t node, double s, double curvature);
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

class FrameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FrenetResult {
  FrameField frame;
  GaugeData gauge;  // kappa, tau
};

/// Frenet-Serret frame; tau from the curvature matrix entry N'.B (triple
/// product with P''' when available, else finite differences of the frame).
FrenetResult frenet_frame(const CurveSamples& c, double eps_inflection = 1e-8);

struct RmOptions {
  bool reproject = true;   // Gram-Schmidt V against P' after every step
  int substeps = 1;        // RK4 steps per grid interval
  double ic_tol = 1e-10;
};

/// Integrates V' = -(P''.V) P' with RK4 from V(s0) = V0.
FrameField rm_frame_integrate(const CurveSamples& c, const Vec3& V0, const RmOptions& opts = {});

/// Unit normal orthogonal to P'(s0) obtained by rotating a reference
/// normal by psi0 about P'(s0). The reference is the component of the
/// coordinate axis least aligned with P'.
Vec3 initial_normal(const CurveSamples& c, double psi0);

/// kappa1 = P''.V, kappa2 = P''.(P' x V), plus theta = atan2(kappa2, kappa1)
/// unwrapped and kappa = |(kappa1, kappa2)|.
GaugeData rm_invariants(const FrameField& f, const CurveSamples& c);

struct GaugeReport {
  double max_kappa_residual = 0.0;   // |kappa_fs - sqrt(k1^2 + k2^2)|
  double max_tau_residual = 0.0;     // |tau_fs - (k1 k2' - k1' k2)/kappa^2|
  double max_theta_residual = 0.0;   // |theta' - tau_fs|
  std::size_t skipped_nodes = 0;     // kappa below threshold
  std::vector<double> kappa_residual, tau_residual, theta_residual;  // NaN where skipped
};

/// Pointwise residuals of kappa1 = kappa cos(theta), kappa2 = kappa sin(theta),
/// theta' = tau and tau = (k1 k2' - k1' k2)/kappa^2. Derivatives by fourth
/// order finite differences on the grid spacing h.
GaugeReport gauge_relations(const GaugeData& fs, const GaugeData& rm, double h, double kappa_min = 1e-6);

/// W = cos(psi0) V + sin(psi0) P' x V.
FrameField rm_family(const FrameField& f, double psi0);

/// sigma' sigma^T per node, sigma' by fourth-order finite differences.
std::vector<Mat3> curvature_matrices(const FrameField& f, double h);

struct FrameDiagnostics {
  double max_orthonormality = 0.0;   // ||sigma sigma^T - I||_inf
  double max_det_error = 0.0;        // |det sigma - 1|
  double max_skew = 0.0;             // ||C + C^T||_inf, C = sigma' sigma^T
  double max_rm_entry = 0.0;         // |C(1,2)| (zero based), the RM constraint
  double max_fs_entry = 0.0;         // |C(0,2)|, zero for Frenet-Serret
  double max_v_dot_t = 0.0;          // |V.P'|
  double max_v_norm = 0.0;           // ||V| - 1|
};

/// `boundary` nodes at each end are left out of the curvature-matrix maxima.
FrameDiagnostics diagnose(const FrameField& f, const CurveSamples& c, int boundary = 2);

/// Theta unwrapped by nearest-angle continuation.
std::vector<double> unwrap(std::span<const double> angles);

}  // namespace rmf::frames
