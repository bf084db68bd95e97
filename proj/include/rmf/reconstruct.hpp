#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rmf/frames.hpp"
#include "rmf/variational.hpp"

namespace rmf::recon {

using var::Vec6;

class ReconstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neither factorization of the frame is usable at some node.
class CaseInadmissible : public ReconstructionError {
 public:
  CaseInadmissible(const std::string& what, double s) : ReconstructionError(what), s_(s) {}
  double s() const { return s_; }

 private:
  double s_;
};

/// Unit quaternion (x1 scalar part) to rotation matrix. The input is
/// renormalized; throws on the zero quaternion.
Mat3 cayley_phi(const Eigen::Vector4d& x);
/// Rotation by psi about `axis` (any nonzero length), via cayley_phi.
Mat3 rotation(double psi, const Vec3& axis);

enum class Case { one = 1, two = 2 };

/// Per-node invariant data used by the reconstruction.
struct NoetherInput {
  std::vector<double> s;
  double h = 0.0;
  std::vector<double> k1, k2;
  std::vector<Vec6> v;
};

NoetherInput noether_input(const var::ELSystem& sys, const var::InvariantTrajectory& traj);

/// The frame that maps c1 to w1 in the given case:
/// R(pi, w1 +- r e3) R(+-psi, e3) R(pi, c1 +- r e3), r = |c1|.
Mat3 case_frame(Case k, const Vec3& w1, const Vec3& c1, double psi);
/// Inverse of case_frame in psi for a frame of that form.
double case_angle(Case k, const Mat3& sigma, const Vec3& w1, const Vec3& c1);
/// d psi / ds in the given case.
double case_rate(Case k, const Vec3& w1, double r, double k1, double k2);

struct CaseSwitch {
  std::size_t node;
  double s;
  Case from, to;
  double jump;  // ||sigma_new - sigma_old|| at the switch node
};

struct SigmaOptions {
  double switch_fraction = 0.1;  // eps_switch = switch_fraction * |c1|
  double residual_tol = 1e-6;    // |sigma c1 - w1| reported above this
};

struct SigmaResult {
  frames::FrameField frame;
  std::vector<double> psi;
  std::vector<Case> cases;
  std::vector<CaseSwitch> switches;
  double max_c1_residual = 0.0;      // max |sigma c1 - w1|
  double max_orthonormality = 0.0;   // max ||sigma sigma^T - I||
  double max_switch_jump = 0.0;
  std::vector<std::string> warnings;
};

/// Frame from the Noether constants: psi by quadrature in the active case,
/// switching case when the active one leaves its admissible band.
SigmaResult reconstruct_sigma(const NoetherInput& in, const Vec6& c, double psi0, const SigmaOptions& opts = {});

struct PositionResult {
  frames::CurveSamples curve;
  std::vector<bool> algebraic;         // per node: X, Y from the algebraic formula
  double max_dual_path_difference = 0.0;
  std::vector<Vec3> quadrature_only;   // X, Y, Z all by quadrature
};

/// Z by quadrature of the third component of P'; X, Y from P x c1 = D c2 -
/// sigma^T D w2 while |c1z| >= eps_alg |c1|, else by quadrature. `c` must be
/// consistent with P(s0) = p0.
PositionResult reconstruct_position(const frames::FrameField& frame, const NoetherInput& in, const Vec6& c,
                                    const Vec3& p0 = Vec3::Zero(), double eps_alg = 1e-6);

struct DirectResult {
  frames::FrameField frame;
  frames::CurveSamples curve;
};

/// sigma' = Q(k1, k2) sigma by RK4, k1, k2 between nodes by cubic Hermite
/// interpolation (derivatives by finite differences when not given), P by
/// quadrature of the first row.
DirectResult reconstruct_direct(std::span<const double> s, std::span<const double> k1, std::span<const double> k2,
                                const Mat3& sigma0 = Mat3::Identity(), const Vec3& p0 = Vec3::Zero(),
                                std::span<const double> k1s = {}, std::span<const double> k2s = {});
DirectResult reconstruct_direct(const var::InvariantTrajectory& traj, const Mat3& sigma0 = Mat3::Identity(),
                                const Vec3& p0 = Vec3::Zero());

struct FirstIntegrals {
  std::vector<double> norm_w1;  // |w1|^2
  std::vector<double> pairing;  // w1^T D w2
  double norm_c1 = 0.0;         // |c1|^2
  double pairing_c = 0.0;       // c1^T D c2
  double max_relative_norm = 0.0;     // vs the value at s0
  double max_relative_pairing = 0.0;
  double max_relative_vs_c = 0.0;     // both integrals vs their values from c
};

FirstIntegrals first_integrals(std::span<const Vec6> v, const Vec6& c);

struct TwistStats {
  double max_angle = 0.0;   // largest angle between consecutive normals
  double mean_angle = 0.0;
};

TwistStats twist_metric(const frames::FrameField& frame);

/// max_i ||a_i - b_i||_F.
double frame_distance(const frames::FrameField& a, const frames::FrameField& b);

}  // namespace rmf::recon
