#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rmf/curves.hpp"
#include "rmf/jet_expr.hpp"

namespace rmf::checks {

/// c0 + sum_k a_k cos(w_k s) + b_k sin(w_k s), with exact derivatives.
struct Trig {
  double c0 = 0.0;
  std::vector<double> a, b, w;

  double derivative(double s, int m) const;
  static Trig random(std::mt19937_64& rng, int modes);
};

/// (1 - x^2)^p on |x| < 1 with x = (s - center) / width, zero outside.
struct Bump {
  double center = 0.0, width = 1.0;
  int power = 8;

  double derivative(double s, int m) const;
};

struct GateauxComparison {
  double symbolic = 0.0;   // integral of E(L) * phi
  double numeric = 0.0;    // d/d eps of the integral of L(k + eps phi)
  double relative_error = 0.0;  // over max(|numeric|, |symbolic|, int |dL/d eps|, int |L|)
};

/// Directional derivative of the functional L in the direction `phi` applied
/// to one of k1, k2, by fourth-order central differences in eps and Simpson
/// quadrature with spacing h over the support of phi, compared with the
/// symbolic Euler operator.
GateauxComparison gateaux_compare(const jet::Expr& L, jet::Base var, const Trig& k1, const Trig& k2,
                                  const Bump& phi, double eps = 1e-3, double h = 1e-3);

/// Random polynomial Lagrangian in k1, k2 and their derivatives up to
/// `max_order`, with 2 to 4 terms of degree 1 to 3 and small integer
/// coefficients.
jet::Expr random_polynomial_lagrangian(std::mt19937_64& rng, int max_order = 3);

/// Best rigid motion x -> R x + t taking `from` onto `to` in the least-squares
/// sense (SVD of the cross covariance).
struct RigidAlignment {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double rms = 0.0;
  double max_error = 0.0;
};

RigidAlignment procrustes(std::span<const Vec3> from, std::span<const Vec3> to);

/// Largest distance of the points from the torus with major radius R about
/// the z axis and minor radius r.
double torus_deviation(std::span<const Vec3> points, double major, double minor);

}  // namespace rmf::checks
