#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rmf/jet_expr.hpp"

namespace rmf::linop {

/// Scalar differential operator sum_k a_k D^k with jet-expression coefficients.
class ScalarOp {
 public:
  ScalarOp() = default;
  static ScalarOp mul(const jet::Expr& a);              // a D^0
  static ScalarOp d(int k = 1);                         // D^k
  static ScalarOp d_after(const jet::Expr& a, int k = 1);  // D^k o a

  ScalarOp& add(int k, const jet::Expr& a);

  const std::map<int, jet::Expr>& coeffs() const { return coeffs_; }
  int order() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }
  bool is_zero() const { return coeffs_.empty(); }

  jet::Expr apply(const jet::Expr& f) const;
  std::string pretty() const;

 private:
  std::map<int, jet::Expr> coeffs_;  // simplified, zero entries dropped
};

ScalarOp operator+(const ScalarOp& a, const ScalarOp& b);
ScalarOp operator-(const ScalarOp& a);
bool equivalent(const ScalarOp& a, const ScalarOp& b);

/// Formal adjoint: (a D^k)* = (-1)^k D^k o a. With `flip_sign` the odd terms
/// keep their sign, which is wrong and exists for mutation testing.
ScalarOp adjoint(const ScalarOp& op, bool flip_sign = false);

using OpMatrix = std::array<std::array<ScalarOp, 4>, 4>;
using ExprVec = std::array<jet::Expr, 4>;

/// Entrywise adjoint followed by transpose.
OpMatrix adjoint(const OpMatrix& m, bool flip_sign = false);
ExprVec apply(const OpMatrix& m, const ExprVec& f);
bool equivalent(const OpMatrix& a, const OpMatrix& b);
std::string pretty(const OpMatrix& m);

/// Syzygy operator of the RM frame invariants, acting on
/// (X_t, Y_t, Z_t, V3_t) invariantized evolution components:
///   [ D        -k1     -k2    0    ]
///   [ D o k1    D^2     0     k2   ]
///   [ D o k2    0       D^2  -k1   ]
///   [ 0        -k2 D    k1 D  D    ]
OpMatrix syzygy_operator();

/// An OpMatrix evaluated on a uniform grid. Coefficients are evaluated from
/// per-node jet values; D^k by central finite differences of the requested
/// accuracy (one-sided near the ends).
class GridOperator {
 public:
  using Field = std::array<std::vector<double>, 4>;

  GridOperator(const OpMatrix& op, std::map<jet::JetVar, std::vector<double>> jets, double h, int accuracy = 4);

  Field apply(const Field& phi) const;
  std::size_t size() const { return n_; }
  double h() const { return h_; }
  /// Nodes at each end whose values use one-sided stencils.
  int boundary_width() const;

 private:
  OpMatrix op_;
  std::map<jet::JetVar, std::vector<double>> jets_;
  double h_;
  int accuracy_;
  std::size_t n_;
};

/// Grid form of syzygy_operator() (or its adjoint) from sampled k1, k2.
/// Coefficient derivatives come from finite differences of the samples unless
/// `jets` already holds them. Throws std::invalid_argument for grids shorter
/// than the stencil.
GridOperator syzygy_grid_operator(std::span<const double> k1, std::span<const double> k2, double h,
                                  int accuracy = 4, bool adjoint_op = false, bool flip_sign = false);

/// Jet arrays k_b, k_b', ..., up to `order`, by finite differences.
std::map<jet::JetVar, std::vector<double>> finite_difference_jets(std::span<const double> k1,
                                                                  std::span<const double> k2, double h,
                                                                  int order, int accuracy = 4);

}  // namespace rmf::linop
