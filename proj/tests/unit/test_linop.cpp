#include <doctest.h>

#include <cmath>

#include "rmf/jet_expr.hpp"
#include "rmf/linop.hpp"
#include "rmf/odesolve.hpp"

using namespace rmf;
using jet::Expr;
using linop::ScalarOp;

TEST_CASE("scalar operator application and composition") {
  const Expr f = Expr::k2();
  // (D o k1) applied to k2 = D(k1 k2)
  CHECK(jet::equivalent(ScalarOp::d_after(Expr::k1()).apply(f), jet::total_derivative(Expr::k1() * Expr::k2())));
  CHECK(jet::equivalent(ScalarOp::d(2).apply(f), Expr::k2(2)));
  CHECK(jet::equivalent((ScalarOp::mul(Expr::k1()) + ScalarOp::d()).apply(f), Expr::k1() * f + Expr::k2(1)));
  CHECK(ScalarOp::d_after(Expr::k1(), 2).order() == 2);
}

TEST_CASE("formal adjoint: (a D^k)* = (-1)^k D^k o a and involution") {
  const ScalarOp op = ScalarOp::mul(Expr::k1()) + ScalarOp::d_after(Expr::k2(), 1) + ScalarOp::d(2);
  CHECK(linop::equivalent(linop::adjoint(linop::adjoint(op)), op));
  CHECK(linop::equivalent(linop::adjoint(ScalarOp::d()), -ScalarOp::d()));
  const auto H = linop::syzygy_operator();
  CHECK(linop::equivalent(linop::adjoint(linop::adjoint(H)), H));
  CHECK_FALSE(linop::equivalent(linop::adjoint(H, true), linop::adjoint(H)));
}

TEST_CASE("symbolic Lagrange identity: f H g - (H* f) g is a total derivative") {
  const auto H = linop::syzygy_operator();
  const auto Hs = linop::adjoint(H);
  const linop::ExprVec g{Expr::k1() * Expr::k2(), Expr::k2(1), Expr::k1(), Expr::constant(1)};
  const linop::ExprVec f{Expr::k2(), Expr::k1() * Expr::k1(), Expr::k1(2), Expr::k2() * Expr::k2()};
  const auto Hg = linop::apply(H, g), Hsf = linop::apply(Hs, f);
  Expr diff;
  for (int i = 0; i < 4; ++i) diff = diff + f[i] * Hg[i] - Hsf[i] * g[i];
  CHECK(jet::euler_operator(diff, jet::Base::kappa1).is_zero());
  CHECK(jet::euler_operator(diff, jet::Base::kappa2).is_zero());
}

TEST_CASE("grid operator matches the symbolic operator on smooth fields") {
  const double h = 1e-3;
  const auto s = ode::uniform_grid(0.0, 2.0, h);
  std::vector<double> k1(s.size()), k2(s.size());
  linop::GridOperator::Field phi;
  for (auto& c : phi) c.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    k1[i] = 1.0 + 0.3 * std::sin(s[i]);
    k2[i] = 0.5 * std::cos(2 * s[i]);
    phi[0][i] = std::sin(s[i]);
    phi[1][i] = s[i] * s[i];
    phi[2][i] = std::exp(-s[i]);
    phi[3][i] = std::cos(s[i]);
  }
  const auto G = linop::syzygy_grid_operator(k1, k2, h);
  const auto out = G.apply(phi);
  // Row 2 of H: D(k1 phi0) + phi1'' + k2 phi3
  double err = 0.0;
  for (std::size_t i = 10; i + 10 < s.size(); ++i) {
    const double x = s[i];
    const double k1v = 1.0 + 0.3 * std::sin(x), k1d = 0.3 * std::cos(x);
    const double expect = k1d * std::sin(x) + k1v * std::cos(x) + 2.0 + 0.5 * std::cos(2 * x) * std::cos(x);
    err = std::max(err, std::abs(out[1][i] - expect));
  }
  CHECK(err < 1e-8);
  CHECK_THROWS_AS(linop::syzygy_grid_operator(std::vector<double>(3, 1.0), std::vector<double>(3, 0.0), h),
                  std::invalid_argument);
}
