#include <doctest.h>

#include <random>

#include "rmf/checks/oracles.hpp"
#include "rmf/jet_expr.hpp"
#include "rmf/jet_json.hpp"

using namespace rmf::jet;

TEST_CASE("parse and print round trip") {
  for (const char* text : {"(k2/k1)^2/2", "k1*D(k2,1) - D(k1,1)*k2", "D(k1,1)*D(k2,2) - D(k1,2)*D(k2,1)",
                           "k1^(3/2) + 0.25*k2", "-(k1 - 2)^3/(1 + k2^2)", "D(k1*k2, 2)"}) {
    const Expr e = parse_lagrangian(text);
    CHECK(equivalent(parse_lagrangian(e.str()), e));
    CHECK(equivalent(expr_from_json(to_json(e)), e));
  }
}

TEST_CASE("D applied symbolically") {
  CHECK(equivalent(parse_lagrangian("D(k1*k2, 1)"), Expr::k1(1) * Expr::k2() + Expr::k1() * Expr::k2(1)));
  CHECK(equivalent(parse_lagrangian("D(k1^2, 2)"), Expr::constant(2) * (Expr::k1(1) * Expr::k1(1) + Expr::k1() * Expr::k1(2))));
  CHECK(equivalent(total_derivative(parse_lagrangian("1/k1")), -Expr::k1(1) / pow(Expr::k1(), 2)));
}

TEST_CASE("canonical simplification decides zero") {
  CHECK(parse_lagrangian("(k1 + k2)^2 - k1^2 - 2*k1*k2 - k2^2").is_zero());
  CHECK(parse_lagrangian("k1/k1 - 1").is_zero());
  CHECK_FALSE(parse_lagrangian("k1 - k2").is_zero());
  CHECK(equivalent(simplify(parse_lagrangian("k1*k1*k1")), pow(Expr::k1(), 3)));
}

TEST_CASE("parser rejects bad input with an offset") {
  CHECK_THROWS_AS(parse_lagrangian("k1 +* k2"), ParseError);
  CHECK_THROWS_AS(parse_lagrangian("k3"), ParseError);
  CHECK_THROWS_AS(parse_lagrangian("mu*k1"), ParseError);
  CHECK_NOTHROW(parse_expression("mu*k1", {8, true}));
  try {
    parse_lagrangian("k1 + )");
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 5);
  }
}

TEST_CASE("Euler operator of simple Lagrangians") {
  const Expr elastic = parse_lagrangian("(k1^2 + k2^2)/2");
  CHECK(equivalent(euler_operator(elastic, Base::kappa1), Expr::k1()));
  CHECK(equivalent(euler_operator(elastic, Base::kappa2), Expr::k2()));
  // E(k1_s^2/2) = -k1_ss
  CHECK(equivalent(euler_operator(parse_lagrangian("D(k1,1)^2/2"), Base::kappa1), -Expr::k1(2)));
  // Null Lagrangian: a total derivative has zero Euler operator.
  CHECK(euler_operator(parse_lagrangian("D(k1*k2^2, 1)"), Base::kappa1).is_zero());
  CHECK(euler_operator(parse_lagrangian("D(k1*k2^2, 1)"), Base::kappa2).is_zero());
}

TEST_CASE("lambda closed form satisfies D lambda = -k1 D E1 - k2 D E2") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 5; ++i) {
    const Expr L = rmf::checks::random_polynomial_lagrangian(rng, 2);
    const Expr lam = lambda_closed_form(L);
    const Expr rhs = -Expr::k1() * total_derivative(euler_operator(L, Base::kappa1)) -
                     Expr::k2() * total_derivative(euler_operator(L, Base::kappa2));
    CHECK(equivalent(total_derivative(lam), rhs));
  }
  // Zero order: lambda = L - k1 E1 - k2 E2.
  CHECK(equivalent(lambda_closed_form(parse_lagrangian("(k1^2+k2^2)/2")), parse_lagrangian("-(k1^2+k2^2)/2")));
  CHECK(equivalent(lambda_closed_form(parse_lagrangian("(k2/k1)^2/2")), parse_lagrangian("(k2/k1)^2/2")));
}

TEST_CASE("total derivatives integrate back") {
  const Expr f = parse_lagrangian("k1^2*D(k2,1) + k2/k1");
  const auto back = integrate_total_derivative(total_derivative(f));
  REQUIRE(back);
  CHECK(equivalent(total_derivative(*back), total_derivative(f)));
  CHECK_FALSE(integrate_total_derivative(Expr::k1()).has_value());
}

TEST_CASE("evaluation") {
  JetPoint p;
  p.set({Base::kappa1, 0}, 2.0);
  p.set({Base::kappa2, 0}, 3.0);
  p.set({Base::kappa1, 1}, 0.5);
  const Expr e = parse_lagrangian("k1^2*k2 + D(k1,1)/k1");
  CHECK(evaluate(e, p) == doctest::Approx(12.25));
  const CompiledExpr c(e);
  CHECK(c(p.dense()) == doctest::Approx(12.25));
  CHECK_THROWS_AS(evaluate(parse_lagrangian("D(k2,1)"), p), EvaluationError);
  JetPoint z;
  z.set({Base::kappa1, 0}, 0.0);
  CHECK_THROWS_AS(evaluate(parse_lagrangian("1/k1"), z), EvaluationError);
  CHECK(!std::isfinite(CompiledExpr(parse_lagrangian("1/k1")).eval_unchecked(z.dense())));
}

TEST_CASE("rational exponents and constants stay exact") {
  const Expr e = parse_lagrangian("k1^(1/2)*k1^(1/2)");
  CHECK(equivalent(e, Expr::k1()));
  CHECK(parse_lagrangian("0.1 + 0.2 - 0.3").is_zero());
  CHECK(parse_lagrangian("3/4").constant_value().value() == 0.75);
}
