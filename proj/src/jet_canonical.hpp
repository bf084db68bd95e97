#pragma once

// Canonical algebra behind rmf::jet::Expr: Laurent polynomials with rational
// exponents over jet variables, and quotients of them.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rmf/jet_expr.hpp"

namespace rmf::jet::detail {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Sorted by variable, exponents nonzero.
using Monomial = std::vector<std::pair<JetVar, Rational>>;

Monomial mono_mul(const Monomial& a, const Monomial& b);
Monomial mono_pow(const Monomial& m, const Rational& e);
Rational mono_exponent(const Monomial& m, JetVar v);
Monomial mono_without(const Monomial& m, JetVar v);

using Poly = std::map<Monomial, Rational>;

Poly poly_const(const Rational& c);
Poly poly_var(JetVar v);
bool poly_is_zero(const Poly& p);
bool poly_is_one(const Poly& p);
std::optional<Rational> poly_constant(const Poly& p);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_scale(const Poly& a, const Rational& c);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_mul_mono(const Poly& a, const Monomial& m);
Poly poly_pow(const Poly& a, long n);  // n >= 0
Poly poly_partial(const Poly& p, JetVar v);
Poly poly_total_derivative(const Poly& p);
/// Coefficient of v^k: the part of p whose exponent of v equals k, with v removed.
Poly poly_coefficient(const Poly& p, JetVar v, const Rational& k);

/// num / den with den normalized: first term has coefficient 1 and the
/// monomial content of den is moved into num. A single-term den is always
/// folded into num, so den == 1 for every Laurent polynomial.
struct RatFunc {
  Poly num;
  Poly den;

  static RatFunc from_poly(Poly p);
  static RatFunc make(Poly num, Poly den);  // normalizes; throws on den == 0

  bool is_zero() const { return num.empty(); }
  bool is_poly() const;  // den == 1
  std::optional<Rational> constant() const;
};

RatFunc rf_add(const RatFunc& a, const RatFunc& b);
RatFunc rf_sub(const RatFunc& a, const RatFunc& b);
RatFunc rf_neg(const RatFunc& a);
RatFunc rf_mul(const RatFunc& a, const RatFunc& b);
RatFunc rf_div(const RatFunc& a, const RatFunc& b);
/// Integer powers always; rational powers only of c * monomial with c = 1
/// (or c > 0 when the root of c is rational). Throws UnsupportedExpression.
RatFunc rf_pow(const RatFunc& a, const Rational& e);
RatFunc rf_partial(const RatFunc& a, JetVar v);
RatFunc rf_total_derivative(const RatFunc& a);
RatFunc rf_substitute(const RatFunc& a, JetVar v, const RatFunc& r);
bool rf_equal(const RatFunc& a, const RatFunc& b);
std::vector<JetVar> rf_variables(const RatFunc& a);

/// Exact rational from a decimal literal; throws std::invalid_argument.
Rational parse_decimal(std::string_view text);
std::string rational_str(const Rational& r);
double to_double(const Rational& r);
bool is_integer(const Rational& r);

struct Node {
  Expr::Kind kind = Expr::Kind::constant;
  Rational value;  // constant value, or exponent for power
  JetVar var;
  std::vector<Expr> children;
  std::shared_ptr<const RatFunc> canon;  // null when unsupported
  std::string unsupported_reason;
};

/// Canonical form of e; throws UnsupportedExpression when it has none.
const RatFunc& canonical(const Expr& e);
Expr from_canonical(const RatFunc& rf);
Expr make_constant(const Rational& r);

}  // namespace rmf::jet::detail
