#pragma once

#include <array>
#include <bitset>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rmf::jet {

enum class Base : std::uint8_t { kappa1, kappa2, mu, lambda };

/// Variable name in the input grammar: k1, k2, mu, lambda.
const char* base_name(Base b);

/// A jet coordinate: `order` s-derivatives of `base`.
struct JetVar {
  Base base = Base::kappa1;
  int order = 0;

  auto operator<=>(const JetVar&) const = default;
};

/// Highest derivative order a JetPoint can hold.
inline constexpr int kMaxStorageOrder = 24;
inline constexpr int kSlotCount = 4 * (kMaxStorageOrder + 1);

inline int slot(JetVar v) { return static_cast<int>(v.base) * (kMaxStorageOrder + 1) + v.order; }

namespace detail {
struct Node;
}

/// Immutable expression tree over jet variables. Every node carries its
/// canonical form (expanded rational function), so equivalence tests and
/// calculus never re-walk the tree.
class Expr {
 public:
  enum class Kind { constant, variable, sum, product, power, quotient };

  Expr();  // the constant 0

  static Expr constant(std::int64_t num, std::int64_t den = 1);
  /// Exact value of a decimal literal such as "0.25" or "1e-3".
  static Expr decimal(std::string_view literal);
  static Expr var(JetVar v);
  static Expr k1(int order = 0) { return var({Base::kappa1, order}); }
  static Expr k2(int order = 0) { return var({Base::kappa2, order}); }
  static Expr mu(int order = 0) { return var({Base::mu, order}); }
  static Expr lambda(int order = 0) { return var({Base::lambda, order}); }

  Kind kind() const;
  const std::vector<Expr>& children() const;
  /// Only for Kind::variable.
  JetVar variable() const;
  /// Constant value as "p" or "p/q" (Kind::constant), or the exponent (Kind::power).
  std::string rational_text() const;

  /// True when the expression has a canonical form. Fractional powers of
  /// sums are representable as trees but not supported by the calculus.
  bool canonical_ok() const;
  bool is_zero() const;
  /// Value when the canonical form is a constant.
  std::optional<double> constant_value() const;

  /// Input-grammar form, parseable by parse_expression.
  std::string str() const;
  /// Compact display form using k1_ss style names.
  std::string pretty() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator-=(const Expr& b) { return *this = *this - b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

  const detail::Node& node() const { return *node_; }
  explicit Expr(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const detail::Node> node_;
};

Expr pow(const Expr& base, std::int64_t num, std::int64_t den = 1);
/// Power with an exponent expression that must reduce to a rational constant.
Expr pow(const Expr& base, const Expr& exponent);

class UnsupportedExpression : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Expanded, collected form rebuilt as a tree. simplify(simplify(e)) is
/// structurally equal to simplify(e).
Expr simplify(const Expr& e);
/// a - b simplifies to 0.
bool equivalent(const Expr& a, const Expr& b);
/// Exact tree equality (no algebra).
bool structurally_equal(const Expr& a, const Expr& b);

/// d^n/ds^n with every JetVar(b, k) advancing to JetVar(b, k + 1).
Expr total_derivative(const Expr& e, int n = 1);
Expr partial(const Expr& e, JetVar v);
/// Replaces JetVar(b, k) by D^k(replacement) for every k.
Expr substitute(const Expr& e, Base b, const Expr& replacement);
/// Replaces exactly the variable v.
Expr substitute(const Expr& e, JetVar v, const Expr& replacement);

/// Highest order of `b` in e, or -1 when absent.
int max_order(const Expr& e, Base b);
/// Highest order over all bases, or -1 for constants.
int max_order(const Expr& e);
std::vector<JetVar> variables(const Expr& e);

/// E^b(L) = sum_n (-1)^n D^n dL/d(b_n).
Expr euler_operator(const Expr& L, Base b);
/// Multiplier for the arc-length constraint:
/// -k1 E1 - k2 E2 + L - sum_{m>=1} sum_{k<m} (-1)^k [D^k(dL/dk1_m) k1_{m-k} + D^k(dL/dk2_m) k2_{m-k}] + C.
Expr lambda_closed_form(const Expr& L, const Expr& integration_constant = Expr());
/// mu_s = E1 k2 - E2 k1.
Expr mu_rhs(const Expr& L);
/// F with D(F) = e, found by peeling off the highest derivative repeatedly.
/// Returns nullopt when the heuristic gets stuck.
std::optional<Expr> integrate_total_derivative(const Expr& e);

/// Numeric values for jet variables.
class JetPoint {
 public:
  JetPoint() { values_.fill(0.0); }
  void set(JetVar v, double x);
  bool has(JetVar v) const;
  double get(JetVar v) const;
  std::span<const double> dense() const { return values_; }

 private:
  std::array<double, kSlotCount> values_{};
  std::bitset<kSlotCount> present_;
};

/// Tree evaluation. Throws EvaluationError naming the missing variable or the
/// subexpression that vanishes in a denominator.
double evaluate(const Expr& e, const JetPoint& p);

/// Flattened canonical form for repeated evaluation on dense slot arrays
/// (index = slot(var)).
class CompiledExpr {
 public:
  CompiledExpr() = default;
  explicit CompiledExpr(const Expr& e);

  double operator()(std::span<const double> slots) const;
  /// Same, but returns a non-finite value for a zero denominator instead of throwing.
  double eval_unchecked(std::span<const double> slots) const;

  struct Factor {
    int slot;
    int int_exp;       // used when is_int
    double real_exp;
    bool is_int;
  };
  struct Term {
    double coef;
    std::vector<Factor> factors;
  };

 private:
  std::vector<Term> num_;
  std::vector<Term> den_;  // empty: denominator 1
  std::string den_text_;
};

struct ParseOptions {
  int max_order = 8;
  bool allow_multipliers = false;  // accept mu and lambda
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Grammar (see docs/grammar.md): identifiers k1, k2; D(expr, n); + - * / ^;
/// parentheses; decimal literals. D is applied symbolically.
Expr parse_lagrangian(std::string_view text, const ParseOptions& opts = {});
/// Same grammar with mu and lambda accepted.
Expr parse_expression(std::string_view text, ParseOptions opts = {});

}  // namespace rmf::jet
