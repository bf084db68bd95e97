#include <cmath>
#include <set>

#include "jet_canonical.hpp"

namespace rmf::jet {

using detail::Node;
using detail::Rational;
using detail::RatFunc;

const char* base_name(Base b) {
  switch (b) {
    case Base::kappa1: return "k1";
    case Base::kappa2: return "k2";
    case Base::mu: return "mu";
    case Base::lambda: return "lambda";
  }
  return "?";
}

namespace detail {

namespace {

std::shared_ptr<const RatFunc> combine(const Node& n, std::string& reason) {
  for (const Expr& c : n.children) {
    if (!c.node().canon) {
      reason = c.node().unsupported_reason;
      return nullptr;
    }
  }
  try {
    switch (n.kind) {
      case Expr::Kind::constant:
        return std::make_shared<RatFunc>(RatFunc::from_poly(poly_const(n.value)));
      case Expr::Kind::variable:
        return std::make_shared<RatFunc>(RatFunc::from_poly(poly_var(n.var)));
      case Expr::Kind::sum: {
        RatFunc acc = RatFunc::from_poly({});
        for (const Expr& c : n.children) acc = rf_add(acc, *c.node().canon);
        return std::make_shared<RatFunc>(std::move(acc));
      }
      case Expr::Kind::product: {
        RatFunc acc = RatFunc::from_poly(poly_const(1));
        for (const Expr& c : n.children) acc = rf_mul(acc, *c.node().canon);
        return std::make_shared<RatFunc>(std::move(acc));
      }
      case Expr::Kind::quotient:
        return std::make_shared<RatFunc>(rf_div(*n.children[0].node().canon, *n.children[1].node().canon));
      case Expr::Kind::power:
        return std::make_shared<RatFunc>(rf_pow(*n.children[0].node().canon, n.value));
    }
  } catch (const UnsupportedExpression& e) {
    reason = e.what();
  }
  return nullptr;
}

Expr finish(Node n, std::shared_ptr<const RatFunc> canon = nullptr) {
  if (canon) {
    n.canon = std::move(canon);
  } else {
    n.canon = combine(n, n.unsupported_reason);
  }
  return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr make_var(JetVar v) {
  if (v.order < 0 || v.order > kMaxStorageOrder) throw std::invalid_argument("jet variable order out of range");
  Node n;
  n.kind = Expr::Kind::variable;
  n.var = v;
  return finish(std::move(n));
}

Expr make_nary(Expr::Kind kind, std::vector<Expr> children) {
  Node n;
  n.kind = kind;
  n.children = std::move(children);
  return finish(std::move(n));
}

Expr make_power(const Expr& base, const Rational& e) {
  Node n;
  n.kind = Expr::Kind::power;
  n.children = {base};
  n.value = e;
  return finish(std::move(n));
}

Expr make_quotient(const Expr& a, const Expr& b) {
  Node n;
  n.kind = Expr::Kind::quotient;
  n.children = {a, b};
  return finish(std::move(n));
}

Expr product_of(std::vector<Expr> factors) {
  if (factors.empty()) return make_constant(1);
  if (factors.size() == 1) return factors.front();
  return make_nary(Expr::Kind::product, std::move(factors));
}

Expr poly_to_tree(const Poly& p) {
  std::vector<Expr> terms;
  for (const auto& [m, c] : p) {
    std::vector<Expr> up, down;
    for (const auto& [v, e] : m) {
      Expr x = make_var(v);
      const Rational a = e > 0 ? e : Rational(-e);
      Expr f = a == 1 ? x : make_power(x, a);
      (e > 0 ? up : down).push_back(f);
    }
    if (c != 1 || up.empty()) up.insert(up.begin(), make_constant(c));
    Expr t = product_of(std::move(up));
    if (!down.empty()) t = make_quotient(t, product_of(std::move(down)));
    terms.push_back(t);
  }
  if (terms.empty()) return make_constant(0);
  if (terms.size() == 1) return terms.front();
  return make_nary(Expr::Kind::sum, std::move(terms));
}

}  // namespace

Expr make_constant(const Rational& r) {
  Node n;
  n.kind = Expr::Kind::constant;
  n.value = r;
  return finish(std::move(n));
}

const RatFunc& canonical(const Expr& e) {
  if (!e.node().canon) throw UnsupportedExpression(e.node().unsupported_reason + " in " + e.str());
  return *e.node().canon;
}

Expr from_canonical(const RatFunc& rf) {
  auto canon = std::make_shared<const RatFunc>(rf);
  Expr top = poly_to_tree(rf.num);
  if (!rf.is_poly()) {
    Node n;
    n.kind = Expr::Kind::quotient;
    n.children = {top, poly_to_tree(rf.den)};
    return finish(std::move(n), canon);
  }
  Node n = top.node();
  return finish(std::move(n), canon);
}

}  // namespace detail

using detail::canonical;
using detail::from_canonical;

// ---- Expr basics ----

Expr::Expr() : Expr(detail::make_constant(0)) {}

Expr Expr::constant(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  return detail::make_constant(Rational(num) / Rational(den));
}

Expr Expr::decimal(std::string_view literal) { return detail::make_constant(detail::parse_decimal(literal)); }

Expr Expr::var(JetVar v) { return detail::make_var(v); }

Expr::Kind Expr::kind() const { return node_->kind; }
const std::vector<Expr>& Expr::children() const { return node_->children; }
JetVar Expr::variable() const { return node_->var; }
std::string Expr::rational_text() const { return detail::rational_str(node_->value); }
bool Expr::canonical_ok() const { return node_->canon != nullptr; }

bool Expr::is_zero() const { return canonical(*this).is_zero(); }

std::optional<double> Expr::constant_value() const {
  if (!node_->canon) return std::nullopt;
  auto c = node_->canon->constant();
  if (!c) return std::nullopt;
  return detail::to_double(*c);
}

namespace {

std::vector<Expr> flatten(Expr::Kind kind, const Expr& a, const Expr& b) {
  std::vector<Expr> out;
  for (const Expr* x : {&a, &b}) {
    if (x->kind() == kind) {
      out.insert(out.end(), x->children().begin(), x->children().end());
    } else {
      out.push_back(*x);
    }
  }
  return out;
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) { return detail::make_nary(Expr::Kind::sum, flatten(Expr::Kind::sum, a, b)); }

Expr operator-(const Expr& a) {
  if (a.kind() == Expr::Kind::constant) return detail::make_constant(-a.node().value);
  std::vector<Expr> f{Expr::constant(-1)};
  if (a.kind() == Expr::Kind::product) {
    f.insert(f.end(), a.children().begin(), a.children().end());
  } else {
    f.push_back(a);
  }
  return detail::make_nary(Expr::Kind::product, std::move(f));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  return detail::make_nary(Expr::Kind::product, flatten(Expr::Kind::product, a, b));
}

Expr operator/(const Expr& a, const Expr& b) { return detail::make_quotient(a, b); }

Expr pow(const Expr& base, std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator in exponent");
  return detail::make_power(base, Rational(num) / Rational(den));
}

Expr pow(const Expr& base, const Expr& exponent) {
  const RatFunc& c = canonical(exponent);
  auto v = c.constant();
  if (!v) throw UnsupportedExpression("exponent must be a constant: " + exponent.str());
  return detail::make_power(base, *v);
}

// ---- printing ----

namespace {

bool negative_leading(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::constant: return e.node().value < 0;
    case Expr::Kind::product:
    case Expr::Kind::quotient: return negative_leading(e.children().front());
    default: return false;
  }
}

// e with its leading constant negated; only valid when negative_leading(e).
Expr flip_leading(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::constant: return detail::make_constant(-e.node().value);
    case Expr::Kind::product: {
      std::vector<Expr> f = e.children();
      Expr head = flip_leading(f.front());
      if (head.kind() == Expr::Kind::constant && head.node().value == 1 && f.size() > 1) {
        f.erase(f.begin());
      } else {
        f.front() = head;
      }
      return f.size() == 1 ? f.front() : detail::make_nary(Expr::Kind::product, std::move(f));
    }
    case Expr::Kind::quotient:
      return detail::make_quotient(flip_leading(e.children()[0]), e.children()[1]);
    default: return e;
  }
}

std::string var_text(JetVar v, bool pretty) {
  std::string name = base_name(v.base);
  if (v.order == 0) return name;
  if (pretty) return name + "_" + std::string(static_cast<std::size_t>(v.order), 's');
  return "D(" + name + "," + std::to_string(v.order) + ")";
}

// 1 sum, 2 product/quotient, 3 power, 4 atom
int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::sum: return 1;
    case Expr::Kind::product:
    case Expr::Kind::quotient: return 2;
    case Expr::Kind::power: return 3;
    case Expr::Kind::constant:
      if (e.node().value < 0) return 2;
      return detail::is_integer(e.node().value) ? 4 : 2;
    case Expr::Kind::variable: return 4;
  }
  return 4;
}

std::string print(const Expr& e, bool pretty);

std::string wrap(const Expr& e, int need, bool pretty) {
  std::string s = print(e, pretty);
  return precedence(e) < need ? "(" + s + ")" : s;
}

std::string print(const Expr& e, bool pretty) {
  switch (e.kind()) {
    case Expr::Kind::constant: return detail::rational_str(e.node().value);
    case Expr::Kind::variable: return var_text(e.variable(), pretty);
    case Expr::Kind::sum: {
      std::string out;
      bool first = true;
      for (const Expr& c : e.children()) {
        if (first) {
          out += wrap(c, 1, pretty);
        } else if (negative_leading(c)) {
          out += " - " + wrap(flip_leading(c), 2, pretty);
        } else {
          out += " + " + wrap(c, 2, pretty);
        }
        first = false;
      }
      return out;
    }
    case Expr::Kind::product: {
      std::string out;
      const auto& ch = e.children();
      std::size_t start = 0;
      if (ch.size() > 1 && ch[0].kind() == Expr::Kind::constant && ch[0].node().value == -1) {
        out = "-";
        start = 1;
      }
      for (std::size_t i = start; i < ch.size(); ++i) {
        if (i > start) out += "*";
        const bool lead = i == start;
        if (!lead && negative_leading(ch[i])) {
          out += "(" + print(ch[i], pretty) + ")";
        } else {
          out += wrap(ch[i], lead && start == 0 ? 2 : 3, pretty);
        }
      }
      return out;
    }
    case Expr::Kind::quotient: {
      const Expr& a = e.children()[0];
      const Expr& b = e.children()[1];
      return wrap(a, 2, pretty) + "/" + wrap(b, 3, pretty);
    }
    case Expr::Kind::power: {
      const Rational& x = e.node().value;
      std::string ex = detail::rational_str(x);
      if (x < 0 || !detail::is_integer(x)) ex = "(" + ex + ")";
      return wrap(e.children()[0], 4, pretty) + "^" + ex;
    }
  }
  return "?";
}

}  // namespace

std::string Expr::str() const { return print(*this, false); }
std::string Expr::pretty() const { return print(*this, true); }

// ---- algebra and calculus ----

Expr simplify(const Expr& e) { return from_canonical(canonical(e)); }

bool equivalent(const Expr& a, const Expr& b) { return detail::rf_equal(canonical(a), canonical(b)); }

bool structurally_equal(const Expr& a, const Expr& b) {
  const Node& x = a.node();
  const Node& y = b.node();
  if (&x == &y) return true;
  if (x.kind != y.kind || x.children.size() != y.children.size()) return false;
  switch (x.kind) {
    case Expr::Kind::constant:
      if (x.value != y.value) return false;
      break;
    case Expr::Kind::variable:
      if (x.var != y.var) return false;
      break;
    case Expr::Kind::power:
      if (x.value != y.value) return false;
      break;
    default: break;
  }
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (!structurally_equal(x.children[i], y.children[i])) return false;
  return true;
}

Expr total_derivative(const Expr& e, int n) {
  if (n < 0) throw std::invalid_argument("negative derivative order");
  RatFunc r = canonical(e);
  for (int i = 0; i < n; ++i) r = detail::rf_total_derivative(r);
  return from_canonical(r);
}

Expr partial(const Expr& e, JetVar v) { return from_canonical(detail::rf_partial(canonical(e), v)); }

Expr substitute(const Expr& e, JetVar v, const Expr& replacement) {
  return from_canonical(detail::rf_substitute(canonical(e), v, canonical(replacement)));
}

Expr substitute(const Expr& e, Base b, const Expr& replacement) {
  RatFunc r = canonical(e);
  const int top = max_order(e, b);
  RatFunc rep = canonical(replacement);
  std::vector<RatFunc> derivs{rep};
  for (int k = 1; k <= top; ++k) derivs.push_back(detail::rf_total_derivative(derivs.back()));
  // Highest orders first so replacements never reintroduce a pending variable.
  for (int k = top; k >= 0; --k) r = detail::rf_substitute(r, {b, k}, derivs[k]);
  return from_canonical(r);
}

int max_order(const Expr& e, Base b) {
  int top = -1;
  for (JetVar v : detail::rf_variables(canonical(e)))
    if (v.base == b) top = std::max(top, v.order);
  return top;
}

int max_order(const Expr& e) {
  int top = -1;
  for (JetVar v : detail::rf_variables(canonical(e))) top = std::max(top, v.order);
  return top;
}

std::vector<JetVar> variables(const Expr& e) { return detail::rf_variables(canonical(e)); }

namespace {

int order_in(const RatFunc& r, Base b) {
  int top = -1;
  for (JetVar v : detail::rf_variables(r))
    if (v.base == b) top = std::max(top, v.order);
  return top;
}

RatFunc euler_rf(const RatFunc& L, Base b) {
  RatFunc acc = RatFunc::from_poly({});
  const int top = order_in(L, b);
  for (int n = 0; n <= top; ++n) {
    RatFunc term = detail::rf_partial(L, {b, n});
    for (int i = 0; i < n; ++i) term = detail::rf_total_derivative(term);
    acc = (n % 2 == 0) ? detail::rf_add(acc, term) : detail::rf_sub(acc, term);
  }
  return acc;
}

}  // namespace

Expr euler_operator(const Expr& L, Base b) { return from_canonical(euler_rf(canonical(L), b)); }

Expr lambda_closed_form(const Expr& L, const Expr& integration_constant) {
  const RatFunc& l = canonical(L);
  RatFunc acc = detail::rf_add(l, canonical(integration_constant));
  for (Base b : {Base::kappa1, Base::kappa2}) {
    acc = detail::rf_sub(acc, detail::rf_mul(RatFunc::from_poly(detail::poly_var({b, 0})), euler_rf(l, b)));
    const int top = order_in(l, b);
    for (int m = 1; m <= top; ++m) {
      RatFunc d = detail::rf_partial(l, {b, m});
      for (int k = 0; k < m; ++k) {
        RatFunc t = detail::rf_mul(d, RatFunc::from_poly(detail::poly_var({b, m - k})));
        acc = (k % 2 == 0) ? detail::rf_sub(acc, t) : detail::rf_add(acc, t);
        d = detail::rf_total_derivative(d);
      }
    }
  }
  return from_canonical(acc);
}

Expr mu_rhs(const Expr& L) {
  const RatFunc& l = canonical(L);
  RatFunc k1 = RatFunc::from_poly(detail::poly_var({Base::kappa1, 0}));
  RatFunc k2 = RatFunc::from_poly(detail::poly_var({Base::kappa2, 0}));
  return from_canonical(
      detail::rf_sub(detail::rf_mul(euler_rf(l, Base::kappa1), k2), detail::rf_mul(euler_rf(l, Base::kappa2), k1)));
}

std::optional<Expr> integrate_total_derivative(const Expr& e) {
  if (!e.canonical_ok()) return std::nullopt;
  const RatFunc& r = canonical(e);
  if (!r.is_poly()) return std::nullopt;
  detail::Poly p = r.num;
  detail::Poly F;
  for (int iter = 0; iter < 256 && !p.empty(); ++iter) {
    int top = -1;
    std::set<JetVar> vars;
    for (const auto& [m, c] : p)
      for (const auto& [v, x] : m) {
        vars.insert(v);
        top = std::max(top, v.order);
      }
    if (top < 1) return std::nullopt;
    bool progressed = false;
    for (JetVar u : vars) {
      if (u.order != top) continue;
      bool linear = true;
      for (const auto& [m, c] : p) {
        Rational x = detail::mono_exponent(m, u);
        if (x != 0 && x != 1) linear = false;
      }
      if (!linear) continue;
      detail::Poly B = detail::poly_coefficient(p, u, 1);
      bool low = true;
      for (const auto& [m, c] : B)
        for (const auto& [v, x] : m)
          if (v.order > top - 1) low = false;
      if (!low) continue;
      const JetVar w{u.base, top - 1};
      detail::Poly G;
      bool ok = true;
      for (const auto& [m, c] : B) {
        Rational x = detail::mono_exponent(m, w);
        if (x == -1) {
          ok = false;
          break;
        }
        G.emplace(detail::mono_mul(m, detail::Monomial{{w, Rational(1)}}), c / (x + 1));
      }
      if (!ok) continue;
      // G.emplace may collide only if two monomials of B coincide, which map keys rule out.
      p = detail::poly_sub(p, detail::poly_total_derivative(G));
      F = detail::poly_add(F, G);
      progressed = true;
      break;
    }
    if (!progressed) return std::nullopt;
  }
  if (!p.empty()) return std::nullopt;
  return from_canonical(RatFunc::from_poly(std::move(F)));
}

// ---- evaluation ----

void JetPoint::set(JetVar v, double x) {
  if (v.order < 0 || v.order > kMaxStorageOrder) throw std::out_of_range("jet order out of range");
  values_[slot(v)] = x;
  present_.set(slot(v));
}

bool JetPoint::has(JetVar v) const {
  return v.order >= 0 && v.order <= kMaxStorageOrder && present_.test(slot(v));
}

double JetPoint::get(JetVar v) const {
  if (!has(v)) throw EvaluationError("missing variable " + var_text(v, true));
  return values_[slot(v)];
}

namespace {

double eval_tree(const Expr& e, const JetPoint& p) {
  const Node& n = e.node();
  switch (n.kind) {
    case Expr::Kind::constant: return detail::to_double(n.value);
    case Expr::Kind::variable: return p.get(n.var);
    case Expr::Kind::sum: {
      double acc = 0.0;
      for (const Expr& c : n.children) acc += eval_tree(c, p);
      return acc;
    }
    case Expr::Kind::product: {
      double acc = 1.0;
      for (const Expr& c : n.children) acc *= eval_tree(c, p);
      return acc;
    }
    case Expr::Kind::quotient: {
      const double den = eval_tree(n.children[1], p);
      if (den == 0.0) throw EvaluationError("division by zero: " + n.children[1].pretty() + " = 0");
      return eval_tree(n.children[0], p) / den;
    }
    case Expr::Kind::power: {
      const double b = eval_tree(n.children[0], p);
      const double x = detail::to_double(n.value);
      if (b == 0.0 && x < 0) throw EvaluationError("division by zero: " + n.children[0].pretty() + " = 0");
      if (b < 0.0 && !detail::is_integer(n.value))
        throw EvaluationError("fractional power of negative value: " + n.children[0].pretty());
      return std::pow(b, x);
    }
  }
  return 0.0;
}

}  // namespace

double evaluate(const Expr& e, const JetPoint& p) {
  if (auto c = e.constant_value()) return *c;
  return eval_tree(e, p);
}

namespace {

std::vector<CompiledExpr::Term> compile_poly(const detail::Poly& poly) {
  std::vector<CompiledExpr::Term> out;
  for (const auto& [m, c] : poly) {
    CompiledExpr::Term t{detail::to_double(c), {}};
    for (const auto& [v, x] : m) {
      CompiledExpr::Factor f{slot(v), 0, detail::to_double(x), detail::is_integer(x)};
      if (f.is_int) f.int_exp = static_cast<int>(boost::multiprecision::numerator(x));
      t.factors.push_back(f);
    }
    out.push_back(std::move(t));
  }
  return out;
}

inline double ipow(double b, int n) {
  double r = 1.0;
  int k = n < 0 ? -n : n;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return n < 0 ? 1.0 / r : r;
}

double eval_terms(const std::vector<CompiledExpr::Term>& terms, std::span<const double> s) {
  double acc = 0.0;
  for (const auto& t : terms) {
    double v = t.coef;
    for (const auto& f : t.factors) v *= f.is_int ? ipow(s[f.slot], f.int_exp) : std::pow(s[f.slot], f.real_exp);
    acc += v;
  }
  return acc;
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e) {
  const RatFunc& r = canonical(e);
  num_ = compile_poly(r.num);
  if (!r.is_poly()) {
    den_ = compile_poly(r.den);
    den_text_ = from_canonical(RatFunc::from_poly(r.den)).pretty();
  }
}

double CompiledExpr::eval_unchecked(std::span<const double> slots) const {
  const double n = eval_terms(num_, slots);
  if (den_.empty()) return n;
  return n / eval_terms(den_, slots);
}

double CompiledExpr::operator()(std::span<const double> slots) const {
  for (const auto* terms : {&num_, &den_})
    for (const auto& t : *terms)
      for (const auto& f : t.factors)
        if (slots[f.slot] == 0.0 && f.real_exp < 0) {
          const int b = f.slot / (kMaxStorageOrder + 1);
          const int o = f.slot % (kMaxStorageOrder + 1);
          throw EvaluationError("division by zero: " + var_text({static_cast<Base>(b), o}, true) + " = 0");
        }
  if (den_.empty()) return eval_terms(num_, slots);
  const double d = eval_terms(den_, slots);
  if (d == 0.0) throw EvaluationError("division by zero: " + den_text_ + " = 0");
  return eval_terms(num_, slots) / d;
}

}  // namespace rmf::jet
