#include "jet_canonical.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

namespace rmf::jet::detail {

namespace {

JetVar next_order(JetVar v) {
  if (v.order + 1 > kMaxStorageOrder)
    throw UnsupportedExpression("derivative order exceeds " + std::to_string(kMaxStorageOrder));
  return {v.base, v.order + 1};
}

void add_term(Poly& p, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = p.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

}  // namespace

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      Rational e = a[i].second + b[j].second;
      if (e != 0) out.emplace_back(a[i].first, std::move(e));
      ++i;
      ++j;
    }
  }
  return out;
}

Monomial mono_pow(const Monomial& m, const Rational& e) {
  if (e == 0) return {};
  Monomial out = m;
  for (auto& [v, x] : out) x *= e;
  return out;
}

Rational mono_exponent(const Monomial& m, JetVar v) {
  for (const auto& [u, e] : m)
    if (u == v) return e;
  return 0;
}

Monomial mono_without(const Monomial& m, JetVar v) {
  Monomial out;
  for (const auto& t : m)
    if (t.first != v) out.push_back(t);
  return out;
}

Poly poly_const(const Rational& c) {
  Poly p;
  if (c != 0) p.emplace(Monomial{}, c);
  return p;
}

Poly poly_var(JetVar v) {
  Poly p;
  p.emplace(Monomial{{v, Rational(1)}}, Rational(1));
  return p;
}

bool poly_is_zero(const Poly& p) { return p.empty(); }

bool poly_is_one(const Poly& p) { return p.size() == 1 && p.begin()->first.empty() && p.begin()->second == 1; }

std::optional<Rational> poly_constant(const Poly& p) {
  if (p.empty()) return Rational(0);
  if (p.size() == 1 && p.begin()->first.empty()) return p.begin()->second;
  return std::nullopt;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b) add_term(out, m, c);
  return out;
}

Poly poly_sub(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b) add_term(out, m, -c);
  return out;
}

Poly poly_neg(const Poly& a) {
  Poly out = a;
  for (auto& [m, c] : out) c = -c;
  return out;
}

Poly poly_scale(const Poly& a, const Rational& c) {
  if (c == 0) return {};
  Poly out = a;
  for (auto& [m, x] : out) x *= c;
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) add_term(out, mono_mul(ma, mb), ca * cb);
  return out;
}

Poly poly_mul_mono(const Poly& a, const Monomial& m) {
  Poly out;
  for (const auto& [ma, ca] : a) out.emplace(mono_mul(ma, m), ca);
  return out;
}

Poly poly_pow(const Poly& a, long n) {
  Poly result = poly_const(1);
  Poly base = a;
  while (n > 0) {
    if (n & 1) result = poly_mul(result, base);
    n >>= 1;
    if (n > 0) base = poly_mul(base, base);
  }
  return result;
}

Poly poly_partial(const Poly& p, JetVar v) {
  Poly out;
  for (const auto& [m, c] : p) {
    Rational e = mono_exponent(m, v);
    if (e == 0) continue;
    add_term(out, mono_mul(m, Monomial{{v, Rational(-1)}}), c * e);
  }
  return out;
}

Poly poly_total_derivative(const Poly& p) {
  Poly out;
  for (const auto& [m, c] : p) {
    for (const auto& [v, e] : m) {
      Monomial dm = mono_mul(m, Monomial{{v, Rational(-1)}});
      dm = mono_mul(dm, Monomial{{next_order(v), Rational(1)}});
      add_term(out, dm, c * e);
    }
  }
  return out;
}

Poly poly_coefficient(const Poly& p, JetVar v, const Rational& k) {
  Poly out;
  for (const auto& [m, c] : p)
    if (mono_exponent(m, v) == k) add_term(out, mono_without(m, v), c);
  return out;
}

RatFunc RatFunc::from_poly(Poly p) { return RatFunc{std::move(p), poly_const(1)}; }

RatFunc RatFunc::make(Poly num, Poly den) {
  if (den.empty()) throw UnsupportedExpression("division by zero");
  if (num.empty()) return RatFunc{{}, poly_const(1)};
  if (den.size() == 1) {
    const auto& [m, c] = *den.begin();
    return RatFunc{poly_scale(poly_mul_mono(num, mono_pow(m, -1)), 1 / c), poly_const(1)};
  }
  // Pull the monomial content of den (minimum exponent of each variable) into num.
  std::map<JetVar, Rational> lowest;
  std::set<JetVar> seen;
  for (const auto& [m, c] : den)
    for (const auto& [v, e] : m) seen.insert(v);
  for (JetVar v : seen) {
    Rational lo = 0;
    bool first = true;
    for (const auto& [m, c] : den) {
      Rational e = mono_exponent(m, v);
      if (first || e < lo) lo = e;
      first = false;
    }
    if (lo != 0) lowest[v] = lo;
  }
  if (!lowest.empty()) {
    Monomial inv;
    for (const auto& [v, lo] : lowest) inv.emplace_back(v, -lo);
    num = poly_mul_mono(num, inv);
    den = poly_mul_mono(den, inv);
  }
  const Rational lc = den.begin()->second;
  if (lc != 1) {
    num = poly_scale(num, 1 / lc);
    den = poly_scale(den, 1 / lc);
  }
  // num a constant multiple of den.
  if (num.size() == den.size()) {
    std::optional<Rational> ratio;
    bool proportional = true;
    for (auto it = num.begin(), jt = den.begin(); it != num.end(); ++it, ++jt) {
      if (it->first != jt->first) {
        proportional = false;
        break;
      }
      Rational r = it->second / jt->second;
      if (ratio && *ratio != r) {
        proportional = false;
        break;
      }
      ratio = r;
    }
    if (proportional) return RatFunc{poly_const(*ratio), poly_const(1)};
  }
  return RatFunc{std::move(num), std::move(den)};
}

bool RatFunc::is_poly() const { return poly_is_one(den); }

std::optional<Rational> RatFunc::constant() const {
  if (!is_poly()) return std::nullopt;
  return poly_constant(num);
}

RatFunc rf_add(const RatFunc& a, const RatFunc& b) {
  if (a.is_poly() && b.is_poly()) return RatFunc::from_poly(poly_add(a.num, b.num));
  if (a.den == b.den) return RatFunc::make(poly_add(a.num, b.num), a.den);
  if (b.is_poly()) return RatFunc::make(poly_add(a.num, poly_mul(b.num, a.den)), a.den);
  if (a.is_poly()) return RatFunc::make(poly_add(poly_mul(a.num, b.den), b.num), b.den);
  return RatFunc::make(poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)), poly_mul(a.den, b.den));
}

RatFunc rf_neg(const RatFunc& a) { return RatFunc{poly_neg(a.num), a.den}; }

RatFunc rf_sub(const RatFunc& a, const RatFunc& b) { return rf_add(a, rf_neg(b)); }

RatFunc rf_mul(const RatFunc& a, const RatFunc& b) {
  if (a.is_poly() && b.is_poly()) return RatFunc::from_poly(poly_mul(a.num, b.num));
  return RatFunc::make(poly_mul(a.num, b.num), poly_mul(a.den, b.den));
}

RatFunc rf_div(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw UnsupportedExpression("division by zero");
  return RatFunc::make(poly_mul(a.num, b.den), poly_mul(a.den, b.num));
}

namespace {

std::optional<Integer> exact_root(const Integer& x, const Integer& q) {
  if (x == 0 || x == 1) return x;
  if (q > 64) return std::nullopt;
  const unsigned n = static_cast<unsigned>(q);
  const double approx = std::pow(x.convert_to<double>(), 1.0 / n);
  if (!std::isfinite(approx) || approx > 1e15) return std::nullopt;
  for (long long cand = static_cast<long long>(approx) - 1; cand <= static_cast<long long>(approx) + 1; ++cand) {
    if (cand < 0) continue;
    if (boost::multiprecision::pow(Integer(cand), n) == x) return Integer(cand);
  }
  return std::nullopt;
}

}  // namespace

RatFunc rf_pow(const RatFunc& a, const Rational& e) {
  if (e == 0) return RatFunc::from_poly(poly_const(1));
  if (is_integer(e)) {
    const long n = static_cast<long>(boost::multiprecision::numerator(e));
    if (n > 0) return RatFunc::make(poly_pow(a.num, n), poly_pow(a.den, n));
    if (a.is_zero()) throw UnsupportedExpression("division by zero");
    return RatFunc::make(poly_pow(a.den, -n), poly_pow(a.num, -n));
  }
  if (a.is_zero()) {
    if (e > 0) return a;
    throw UnsupportedExpression("division by zero");
  }
  if (!a.is_poly() || a.num.size() != 1)
    throw UnsupportedExpression("fractional power of a sum has no canonical form");
  const auto& [m, c] = *a.num.begin();
  Rational coef = 1;
  if (c != 1) {
    if (c < 0) throw UnsupportedExpression("fractional power of a negative coefficient");
    const Integer p = boost::multiprecision::numerator(e);
    const Integer q = boost::multiprecision::denominator(e);
    auto rn = exact_root(boost::multiprecision::numerator(c), q);
    auto rd = exact_root(boost::multiprecision::denominator(c), q);
    if (!rn || !rd) throw UnsupportedExpression("fractional power of a coefficient without a rational root");
    Rational root = Rational(*rn) / Rational(*rd);
    const long pn = static_cast<long>(p);
    coef = 1;
    for (long i = 0; i < std::abs(pn); ++i) coef *= root;
    if (pn < 0) coef = 1 / coef;
  }
  Poly out;
  out.emplace(mono_pow(m, e), coef);
  return RatFunc::from_poly(std::move(out));
}

RatFunc rf_partial(const RatFunc& a, JetVar v) {
  if (a.is_poly()) return RatFunc::from_poly(poly_partial(a.num, v));
  Poly top = poly_sub(poly_mul(poly_partial(a.num, v), a.den), poly_mul(a.num, poly_partial(a.den, v)));
  return RatFunc::make(std::move(top), poly_mul(a.den, a.den));
}

RatFunc rf_total_derivative(const RatFunc& a) {
  if (a.is_poly()) return RatFunc::from_poly(poly_total_derivative(a.num));
  Poly top = poly_sub(poly_mul(poly_total_derivative(a.num), a.den),
                      poly_mul(a.num, poly_total_derivative(a.den)));
  return RatFunc::make(std::move(top), poly_mul(a.den, a.den));
}

namespace {

RatFunc poly_substitute(const Poly& p, JetVar v, const RatFunc& r) {
  RatFunc acc = RatFunc::from_poly({});
  std::map<Rational, RatFunc> powers;
  for (const auto& [m, c] : p) {
    Rational e = mono_exponent(m, v);
    Poly rest;
    rest.emplace(mono_without(m, v), c);
    if (e == 0) {
      acc = rf_add(acc, RatFunc::from_poly(std::move(rest)));
      continue;
    }
    auto it = powers.find(e);
    if (it == powers.end()) it = powers.emplace(e, rf_pow(r, e)).first;
    acc = rf_add(acc, rf_mul(RatFunc::from_poly(std::move(rest)), it->second));
  }
  return acc;
}

}  // namespace

RatFunc rf_substitute(const RatFunc& a, JetVar v, const RatFunc& r) {
  RatFunc n = poly_substitute(a.num, v, r);
  if (a.is_poly()) return n;
  return rf_div(n, poly_substitute(a.den, v, r));
}

bool rf_equal(const RatFunc& a, const RatFunc& b) {
  if (a.is_poly() && b.is_poly()) return a.num == b.num;
  return poly_mul(a.num, b.den) == poly_mul(b.num, a.den);
}

std::vector<JetVar> rf_variables(const RatFunc& a) {
  std::set<JetVar> vars;
  for (const Poly* p : {&a.num, &a.den})
    for (const auto& [m, c] : *p)
      for (const auto& [v, e] : m) vars.insert(v);
  return {vars.begin(), vars.end()};
}

Rational parse_decimal(std::string_view text) {
  std::size_t i = 0;
  Integer mant = 0;
  long frac_digits = 0;
  bool any_digit = false, dot = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      mant = mant * 10 + (ch - '0');
      any_digit = true;
      if (dot) ++frac_digits;
    } else if (ch == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw std::invalid_argument("malformed number");
  long exp10 = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
      throw std::invalid_argument("malformed exponent");
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      exp10 = exp10 * 10 + (text[i] - '0');
      if (exp10 > 400) throw std::invalid_argument("exponent out of range");
    }
    if (neg) exp10 = -exp10;
  }
  if (i != text.size()) throw std::invalid_argument("malformed number");
  exp10 -= frac_digits;
  Rational r(mant);
  const Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::abs(exp10)));
  if (exp10 >= 0) return r * Rational(scale);
  return r / Rational(scale);
}

std::string rational_str(const Rational& r) {
  const Integer& n = boost::multiprecision::numerator(r);
  const Integer& d = boost::multiprecision::denominator(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

bool is_integer(const Rational& r) { return boost::multiprecision::denominator(r) == 1; }

}  // namespace rmf::jet::detail
