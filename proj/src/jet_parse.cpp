#include <cctype>

#include "jet_canonical.hpp"

namespace rmf::jet {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts) : text_(text), opts_(opts) {}

  Expr run() {
    skip_ws();
    if (pos_ == text_.size()) fail("empty expression", pos_);
    Expr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at) { throw ParseError(msg, at); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended", pos_);
    if (text_[pos_] != c) fail(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  // expr := term (('+' | '-') term)*
  Expr expr() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  // term := unary (('*' | '/') unary)*
  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else {
        return e;
      }
    }
  }

  // unary := ('+' | '-') unary | power
  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  // power := primary ('^' unary)?
  Expr power() {
    Expr base = primary();
    skip_ws();
    if (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      Expr ex = unary();
      if (!ex.canonical_ok()) fail("exponent must be a rational constant", at);
      auto v = detail::canonical(ex).constant();
      if (!v) fail("exponent must be a rational constant", at);
      Expr p = detail::make_constant(0);
      try {
        p = pow(base, ex);
      } catch (const UnsupportedExpression& e) {
        fail(e.what(), at);
      }
      return p;
    }
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input", pos_);
    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id = identifier();
      if (id == "k1") return Expr::k1();
      if (id == "k2") return Expr::k2();
      if (id == "mu" || id == "lambda") {
        if (!opts_.allow_multipliers) fail("multiplier '" + id + "' not allowed in a Lagrangian", start);
        return id == "mu" ? Expr::mu() : Expr::lambda();
      }
      if (id == "D") return derivative(start);
      fail("unknown identifier '" + id + "'", start);
    }
    fail(std::string("unexpected '") + c + "'", start);
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    try {
      return detail::make_constant(detail::parse_decimal(text_.substr(start, pos_ - start)));
    } catch (const std::invalid_argument& e) {
      fail(std::string("malformed number: ") + e.what(), start);
    }
  }

  // D '(' expr ',' integer ')'
  Expr derivative(std::size_t start) {
    expect('(');
    Expr inner = expr();
    expect(',');
    skip_ws();
    const std::size_t at = pos_;
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
      skip_ws();
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("derivative order must be a non-negative integer literal", at);
    long n = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      n = n * 10 + (text_[pos_++] - '0');
      if (n > kMaxStorageOrder) fail("derivative order too large", at);
    }
    if (negative && n != 0) fail("negative derivative order", at);
    expect(')');
    if (!inner.canonical_ok()) fail("cannot differentiate: " + inner.node().unsupported_reason, start);
    Expr out = inner;
    if (n > 0) {
      try {
        // Atoms stay atoms so the tree mirrors the input.
        if (inner.kind() == Expr::Kind::variable) {
          JetVar v = inner.variable();
          out = Expr::var({v.base, v.order + static_cast<int>(n)});
        } else {
          out = total_derivative(inner, static_cast<int>(n));
        }
      } catch (const std::exception& e) {
        fail(e.what(), start);
      }
    }
    if (max_order(out) > opts_.max_order)
      fail("derivative order exceeds the maximum of " + std::to_string(opts_.max_order), start);
    return out;
  }

  std::string_view text_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_lagrangian(std::string_view text, const ParseOptions& opts) {
  ParseOptions o = opts;
  o.allow_multipliers = false;
  return Parser(text, o).run();
}

Expr parse_expression(std::string_view text, ParseOptions opts) {
  opts.allow_multipliers = true;
  return Parser(text, opts).run();
}

}  // namespace rmf::jet
