#include "rmf/jet_json.hpp"

#include <stdexcept>

#include "jet_canonical.hpp"

namespace rmf::jet {

namespace {

detail::Rational parse_rational(const nlohmann::json& j) {
  if (j.is_number_integer()) return detail::Rational(j.get<long long>());
  if (!j.is_string()) throw std::invalid_argument("rational must be a string \"p/q\" or an integer");
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return detail::Rational(detail::Integer(s));
    return detail::Rational(detail::Integer(s.substr(0, slash))) / detail::Rational(detail::Integer(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational '" + s + "'");
  }
}

Base parse_base(const std::string& s) {
  for (Base b : {Base::kappa1, Base::kappa2, Base::mu, Base::lambda})
    if (s == base_name(b)) return b;
  throw std::invalid_argument("unknown variable '" + s + "'");
}

}  // namespace

nlohmann::json to_json(const Expr& e) {
  using K = Expr::Kind;
  nlohmann::json j;
  switch (e.kind()) {
    case K::constant: j["const"] = e.rational_text(); break;
    case K::variable:
      j["var"] = base_name(e.variable().base);
      j["order"] = e.variable().order;
      break;
    case K::sum:
    case K::product: {
      nlohmann::json args = nlohmann::json::array();
      for (const Expr& c : e.children()) args.push_back(to_json(c));
      j[e.kind() == K::sum ? "sum" : "product"] = std::move(args);
      break;
    }
    case K::power:
      j["pow"] = to_json(e.children()[0]);
      j["exp"] = e.rational_text();
      break;
    case K::quotient: j["div"] = {to_json(e.children()[0]), to_json(e.children()[1])}; break;
  }
  return j;
}

Expr expr_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("expression node must be an object");
  if (j.contains("const")) return detail::make_constant(parse_rational(j["const"]));
  if (j.contains("var")) {
    const int order = j.value("order", 0);
    if (order < 0 || order > kMaxStorageOrder) throw std::invalid_argument("variable order out of range");
    return Expr::var({parse_base(j["var"].get<std::string>()), order});
  }
  for (const char* key : {"sum", "product"}) {
    if (!j.contains(key)) continue;
    const auto& args = j[key];
    if (!args.is_array() || args.empty()) throw std::invalid_argument(std::string(key) + " needs a non-empty array");
    Expr acc = expr_from_json(args[0]);
    for (std::size_t i = 1; i < args.size(); ++i)
      acc = std::string(key) == "sum" ? acc + expr_from_json(args[i]) : acc * expr_from_json(args[i]);
    return acc;
  }
  if (j.contains("pow")) {
    const detail::Rational e = parse_rational(j.at("exp"));
    const auto n = boost::multiprecision::numerator(e);
    const auto d = boost::multiprecision::denominator(e);
    return pow(expr_from_json(j["pow"]), static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
  }
  if (j.contains("div")) {
    const auto& a = j["div"];
    if (!a.is_array() || a.size() != 2) throw std::invalid_argument("div needs [num, den]");
    return expr_from_json(a[0]) / expr_from_json(a[1]);
  }
  throw std::invalid_argument("unrecognized expression node");
}

}  // namespace rmf::jet
