#pragma once

#include <json.hpp>

#include "rmf/jet_expr.hpp"

namespace rmf::jet {

/// Tree form:
///   {"const": "p/q"} | {"var": "k1", "order": n} | {"sum": [...]} |
///   {"product": [...]} | {"pow": e, "exp": "p/q"} | {"div": [num, den]}
nlohmann::json to_json(const Expr& e);
/// Throws std::invalid_argument on malformed input.
Expr expr_from_json(const nlohmann::json& j);

}  // namespace rmf::jet
