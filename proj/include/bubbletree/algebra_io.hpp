#pragma once

#include "bubbletree/laurent.hpp"

#include <json.hpp>

#include <string_view>

namespace bubbletree {

// Text form: sums of products of rationals, declared symbols, `u` (any
// integer exponent) and parenthesised sub-expressions raised to
// non-negative powers. `*` may be omitted between a number and a name.
EquivariantLaurent parse_laurent(std::string_view text, const SymbolContext& ctx = SymbolContext::standard());
// Same grammar; rejects any non-zero power of u.
GradedPolynomial parse_polynomial(std::string_view text, const SymbolContext& ctx = SymbolContext::standard());

// JSON term-list forms. Symbols carry their degree, so no context is needed.
nlohmann::json to_json(const GradedPolynomial& p);
nlohmann::json to_json(const EquivariantLaurent& s);
GradedPolynomial polynomial_from_json(const nlohmann::json& j);
EquivariantLaurent laurent_from_json(const nlohmann::json& j);

}  // namespace bubbletree
