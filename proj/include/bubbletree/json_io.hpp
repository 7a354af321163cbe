#pragma once

#include "bubbletree/rational.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>
#include <string_view>

namespace bubbletree {

inline constexpr int kSchemaVersion = 1;

// Throws std::invalid_argument naming the first key of `j` outside `allowed`.
void check_fields(const nlohmann::json& j, std::initializer_list<std::string_view> allowed, std::string_view what);
// Requires "schema": 1 when present.
void check_schema(const nlohmann::json& j);

// Rationals travel as strings ("3/4", "-2"); integers are accepted on input.
nlohmann::json rational_to_json(const Rational& r);
Rational rational_from_json(const nlohmann::json& j);

}  // namespace bubbletree
