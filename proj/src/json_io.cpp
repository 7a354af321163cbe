#include "bubbletree/json_io.hpp"

#include <stdexcept>

namespace bubbletree {

void check_fields(const nlohmann::json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
    if (!j.is_object()) throw std::invalid_argument(std::string(what) + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (auto a : allowed) ok = ok || it.key() == a;
        if (!ok) throw std::invalid_argument("unknown " + std::string(what) + " field '" + it.key() + "'");
    }
}

void check_schema(const nlohmann::json& j) {
    if (!j.contains("schema")) return;
    if (!j.at("schema").is_number_integer() || j.at("schema").get<int>() != kSchemaVersion)
        throw std::invalid_argument("unsupported schema version " + j.at("schema").dump());
}

nlohmann::json rational_to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw std::invalid_argument("expected a rational (integer or \"a/b\" string), got " + j.dump());
}

}  // namespace bubbletree
