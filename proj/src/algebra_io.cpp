#include "bubbletree/algebra_io.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace bubbletree {

namespace {

class ExprParser {
public:
    ExprParser(std::string_view text, const SymbolContext& ctx) : s_(text), ctx_(ctx) {}

    EquivariantLaurent parse() {
        EquivariantLaurent v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression parse error at " + std::to_string(pos_) + ": " + msg);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    EquivariantLaurent expr() {
        EquivariantLaurent acc;
        bool negate = false;
        if (eat('-')) negate = true;
        else eat('+');
        EquivariantLaurent t = term();
        acc = negate ? -t : t;
        while (true) {
            if (eat('+')) acc += term();
            else if (eat('-')) acc -= term();
            else break;
        }
        return acc;
    }

    EquivariantLaurent term() {
        EquivariantLaurent acc = factor();
        while (true) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * factor();
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '(') {
                acc = acc * factor();
            } else {
                break;
            }
        }
        return acc;
    }

    long exponent(bool allow_negative) {
        skip();
        bool neg = false;
        if (eat('-')) {
            if (!allow_negative) fail("negative exponent");
            neg = true;
        }
        skip();
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (b == pos_) fail("expected exponent");
        long e = std::stol(std::string(s_.substr(b, pos_ - b)));
        return neg ? -e : e;
    }

    EquivariantLaurent factor() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            EquivariantLaurent inner = expr();
            if (!eat(')')) fail("expected ')'");
            if (eat('^')) return inner.pow(static_cast<unsigned>(exponent(false)));
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t b = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (pos_ < s_.size() && s_[pos_] == '/') {
                ++pos_;
                std::size_t d = pos_;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                if (d == pos_) fail("expected denominator");
            }
            return EquivariantLaurent(Rational::parse(s_.substr(b, pos_ - b)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t b = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string name(s_.substr(b, pos_ - b));
            if (name == "u") {
                long e = eat('^') ? exponent(true) : 1;
                return EquivariantLaurent::monomial(static_cast<int>(e));
            }
            auto deg = ctx_.degree_of(name);
            if (!deg) {
                pos_ = b;
                fail("undeclared symbol '" + name + "'");
            }
            unsigned e = eat('^') ? static_cast<unsigned>(exponent(false)) : 1u;
            return EquivariantLaurent(GradedPolynomial(Monomial(GradedSymbol(name, *deg), e), Rational(1)));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    std::string_view s_;
    const SymbolContext& ctx_;
    std::size_t pos_ = 0;
};

nlohmann::json monomial_json(const Monomial& m) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [s, e] : m.factors())
        arr.push_back({{"name", s.name()}, {"degree", s.degree()}, {"exp", e}});
    return arr;
}

Monomial monomial_from(const nlohmann::json& arr) {
    std::vector<Monomial::Factor> f;
    for (const auto& x : arr) {
        for (auto it = x.begin(); it != x.end(); ++it)
            if (it.key() != "name" && it.key() != "degree" && it.key() != "exp")
                throw std::invalid_argument("unknown monomial field '" + it.key() + "'");
        f.emplace_back(GradedSymbol(x.at("name").get<std::string>(), x.at("degree").get<int>()),
                       x.at("exp").get<unsigned>());
    }
    return Monomial(std::move(f));
}

Rational coef_from(const nlohmann::json& c) {
    if (c.is_number_integer()) return Rational(c.get<long>());
    return Rational::parse(c.get<std::string>());
}

}  // namespace

EquivariantLaurent parse_laurent(std::string_view text, const SymbolContext& ctx) {
    return ExprParser(text, ctx).parse();
}

GradedPolynomial parse_polynomial(std::string_view text, const SymbolContext& ctx) {
    EquivariantLaurent s = parse_laurent(text, ctx);
    for (const auto& [k, c] : s.coefficients())
        if (k != 0) throw std::invalid_argument("polynomial may not contain u");
    return s.coefficient(0);
}

nlohmann::json to_json(const GradedPolynomial& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : p.terms()) terms.push_back({{"coef", c.str()}, {"monomial", monomial_json(m)}});
    return {{"terms", terms}};
}

nlohmann::json to_json(const EquivariantLaurent& s) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto it = s.coefficients().rbegin(); it != s.coefficients().rend(); ++it)
        for (const auto& [m, c] : it->second.terms())
            terms.push_back({{"coef", c.str()}, {"u", it->first}, {"monomial", monomial_json(m)}});
    return {{"terms", terms}};
}

GradedPolynomial polynomial_from_json(const nlohmann::json& j) {
    GradedPolynomial p;
    for (const auto& t : j.at("terms")) {
        for (auto it = t.begin(); it != t.end(); ++it)
            if (it.key() != "coef" && it.key() != "monomial")
                throw std::invalid_argument("unknown term field '" + it.key() + "'");
        p += GradedPolynomial(monomial_from(t.at("monomial")), coef_from(t.at("coef")));
    }
    return p;
}

EquivariantLaurent laurent_from_json(const nlohmann::json& j) {
    EquivariantLaurent s;
    for (const auto& t : j.at("terms")) {
        for (auto it = t.begin(); it != t.end(); ++it)
            if (it.key() != "coef" && it.key() != "monomial" && it.key() != "u")
                throw std::invalid_argument("unknown term field '" + it.key() + "'");
        int k = t.contains("u") ? t.at("u").get<int>() : 0;
        s += EquivariantLaurent::monomial(k, GradedPolynomial(monomial_from(t.at("monomial")), coef_from(t.at("coef"))));
    }
    return s;
}

}  // namespace bubbletree
