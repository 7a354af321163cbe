#include "bubbletree/laurent.hpp"

#include <sstream>
#include <stdexcept>

namespace bubbletree {

EquivariantLaurent::EquivariantLaurent(const GradedPolynomial& constant_term) { add(0, constant_term); }

EquivariantLaurent EquivariantLaurent::monomial(int k, const GradedPolynomial& c) {
    EquivariantLaurent out;
    out.add(k, c);
    return out;
}

void EquivariantLaurent::add(int k, const GradedPolynomial& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = coeffs_.try_emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }
}

GradedPolynomial EquivariantLaurent::coefficient(int k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? GradedPolynomial{} : it->second;
}

std::optional<int> EquivariantLaurent::min_u_power() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.begin()->first;
}

std::optional<int> EquivariantLaurent::max_u_power() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.rbegin()->first;
}

bool EquivariantLaurent::has_negative_powers() const { return !coeffs_.empty() && coeffs_.begin()->first < 0; }

EquivariantLaurent EquivariantLaurent::truncate(int top_degree) const {
    EquivariantLaurent out;
    for (const auto& [k, c] : coeffs_) out.add(k, c.truncate(top_degree));
    return out;
}

EquivariantLaurent EquivariantLaurent::shift(int k) const {
    EquivariantLaurent out;
    for (const auto& [e, c] : coeffs_) out.coeffs_.emplace(e + k, c);
    return out;
}

EquivariantLaurent EquivariantLaurent::map_coefficients(
    const std::function<GradedPolynomial(const GradedPolynomial&)>& f) const {
    EquivariantLaurent out;
    for (const auto& [k, c] : coeffs_) out.add(k, f(c));
    return out;
}

EquivariantLaurent EquivariantLaurent::operator-() const {
    EquivariantLaurent out;
    for (const auto& [k, c] : coeffs_) out.coeffs_.emplace(k, -c);
    return out;
}

EquivariantLaurent& EquivariantLaurent::operator+=(const EquivariantLaurent& o) {
    for (const auto& [k, c] : o.coeffs_) add(k, c);
    return *this;
}

EquivariantLaurent& EquivariantLaurent::operator-=(const EquivariantLaurent& o) {
    for (const auto& [k, c] : o.coeffs_) add(k, -c);
    return *this;
}

EquivariantLaurent laurent_mul(const EquivariantLaurent& a, const EquivariantLaurent& b,
                               std::optional<int> top_degree) {
    EquivariantLaurent out;
    for (const auto& [ka, ca] : a.coefficients())
        for (const auto& [kb, cb] : b.coefficients())
            out += EquivariantLaurent::monomial(ka + kb, GradedPolynomial::mul_truncated(ca, cb, top_degree));
    return out;
}

EquivariantLaurent operator*(const EquivariantLaurent& a, const EquivariantLaurent& b) {
    return laurent_mul(a, b, std::nullopt);
}

EquivariantLaurent operator*(const EquivariantLaurent& a, const Rational& c) {
    return a.map_coefficients([&](const GradedPolynomial& p) { return p * c; });
}

EquivariantLaurent EquivariantLaurent::pow(unsigned e, std::optional<int> top_degree) const {
    EquivariantLaurent result(1);
    EquivariantLaurent base = top_degree ? truncate(*top_degree) : *this;
    while (e > 0) {
        if (e & 1u) result = laurent_mul(result, base, top_degree);
        e >>= 1u;
        if (e > 0) base = laurent_mul(base, base, top_degree);
    }
    return result;
}

std::string EquivariantLaurent::str() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        const int k = it->first;
        for (const auto& [m, c] : it->second.terms()) {
            Rational mag = c.sign() < 0 ? -c : c;
            if (first) {
                if (c.sign() < 0) os << '-';
            } else {
                os << (c.sign() < 0 ? " - " : " + ");
            }
            first = false;
            std::string body;
            bool coefShown = false;
            if (m.is_unit() && k == 0) {
                os << mag;
                continue;
            }
            if (mag != Rational(1)) {
                body = mag.str();
                coefShown = true;
            }
            if (!m.is_unit()) body += (coefShown ? "*" : "") + m.str();
            if (k != 0) {
                if (!body.empty()) body += '*';
                body += "u";
                if (k != 1) body += '^' + std::to_string(k);
            }
            os << body;
        }
    }
    return os.str();
}

GradedPolynomial poly_truncate(const GradedPolynomial& p, int top_degree) { return p.truncate(top_degree); }

GradedPolynomial constant_u_term(const EquivariantLaurent& a) { return a.coefficient(0); }

}  // namespace bubbletree
