#pragma once

#include "bubbletree/graded_poly.hpp"

#include <map>
#include <optional>
#include <string>

namespace bubbletree {

// Finite Laurent series in the degree-2 equivariant parameter u with
// graded-polynomial coefficients. A term c*u^k has total degree 2k + deg(c).
class EquivariantLaurent {
public:
    using CoeffMap = std::map<int, GradedPolynomial>;
    static constexpr int kUDegree = 2;

    EquivariantLaurent() = default;
    EquivariantLaurent(const GradedPolynomial& constant_term);
    EquivariantLaurent(const Rational& c) : EquivariantLaurent(GradedPolynomial(c)) {}
    EquivariantLaurent(long c) : EquivariantLaurent(GradedPolynomial(c)) {}
    EquivariantLaurent(int c) : EquivariantLaurent(GradedPolynomial(c)) {}

    // c * u^k
    static EquivariantLaurent monomial(int k, const GradedPolynomial& c = GradedPolynomial(1));
    static EquivariantLaurent u() { return monomial(1); }

    const CoeffMap& coefficients() const { return coeffs_; }
    GradedPolynomial coefficient(int k) const;
    bool is_zero() const { return coeffs_.empty(); }
    std::optional<int> min_u_power() const;
    std::optional<int> max_u_power() const;
    bool has_negative_powers() const;

    // Coefficient-wise truncation.
    EquivariantLaurent truncate(int top_degree) const;
    EquivariantLaurent shift(int k) const;  // multiply by u^k
    EquivariantLaurent map_coefficients(const std::function<GradedPolynomial(const GradedPolynomial&)>& f) const;

    EquivariantLaurent operator-() const;
    EquivariantLaurent& operator+=(const EquivariantLaurent& o);
    EquivariantLaurent& operator-=(const EquivariantLaurent& o);
    friend EquivariantLaurent operator+(EquivariantLaurent a, const EquivariantLaurent& b) { return a += b; }
    friend EquivariantLaurent operator-(EquivariantLaurent a, const EquivariantLaurent& b) { return a -= b; }
    friend EquivariantLaurent operator*(const EquivariantLaurent& a, const EquivariantLaurent& b);
    friend EquivariantLaurent operator*(const EquivariantLaurent& a, const Rational& c);
    friend bool operator==(const EquivariantLaurent&, const EquivariantLaurent&) = default;

    EquivariantLaurent pow(unsigned e, std::optional<int> top_degree = std::nullopt) const;

    // Canonical text form, descending u-powers, e.g. "3*u + 5 + 2*alpha*u^-1".
    std::string str() const;

private:
    void add(int k, const GradedPolynomial& c);
    CoeffMap coeffs_;
};

// Distributive product with each coefficient truncated at top_degree
// (no truncation when top_degree is empty).
EquivariantLaurent laurent_mul(const EquivariantLaurent& a, const EquivariantLaurent& b,
                               std::optional<int> top_degree);

GradedPolynomial poly_truncate(const GradedPolynomial& p, int top_degree);

// Coefficient of u^0.
GradedPolynomial constant_u_term(const EquivariantLaurent& a);

}  // namespace bubbletree
