#pragma once

#include "bubbletree/rational.hpp"

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bubbletree {

// A formal cohomology class. Degree is the real cohomological degree and
// must be even; degree-0 symbols stand for scalars such as <alpha,Sigma>.
class GradedSymbol {
public:
    GradedSymbol(std::string name, int degree);

    const std::string& name() const { return name_; }
    int degree() const { return degree_; }

    friend bool operator==(const GradedSymbol&, const GradedSymbol&) = default;
    friend auto operator<=>(const GradedSymbol& a, const GradedSymbol& b) {
        if (auto c = a.name_ <=> b.name_; c != 0) return c;
        return a.degree_ <=> b.degree_;
    }

private:
    std::string name_;
    int degree_;
};

// Product of symbol powers, kept sorted by symbol name.
class Monomial {
public:
    using Factor = std::pair<GradedSymbol, unsigned>;

    Monomial() = default;
    explicit Monomial(const GradedSymbol& s, unsigned exponent = 1);
    explicit Monomial(std::vector<Factor> factors);

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_unit() const { return factors_.empty(); }
    int degree() const;
    unsigned exponent_of(const std::string& name) const;
    // Monomial with every factor named `name` removed.
    Monomial without(const std::string& name) const;
    // Split into (degree-0 factors, positive-degree factors).
    std::pair<Monomial, Monomial> split_scalar() const;
    std::string str() const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend bool operator<(const Monomial& a, const Monomial& b);

private:
    std::vector<Factor> factors_;
};

class GradedPolynomial {
public:
    using TermMap = std::map<Monomial, Rational>;

    GradedPolynomial() = default;
    GradedPolynomial(const Rational& c);
    GradedPolynomial(long c) : GradedPolynomial(Rational(c)) {}
    GradedPolynomial(int c) : GradedPolynomial(Rational(c)) {}
    explicit GradedPolynomial(const GradedSymbol& s);
    GradedPolynomial(const Monomial& m, const Rational& c);

    static GradedPolynomial symbol(const std::string& name, int degree) {
        return GradedPolynomial(GradedSymbol(name, degree));
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    // Highest monomial degree, or nullopt for the zero polynomial.
    std::optional<int> degree() const;
    bool is_constant() const;
    // Constant term (coefficient of the unit monomial).
    Rational constant() const;
    Rational coefficient(const Monomial& m) const;

    // Monomials of degree exactly `deg`.
    GradedPolynomial degree_part(int deg) const;
    GradedPolynomial truncate(int top_degree) const;

    GradedPolynomial operator-() const;
    GradedPolynomial& operator+=(const GradedPolynomial& o);
    GradedPolynomial& operator-=(const GradedPolynomial& o);
    GradedPolynomial& operator*=(const Rational& c);

    friend GradedPolynomial operator+(GradedPolynomial a, const GradedPolynomial& b) { return a += b; }
    friend GradedPolynomial operator-(GradedPolynomial a, const GradedPolynomial& b) { return a -= b; }
    friend GradedPolynomial operator*(const GradedPolynomial& a, const GradedPolynomial& b);
    friend GradedPolynomial operator*(GradedPolynomial a, const Rational& c) { return a *= c; }
    friend GradedPolynomial operator*(const Rational& c, GradedPolynomial a) { return a *= c; }
    friend bool operator==(const GradedPolynomial&, const GradedPolynomial&) = default;

    // Product truncated to monomials of degree <= top_degree.
    static GradedPolynomial mul_truncated(const GradedPolynomial& a, const GradedPolynomial& b,
                                          std::optional<int> top_degree);
    GradedPolynomial pow(unsigned e, std::optional<int> top_degree = std::nullopt) const;

    // Replace every occurrence of a symbol by a polynomial.
    GradedPolynomial substitute(const std::string& name, const GradedPolynomial& value) const;
    // Replace monomials via a callback returning the image of each monomial.
    GradedPolynomial map_monomials(const std::function<GradedPolynomial(const Monomial&)>& f) const;

    // Canonical text form, e.g. "3 + 2*alpha*omega - 1/2*alpha^2".
    std::string str() const;

private:
    void add_term(const Monomial& m, const Rational& c);
    TermMap terms_;
};

// Name -> degree table used when reading the text form.
class SymbolContext {
public:
    SymbolContext() = default;
    // Context preloaded with the classes used throughout the library.
    static SymbolContext standard();

    void declare(const std::string& name, int degree);
    std::optional<int> degree_of(const std::string& name) const;
    const std::map<std::string, int>& table() const { return table_; }

private:
    std::map<std::string, int> table_;
};

}  // namespace bubbletree
