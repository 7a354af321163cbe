#pragma once

#include "bubbletree/rational.hpp"
#include "bubbletree/tree.hpp"

#include <json.hpp>

#include <array>
#include <map>
#include <string>
#include <vector>

namespace bubbletree {

using Point4 = std::array<Rational, 4>;

struct WeightedPoint {
    Point4 z;
    int weight = 1;
};

struct WeightedConfiguration {
    std::vector<WeightedPoint> points;
};

// Sum w_i z_i = 0 and sum w_i |z_i|^2 = sum w_i, exactly.
bool balanced_check(const WeightedConfiguration& c);

// The balanced representative is direction * lambda with
// lambda^2 = scale_squared; lambda itself may be irrational.
struct BalanceClass {
    WeightedConfiguration direction;  // barycenter moved to the origin
    Rational scale_squared;
};
BalanceClass balance_class(const WeightedConfiguration& c);

// Polynomial in t with rational coefficients, coefficient i of t^i.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs);
    static UniPoly constant(const Rational& c) { return UniPoly({c}); }

    const std::vector<Rational>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    // Lowest power with nonzero coefficient; -1 for the zero polynomial.
    int valuation() const;
    Rational at_zero() const { return c_.empty() ? Rational(0) : c_[0]; }
    // Divides by t^m; requires valuation() >= m.
    UniPoly divide_by_t(int m) const;
    // Substitutes t -> c t.
    UniPoly rescale(const Rational& c) const;

    UniPoly operator+(const UniPoly& o) const;
    UniPoly operator-(const UniPoly& o) const;
    UniPoly operator*(const Rational& s) const;
    friend bool operator==(const UniPoly&, const UniPoly&) = default;

private:
    void trim();
    std::vector<Rational> c_;
};

struct FamilyPoint {
    std::array<UniPoly, 4> coords;
    int weight = 1;
};

struct PolynomialFamily {
    std::vector<FamilyPoint> points;
};

// Screen at a ghost vertex: one point per child, weighted by the child's
// total weight, centred so that sum w_i z_i = 0.
struct Screen {
    int vertex = -1;
    int order = 0;                 // t-adic rescaling exponent m at this event
    std::vector<int> children;     // child vertex per screen point
    WeightedConfiguration config;  // exact centred positions
    Rational scale_squared;        // balancing scale of `config`
};

struct LimitStratum {
    BubbleTree tree;
    std::vector<Point4> base_points;      // t = 0 positions of the root's children
    std::map<int, Screen> screens;        // keyed by ghost vertex
    std::map<int, int> leaf_point;        // leaf vertex -> family point index
};

// Exact degeneration limit of a family as t -> 0+. Throws
// std::invalid_argument when two points agree identically in t.
LimitStratum limit_stratum(const PolynomialFamily& f);

// All trees of weighted FM type for the given point weights: weight-0
// root, one leaf per point, every other vertex a ghost with >= 2 children.
std::vector<BubbleTree> enumerate_fm_strata(const std::vector<int>& weights);

bool is_fm_type(const BubbleTree& t);
// Bracket template with one fresh label per vertex below the root; the
// letter encodes the depth (x, y, z, ...). Throws on non FM-type trees.
std::string stratum_format(const BubbleTree& t);
// Label -> leaf weight for the labels produced by stratum_format.
std::map<std::string, int> format_leaf_weights(const BubbleTree& t);

nlohmann::json family_to_json(const PolynomialFamily& f);
PolynomialFamily family_from_json(const nlohmann::json& j);
nlohmann::json limit_to_json(const LimitStratum& s);

}  // namespace bubbletree
