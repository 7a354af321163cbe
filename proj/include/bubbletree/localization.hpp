#pragma once

#include "bubbletree/graded_poly.hpp"
#include "bubbletree/laurent.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bubbletree {

class MissingRuleError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// One component F of the fixed-point set of the circle action.
struct FixedLocusDatum {
    std::string name;
    int dimension = 0;                    // real dimension of F
    EquivariantLaurent restricted_class;  // gamma restricted to F
    EquivariantLaurent euler_class;       // equivariant Euler class of the normal bundle
    // Integral over F of each top-degree class monomial; degree-0 symbols
    // are scalars and pass through untouched.
    std::map<Monomial, GradedPolynomial> integration_rules;
    Rational multiplicity{1};
};

// E^{-1} for E = c u^k (1 + eta) with c a nonzero rational and eta of
// positive class degree; the geometric series stops at top_degree.
EquivariantLaurent euler_invert(const EquivariantLaurent& E, int top_degree);

// Integral over F of each u-coefficient of `integrand`.
EquivariantLaurent integrate_over(const FixedLocusDatum& F, const EquivariantLaurent& integrand);

// sum_i mult_i * int_{F_i} gamma_i / E_i over the loci.
EquivariantLaurent localize_sum(const std::vector<FixedLocusDatum>& loci);

// Link pairing sum_i int_{F_i} gamma_i^{m-1} u / E_i, u^0 coefficient.
// gamma_i is the locus restriction when present, otherwise `gamma`; both
// must be homogeneous of degree 2.
GradedPolynomial boundary_pairing(const std::vector<FixedLocusDatum>& loci, const EquivariantLaurent& gamma, int m);

// p1 -> -2 (cR + cL), e -> cL - cR.
GradedPolynomial spin_substitute(const GradedPolynomial& p);

// Fiber integration over the charge-r moduli fibration, acting on the
// powers of `symbol` (degree 4 class p1 of the universal bundle).
struct PushforwardRules {
    std::string symbol = "p1r";
    std::map<unsigned, GradedPolynomial> images;
    unsigned zero_above = 0;         // powers > zero_above integrate to 0
    bool lower_powers_zero = true;   // powers below the fiber degree vanish
    // A_suffix for power 2r-2 and B_R(2e+3sig) + B_L(2e-3sig) for 2r-1.
    // `suffix` is appended to A, B_L, B_R (e.g. "_2").
    static PushforwardRules standard(int r, const std::string& suffix = "");
};

GradedPolynomial apply_pushforward(const GradedPolynomial& p, const PushforwardRules& rules);

struct LocusDataset {
    std::vector<FixedLocusDatum> loci;
    std::optional<EquivariantLaurent> gamma;
    std::optional<int> pairing_m;
};
// {"schema":1,"symbols":{"h":2},"loci":[{"name":..,"dimension":..,
//  "restricted_class":"text","euler_class":"text","rules":{"h":"1"},
//  "multiplicity":"1"}],"gamma":"text","pairing_m":2}
LocusDataset dataset_from_json(const nlohmann::json& j);

}  // namespace bubbletree
