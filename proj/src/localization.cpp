#include "bubbletree/localization.hpp"

#include "bubbletree/algebra_io.hpp"
#include "bubbletree/json_io.hpp"

namespace bubbletree {

EquivariantLaurent euler_invert(const EquivariantLaurent& E, int top_degree) {
    if (E.is_zero()) throw std::invalid_argument("euler_invert: zero Euler class");
    std::optional<int> lead;
    for (const auto& [k, c] : E.coefficients()) {
        if (c.degree_part(0).is_zero()) continue;
        if (lead) throw std::invalid_argument("euler_invert: non-nilpotent remainder (degree-0 terms at u^" +
                                              std::to_string(*lead) + " and u^" + std::to_string(k) + ")");
        lead = k;
    }
    if (!lead) throw std::invalid_argument("euler_invert: vanishing leading coefficient");
    const GradedPolynomial c0 = E.coefficient(*lead).degree_part(0);
    if (!c0.is_constant() || c0.constant().is_zero())
        throw std::invalid_argument("euler_invert: leading coefficient " + c0.str() + " is not a nonzero rational");
    const Rational inv = Rational(1) / c0.constant();

    // E = c u^k (1 + eta); eta raises class degree by at least 2 per factor.
    EquivariantLaurent eta = (E - EquivariantLaurent::monomial(*lead, c0)).shift(-*lead) * inv;
    EquivariantLaurent sum(1), term(1);
    for (int j = 1; 2 * j <= top_degree; ++j) {
        term = laurent_mul(term, -eta, top_degree);
        if (term.is_zero()) break;
        sum += term;
    }
    return (sum * inv).shift(-*lead).truncate(top_degree);
}

EquivariantLaurent integrate_over(const FixedLocusDatum& F, const EquivariantLaurent& integrand) {
    EquivariantLaurent out;
    for (const auto& [k, coeff] : integrand.coefficients()) {
        GradedPolynomial value;
        for (const auto& [mono, c] : coeff.terms()) {
            auto [scalar, cls] = mono.split_scalar();
            if (cls.degree() != F.dimension) continue;
            GradedPolynomial image;
            if (auto it = F.integration_rules.find(cls); it != F.integration_rules.end()) image = it->second;
            else if (cls.is_unit()) image = GradedPolynomial(1);
            else
                throw MissingRuleError("no integration rule on " + F.name + " for " + cls.str());
            value += GradedPolynomial(scalar, c) * image;
        }
        if (!value.is_zero()) out += EquivariantLaurent::monomial(k, value);
    }
    return out;
}

EquivariantLaurent localize_sum(const std::vector<FixedLocusDatum>& loci) {
    EquivariantLaurent total;
    for (const auto& F : loci) {
        EquivariantLaurent inv = euler_invert(F.euler_class, F.dimension);
        EquivariantLaurent integrand = laurent_mul(F.restricted_class, inv, F.dimension);
        total += integrate_over(F, integrand) * F.multiplicity;
    }
    return total;
}

namespace {

void require_degree_two(const EquivariantLaurent& g, const std::string& what) {
    for (const auto& [k, c] : g.coefficients())
        for (const auto& [m, coef] : c.terms())
            if (2 * k + m.degree() != 2)
                throw std::invalid_argument(what + " is not homogeneous of degree 2 (term " + m.str() + " u^" +
                                            std::to_string(k) + ")");
}

}  // namespace

GradedPolynomial boundary_pairing(const std::vector<FixedLocusDatum>& loci, const EquivariantLaurent& gamma, int m) {
    if (m < 1) throw std::invalid_argument("boundary_pairing: m must be >= 1");
    require_degree_two(gamma, "gamma");
    EquivariantLaurent total;
    for (const auto& F : loci) {
        const EquivariantLaurent& g = F.restricted_class.is_zero() ? gamma : F.restricted_class;
        require_degree_two(g, "restriction of gamma to " + F.name);
        EquivariantLaurent inv = euler_invert(F.euler_class, F.dimension);
        EquivariantLaurent integrand =
            laurent_mul(laurent_mul(g.pow(static_cast<unsigned>(m - 1), F.dimension), EquivariantLaurent::u(),
                                    F.dimension),
                        inv, F.dimension);
        total += integrate_over(F, integrand) * F.multiplicity;
    }
    return constant_u_term(total);
}

GradedPolynomial spin_substitute(const GradedPolynomial& p) {
    const auto cL = GradedPolynomial::symbol("cL", 4);
    const auto cR = GradedPolynomial::symbol("cR", 4);
    return p.map_monomials([&](const Monomial& m) {
        GradedPolynomial out(1);
        for (const auto& [sym, e] : m.factors()) {
            GradedPolynomial f(sym);
            if (sym.name() == "p1") f = Rational(-2) * (cR + cL);
            else if (sym.name() == "e") f = cL - cR;
            out = out * f.pow(e);
        }
        return out;
    });
}

PushforwardRules PushforwardRules::standard(int r, const std::string& suffix) {
    if (r < 1) throw std::invalid_argument("pushforward rules need r >= 1");
    PushforwardRules rules;
    const auto e = GradedPolynomial::symbol("e", 4);
    const auto sig = GradedPolynomial::symbol("sig", 4);
    rules.images[2 * r - 2] = GradedPolynomial::symbol("A" + suffix, 0);
    rules.images[2 * r - 1] = GradedPolynomial::symbol("B_R" + suffix, 0) * (Rational(2) * e + Rational(3) * sig) +
                              GradedPolynomial::symbol("B_L" + suffix, 0) * (Rational(2) * e - Rational(3) * sig);
    rules.zero_above = 2 * r - 1;
    return rules;
}

GradedPolynomial apply_pushforward(const GradedPolynomial& p, const PushforwardRules& rules) {
    unsigned lowest = rules.images.empty() ? 0 : rules.images.begin()->first;
    return p.map_monomials([&](const Monomial& m) {
        const unsigned j = m.exponent_of(rules.symbol);
        const GradedPolynomial rest(m.without(rules.symbol), Rational(1));
        if (auto it = rules.images.find(j); it != rules.images.end()) return it->second * rest;
        if (j > rules.zero_above) return GradedPolynomial();
        if (j < lowest && rules.lower_powers_zero) return GradedPolynomial();
        throw MissingRuleError("no pushforward rule for " + rules.symbol + "^" + std::to_string(j));
    });
}

LocusDataset dataset_from_json(const nlohmann::json& j) {
    check_fields(j, {"schema", "symbols", "loci", "gamma", "pairing_m"}, "dataset");
    check_schema(j);
    SymbolContext ctx = SymbolContext::standard();
    if (j.contains("symbols"))
        for (auto it = j.at("symbols").begin(); it != j.at("symbols").end(); ++it)
            ctx.declare(it.key(), it.value().get<int>());
    LocusDataset ds;
    for (const auto& l : j.at("loci")) {
        check_fields(l, {"name", "dimension", "restricted_class", "euler_class", "rules", "multiplicity"}, "locus");
        FixedLocusDatum F;
        F.name = l.value("name", "F" + std::to_string(ds.loci.size()));
        F.dimension = l.at("dimension").get<int>();
        if (F.dimension < 0 || F.dimension % 2) throw std::invalid_argument("locus dimension must be even and >= 0");
        if (l.contains("restricted_class"))
            F.restricted_class = parse_laurent(l.at("restricted_class").get<std::string>(), ctx);
        F.euler_class = parse_laurent(l.at("euler_class").get<std::string>(), ctx);
        if (l.contains("rules"))
            for (auto it = l.at("rules").begin(); it != l.at("rules").end(); ++it) {
                GradedPolynomial key = parse_polynomial(it.key(), ctx);
                if (key.terms().size() != 1 || key.terms().begin()->second != Rational(1))
                    throw std::invalid_argument("rule key '" + it.key() + "' must be a single monomial");
                const std::string value = it.value().is_string() ? it.value().get<std::string>() : it.value().dump();
                F.integration_rules[key.terms().begin()->first] = parse_polynomial(value, ctx);
            }
        if (l.contains("multiplicity")) F.multiplicity = rational_from_json(l.at("multiplicity"));
        ds.loci.push_back(std::move(F));
    }
    if (j.contains("gamma")) ds.gamma = parse_laurent(j.at("gamma").get<std::string>(), ctx);
    if (j.contains("pairing_m")) ds.pairing_m = j.at("pairing_m").get<int>();
    return ds;
}

}  // namespace bubbletree
