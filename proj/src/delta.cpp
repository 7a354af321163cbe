#include "bubbletree/localization.hpp"
#include "bubbletree/wallcross.hpp"

#include "bubbletree/json_io.hpp"

#include <stdexcept>

namespace bubbletree {

Rational DeltaParams::block_constant_for(int t) const {
    auto it = block_constant.find(t);
    return it == block_constant.end() ? Rational(1) : it->second;
}

namespace {

GradedPolynomial sym(const std::string& name, int degree) { return GradedPolynomial::symbol(name, degree); }

Rational factorial(int n) {
    Rational f(1);
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::string block_suffix(int t) { return "_" + std::to_string(t); }

// The four-manifold X: top classes in omega (Poincare dual of Sigma),
// alpha and the characteristic classes e, sig.
FixedLocusDatum x_locus(long alpha_sq) {
    FixedLocusDatum X;
    X.name = "X";
    X.dimension = 4;
    auto mono = [](const GradedPolynomial& p) { return p.terms().begin()->first; };
    const auto omega = sym("omega", 2), alpha = sym("alpha", 2);
    X.integration_rules[mono(omega * omega)] = sym("Qsym", 0);
    X.integration_rules[mono(alpha * omega)] = sym("Aalpha", 0);
    X.integration_rules[mono(alpha * alpha)] = GradedPolynomial(Rational(alpha_sq));
    X.integration_rules[mono(sym("e", 4))] = sym("chi", 0);
    X.integration_rules[mono(sym("sig", 4))] = sym("sigma", 0);
    return X;
}

GradedPolynomial substitute_topology(GradedPolynomial p, const DeltaParams& params) {
    if (params.chi) p = p.substitute("chi", GradedPolynomial(*params.chi));
    if (params.sigma) p = p.substitute("sigma", GradedPolynomial(*params.sigma));
    return p;
}

// -(u - alpha)^2 + p1(t)
EquivariantLaurent block_euler() {
    const EquivariantLaurent u = EquivariantLaurent::u();
    const EquivariantLaurent a(sym("alpha", 2));
    return -((u - a) * (u - a)) + EquivariantLaurent(sym("p1r", 4));
}

// Fiber pushforward then integration over X, coefficient-wise in u.
EquivariantLaurent integrate_block(const EquivariantLaurent& series, int t, long alpha_sq) {
    const PushforwardRules rules = PushforwardRules::standard(t, block_suffix(t));
    EquivariantLaurent pushed =
        series.map_coefficients([&](const GradedPolynomial& c) { return apply_pushforward(c, rules); });
    return integrate_over(x_locus(alpha_sq), pushed);
}

}  // namespace

EquivariantLaurent delta_block(int r, int d, const DeltaParams& params) {
    if (r < 0 || d < 0) throw std::invalid_argument("delta_block: r and d must be non-negative");
    const long alpha_sq = 4L * r - d - 3;
    if (alpha_sq == -1) throw std::invalid_argument("delta_block: alpha^2 = -1 is outside the residue computation");
    const long N = d + 1 - 4L * r;
    const EquivariantLaurent u = EquivariantLaurent::u();
    const EquivariantLaurent Aa(sym("Aalpha", 0));
    if (r == 0) {
        EquivariantLaurent gamma = Aa * u * params.gamma_u_r0;
        return (gamma.pow(d) * u).shift(static_cast<int>(-N));
    }
    const int top = 8 * r - 4;
    const EquivariantLaurent gamma = EquivariantLaurent(sym("omega", 2)) * Rational(r) + Aa * u * params.gamma_u;
    EquivariantLaurent integrand = laurent_mul(gamma.pow(d, top), euler_invert(block_euler(), top), top);
    integrand = (integrand * u).shift(static_cast<int>(-N));
    EquivariantLaurent out = integrate_block(integrand, r, alpha_sq) * params.block_constant_for(r);
    return out.map_coefficients([&](const GradedPolynomial& c) { return substitute_topology(c, params); });
}

GradedPolynomial block_moment(int t, int n, long alpha_sq, const DeltaParams& params) {
    if (t < 1 || n < 0) throw std::invalid_argument("block_moment: need t >= 1 and n >= 0");
    const int top = 8 * t - 4;
    const EquivariantLaurent omega_n(sym("omega", 2).pow(n));
    EquivariantLaurent series = laurent_mul(omega_n, euler_invert(block_euler(), top), top);
    EquivariantLaurent integrated = integrate_block(series, t, alpha_sq);
    for (const auto& [k, c] : integrated.coefficients())
        if (k != n - 4 * t)
            throw std::logic_error("block_moment: integral is not concentrated in u^" + std::to_string(n - 4 * t));
    return substitute_topology(integrated.coefficient(n - 4 * t), params);
}

std::vector<std::vector<int>> partitions(int r) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rest, int max_part) -> void {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(rest, max_part); p >= 1; --p) {
            cur.push_back(p);
            self(self, rest - p, p);
            cur.pop_back();
        }
    };
    rec(rec, r, r);
    return out;
}

GradedPolynomial delta_partition(const std::vector<int>& parts, int d, const DeltaParams& params) {
    int r = 0;
    for (int t : parts) {
        if (t < 1) throw std::invalid_argument("partition parts must be positive");
        r += t;
    }
    const long alpha_sq = 4L * r - d - 3;
    if (alpha_sq == -1) throw std::invalid_argument("alpha^2 = -1 is outside the residue computation");
    const int k = static_cast<int>(parts.size());
    const Rational c = r == 0 ? params.gamma_u_r0 : params.gamma_u;
    const GradedPolynomial cA = sym("Aalpha", 0) * c;

    // Per-block moments g[j][n].
    std::vector<std::array<GradedPolynomial, 3>> g(k);
    for (int j = 0; j < k; ++j)
        for (int n = 0; n <= 2; ++n) g[j][n] = block_moment(parts[j], n, alpha_sq, params);

    GradedPolynomial total;
    std::vector<int> n(k, 0);
    while (true) {
        int used = 0;
        for (int x : n) used += x;
        if (used <= d) {
            Rational coef = factorial(d) / factorial(d - used);
            GradedPolynomial term = cA.pow(d - used);
            for (int j = 0; j < k; ++j) {
                coef /= factorial(n[j]);
                coef *= Rational(parts[j]).pow(n[j]);
                term = term * g[j][n[j]];
            }
            total += term * coef;
        }
        int j = 0;
        while (j < k && n[j] == 2) n[j++] = 0;
        if (j == k) break;
        ++n[j];
    }

    Rational norm(1);
    for (int t : parts) norm *= params.block_constant_for(t);
    for (std::size_t i = 0; i < parts.size();) {
        std::size_t e = i;
        while (e < parts.size() && parts[e] == parts[i]) ++e;
        norm /= factorial(static_cast<int>(e - i));
        i = e;
    }
    return total * norm;
}

DeltaPolynomial delta_assemble(int r, int d, const DeltaParams& params) {
    if (r < 0 || d < 0) throw std::invalid_argument("delta_assemble: r and d must be non-negative");
    const long alpha_sq = 4L * r - d - 3;
    if (alpha_sq >= 0) throw std::invalid_argument("delta_assemble: (r, d) gives alpha^2 >= 0, not a wall");
    DeltaPolynomial out;
    out.r = r;
    out.d = d;
    for (const auto& parts : partitions(r)) out.poly += delta_partition(parts, d, params);
    if (!out.homogeneous_shape_ok())
        throw std::logic_error("delta_assemble: result leaves the Qsym/Aalpha template: " + out.poly.str());
    return out;
}

DeltaPolynomial delta_assemble(const Wall& w, long p1, const DeltaParams& params) {
    const WallInvariants inv = wall_invariants(w.alpha_sq, p1);
    if (inv.obstructed) throw std::invalid_argument("delta_assemble: alpha^2 = -1 is outside the residue computation");
    return delta_assemble(static_cast<int>(inv.r), static_cast<int>(inv.d), params);
}

std::map<int, GradedPolynomial> DeltaPolynomial::by_qsym_power() const {
    std::map<int, GradedPolynomial> out;
    for (const auto& [m, c] : poly.terms()) {
        const int a = static_cast<int>(m.exponent_of("Qsym"));
        out[a] += GradedPolynomial(m.without("Qsym").without("Aalpha"), c);
    }
    return out;
}

bool DeltaPolynomial::homogeneous_shape_ok() const {
    for (const auto& [m, c] : poly.terms()) {
        const int a = static_cast<int>(m.exponent_of("Qsym"));
        const int b = static_cast<int>(m.exponent_of("Aalpha"));
        if (a > r || 2 * a + b != d || m.degree() != 0) return false;
    }
    return true;
}

bool DeltaPolynomial::literal_shape_ok() const {
    for (const auto& [m, c] : poly.terms()) {
        const int a = static_cast<int>(m.exponent_of("Qsym"));
        const int b = static_cast<int>(m.exponent_of("Aalpha"));
        const int i = r - a;
        if (i < 0 || i > r || m.degree() != 0) return false;
        if (b != d - 2 * r - 2 * i || b < 0) return false;
    }
    return true;
}

std::vector<GradedPolynomial> DeltaPolynomial::coefficients() const {
    std::vector<GradedPolynomial> a(r + 1);
    for (auto& [power, c] : by_qsym_power())
        if (power <= r) a[r - power] = c;
    return a;
}

WallCrossingSum wall_crossing_difference(const std::vector<Wall>& walls, const std::vector<DeltaPolynomial>& deltas,
                                         const IntVec& c, const IntersectionForm& Q, EpsilonConvention conv) {
    if (walls.size() != deltas.size()) throw std::invalid_argument("one delta per wall required");
    WallCrossingSum out;
    for (std::size_t i = 0; i < walls.size(); ++i) {
        const long eps = epsilon(c, walls[i].alpha, Q, conv);
        GradedPolynomial term =
            deltas[i].poly.substitute("Aalpha", sym("Aalpha_" + std::to_string(i + 1), 0)) * Rational(eps);
        out.total += term;
        out.terms.emplace_back(walls[i], term);
    }
    return out;
}

nlohmann::json delta_to_json(const DeltaPolynomial& d) {
    nlohmann::json coeffs = nlohmann::json::array();
    const auto a = d.coefficients();
    for (std::size_t i = 0; i < a.size(); ++i)
        coeffs.push_back({{"i", i},
                          {"qsym_power", d.r - static_cast<int>(i)},
                          {"aalpha_power", d.d - 2 * d.r + 2 * static_cast<int>(i)},
                          {"coefficient", a[i].str()}});
    return {{"schema", kSchemaVersion},
            {"r", d.r},
            {"d", d.d},
            {"delta", d.poly.str()},
            {"coefficients", coeffs},
            {"homogeneous_shape", d.homogeneous_shape_ok()},
            {"literal_shape", d.literal_shape_ok()}};
}

}  // namespace bubbletree
