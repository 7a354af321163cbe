#include "bubbletree/localization.hpp"
#include "bubbletree/wallcross.hpp"
#include "delta_oracle.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace bubbletree;

namespace {

RatVec rv(std::initializer_list<long> xs) {
    RatVec v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

std::set<std::vector<long>> alphas(const std::vector<Wall>& ws) {
    std::set<std::vector<long>> out;
    for (const auto& w : ws) out.insert(w.alpha);
    return out;
}

struct FormCase {
    std::vector<std::vector<long>> q;
    // Point in the positive cone; samples stay near it.
    std::vector<long> axis;
};

// A random integral point with omega^2 >= |omega|^2 / 4 near the axis.
std::vector<long> random_positive(std::mt19937& rng, const IntersectionForm& Q, const std::vector<long>& axis) {
    std::uniform_int_distribution<long> scale(3, 6), jitter(-4, 4);
    while (true) {
        std::vector<long> w(axis.size());
        const long s = scale(rng);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = s * axis[i] + jitter(rng);
        long norm = 0;
        for (long x : w) norm += x * x;
        const long sq = Q.pair(w, w);
        if (sq > 0 && 4 * sq >= norm && Q.pair(w, axis) > 0) return w;
    }
}

}  // namespace

TEST_CASE("form invariants") {
    auto H = IntersectionForm::hyperbolic();
    CHECK(H.b_plus() == 1);
    CHECK(H.b_minus() == 1);
    CHECK(H.signature() == 0);
    CHECK(H.euler_number() == 4);
    CHECK(H.even());
    CHECK(H.unimodular());
    CHECK(H.determinant() == -1);
    auto D = IntersectionForm::diagonal({1, -1, -1});
    CHECK(D.b_plus() == 1);
    CHECK(D.signature() == -1);
    CHECK_FALSE(D.even());
    CHECK(IntersectionForm({{2, 1}, {1, 2}}).determinant() == 3);
    CHECK_THROWS(IntersectionForm({{0, 1}, {2, 0}}));
    CHECK(IntersectionForm::from_json(H.to_json()).to_json() == H.to_json());
    auto lying = H.to_json();
    lying["signature"] = 2;
    CHECK_THROWS(IntersectionForm::from_json(lying));
    auto extra = H.to_json();
    extra["colour"] = "red";
    CHECK_THROWS(IntersectionForm::from_json(extra));
}

TEST_CASE("P-type walls") {
    auto H = IntersectionForm::hyperbolic();
    CHECK(is_p_type_wall({1, -1}, {1, 1}, -2, H));
    CHECK_FALSE(is_p_type_wall({1, 0}, {1, 0}, -2, H));
    CHECK_FALSE(is_p_type_wall({2, -2}, {0, 0}, -2, H));
    CHECK_FALSE(is_p_type_wall({1, -1}, {0, 1}, -2, H));
}

TEST_CASE("wall invariants") {
    auto a = wall_invariants(-2, -6);
    CHECK(a.r == 1);
    CHECK(a.d == 3);
    CHECK(a.N == 0);
    auto b = wall_invariants(-6, -6);
    CHECK(b.r == 0);
    CHECK(b.d == 3);
    CHECK(b.N == 4);
    CHECK_THROWS_AS(wall_invariants(-2, -7), std::invalid_argument);
    CHECK_THROWS_AS(wall_invariants(-10, -6), std::invalid_argument);
    CHECK(wall_invariants(-1, -5).obstructed);
}

TEST_CASE("epsilon") {
    auto H = IntersectionForm::hyperbolic();
    CHECK(epsilon({1, 1}, {1, 1}, H) == 1);
    // c - alpha = 2 beta with beta^2 = -1 on diag(1,-1,-1): beta = (0,1,0).
    auto D = IntersectionForm::diagonal({1, -1, -1});
    CHECK(epsilon({1, 2, 1}, {1, 0, 1}, D) == 1);
    // (c - alpha)^2 = 2 on H: c - alpha = (1,1).
    CHECK(epsilon({1, 1}, {0, 0}, H) == -1);
    CHECK(epsilon({1, 1}, {0, 0}, H, EpsilonConvention::Unsigned) == 1);
    CHECK(epsilon({2, 2}, {0, 0}, H, EpsilonConvention::Unsigned) == 4);
    CHECK_THROWS_AS(epsilon({1, 0}, {0, 0}, IntersectionForm::diagonal({1, -1})), std::domain_error);
}

TEST_CASE("hyperbolic wall example") {
    auto H = IntersectionForm::hyperbolic();
    auto s = enumerate_walls(H, {1, 1}, -2, rv({2, 1}), rv({1, 2}));
    REQUIRE(s.walls.size() == 1);
    CHECK(s.walls[0].alpha == IntVec{1, -1});
    CHECK(s.walls[0].alpha_sq == -2);
    CHECK(s.walls[0].t_star == Rational(1, 2));
    CHECK(s.walls[0].pair_minus < Rational(0));
    REQUIRE(s.walls[0].invariants.has_value());
    CHECK(s.walls[0].invariants->r == 0);
    WallSearchOptions keep;
    keep.collapse_sign = false;
    auto both = enumerate_walls(H, {1, 1}, -2, rv({2, 1}), rv({1, 2}), keep);
    CHECK(alphas(both.walls) == std::set<std::vector<long>>{{1, -1}, {-1, 1}});
}

TEST_CASE("vacuous range") {
    auto H = IntersectionForm::hyperbolic();
    CHECK(enumerate_walls(H, {0, 0}, -1, rv({2, 1}), rv({1, 2})).walls.empty());
}

TEST_CASE("a period point on a wall is reported as degenerate") {
    auto H = IntersectionForm::hyperbolic();
    auto s = enumerate_walls(H, {1, 1}, -2, rv({1, 1}), rv({1, 3}));
    CHECK(alphas(s.degenerate).count({1, -1}) + alphas(s.degenerate).count({-1, 1}) == 1);
    for (const auto& w : s.walls) CHECK(w.alpha != IntVec{1, -1});
}

TEST_CASE("wall enumeration equals the brute-force box oracle") {
    const std::vector<FormCase> forms = {{{{0, 1}, {1, 0}}, {1, 1}},
                                         {{{1, 0}, {0, -1}}, {1, 0}},
                                         {{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, {1, 0, 0}},
                                         {{{0, 1, 0}, {1, 0, 0}, {0, 0, -1}}, {1, 1, 0}},
                                         {{{1, 0, 0}, {0, -2, 1}, {0, 1, -2}}, {1, 0, 0}}};
    std::mt19937 rng(1729);
    int instances = 0;
    for (const auto& fc : forms) {
        IntersectionForm Q(fc.q);
        REQUIRE(Q.b_plus() == 1);
        for (int rep = 0; rep < 8; ++rep) {
            const auto wm = random_positive(rng, Q, fc.axis);
            const auto wp = random_positive(rng, Q, fc.axis);
            std::vector<long> c(fc.q.size());
            for (auto& x : c) x = std::uniform_int_distribution<long>(0, 1)(rng);
            const long p1 = -std::uniform_int_distribution<long>(1, 8)(rng);
            const RatVec wmr(wm.begin(), wm.end()), wpr(wp.begin(), wp.end());
            for (bool collapse : {true, false}) {
                WallSearchOptions opt;
                opt.collapse_sign = collapse;
                auto got = enumerate_walls(Q, c, p1, wmr, wpr, opt);
                auto expected = oracle::brute_force_walls(fc.q, c, p1, wm, wp, 12, collapse);
                CAPTURE(p1);
                CHECK(alphas(got.walls) == expected);
                CHECK(enumerate_walls_serial(Q, c, p1, wmr, wpr, opt).walls.size() == got.walls.size());
                for (const auto& w : got.walls) {
                    CHECK(Q.pair(w.alpha, RatVec(wmr)) * Q.pair(w.alpha, RatVec(wpr)) < Rational(0));
                    RatVec at(wm.size());
                    for (std::size_t i = 0; i < at.size(); ++i) at[i] = wmr[i] + w.t_star * (wpr[i] - wmr[i]);
                    CHECK(Q.pair(w.alpha, at).is_zero());
                    if (w.invariants) CHECK(w.invariants->r >= 0);
                }
            }
            ++instances;
        }
    }
    CHECK(instances >= 20);
}

TEST_CASE("r = 0 residue matches the weight-one point oracle") {
    for (int d = 0; d <= 9; ++d) {
        auto delta = delta_assemble(0, d);
        const GradedPolynomial Aa = GradedPolynomial::symbol("Aalpha", 0);
        CHECK(delta.poly == Aa.pow(d) * Rational(-1, 2).pow(d));
        // C^N, N = d + 1, weight one: E = u^N, gamma = -1/2 Aalpha u.
        FixedLocusDatum origin;
        origin.name = "0";
        origin.euler_class = EquivariantLaurent::u().pow(d + 1);
        origin.restricted_class = EquivariantLaurent::monomial(1, Aa * Rational(-1, 2));
        CHECK(boundary_pairing({origin}, EquivariantLaurent(), d + 1) == delta.poly);
    }
}

TEST_CASE("delta of each partition equals the literal multi-block expansion") {
    for (int r = 1; r <= 3; ++r)
        for (int d : {4 * r - 1, 4 * r, 4 * r + 1}) {
            for (const auto& parts : partitions(r)) {
                CAPTURE(r);
                CAPTURE(d);
                CHECK(delta_partition(parts, d) == oracle::literal_delta_partition(parts, d));
            }
            CHECK(constant_u_term(delta_block(r, d)) == delta_partition({r}, d));
        }
}

TEST_CASE("partitions") {
    CHECK(partitions(0).size() == 1);
    CHECK(partitions(3) == std::vector<std::vector<int>>{{3}, {2, 1}, {1, 1, 1}});
    CHECK(partitions(6).size() == 11);
}

TEST_CASE("block constants scale each block") {
    DeltaParams p;
    p.block_constant[1] = Rational(3);
    CHECK(delta_partition({1, 1}, 8, p) == delta_partition({1, 1}, 8) * Rational(9));
    CHECK(delta_partition({2}, 8, p) == delta_partition({2}, 8));
}

TEST_CASE("r = 1 lies in the span of the fiber constants with Qsym degree at most 1") {
    for (int d : {3, 4, 5}) {
        auto delta = delta_assemble(1, d);
        CHECK(delta.homogeneous_shape_ok());
        for (const auto& [m, c] : delta.poly.terms()) {
            CHECK(m.exponent_of("Qsym") <= 1);
            const int fiber = m.exponent_of("A_1") + m.exponent_of("B_L_1") + m.exponent_of("B_R_1");
            CHECK(fiber == 1);
        }
    }
    // Killing the fiber constants leaves nothing for r >= 1.
    auto delta = delta_assemble(2, 8);
    GradedPolynomial killed = delta.poly;
    for (const char* s : {"A_1", "B_L_1", "B_R_1", "A_2", "B_L_2", "B_R_2"}) killed = killed.substitute(s, 0);
    CHECK(killed.is_zero());
}

TEST_CASE("homogeneous template holds for r <= 3") {
    for (int r = 0; r <= 3; ++r)
        for (int d = std::max(0, 4 * r - 1); d <= 4 * r + 2; ++d) {
            if (4 * r - d - 3 == -1) continue;
            auto delta = delta_assemble(r, d);
            CHECK(delta.homogeneous_shape_ok());
            CHECK(delta.coefficients().size() == static_cast<std::size_t>(r + 1));
        }
}

TEST_CASE("coefficients depend only on r, d, chi and sigma") {
    auto H = IntersectionForm::hyperbolic();
    auto D = IntersectionForm::diagonal({1, -1});
    for (int r = 0; r <= 2; ++r) {
        const long p1 = -4 - 4L * r;
        Wall wh{{1, -2}, H.pair(IntVec{1, -2}, IntVec{1, -2}), Rational(0), Rational(0), Rational(0), std::nullopt};
        Wall wd{{0, 2}, D.pair(IntVec{0, 2}, IntVec{0, 2}), Rational(0), Rational(0), Rational(0), std::nullopt};
        REQUIRE(wh.alpha_sq == -4);
        REQUIRE(wd.alpha_sq == -4);
        DeltaParams ph, pd;
        ph.chi = Rational(H.euler_number());
        ph.sigma = Rational(H.signature());
        pd.chi = Rational(D.euler_number());
        pd.sigma = Rational(D.signature());
        CHECK(delta_assemble(wh, p1, ph).coefficients() == delta_assemble(wd, p1, pd).coefficients());
    }
}

TEST_CASE("wall crossing difference") {
    auto H = IntersectionForm::hyperbolic();
    CHECK(wall_crossing_difference({}, {}, {1, 1}, H).total.is_zero());
    // p1 = -6: walls with alpha^2 = -2 (r = 1) and -6 (r = 0), both d = 3.
    auto s = enumerate_walls(H, {1, 1}, -6, rv({4, 1}), rv({1, 4}));
    std::vector<Wall> ws;
    std::vector<DeltaPolynomial> deltas;
    for (const auto& w : s.walls)
        if (w.invariants) {
            ws.push_back(w);
            deltas.push_back(delta_assemble(w, -6));
        }
    REQUIRE(ws.size() == 3);
    auto sum = wall_crossing_difference(ws, deltas, {1, 1}, H);
    GradedPolynomial expected;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto term = deltas[i].poly.substitute(
                              "Aalpha", GradedPolynomial::symbol("Aalpha_" + std::to_string(i + 1), 0)) *
                          Rational(epsilon({1, 1}, ws[i].alpha, H));
        CHECK(sum.terms[i].second == term);
        expected += term;
    }
    CHECK(sum.total == expected);
    auto single = wall_crossing_difference({ws[0]}, {deltas[0]}, {1, 1}, H);
    CHECK(single.total == sum.terms[0].second);
    CHECK_THROWS(wall_crossing_difference(ws, {}, {1, 1}, H));
}
