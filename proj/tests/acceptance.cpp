// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include "bubbletree/flip.hpp"
#include "bubbletree/fm_config.hpp"
#include "bubbletree/localization.hpp"
#include "bubbletree/notation.hpp"
#include "bubbletree/tree.hpp"
#include "bubbletree/wallcross.hpp"
#include "oracles.hpp"
#include "random_euler.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace bubbletree;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

int failures = 0;

void run(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_seconds > 0 && secs > limit_seconds) {
        std::ostringstream os;
        os << "took " << secs << " s, limit " << limit_seconds << " s";
        o.fail(os.str());
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %-44s %8.3f s%s%s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.empty() ? "" : "  ",
                o.detail.c_str());
    std::fflush(stdout);
}

std::set<BubbleTree> parse_all(const std::vector<std::string>& texts) {
    std::set<BubbleTree> out;
    for (const auto& t : texts) out.insert(parse_tree(t));
    return out;
}

Outcome census() {
    Outcome o;
    const auto trees = enumerate_trees(3);
    int ghosts = 0;
    for (const auto& t : trees) ghosts += is_ghost_tree(t);
    const auto ghost_list = parse_all({"[0~[0[0[1,1],1]]]", "[0~[0[1,1[1]]]]", "[0~[0[1,2]]]", "[0~[0[1,1,1]]]",
                                       "[0~[1[0[1,1]]]]", "[0~[0[1,1],1]]", "[1[0[1,1]]]"});
    const auto others = parse_all({"[3]", "[2[1]]", "[1[1,1]]", "[1[2]]", "[1[1[1]]]", "[0~[3]]", "[0~[2[1]]]",
                                   "[0~[1[1,1]]]", "[0~[1[2]]]", "[0~[1[1[1]]]]", "[0~[1,2]]", "[0~[1,1[1]]]",
                                   "[0~[1,1,1]]"});
    std::set<BubbleTree> listed = ghost_list;
    listed.insert(others.begin(), others.end());
    if (trees.size() != 20) o.fail("tree count " + std::to_string(trees.size()));
    if (ghosts != 7) o.fail("ghost count " + std::to_string(ghosts));
    if (listed.size() != 20 || std::set<BubbleTree>(trees.begin(), trees.end()) != listed)
        o.fail("strings do not biject with the listed trees");
    for (const auto& t : ghost_list)
        if (!is_ghost_tree(t)) o.fail("listed ghost tree without ghosts");
    o.detail = o.pass ? "20 trees, 7 ghost" : o.detail;
    return o;
}

Outcome codimension_law() {
    Outcome o;
    long checked = 0;
    for (int K = 1; K <= 6; ++K) {
        const auto top = top_dimension_expr(K);
        for (const auto& t : enumerate_trees(K)) {
            const long g = static_cast<long>(ghost_vertices(t).size());
            if (top - dimension_expr(t) != GradedPolynomial(4L * t.edge_count() - 3 * g))
                o.fail("law fails on " + print_tree(t));
            ++checked;
        }
    }
    if (o.pass) o.detail = std::to_string(checked) + " trees";
    return o;
}

Outcome ghost_anchor() {
    Outcome o;
    if (vertex_dimension(0, 2, 0, false) != GradedPolynomial(3)) o.fail("ghost with two children is not 3");
    if (vertex_dimension(0, 0, 2, false) != GradedPolynomial(3)) o.fail("marks do not count as children");
    return o;
}

std::set<BubbleTree> events_at(const Resolution& r, int m) {
    std::set<BubbleTree> out;
    for (const auto& e : r.log)
        if (e.energy == m) out.insert(e.tree);
    return out;
}

Outcome flips() {
    Outcome o;
    for (int K = 1; K <= 6; ++K) {
        const auto r = resolve(K, 4, 0);
        for (std::size_t i = 0; i < r.poset.strata.size(); ++i)
            if (r.poset.active[i] && (r.poset.strata[i].ghost_count || r.poset.strata[i].isotropy_dim))
                o.fail("K=" + std::to_string(K) + " leaves " + print_tree(r.poset.strata[i].tree));
        for (const auto& e : r.log)
            if (!e.ok()) o.fail("audit failure at " + print_tree(e.tree));
        if (K == 2) {
            if (r.log.size() != 1 || r.log[0].ends.size() != 1) o.fail("K=2 event count");
            else if (r.log[0].ends[0].sphere_dim != 11 || r.log[0].ends[0].fiber_dim != 8)
                o.fail("K=2 sphere/fiber dims");
        }
        if (K == 3) {
            if (events_at(r, 2) != parse_all({"[0~[0[0[1,1],1]]]", "[0~[1[0[1,1]]]]", "[0~[0[1,1],1]]", "[1[0[1,1]]]"}))
                o.fail("K=3 m=2 set");
            if (events_at(r, 3) != parse_all({"[0~[0[1,1[1]]]]", "[0~[0[1,2]]]", "[0~[0[1,1,1]]]"}))
                o.fail("K=3 m=3 set");
        }
    }
    return o;
}

Outcome fm_counts() {
    Outcome o;
    if (enumerate_fm_strata({1, 1}).size() != 2) o.fail("n=2 count");
    if (enumerate_fm_strata({1, 1, 1}).size() != 4) o.fail("n=3 count");
    std::string counts;
    for (int n = 1; n <= 5; ++n) {
        const std::vector<int> w(n, 1);
        std::set<std::string> ours;
        for (const auto& t : enumerate_fm_strata(w)) ours.insert(oracle::code(oracle::from_tree(t)));
        const auto expected = oracle::laminar_fm_trees(w);
        if (ours != expected) o.fail("n=" + std::to_string(n) + " differs from oracle");
        counts += (counts.empty() ? "" : ",") + std::to_string(expected.size());
    }
    if (o.pass) o.detail = "counts " + counts;
    return o;
}

FamilyPoint path(std::array<long, 4> base, std::array<long, 4> v1 = {}, std::array<long, 4> v2 = {}) {
    FamilyPoint p;
    for (int i = 0; i < 4; ++i) p.coords[i] = UniPoly({Rational(base[i]), Rational(v1[i]), Rational(v2[i])});
    return p;
}

Outcome fm_limits() {
    Outcome o;
    PolynomialFamily flat, triple, nested;
    flat.points = {path({0, 0, 0, 0}), path({1, 0, 0, 0}), path({0, 2, 0, 0})};
    triple.points = {path({1, 0, 0, 0}, {1, 0, 0, 0}), path({1, 0, 0, 0}, {0, 1, 0, 0}),
                     path({1, 0, 0, 0}, {-1, -1, 0, 0})};
    nested.points = {path({0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}), path({0, 0, 0, 1}, {1, 0, 0, 0}, {0, -1, 0, 0}),
                     path({0, 0, 0, 1}, {0, 0, 1, 0})};
    const std::pair<PolynomialFamily, std::string> cases[] = {
        {flat, "[x1,x2,x3]"}, {triple, "[x1[y1,y2,y3]]"}, {nested, "[x1[y1[z1,z2],y2]]"}};
    for (const auto& [f, fmt] : cases) {
        const auto s = limit_stratum(f);
        if (stratum_format(s.tree) != fmt) o.fail("format " + stratum_format(s.tree) + " expected " + fmt);
        for (const auto& [v, screen] : s.screens)
            for (int k = 0; k < 4; ++k) {
                Rational sum;
                for (const auto& p : screen.config.points) sum += p.z[k] * Rational(p.weight);
                if (!sum.is_zero()) o.fail("unbalanced screen in " + fmt);
            }
    }
    return o;
}

std::vector<FixedLocusDatum> projective_space(const std::vector<long>& x, int power) {
    std::vector<FixedLocusDatum> loci;
    for (std::size_t i = 0; i < x.size(); ++i) {
        FixedLocusDatum F;
        F.name = "p" + std::to_string(i);
        F.euler_class = EquivariantLaurent(1);
        for (std::size_t j = 0; j < x.size(); ++j)
            if (j != i) F.euler_class = F.euler_class * EquivariantLaurent::monomial(1, GradedPolynomial(x[i] - x[j]));
        F.restricted_class = EquivariantLaurent::monomial(1, x[i]).pow(power);
        loci.push_back(F);
    }
    return loci;
}

Outcome localization() {
    Outcome o;
    const std::vector<std::vector<long>> weights = {{0, 1}, {0, 1, 2}, {0, 1, 2, 3}, {3, -1, 7, 2}};
    for (const auto& x : weights) {
        const int n = static_cast<int>(x.size()) - 1;
        const std::vector<Rational> xr(x.begin(), x.end());
        for (int k = 0; k <= n + 3; ++k) {
            const auto got = localize_sum(projective_space(x, k));
            EquivariantLaurent expected;
            if (k >= n) expected = EquivariantLaurent::monomial(k - n, oracle::complete_homogeneous(k - n, xr));
            if (got != expected || got.has_negative_powers())
                o.fail("CP^" + std::to_string(n) + " power " + std::to_string(k));
        }
    }
    std::mt19937 rng(20241018);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        int top = 0;
        const auto E = testutil::random_euler(rng, top);
        if (laurent_mul(E, euler_invert(E, top), top) != EquivariantLaurent(1)) ++bad;
    }
    if (bad) o.fail(std::to_string(bad) + " of 1000 inverse self-checks failed");
    return o;
}

Outcome r0_residue() {
    Outcome o;
    const GradedPolynomial Aa = GradedPolynomial::symbol("Aalpha", 0);
    for (int d = 0; d <= 10; ++d) {
        const auto delta = delta_assemble(0, d);
        if (delta.poly != Aa.pow(d) * Rational(-1, 2).pow(d)) o.fail("closed form at d=" + std::to_string(d));
        FixedLocusDatum origin;
        origin.name = "0";
        origin.euler_class = EquivariantLaurent::u().pow(d + 1);
        origin.restricted_class = EquivariantLaurent::monomial(1, Aa * Rational(-1, 2));
        if (boundary_pairing({origin}, EquivariantLaurent(), d + 1) != delta.poly)
            o.fail("point oracle at d=" + std::to_string(d));
    }
    return o;
}

Outcome km_structure() {
    Outcome o;
    // Literal template: every term Qsym^{r-i} Aalpha^{d-2r-2i}.
    std::string literal_misses;
    for (int r = 0; r <= 3; ++r)
        for (int d : {4 * r - 1, 4 * r, 4 * r + 1}) {
            if (d < 0) continue;
            const auto delta = delta_assemble(r, d);
            if (!delta.literal_shape_ok())
                literal_misses += (literal_misses.empty() ? "" : ",") + std::string("(r=") + std::to_string(r) +
                                  ",d=" + std::to_string(d) + ")";
        }
    // Form independence: walls with equal (r, d, chi, sigma) on different forms.
    const IntersectionForm A({{1, 0, 0}, {0, -1, 0}, {0, 0, -1}});
    const IntersectionForm B({{0, 1, 0}, {1, 0, 0}, {0, 0, -1}});
    bool independent = A.euler_number() == B.euler_number() && A.signature() == B.signature();
    for (int r = 0; r <= 3 && independent; ++r) {
        const long p1 = -4 - 4L * r;  // alpha^2 = -4 on both forms
        const Wall wa{{0, 2, 0}, A.pair(IntVec{0, 2, 0}, IntVec{0, 2, 0}), 0, 0, 0, std::nullopt};
        const Wall wb{{1, -2, 0}, B.pair(IntVec{1, -2, 0}, IntVec{1, -2, 0}), 0, 0, 0, std::nullopt};
        DeltaParams pa, pb;
        pa.chi = Rational(A.euler_number());
        pa.sigma = Rational(A.signature());
        pb.chi = Rational(B.euler_number());
        pb.sigma = Rational(B.signature());
        if (wa.alpha_sq != -4 || wb.alpha_sq != -4) independent = false;
        else if (delta_assemble(wa, p1, pa).coefficients() != delta_assemble(wb, p1, pb).coefficients())
            independent = false;
    }
    if (!literal_misses.empty())
        o.fail("literal exponent d-2r-2i violated at " + literal_misses +
               "; homogeneous template d-2r+2i holds; form independence " + (independent ? "holds" : "FAILS"));
    else if (!independent)
        o.fail("coefficients differ across forms");
    return o;
}

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

Outcome walls() {
    Outcome o;
    const std::vector<std::pair<std::vector<std::vector<long>>, std::vector<long>>> forms = {
        {{{0, 1}, {1, 0}}, {1, 1}},
        {{{1, 0}, {0, -1}}, {1, 0}},
        {{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}, {1, 0, 0}},
        {{{0, 1, 0}, {1, 0, 0}, {0, 0, -1}}, {1, 1, 0}}};
    std::mt19937 rng(424242);
    int instances = 0, with_walls = 0;
    std::size_t walls_seen = 0;
    for (const auto& [q, axis] : forms) {
        const IntersectionForm Q(q);
        for (int rep = 0; rep < 10; ++rep) {
            const auto wm = random_positive(rng, Q, axis);
            const auto wp = random_positive(rng, Q, axis);
            std::vector<long> c(q.size());
            for (auto& x : c) x = std::uniform_int_distribution<long>(0, 1)(rng);
            const long p1 = -std::uniform_int_distribution<long>(1, 8)(rng);
            const auto got = enumerate_walls(Q, c, p1, RatVec(wm.begin(), wm.end()), RatVec(wp.begin(), wp.end()));
            std::set<std::vector<long>> ours;
            for (const auto& w : got.walls) ours.insert(w.alpha);
            if (ours != oracle::brute_force_walls(q, c, p1, wm, wp, 12, true)) o.fail("instance mismatch");
            walls_seen += ours.size();
            with_walls += !ours.empty();
            ++instances;
        }
    }
    if (instances < 20) o.fail("too few instances");
    if (o.pass)
        o.detail = std::to_string(instances) + " instances (" + std::to_string(with_walls) + " nonempty), " +
                   std::to_string(walls_seen) + " walls";
    return o;
}

Outcome round_trip() {
    Outcome o;
    long n = 0;
    for (int K = 1; K <= 6; ++K)
        for (const auto& t : enumerate_trees(K)) {
            if (!(parse_tree(print_tree(t)) == t) || print_tree(parse_tree(print_tree(t))) != print_tree(t))
                o.fail("tree " + print_tree(t));
            ++n;
        }
    for (int k = 1; k <= 5; ++k)
        for (const auto& t : enumerate_fm_strata(std::vector<int>(k, 1))) {
            const std::string f = stratum_format(t);
            const auto c = parse_config(f);
            if (print_config(c) != f || !(config_to_tree(c, format_leaf_weights(t)) == t)) o.fail("format " + f);
            ++n;
        }
    if (o.pass) o.detail = std::to_string(n) + " strings";
    return o;
}

}  // namespace

int main() {
    run(1, "K=3 census", 1.0, census);
    run(2, "codimension law K<=6", 30.0, codimension_law);
    run(3, "ghost vertex dimension anchor", 0, ghost_anchor);
    run(4, "flip resolution K<=6", 60.0, flips);
    run(5, "FM strata counts", 0, fm_counts);
    run(6, "FM limits", 0, fm_limits);
    run(7, "localization oracles", 10.0, localization);
    run(8, "r=0 wall residue", 0, r0_residue);
    run(9, "KM structure r<=3", 120.0, km_structure);
    run(10, "wall enumeration vs box oracle", 0, walls);
    run(11, "parser round trip", 0, round_trip);
    return failures;
}
