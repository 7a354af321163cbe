#include "bubbletree/flip.hpp"
#include "bubbletree/notation.hpp"

#include <doctest.h>

#include <set>

using namespace bubbletree;

namespace {

std::set<BubbleTree> trees_of(const std::vector<FlipEvent>& events, int energy) {
    std::set<BubbleTree> out;
    for (const auto& e : events)
        if (e.energy == energy) out.insert(e.tree);
    return out;
}

std::set<BubbleTree> parse_all(std::initializer_list<const char*> texts) {
    std::set<BubbleTree> out;
    for (const char* t : texts) out.insert(parse_tree(t));
    return out;
}

// Smallest end energy among active ghost trees, or a large value.
int min_active_energy(const StratumPoset& p) {
    int m = 1 << 20;
    for (std::size_t i = 0; i < p.strata.size(); ++i)
        if (p.active[i])
            if (auto e = ends(p.strata[i].tree).energy) m = std::min(m, *e);
    return m;
}

}  // namespace

TEST_CASE("posets of small charge") {
    auto p1 = build_poset(1, 4, 0);
    CHECK(p1.strata.size() == 2);
    CHECK(p1.hasse.size() == 1);
    auto p2 = build_poset(2, 4, 0);
    CHECK(p2.strata.size() == 6);
    CHECK(p2.strata[p2.maximal()].tree == parse_tree("[2]"));
    for (const auto& [i, j] : p2.hasse) CHECK(i != p2.maximal());
    auto p3 = build_poset(3, 4, 0);
    CHECK(p3.strata.size() == 20);
    int ghosts = 0;
    for (const auto& s : p3.strata) ghosts += s.ghost_count > 0;
    CHECK(ghosts == 7);
}

TEST_CASE("hasse pairs are exactly the single contractions") {
    auto p = build_poset(4, 4, 0);
    std::set<std::pair<int, int>> expected;
    for (std::size_t i = 0; i < p.strata.size(); ++i)
        for (const auto& c : single_contractions(p.strata[i].tree)) expected.insert({static_cast<int>(i), p.index_of(c)});
    CHECK(std::set<std::pair<int, int>>(p.hasse.begin(), p.hasse.end()) == expected);
    for (const auto& [i, j] : expected) CHECK(j >= 0);
}

TEST_CASE("parallel and serial posets agree") {
    for (int K = 1; K <= 6; ++K) {
        auto a = build_poset(K, 4, 0);
        auto b = build_poset_serial(K, 4, 0);
        CHECK(poset_to_json(a) == poset_to_json(b));
    }
}

TEST_CASE("K = 2 exceptional assignment") {
    auto t = parse_tree("[0~[0[1,1]]]");
    const int v = ghost_vertices(t).at(0);
    auto table = exceptional_assignment(t, v);
    CHECK(table.size() == 7);
    CHECK(table.at({0}) == parse_tree("[0~[1,1]]"));
    CHECK(table.at({1, 2}) == parse_tree("[0~[2]]"));
    CHECK(table.at({0, 1, 2}) == parse_tree("[2]"));
    CHECK(table.at({1}) == parse_tree("[0~[1[1]]]"));
}

TEST_CASE("K = 2 resolution") {
    auto r = resolve(2, 4, 0);
    REQUIRE(r.log.size() == 1);
    const auto& e = r.log[0];
    CHECK(e.tree == parse_tree("[0[0[1,1]]]"));
    REQUIRE(e.ends.size() == 1);
    CHECK(e.ends[0].sphere_dim == 11);
    CHECK(e.ends[0].fiber_dim == 8);
    CHECK(e.ends[0].group == "SU(2)");
    CHECK(e.ends[0].multiplicity == Rational(1, 8));
    CHECK(e.ok());
    CHECK(r.rounds == 1);
    CHECK(r.poset.exceptional.count(canonical_form(parse_tree("[0[1,1]]"))));
}

TEST_CASE("K = 3 processes the ghost trees in two rounds") {
    auto r = resolve(3, 4, 0);
    CHECK(r.rounds == 2);
    CHECK(trees_of(r.log, 2) ==
          parse_all({"[0~[0[0[1,1],1]]]", "[0~[1[0[1,1]]]]", "[0~[0[1,1],1]]", "[1[0[1,1]]]"}));
    CHECK(trees_of(r.log, 3) == parse_all({"[0~[0[1,1[1]]]]", "[0~[0[1,2]]]", "[0~[0[1,1,1]]]"}));
    for (const auto& e : r.log) {
        CHECK(e.ok());
        if (e.tree == parse_tree("[0~[0[1,1[1]]]]")) {
            REQUIRE(e.merged_into.has_value());
            CHECK(*e.merged_into == parse_tree("[0~[0[1,2]]]"));
        }
    }
    for (const auto& e : r.log)
        for (const auto& end : e.ends) {
            CHECK(end.sphere_dim == 4 * (end.n_children + 1) - 1);
            CHECK(end.fiber_dim == end.sphere_dim - 3);
        }
}

TEST_CASE("resolution terminates ghost free for K <= 6") {
    for (int K = 1; K <= 6; ++K) {
        CAPTURE(K);
        auto r = resolve(K, 4, 0);
        CHECK(r.rounds <= std::max(0, K - 1));
        for (std::size_t i = 0; i < r.poset.strata.size(); ++i)
            if (r.poset.active[i]) {
                CHECK(r.poset.strata[i].ghost_count == 0);
                CHECK(r.poset.strata[i].isotropy_dim == 0);
            }
        for (const auto& e : r.log) CHECK(e.ok());
        if (K == 1) CHECK(r.log.empty());
    }
}

TEST_CASE("assignment tables are complete") {
    for (int K = 2; K <= 5; ++K)
        for (const auto& e : resolve(K, 4, 0).log)
            for (const auto& end : e.ends) {
                const std::size_t k = end.n_children;
                CHECK(end.assignment.size() == (std::size_t{1} << (k + 1)) - 1);
                for (const auto& [support, target] : end.assignment) CHECK(is_valid_tree(target));
                SupportPattern full;
                for (std::size_t i = 0; i <= k; ++i) full.push_back(static_cast<int>(i));
                const auto& absorbed = end.assignment.at(full);
                CHECK(absorbed.size() == e.tree.size() - static_cast<int>(k) - 1);
            }
}

TEST_CASE("flip steps never leave lower energy ends behind") {
    for (int K = 3; K <= 6; ++K) {
        auto p = build_poset(K, 4, 0);
        for (int m = 2; m <= K; ++m) {
            flip_step(p, m);
            CHECK(min_active_energy(p) > m);
        }
    }
}

TEST_CASE("flip_step rejects skipped energies") {
    auto p = build_poset(3, 4, 0);
    CHECK_THROWS_AS(flip_step(p, 3), FlipPreconditionError);
}

TEST_CASE("dimension audit") {
    CHECK(audit_end(2, 11, 8).ok());
    auto bad = audit_end(2, 10, 7);
    CHECK_FALSE(bad.ok());
    CHECK_FALSE(bad.sphere_ok);
    CHECK_FALSE(bad.failure.empty());
    CHECK_FALSE(audit_end(3, 15, 11).fiber_ok);
    FlipEvent fake = resolve(2, 4, 0).log.at(0);
    fake.ends[0].sphere_dim = 10;
    CHECK_FALSE(audit_dimensions(fake).ok());
}

TEST_CASE("dot output lists every active stratum") {
    auto p = build_poset(2, 4, 0);
    const std::string dot = poset_dot(p);
    CHECK(dot.rfind("digraph", 0) == 0);
    for (const auto& s : p.strata) CHECK(dot.find(print_tree(s.tree)) != std::string::npos);
}
