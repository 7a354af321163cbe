#include "bubbletree/flip.hpp"

#include "bubbletree/json_io.hpp"
#include "bubbletree/notation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bubbletree {

int StratumPoset::index_of(const BubbleTree& t) const {
    auto it = std::lower_bound(strata.begin(), strata.end(), t,
                               [](const StratumInfo& s, const BubbleTree& x) { return s.tree < x; });
    return it != strata.end() && it->tree == t ? static_cast<int>(it - strata.begin()) : -1;
}

int StratumPoset::maximal() const {
    TreeNode top;
    top.weight = K;
    return index_of(BubbleTree(top));
}

namespace {

StratumPoset assemble(int K, long chi, long sigma, std::vector<StratumInfo> infos,
                      std::vector<std::vector<BubbleTree>> covers) {
    StratumPoset p;
    p.K = K;
    p.chi = chi;
    p.sigma = sigma;
    p.strata = std::move(infos);
    p.active.assign(p.strata.size(), true);
    for (std::size_t i = 0; i < covers.size(); ++i)
        for (const auto& c : covers[i]) {
            int j = p.index_of(c);
            if (j < 0) throw std::logic_error("contraction left the census: " + c.canonical());
            p.hasse.emplace_back(static_cast<int>(i), j);
        }
    std::sort(p.hasse.begin(), p.hasse.end());
    return p;
}

}  // namespace

StratumPoset build_poset(int K, long chi, long sigma) {
    const auto trees = enumerate_trees(K);
    const int n = static_cast<int>(trees.size());
    std::vector<StratumInfo> infos(n);
    std::vector<std::vector<BubbleTree>> covers(n);
    std::string error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        try {
            infos[i] = stratum_info(trees[i], chi, sigma);
            covers[i] = single_contractions(trees[i]);
        } catch (const std::exception& ex) {
#pragma omp critical
            error = ex.what();
        }
    }
    if (!error.empty()) throw std::invalid_argument(error);
    return assemble(K, chi, sigma, std::move(infos), std::move(covers));
}

StratumPoset build_poset_serial(int K, long chi, long sigma) {
    const auto trees = enumerate_trees_serial(K);
    std::vector<StratumInfo> infos;
    std::vector<std::vector<BubbleTree>> covers;
    for (const auto& t : trees) {
        infos.push_back(stratum_info(t, chi, sigma));
        covers.push_back(single_contractions(t));
    }
    return assemble(K, chi, sigma, std::move(infos), std::move(covers));
}

std::map<SupportPattern, BubbleTree> exceptional_assignment(const BubbleTree& t, int v) {
    if (!t.contains(v) || v == 0 || t.weight(v) != 0)
        throw std::invalid_argument("vertex " + std::to_string(v) + " of " + t.canonical() + " is not a ghost");
    std::vector<Edge> incident{{t.parent(v), v}};
    for (int c : t.children(v)) incident.push_back({v, c});
    const int k = static_cast<int>(incident.size());
    if (k > 20) throw std::invalid_argument("ghost end has too many edges");
    std::map<SupportPattern, BubbleTree> out;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        SupportPattern pattern;
        std::vector<Edge> support;
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) {
                pattern.push_back(i);
                support.push_back(incident[i]);
            }
        out.emplace(pattern, psi_contraction(t, support).tree);
    }
    return out;
}

DimensionAudit audit_end(int n_children, int sphere_dim, int fiber_dim) {
    DimensionAudit a;
    const int gluing = 4 * (n_children + 1);
    const int screen = 4 * n_children - 5;
    a.sphere_ok = sphere_dim == gluing - 1;
    a.fiber_ok = fiber_dim == sphere_dim - 3;
    // Before: the end's screen moduli times the gluing cone R^{4(n+1)}/SU(2).
    // After the semi-blow-up the cone becomes [0,1) x S/SU(2).
    a.before = screen + gluing - 3;
    a.after = screen + 1 + fiber_dim;
    a.neighborhood_ok = a.before == a.after;
    std::ostringstream why;
    if (!a.sphere_ok) why << "sphere_dim " << sphere_dim << " != 4(n+1)-1 = " << gluing - 1 << "; ";
    if (!a.fiber_ok) why << "fiber_dim " << fiber_dim << " != sphere_dim-3 = " << sphere_dim - 3 << "; ";
    if (!a.neighborhood_ok) why << "neighbourhood dimension " << a.before << " -> " << a.after << "; ";
    a.failure = why.str();
    return a;
}

bool FlipEvent::ok() const {
    return std::all_of(ends.begin(), ends.end(), [](const EndFlip& e) { return e.audit.ok(); });
}

DimensionAudit audit_dimensions(const FlipEvent& e) {
    DimensionAudit total;
    total.sphere_ok = total.fiber_ok = total.neighborhood_ok = true;
    for (const auto& end : e.ends) {
        DimensionAudit a = audit_end(end.n_children, end.sphere_dim, end.fiber_dim);
        total.sphere_ok = total.sphere_ok && a.sphere_ok;
        total.fiber_ok = total.fiber_ok && a.fiber_ok;
        total.neighborhood_ok = total.neighborhood_ok && a.neighborhood_ok;
        total.before += a.before;
        total.after += a.after;
        if (!a.failure.empty()) total.failure += "end " + std::to_string(end.vertex) + ": " + a.failure;
    }
    if (e.ends.empty()) {
        total.sphere_ok = false;
        total.failure = "event has no ends";
    }
    return total;
}

namespace {

// Replaces every child subtree of the given ends by a single leaf carrying
// its total charge; resolved lower strata are treated as points.
BubbleTree collapse_end_children(const BubbleTree& t, const std::vector<int>& end_vertices) {
    auto rebuild = [&](auto&& self, int x) -> TreeNode {
        TreeNode n;
        n.weight = t.weight(x);
        n.marks = t.marks(x);
        const bool is_end = std::find(end_vertices.begin(), end_vertices.end(), x) != end_vertices.end();
        for (int c : t.children(x)) {
            if (is_end) {
                TreeNode leaf;
                leaf.weight = t.total_charge(c);
                n.children.push_back(leaf);
            } else {
                n.children.push_back(self(self, c));
            }
        }
        return n;
    };
    return BubbleTree(rebuild(rebuild, 0), t.root_barred());
}

EndFlip make_end(const BubbleTree& t, int v) {
    EndFlip e;
    e.vertex = v;
    e.n_children = static_cast<int>(t.children(v).size() + t.marks(v).size());
    e.sphere_dim = 4 * (e.n_children + 1) - 1;
    e.fiber_dim = e.sphere_dim - 3;
    e.multiplicity = Rational(1) / Rational(2).pow(static_cast<unsigned>(e.n_children + 1));
    e.cut = cut_at_end(t, v);
    e.assignment = exceptional_assignment(t, v);
    e.closure_note = "parent edge only: the " + std::to_string(e.n_children) + " children of the ghost land on " +
                     "the parent component as a Sym^" + std::to_string(e.n_children) + " closure";
    e.audit = audit_end(e.n_children, e.sphere_dim, e.fiber_dim);
    return e;
}

}  // namespace

std::vector<FlipEvent> flip_step(StratumPoset& p, int m) {
    std::vector<int> todo;
    for (std::size_t i = 0; i < p.strata.size(); ++i) {
        if (!p.active[i]) continue;
        const EndsInfo info = ends(p.strata[i].tree);
        if (!info.energy) continue;
        if (*info.energy < m)
            throw FlipPreconditionError("unresolved ghost end of energy " + std::to_string(*info.energy) + " in " +
                                        p.strata[i].tree.canonical() + " before round " + std::to_string(m));
        if (*info.energy == m) todo.push_back(static_cast<int>(i));
    }

    const int n = static_cast<int>(todo.size());
    std::vector<FlipEvent> events(n);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n; ++k) {
        const BubbleTree& t = p.strata[todo[k]].tree;
        FlipEvent& e = events[k];
        e.tree = t;
        e.energy = m;
        for (int v : ends(t).vertices) e.ends.push_back(make_end(t, v));
    }

    // Transactional update at the end of the round.
    std::set<std::string> processed;
    for (const auto& e : events) processed.insert(e.tree.canonical());
    for (auto& e : events) {
        std::vector<int> vs;
        for (const auto& end : e.ends) vs.push_back(end.vertex);
        BubbleTree merged = collapse_end_children(e.tree, vs);
        if (!(merged == e.tree) && processed.count(merged.canonical())) e.merged_into = merged;
        for (const auto& end : e.ends)
            for (const auto& [pattern, target] : end.assignment) {
                if (p.index_of(target) < 0)
                    throw std::logic_error("assignment target outside the poset: " + target.canonical());
                auto& srcs = p.exceptional[target.canonical()];
                if (std::find(srcs.begin(), srcs.end(), e.tree.canonical()) == srcs.end())
                    srcs.push_back(e.tree.canonical());
            }
    }
    for (int i : todo) p.active[i] = false;
    return events;
}

Resolution resolve(int K, long chi, long sigma) {
    if (K < 1) throw std::invalid_argument("K must be positive");
    Resolution r;
    r.initial = build_poset(K, chi, sigma);
    r.poset = r.initial;
    for (int m = 2; m <= K; ++m) {
        auto events = flip_step(r.poset, m);
        ++r.rounds;
        for (auto& e : events) {
            DimensionAudit a = audit_dimensions(e);
            if (!a.ok())
                throw std::runtime_error("dimension audit failed for " + e.tree.canonical() + ": " + a.failure);
            r.log.push_back(std::move(e));
        }
    }
    for (std::size_t i = 0; i < r.poset.strata.size(); ++i) {
        if (!r.poset.active[i]) continue;
        if (is_ghost_tree(r.poset.strata[i].tree) || r.poset.strata[i].isotropy_dim != 0)
            throw std::runtime_error("resolution left a singular stratum " + r.poset.strata[i].tree.canonical());
    }
    return r;
}

std::string poset_dot(const StratumPoset& p, bool active_only) {
    std::ostringstream os;
    os << "digraph strata {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < p.strata.size(); ++i) {
        if (active_only && !p.active[i]) continue;
        const auto& s = p.strata[i];
        os << "  n" << i << " [label=\"" << print_tree(s.tree) << "\\ndim " << s.dimension << "\"";
        if (s.ghost_count > 0) os << ", shape=box";
        if (!p.active[i]) os << ", style=dashed";
        os << "];\n";
    }
    for (auto [a, b] : p.hasse) {
        if (active_only && (!p.active[a] || !p.active[b])) continue;
        os << "  n" << a << " -> n" << b << ";\n";
    }
    os << "}\n";
    return os.str();
}

nlohmann::json poset_to_json(const StratumPoset& p) {
    nlohmann::json strata = nlohmann::json::array();
    for (std::size_t i = 0; i < p.strata.size(); ++i) {
        const auto& s = p.strata[i];
        nlohmann::json j = {{"index", i},
                            {"tree", print_tree(s.tree)},
                            {"dimension", s.dimension},
                            {"dimension_expr", s.dimension_expr.str()},
                            {"ghosts", s.ghost_count},
                            {"edges", s.edge_count},
                            {"isotropy_dim", s.isotropy_dim},
                            {"gluing_dim", s.gluing_dim},
                            {"active", static_cast<bool>(p.active[i])}};
        if (auto it = p.exceptional.find(s.tree.canonical()); it != p.exceptional.end())
            j["exceptional_from"] = it->second;
        strata.push_back(j);
    }
    nlohmann::json hasse = nlohmann::json::array();
    for (auto [a, b] : p.hasse) hasse.push_back({a, b});
    return {{"schema", kSchemaVersion}, {"K", p.K},     {"chi", p.chi},
            {"sigma", p.sigma},         {"strata", strata}, {"hasse", hasse}};
}

nlohmann::json event_to_json(const FlipEvent& e) {
    nlohmann::json ends = nlohmann::json::array();
    for (const auto& end : e.ends) {
        nlohmann::json table = nlohmann::json::array();
        for (const auto& [pattern, target] : end.assignment)
            table.push_back({{"support", pattern}, {"tree", print_tree(target)}});
        ends.push_back({{"vertex", end.vertex},
                        {"children", end.n_children},
                        {"sphere_dim", end.sphere_dim},
                        {"fiber_dim", end.fiber_dim},
                        {"group", end.group},
                        {"multiplicity", rational_to_json(end.multiplicity)},
                        {"cut", print_tree(end.cut)},
                        {"closure_note", end.closure_note},
                        {"assignment", table},
                        {"audit",
                         {{"ok", end.audit.ok()},
                          {"before", end.audit.before},
                          {"after", end.audit.after},
                          {"failure", end.audit.failure}}}});
    }
    nlohmann::json j = {{"tree", print_tree(e.tree)}, {"energy", e.energy}, {"ends", ends}, {"ok", e.ok()}};
    if (e.merged_into) j["merged_into"] = print_tree(*e.merged_into);
    return j;
}

}  // namespace bubbletree
