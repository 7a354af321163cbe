#include "bubbletree/tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace bubbletree {

namespace {

const char* const kMark = "\xE2\x98\x85";  // U+2605 BLACK STAR

// Sorts n in place and returns its canonical string.
std::string canonicalize_impl(TreeNode& n) {
    std::vector<std::pair<std::string, TreeNode>> kids;
    kids.reserve(n.children.size());
    for (auto& c : n.children) {
        std::string s = canonicalize_impl(c);
        kids.emplace_back(std::move(s), std::move(c));
    }
    std::stable_sort(kids.begin(), kids.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::sort(n.marks.begin(), n.marks.end());
    n.children.clear();
    std::string out = std::to_string(n.weight);
    if (!n.marks.empty() || !kids.empty()) {
        out += '[';
        bool first = true;
        for (int m : n.marks) {
            if (!first) out += ',';
            first = false;
            out += kMark + std::to_string(m);
        }
        for (auto& [s, c] : kids) {
            if (!first) out += ',';
            first = false;
            out += s;
            n.children.push_back(std::move(c));
        }
        out += ']';
    }
    return out;
}

}  // namespace

std::string canonical_subtree(const TreeNode& n) {
    TreeNode copy = n;
    return canonicalize_impl(copy);
}

void canonicalize(TreeNode& n) { canonicalize_impl(n); }

BubbleTree::BubbleTree(const TreeNode& root, bool root_barred) : barred_(root_barred) {
    TreeNode r = root;
    canonical_ = "[" + canonicalize_impl(r) + "]";
    flatten(r, -1);
    charge_.assign(weight_.size(), 0);
    for (int v = size() - 1; v >= 0; --v) {
        charge_[v] += weight_[v];
        for (int m : marks_[v]) charge_[v] += m;
        if (parent_[v] >= 0) charge_[parent_[v]] += charge_[v];
    }
    if (barred_ && weight_[0] != 0) throw std::invalid_argument("only a weight-0 root can carry the bar label");
}

void BubbleTree::flatten(const TreeNode& n, int parent) {
    if (n.weight < 0) throw std::invalid_argument("negative vertex weight");
    for (int m : n.marks)
        if (m <= 0) throw std::invalid_argument("marked weights must be positive");
    int id = size();
    weight_.push_back(n.weight);
    marks_.push_back(n.marks);
    parent_.push_back(parent);
    children_.emplace_back();
    tag_.push_back(n.tag);
    if (parent >= 0) children_[parent].push_back(id);
    for (const auto& c : n.children) flatten(c, id);
}

BubbleTree BubbleTree::from_parent_array(const std::vector<int>& weights, const std::vector<int>& parents,
                                         const std::vector<std::vector<int>>& marks) {
    const std::size_t n = weights.size();
    if (n == 0 || parents.size() != n || (!marks.empty() && marks.size() != n))
        throw std::invalid_argument("parent array size mismatch");
    int root = -1;
    std::vector<std::vector<int>> kids(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (parents[i] < 0) {
            if (root >= 0) throw std::invalid_argument("more than one root");
            root = static_cast<int>(i);
        } else {
            if (parents[i] >= static_cast<int>(n)) throw std::invalid_argument("parent index out of range");
            kids[parents[i]].push_back(static_cast<int>(i));
        }
    }
    if (root < 0) throw std::invalid_argument("no root");
    std::vector<char> seen(n, 0);
    std::size_t visited = 0;
    auto build = [&](auto&& self, int v) -> TreeNode {
        if (seen[v]) throw std::invalid_argument("cycle in parent array");
        seen[v] = 1;
        ++visited;
        TreeNode t;
        t.weight = weights[v];
        if (!marks.empty()) t.marks = marks[v];
        t.tag = v;
        for (int c : kids[v]) t.children.push_back(self(self, c));
        return t;
    };
    TreeNode r = build(build, root);
    if (visited != n) throw std::invalid_argument("parent array is not connected");
    return BubbleTree(r);
}

std::vector<Edge> BubbleTree::edges() const {
    std::vector<Edge> out;
    for (int v = 1; v < size(); ++v) out.push_back({parent_[v], v});
    return out;
}

bool BubbleTree::has_edge(const Edge& e) const {
    return contains(e.child) && e.child != 0 && parent_[e.child] == e.parent;
}

int BubbleTree::total_charge(int v) const {
    if (!contains(v)) throw std::out_of_range("unknown vertex " + std::to_string(v));
    return charge_[v];
}

TreeNode BubbleTree::to_node(int v) const {
    TreeNode n;
    n.weight = weight_.at(v);
    n.marks = marks_[v];
    n.tag = tag_[v];
    for (int c : children_[v]) n.children.push_back(to_node(c));
    return n;
}

std::vector<Violation> validate_tree(const BubbleTree& t) {
    std::vector<Violation> out;
    for (int v = 1; v < t.size(); ++v) {
        if (t.weight(v) != 0) continue;
        const int arity = static_cast<int>(t.children(v).size() + t.marks(v).size());
        if (arity < 2)
            out.push_back({v, "ghost-arity",
                           "ghost vertex " + std::to_string(v) + " has " + std::to_string(arity) +
                               " child(ren); at least 2 required"});
        for (int c : t.children(v))
            if (t.total_charge(c) <= 0)
                out.push_back({v, "zero-charge-child",
                               "ghost vertex " + std::to_string(v) + " has child " + std::to_string(c) +
                                   " of total charge 0"});
    }
    return out;
}

bool is_valid_tree(const BubbleTree& t) { return validate_tree(t).empty(); }

int total_charge(const BubbleTree& t, int v) { return t.total_charge(v); }

namespace {

// Rebuild with every vertex in `merged` folded into its nearest kept ancestor.
BubbleTree contract_set(const BubbleTree& t, const std::vector<char>& merged) {
    std::vector<int> rep(t.size());
    for (int v = 0; v < t.size(); ++v) rep[v] = (v != 0 && merged[v]) ? rep[t.parent(v)] : v;
    std::vector<TreeNode> nodes(t.size());
    for (int v = 0; v < t.size(); ++v) {
        TreeNode& n = nodes[rep[v]];
        n.weight += t.weight(v);
        n.marks.insert(n.marks.end(), t.marks(v).begin(), t.marks(v).end());
        if (rep[v] == v) n.tag = t.tag(v);
    }
    // Attach kept vertices bottom-up (preorder ids: children have larger ids).
    for (int v = t.size() - 1; v >= 1; --v) {
        if (rep[v] != v) continue;
        nodes[rep[t.parent(v)]].children.push_back(std::move(nodes[v]));
    }
    return BubbleTree(nodes[0], t.root_barred() && nodes[0].weight == 0);
}

}  // namespace

BubbleTree contract(const BubbleTree& t, const Edge& e) {
    if (!t.has_edge(e))
        throw std::invalid_argument("edge (" + std::to_string(e.parent) + "," + std::to_string(e.child) +
                                    ") not present");
    std::vector<char> merged(t.size(), 0);
    merged[e.child] = 1;
    return contract_set(t, merged);
}

BubbleTree contract(const BubbleTree& t, int child_vertex) {
    if (!t.contains(child_vertex) || child_vertex == 0)
        throw std::invalid_argument("edge ending at vertex " + std::to_string(child_vertex) + " not present");
    return contract(t, Edge{t.parent(child_vertex), child_vertex});
}

std::vector<BubbleTree> single_contractions(const BubbleTree& t) {
    std::vector<BubbleTree> out;
    std::unordered_set<std::string> seen;
    for (int v = 1; v < t.size(); ++v) {
        BubbleTree c = contract(t, v);
        if (seen.insert(c.canonical()).second) out.push_back(std::move(c));
    }
    return out;
}

bool tree_leq(const BubbleTree& t1, const BubbleTree& t2) {
    if (t1.total_charge() != t2.total_charge()) return false;
    if (t1 == t2) return true;
    std::unordered_set<std::string> seen{t1.canonical()};
    std::vector<BubbleTree> frontier{t1};
    while (!frontier.empty()) {
        std::vector<BubbleTree> next;
        for (const auto& t : frontier) {
            if (t.size() <= t2.size()) continue;
            for (auto& c : single_contractions(t)) {
                if (c == t2) return true;
                if (seen.insert(c.canonical()).second) next.push_back(std::move(c));
            }
        }
        frontier = std::move(next);
    }
    return false;
}

std::vector<int> ghost_vertices(const BubbleTree& t) {
    std::vector<int> out;
    for (int v = 1; v < t.size(); ++v)
        if (t.weight(v) == 0) out.push_back(v);
    return out;
}

bool is_ghost_tree(const BubbleTree& t) { return !ghost_vertices(t).empty(); }

EndsInfo ends(const BubbleTree& t) {
    EndsInfo info;
    for (int g : ghost_vertices(t)) {
        int w = t.total_charge(g);
        if (!info.energy || w < *info.energy) {
            info.energy = w;
            info.vertices.clear();
        }
        if (w == *info.energy) info.vertices.push_back(g);
    }
    return info;
}

namespace {
GradedPolynomial chi() { return GradedPolynomial::symbol("chi", 0); }
GradedPolynomial sigma() { return GradedPolynomial::symbol("sigma", 0); }
}  // namespace

GradedPolynomial vertex_dimension(int weight, int n_children, int n_marks, bool is_root) {
    const long points = 4L * (n_children + n_marks);
    if (is_root) return GradedPolynomial(8L * weight + points) - Rational(3, 2) * (chi() + sigma());
    // A charge-w bubble: framed moduli of dimension 8w modulo the 8-dimensional
    // group of the sphere (translations, dilations and the framing SO(3)).
    // A ghost with n special points: their balanced configurations in R^4,
    // 4n - 5 = 4n - 4 (translations) - 1 (dilation).
    if (weight > 0) return GradedPolynomial(8L * weight - 8 + points);
    return GradedPolynomial(points - 5);
}

GradedPolynomial dimension_expr(const BubbleTree& t) {
    GradedPolynomial d;
    for (int v = 0; v < t.size(); ++v)
        d += vertex_dimension(t.weight(v), static_cast<int>(t.children(v).size()),
                              static_cast<int>(t.marks(v).size()), v == 0);
    return d;
}

GradedPolynomial top_dimension_expr(int K) { return vertex_dimension(K, 0, 0, true); }

std::int64_t evaluate_dimension(const GradedPolynomial& expr, long chi_v, long sigma_v) {
    if ((chi_v + sigma_v) % 2 != 0)
        throw std::invalid_argument("chi + sigma must be even, got " + std::to_string(chi_v + sigma_v));
    GradedPolynomial v = expr.substitute("chi", GradedPolynomial(chi_v)).substitute("sigma", GradedPolynomial(sigma_v));
    if (!v.is_constant()) throw std::invalid_argument("dimension expression has free symbols: " + v.str());
    return v.constant().to_int64();
}

StratumInfo stratum_info(const BubbleTree& t, long chi_v, long sigma_v) {
    if (auto bad = validate_tree(t); !bad.empty())
        throw std::invalid_argument("invalid bubble tree " + t.canonical() + ": " + bad.front().message);
    StratumInfo s;
    s.tree = t;
    s.dimension_expr = dimension_expr(t);
    s.dimension = evaluate_dimension(s.dimension_expr, chi_v, sigma_v);
    s.ghost_count = static_cast<int>(ghost_vertices(t).size());
    s.edge_count = t.edge_count();
    s.isotropy_dim = 3 * s.ghost_count;
    s.gluing_dim = 4 * s.edge_count;
    return s;
}

PsiResult psi_contraction(const BubbleTree& t, const std::vector<Edge>& support) {
    if (support.empty()) return {t, true};
    std::vector<char> merged(t.size(), 0);
    for (const Edge& e : support) {
        if (!t.has_edge(e))
            throw std::invalid_argument("edge (" + std::to_string(e.parent) + "," + std::to_string(e.child) +
                                        ") not present");
        merged[e.child] = 1;
    }
    return {contract_set(t, merged), false};
}

BubbleTree cut_at_end(const BubbleTree& t, int v) {
    if (!t.contains(v) || v == 0 || t.weight(v) != 0)
        throw std::invalid_argument("vertex " + std::to_string(v) + " is not a ghost vertex");
    const int charge = t.total_charge(v);
    auto rebuild = [&](auto&& self, int x) -> TreeNode {
        TreeNode n;
        n.weight = t.weight(x);
        n.marks = t.marks(x);
        n.tag = t.tag(x);
        for (int c : t.children(x)) {
            if (c == v) n.marks.push_back(charge);
            else n.children.push_back(self(self, c));
        }
        return n;
    };
    return BubbleTree(rebuild(rebuild, 0), t.root_barred());
}

std::string canonical_form(const BubbleTree& t) { return t.canonical(); }

nlohmann::json tree_to_json(const BubbleTree& t) {
    nlohmann::json verts = nlohmann::json::array();
    nlohmann::json edges = nlohmann::json::array();
    for (int v = 0; v < t.size(); ++v) {
        verts.push_back({{"id", v}, {"weight", t.weight(v)}, {"marks", t.marks(v)}, {"root", v == 0}});
        if (v > 0) edges.push_back({t.parent(v), v});
    }
    return {{"canonical", t.canonical()}, {"root_barred", t.root_barred()}, {"vertices", verts}, {"edges", edges}};
}

BubbleTree tree_from_json(const nlohmann::json& j) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "canonical" && it.key() != "root_barred" && it.key() != "vertices" && it.key() != "edges")
            throw std::invalid_argument("unknown tree field '" + it.key() + "'");
    const auto& verts = j.at("vertices");
    const std::size_t n = verts.size();
    std::vector<int> weights(n), parents(n, -1);
    std::vector<std::vector<int>> marks(n);
    std::vector<int> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids[i] = verts[i].at("id").get<int>();
        if (ids[i] != static_cast<int>(i)) throw std::invalid_argument("vertex ids must be 0..n-1 in order");
        weights[i] = verts[i].at("weight").get<int>();
        if (verts[i].contains("marks")) marks[i] = verts[i].at("marks").get<std::vector<int>>();
    }
    for (const auto& e : j.at("edges")) {
        int p = e.at(0).get<int>(), c = e.at(1).get<int>();
        if (c < 0 || c >= static_cast<int>(n) || parents[c] != -1)
            throw std::invalid_argument("bad edge list");
        parents[c] = p;
    }
    BubbleTree t = BubbleTree::from_parent_array(weights, parents, marks);
    bool barred = j.value("root_barred", false);
    return barred ? BubbleTree(t.to_node(), true) : t;
}

}  // namespace bubbletree
