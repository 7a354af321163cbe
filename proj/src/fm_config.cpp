#include "bubbletree/fm_config.hpp"

#include "bubbletree/json_io.hpp"
#include "bubbletree/notation.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace bubbletree {

namespace {

Rational norm_squared(const Point4& z) {
    Rational s;
    for (const auto& x : z) s += x * x;
    return s;
}

Point4 barycenter(const WeightedConfiguration& c) {
    Point4 b{};
    Rational total;
    for (const auto& p : c.points) {
        if (p.weight <= 0) throw std::invalid_argument("point weights must be positive");
        total += p.weight;
        for (int i = 0; i < 4; ++i) b[i] += p.z[i] * p.weight;
    }
    if (total.is_zero()) throw std::invalid_argument("empty configuration");
    for (auto& x : b) x /= total;
    return b;
}

}  // namespace

bool balanced_check(const WeightedConfiguration& c) {
    Point4 moment{};
    Rational mass, spread;
    for (const auto& p : c.points) {
        for (int i = 0; i < 4; ++i) moment[i] += p.z[i] * p.weight;
        mass += p.weight;
        spread += norm_squared(p.z) * p.weight;
    }
    return std::all_of(moment.begin(), moment.end(), [](const Rational& x) { return x.is_zero(); }) &&
           spread == mass;
}

BalanceClass balance_class(const WeightedConfiguration& c) {
    const Point4 b = barycenter(c);
    BalanceClass out;
    Rational mass, spread;
    for (const auto& p : c.points) {
        WeightedPoint q{p.z, p.weight};
        for (int i = 0; i < 4; ++i) q.z[i] -= b[i];
        mass += p.weight;
        spread += norm_squared(q.z) * p.weight;
        out.direction.points.push_back(q);
    }
    if (spread.is_zero()) throw std::invalid_argument("all points coincide; no balancing scale exists");
    out.scale_squared = mass / spread;
    return out;
}

// ---------------------------------------------------------------- UniPoly

UniPoly::UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UniPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

int UniPoly::valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero()) return static_cast<int>(i);
    return -1;
}

UniPoly UniPoly::divide_by_t(int m) const {
    if (is_zero()) return {};
    if (valuation() < m) throw std::logic_error("divide_by_t: valuation too small");
    return UniPoly(std::vector<Rational>(c_.begin() + m, c_.end()));
}

UniPoly UniPoly::rescale(const Rational& c) const {
    std::vector<Rational> out(c_);
    Rational p(1);
    for (auto& x : out) {
        x *= p;
        p *= c;
    }
    return UniPoly(std::move(out));
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
    std::vector<Rational> out(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
    return UniPoly(std::move(out));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + o * Rational(-1); }

UniPoly UniPoly::operator*(const Rational& s) const {
    std::vector<Rational> out(c_);
    for (auto& x : out) x *= s;
    return UniPoly(std::move(out));
}

// ---------------------------------------------------------------- limits

namespace {

using Path = std::array<UniPoly, 4>;

Point4 at_zero(const Path& p) {
    Point4 z;
    for (int i = 0; i < 4; ++i) z[i] = p[i].at_zero();
    return z;
}

struct PendingScreen {
    int order = 0;
    WeightedConfiguration config;
    Rational scale_squared;
    std::vector<int> child_tags;  // tag of the child node behind each config point
};

struct LimitBuilder {
    const PolynomialFamily& family;
    std::vector<PendingScreen> screens;  // indexed by the tag stored on the ghost node

    // Groups indices by their t = 0 value, in order of first appearance.
    std::vector<std::vector<int>> cluster(const std::vector<int>& idx, const std::vector<Path>& paths) const {
        std::vector<std::vector<int>> groups;
        std::vector<Point4> keys;
        for (int i : idx) {
            Point4 z = at_zero(paths[i]);
            auto it = std::find(keys.begin(), keys.end(), z);
            if (it == keys.end()) {
                keys.push_back(z);
                groups.push_back({i});
            } else {
                groups[it - keys.begin()].push_back(i);
            }
        }
        return groups;
    }

    // Builds the child node for a group of points sharing a t = 0 value.
    TreeNode build(const std::vector<int>& group, std::vector<Path>& paths, int depth) {
        if (group.size() == 1) {
            TreeNode leaf;
            leaf.weight = family.points[group[0]].weight;
            leaf.tag = -2 - group[0];
            return leaf;
        }
        if (depth > 64) throw std::runtime_error("limit_stratum: recursion guard exceeded");
        Path bary;
        Rational mass;
        for (int i : group) {
            const int w = family.points[i].weight;
            mass += w;
            for (int k = 0; k < 4; ++k) bary[k] = bary[k] + paths[i][k] * Rational(w);
        }
        for (auto& c : bary) c = c * (Rational(1) / mass);
        int m = -1;
        for (int i : group)
            for (int k = 0; k < 4; ++k) {
                paths[i][k] = paths[i][k] - bary[k];
                int v = paths[i][k].valuation();
                if (v >= 0 && (m < 0 || v < m)) m = v;
            }
        if (m < 0) throw std::invalid_argument("limit_stratum: family points coincide identically in t");
        if (m < 1) throw std::logic_error("limit_stratum: cluster members differ at t = 0");
        for (int i : group)
            for (int k = 0; k < 4; ++k) paths[i][k] = paths[i][k].divide_by_t(m);

        const int screen_id = static_cast<int>(screens.size());
        screens.emplace_back();
        screens[screen_id].order = m;
        TreeNode ghost;
        ghost.weight = 0;
        ghost.tag = screen_id;
        auto sub = cluster(group, paths);
        if (sub.size() < 2) throw std::logic_error("limit_stratum: rescaled cluster failed to split");
        WeightedConfiguration cfg;
        for (const auto& g : sub) {
            int w = 0;
            for (int i : g) w += family.points[i].weight;
            cfg.points.push_back({at_zero(paths[g[0]]), w});
        }
        screens[screen_id].config = cfg;
        screens[screen_id].scale_squared = balance_class(cfg).scale_squared;
        for (const auto& g : sub) {
            TreeNode child = build(g, paths, depth + 1);
            screens[screen_id].child_tags.push_back(child.tag);
            ghost.children.push_back(std::move(child));
        }
        return ghost;
    }
};

}  // namespace

LimitStratum limit_stratum(const PolynomialFamily& f) {
    if (f.points.empty()) throw std::invalid_argument("limit_stratum: empty family");
    for (const auto& p : f.points)
        if (p.weight <= 0) throw std::invalid_argument("limit_stratum: weights must be positive");
    std::vector<Path> paths;
    std::vector<int> all;
    for (std::size_t i = 0; i < f.points.size(); ++i) {
        paths.push_back(f.points[i].coords);
        all.push_back(static_cast<int>(i));
    }
    LimitBuilder b{f, {}};
    TreeNode root;
    LimitStratum out;
    for (const auto& g : b.cluster(all, paths)) {
        out.base_points.push_back(at_zero(paths[g[0]]));
        root.children.push_back(b.build(g, paths, 1));
    }
    out.tree = BubbleTree(root);
    // Canonicalisation reorders vertices; tags carry the bookkeeping over.
    std::map<int, int> screen_vertex;
    for (int v = 0; v < out.tree.size(); ++v) {
        const int tag = out.tree.tag(v);
        if (tag >= 0) screen_vertex[tag] = v;
        else if (tag <= -2) out.leaf_point[v] = -2 - tag;
    }
    for (auto& [sid, v] : screen_vertex) {
        const PendingScreen& pending = b.screens[sid];
        Screen s;
        s.vertex = v;
        s.order = pending.order;
        s.scale_squared = pending.scale_squared;
        // Screen points follow the canonical order of v's children.
        for (int c : out.tree.children(v)) {
            auto it = std::find(pending.child_tags.begin(), pending.child_tags.end(), out.tree.tag(c));
            if (it == pending.child_tags.end()) throw std::logic_error("limit_stratum: lost screen bookkeeping");
            s.children.push_back(c);
            s.config.points.push_back(pending.config.points[it - pending.child_tags.begin()]);
        }
        out.screens[v] = std::move(s);
    }
    return out;
}

// ---------------------------------------------------------------- strata

namespace {

// Canonical subtree strings of every FM-type subtree on the points in
// `mask`; a single point is a leaf, larger blocks are ghosts whose
// children partition the block into at least two parts.
class StrataBuilder {
public:
    explicit StrataBuilder(const std::vector<int>& weights) : w_(weights) {}

    const std::vector<TreeNode>& block(unsigned mask) {
        if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
        std::vector<TreeNode> out;
        if (std::popcount(mask) == 1) {
            TreeNode leaf;
            leaf.weight = w_[std::countr_zero(mask)];
            out.push_back(leaf);
        } else {
            std::set<std::string> seen;
            for_each_partition(mask, 2, [&](const std::vector<TreeNode>& kids) {
                TreeNode g;
                g.children = kids;
                canonicalize(g);
                if (seen.insert(canonical_subtree(g)).second) out.push_back(g);
            });
        }
        return memo_[mask] = std::move(out);
    }

    // Visits the children lists of every set partition of `mask` into at
    // least `min_blocks` blocks, crossed with every subtree choice per block.
    template <class F>
    void for_each_partition(unsigned mask, int min_blocks, F&& visit) {
        std::vector<TreeNode> kids;
        partition_rec(mask, min_blocks, kids, visit);
    }

private:
    template <class F>
    void partition_rec(unsigned rest, int min_blocks, std::vector<TreeNode>& kids, F& visit) {
        if (rest == 0) {
            if (static_cast<int>(kids.size()) >= min_blocks) visit(kids);
            return;
        }
        // The block containing the lowest remaining point.
        const unsigned low = rest & (~rest + 1);
        const unsigned others = rest & ~low;
        for (unsigned sub = others;; sub = (sub - 1) & others) {
            const unsigned blk = sub | low;
            if (blk != rest || min_blocks <= 1 || !kids.empty()) {
                const std::vector<TreeNode> options = block(blk);
                for (const auto& opt : options) {
                    kids.push_back(opt);
                    partition_rec(rest & ~blk, min_blocks, kids, visit);
                    kids.pop_back();
                }
            }
            if (sub == 0) break;
        }
    }

    std::vector<int> w_;
    std::map<unsigned, std::vector<TreeNode>> memo_;
};

const char* depth_letters = "xyzuvwabcdefg";

std::string depth_label(int depth, int index) {
    const int n = static_cast<int>(std::char_traits<char>::length(depth_letters));
    std::string prefix = depth <= n ? std::string(1, depth_letters[depth - 1]) : "p" + std::to_string(depth) + "_";
    return prefix + std::to_string(index);
}

void format_rec(const BubbleTree& t, int v, int depth, std::map<int, int>& counters, std::string& out,
                std::map<std::string, int>* weights) {
    bool first = true;
    out += '[';
    auto emit = [&](const std::string& label) {
        if (!first) out += ',';
        first = false;
        out += label;
    };
    for (int m : t.marks(v)) {
        std::string label = depth_label(depth, ++counters[depth]);
        emit(label);
        if (weights) (*weights)[label] = m;
    }
    for (int c : t.children(v)) {
        std::string label = depth_label(depth, ++counters[depth]);
        emit(label);
        if (t.children(c).empty() && t.marks(c).empty()) {
            if (weights) (*weights)[label] = t.weight(c);
        } else {
            format_rec(t, c, depth + 1, counters, out, weights);
        }
    }
    out += ']';
}

}  // namespace

std::vector<BubbleTree> enumerate_fm_strata(const std::vector<int>& weights) {
    if (weights.empty()) throw std::invalid_argument("enumerate_fm_strata: no points");
    if (weights.size() > 16) throw std::invalid_argument("enumerate_fm_strata: at most 16 points supported");
    for (int w : weights)
        if (w <= 0) throw std::invalid_argument("enumerate_fm_strata: weights must be positive");
    StrataBuilder b(weights);
    const unsigned full = (1u << weights.size()) - 1;
    std::set<std::string> seen;
    std::vector<BubbleTree> out;
    b.for_each_partition(full, 1, [&](const std::vector<TreeNode>& kids) {
        TreeNode root;
        root.children = kids;
        BubbleTree t(root);
        if (seen.insert(t.canonical()).second) out.push_back(t);
    });
    std::sort(out.begin(), out.end());
    return out;
}

bool is_fm_type(const BubbleTree& t) {
    if (t.weight(0) != 0) return false;
    for (int v = 1; v < t.size(); ++v) {
        const int arity = static_cast<int>(t.children(v).size() + t.marks(v).size());
        const bool leaf = arity == 0 && t.weight(v) > 0;
        const bool ghost = t.weight(v) == 0 && arity >= 2;
        if (!leaf && !ghost) return false;
    }
    return true;
}

std::string stratum_format(const BubbleTree& t) {
    if (!is_fm_type(t)) throw std::invalid_argument("stratum_format: " + t.canonical() + " is not of FM type");
    std::map<int, int> counters;
    std::string out;
    format_rec(t, 0, 1, counters, out, nullptr);
    return out;
}

std::map<std::string, int> format_leaf_weights(const BubbleTree& t) {
    if (!is_fm_type(t)) throw std::invalid_argument("format_leaf_weights: " + t.canonical() + " is not of FM type");
    std::map<int, int> counters;
    std::string out;
    std::map<std::string, int> weights;
    format_rec(t, 0, 1, counters, out, &weights);
    return weights;
}

// ---------------------------------------------------------------- JSON

nlohmann::json family_to_json(const PolynomialFamily& f) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : f.points) {
        nlohmann::json coords = nlohmann::json::array();
        for (const auto& poly : p.coords) {
            nlohmann::json cs = nlohmann::json::array();
            for (const auto& c : poly.coeffs()) cs.push_back(rational_to_json(c));
            coords.push_back(cs);
        }
        pts.push_back({{"coords", coords}, {"weight", p.weight}});
    }
    return {{"schema", kSchemaVersion}, {"points", pts}};
}

PolynomialFamily family_from_json(const nlohmann::json& j) {
    check_fields(j, {"schema", "points"}, "family");
    check_schema(j);
    PolynomialFamily f;
    for (const auto& p : j.at("points")) {
        check_fields(p, {"coords", "weight"}, "family point");
        FamilyPoint fp;
        fp.weight = p.value("weight", 1);
        const auto& coords = p.at("coords");
        if (!coords.is_array() || coords.size() != 4)
            throw std::invalid_argument("family point needs exactly 4 coordinate polynomials");
        for (int k = 0; k < 4; ++k) {
            std::vector<Rational> cs;
            for (const auto& c : coords[k]) cs.push_back(rational_from_json(c));
            fp.coords[k] = UniPoly(std::move(cs));
        }
        f.points.push_back(std::move(fp));
    }
    return f;
}

namespace {

nlohmann::json point_json(const Point4& z) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : z) a.push_back(rational_to_json(x));
    return a;
}

}  // namespace

nlohmann::json limit_to_json(const LimitStratum& s) {
    nlohmann::json screens = nlohmann::json::array();
    for (const auto& [v, sc] : s.screens) {
        nlohmann::json pts = nlohmann::json::array();
        for (std::size_t k = 0; k < sc.config.points.size(); ++k)
            pts.push_back({{"child", sc.children[k]},
                           {"z", point_json(sc.config.points[k].z)},
                           {"weight", sc.config.points[k].weight}});
        screens.push_back({{"vertex", v},
                           {"order", sc.order},
                           {"points", pts},
                           {"scale_squared", rational_to_json(sc.scale_squared)}});
    }
    nlohmann::json base = nlohmann::json::array();
    for (const auto& z : s.base_points) base.push_back(point_json(z));
    nlohmann::json leaves = nlohmann::json::object();
    for (const auto& [v, p] : s.leaf_point) leaves[std::to_string(v)] = p;
    return {{"schema", kSchemaVersion},
            {"tree", s.tree.canonical()},
            {"format", is_fm_type(s.tree) ? stratum_format(s.tree) : ""},
            {"base_points", base},
            {"screens", screens},
            {"leaf_point", leaves}};
}

}  // namespace bubbletree
