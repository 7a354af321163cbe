#pragma once

#include "bubbletree/graded_poly.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bubbletree {

// Recursive builder form of a bubble tree. Children are unordered; `marks`
// are marked-point weights sitting on this component. `tag` is an opaque
// caller payload that survives canonicalisation.
struct TreeNode {
    int weight = 0;
    std::vector<int> marks;
    std::vector<TreeNode> children;
    int tag = -1;
};

struct Edge {
    int parent;
    int child;
    friend bool operator==(const Edge&, const Edge&) = default;
};

// Rooted weighted tree with unordered children. Vertices are numbered in
// preorder of the canonical child order, the root is vertex 0. Equality is
// isomorphism of weighted rooted trees (canonical string equality); the
// barred-root label and tags do not take part in it.
class BubbleTree {
public:
    BubbleTree() : BubbleTree(TreeNode{}) {}
    explicit BubbleTree(const TreeNode& root, bool root_barred = false);
    // weights[i], parents[i] (-1 for the root), marks[i] per vertex.
    static BubbleTree from_parent_array(const std::vector<int>& weights, const std::vector<int>& parents,
                                        const std::vector<std::vector<int>>& marks = {});

    int size() const { return static_cast<int>(weight_.size()); }
    static constexpr int root() { return 0; }
    bool contains(int v) const { return v >= 0 && v < size(); }
    int weight(int v) const { return weight_.at(v); }
    const std::vector<int>& marks(int v) const { return marks_.at(v); }
    int parent(int v) const { return parent_.at(v); }
    const std::vector<int>& children(int v) const { return children_.at(v); }
    int tag(int v) const { return tag_.at(v); }
    bool root_barred() const { return barred_; }

    // One edge per non-root vertex, identified by its child end.
    std::vector<Edge> edges() const;
    int edge_count() const { return size() - 1; }
    bool has_edge(const Edge& e) const;
    // Total charge W(v): weights and marks over the subtree at v.
    int total_charge(int v) const;
    int total_charge() const { return total_charge(root()); }

    const std::string& canonical() const { return canonical_; }
    TreeNode to_node(int v = 0) const;

    friend bool operator==(const BubbleTree& a, const BubbleTree& b) { return a.canonical_ == b.canonical_; }
    friend bool operator<(const BubbleTree& a, const BubbleTree& b) { return a.canonical_ < b.canonical_; }

private:
    void flatten(const TreeNode& n, int parent);
    std::vector<int> weight_;
    std::vector<std::vector<int>> marks_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    std::vector<int> tag_;
    std::vector<int> charge_;
    bool barred_ = false;
    std::string canonical_;
};

// Canonical string of a builder subtree without the outer root brackets,
// e.g. "0[1,1]". Children and marks are sorted.
std::string canonical_subtree(const TreeNode& n);
// Sorts children recursively into canonical order.
void canonicalize(TreeNode& n);

struct Violation {
    int vertex;
    std::string clause;  // "ghost-arity" or "zero-charge-child"
    std::string message;
};

// Empty when every non-root vertex has positive weight, or has at least two
// children (marks count as children) all of positive total charge.
std::vector<Violation> validate_tree(const BubbleTree& t);
bool is_valid_tree(const BubbleTree& t);

int total_charge(const BubbleTree& t, int v);

// Merges the child end of the edge into its parent.
BubbleTree contract(const BubbleTree& t, const Edge& e);
BubbleTree contract(const BubbleTree& t, int child_vertex);

// True iff t2 is reachable from t1 by zero or more contractions.
bool tree_leq(const BubbleTree& t1, const BubbleTree& t2);
// Every tree obtained from t by exactly one contraction, deduplicated.
std::vector<BubbleTree> single_contractions(const BubbleTree& t);

std::vector<int> ghost_vertices(const BubbleTree& t);
bool is_ghost_tree(const BubbleTree& t);

struct EndsInfo {
    std::vector<int> vertices;
    std::optional<int> energy;  // empty when t has no ghosts
};
EndsInfo ends(const BubbleTree& t);

// Contribution of a single component to the stratum dimension, as a
// polynomial in the degree-0 symbols chi and sigma.
//   root:   8w - 3/2 (chi + sigma) + 4 (children + marks)
//   w >= 1: 8w - 8 + 4 (children + marks)
//   w == 0: 4 (children + marks) - 5
GradedPolynomial vertex_dimension(int weight, int n_children, int n_marks, bool is_root);
GradedPolynomial dimension_expr(const BubbleTree& t);
// dim M_K(X) for K = W(t): 8K - 3/2 (chi + sigma).
GradedPolynomial top_dimension_expr(int K);

struct StratumInfo {
    BubbleTree tree;
    GradedPolynomial dimension_expr;
    std::int64_t dimension = 0;
    int ghost_count = 0;
    int edge_count = 0;
    int isotropy_dim = 0;  // 3 g(T)
    int gluing_dim = 0;    // 4 |D|
};

// Throws std::invalid_argument for an invalid tree or odd chi + sigma.
StratumInfo stratum_info(const BubbleTree& t, long chi, long sigma);
std::int64_t evaluate_dimension(const GradedPolynomial& expr, long chi, long sigma);

struct PsiResult {
    BubbleTree tree;
    bool unchanged = false;  // empty support: zero gluing parameter
};
// Simultaneous contraction of every edge in `support`.
PsiResult psi_contraction(const BubbleTree& t, const std::vector<Edge>& support);

// Deletes the subtree at ghost vertex v and records W(v) as a marked weight
// on v's parent.
BubbleTree cut_at_end(const BubbleTree& t, int v);

std::string canonical_form(const BubbleTree& t);

// All bubble trees of total charge K up to isomorphism, sorted by
// canonical string. The parallel version splits over root weights.
std::vector<BubbleTree> enumerate_trees(int K);
std::vector<BubbleTree> enumerate_trees_serial(int K);

nlohmann::json tree_to_json(const BubbleTree& t);
BubbleTree tree_from_json(const nlohmann::json& j);

}  // namespace bubbletree
