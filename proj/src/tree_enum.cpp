#include "bubbletree/tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace bubbletree {

namespace {

struct Subtree {
    int charge;
    TreeNode node;
};

// All valid non-root subtrees with total charge 1..max_charge, grouped so
// that pool[i] has charge <= pool[j].charge for i < j.
class SubtreePool {
public:
    explicit SubtreePool(int max_charge) {
        for (int c = 1; c <= max_charge; ++c) {
            std::vector<Subtree> fresh;
            for (int w = c; w >= 0; --w) {
                const int rest = c - w;
                for_each_multiset(rest, [&](const std::vector<int>& picks) {
                    if (w == 0 && picks.size() < 2) return;
                    TreeNode n;
                    n.weight = w;
                    for (int i : picks) n.children.push_back(items_[i].node);
                    fresh.push_back({c, std::move(n)});
                });
            }
            for (auto& s : fresh) items_.push_back(std::move(s));
        }
    }

    const std::vector<Subtree>& items() const { return items_; }

    // Visits every multiset (nondecreasing index list) of pool items with
    // total charge exactly `total`.
    template <class F>
    void for_each_multiset(int total, F&& visit) const {
        std::vector<int> picks;
        recurse(total, 0, picks, visit);
    }

private:
    template <class F>
    void recurse(int remaining, std::size_t from, std::vector<int>& picks, F& visit) const {
        if (remaining == 0) {
            visit(picks);
            return;
        }
        for (std::size_t i = from; i < items_.size(); ++i) {
            if (items_[i].charge > remaining) break;
            picks.push_back(static_cast<int>(i));
            recurse(remaining - items_[i].charge, i, picks, visit);
            picks.pop_back();
        }
    }

    std::vector<Subtree> items_;
};

std::vector<BubbleTree> trees_with_root_weight(const SubtreePool& pool, int K, int w0) {
    std::vector<BubbleTree> out;
    pool.for_each_multiset(K - w0, [&](const std::vector<int>& picks) {
        TreeNode root;
        root.weight = w0;
        for (int i : picks) root.children.push_back(pool.items()[i].node);
        out.emplace_back(root);
    });
    return out;
}

void sort_unique(std::vector<BubbleTree>& trees) {
    std::sort(trees.begin(), trees.end());
    trees.erase(std::unique(trees.begin(), trees.end()), trees.end());
}

}  // namespace

std::vector<BubbleTree> enumerate_trees_serial(int K) {
    if (K < 1) throw std::invalid_argument("K must be positive");
    SubtreePool pool(K);
    std::vector<BubbleTree> all;
    for (int w0 = 0; w0 <= K; ++w0) {
        auto part = trees_with_root_weight(pool, K, w0);
        all.insert(all.end(), part.begin(), part.end());
    }
    sort_unique(all);
    return all;
}

std::vector<BubbleTree> enumerate_trees(int K) {
    if (K < 1) throw std::invalid_argument("K must be positive");
    SubtreePool pool(K);
    std::vector<std::vector<BubbleTree>> parts(static_cast<std::size_t>(K) + 1);
#pragma omp parallel for schedule(dynamic, 1)
    for (int w0 = 0; w0 <= K; ++w0) parts[w0] = trees_with_root_weight(pool, K, w0);
    std::vector<BubbleTree> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    sort_unique(all);
    return all;
}

}  // namespace bubbletree
