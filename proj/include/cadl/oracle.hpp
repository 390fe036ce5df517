#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "cadl/dataset.hpp"
#include "cadl/tree.hpp"

namespace cadl {

struct OracleResult {
    Count optimal_error = 0;
    Tree tree;
};

namespace detail {

// Fixed tree ordering for deterministic tie-breaking: Leaf < Node, leaves
// by label, nodes by (feature, left, right).
inline bool tree_less(const Tree& a, const Tree& b) {
    if (a.is_leaf() != b.is_leaf()) return a.is_leaf();
    if (a.is_leaf()) return a.label() < b.label();
    if (a.feature() != b.feature()) return a.feature() < b.feature();
    if (tree_less(a.left(), b.left())) return true;
    if (tree_less(b.left(), a.left())) return false;
    return tree_less(a.right(), b.right());
}

} // namespace detail

// Exhaustive optimal-tree search: no cache, no bounds, no heuristics.
// Deliberately slow and independent of the production search path; guarded
// by hard rails on instance size.
inline OracleResult brute_force_optimal(const BinaryDataset& ds, int maxdepth, Count minsup) {
    constexpr int kMaxFeatures = 12;
    constexpr int kMaxDepth = 4;
    if (static_cast<int>(ds.n_features()) > kMaxFeatures || maxdepth > kMaxDepth)
        throw std::domain_error("brute_force_optimal: limits are n_features <= " +
                                std::to_string(kMaxFeatures) + " and maxdepth <= " +
                                std::to_string(kMaxDepth));

    std::function<OracleResult(const Branch&, const ExampleSet&, int)> solve =
        [&](const Branch& b, const ExampleSet& s, int depth_left) -> OracleResult {
        auto [e, label] = leaf_error(ds, s);
        OracleResult best{e, Tree::leaf(label, e)};
        if (depth_left == 0) return best;
        for (int f = 0; f < static_cast<int>(ds.n_features()); ++f) {
            if (b.contains_feature(f)) continue;
            Literal neg{f, false}, pos{f, true};
            ExampleSet s_left = cover(ds, s, neg);
            ExampleSet s_right = cover(ds, s, pos);
            if (static_cast<Count>(s_left.count()) < minsup ||
                static_cast<Count>(s_right.count()) < minsup)
                continue;
            OracleResult l = solve(b.extended(neg), s_left, depth_left - 1);
            OracleResult r = solve(b.extended(pos), s_right, depth_left - 1);
            Count err = l.optimal_error + r.optimal_error;
            Tree candidate = Tree::node(f, l.tree, r.tree);
            if (err < best.optimal_error ||
                (err == best.optimal_error && detail::tree_less(candidate, best.tree))) {
                best = OracleResult{err, std::move(candidate)};
            }
        }
        return best;
    };
    return solve(Branch{}, ds.all_examples(), maxdepth);
}

} // namespace cadl
