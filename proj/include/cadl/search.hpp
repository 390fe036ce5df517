#pragma once

#include <functional>
#include <optional>
#include <utility>

#include "cadl/cache.hpp"
#include "cadl/dataset.hpp"
#include "cadl/heuristics.hpp"
#include "cadl/rules.hpp"
#include "cadl/trace.hpp"
#include "cadl/tree.hpp"

namespace cadl {

struct SearchParams {
    Count minsup = 1;
    int maxdepth = 0;
    Heuristic heuristic = Heuristic::GainDesc;
    bool rank_before_filter = false;
    bool use_cache = true;
    std::size_t cache_node_cap = 0;
    double time_limit_s = 0.0;       // 0 = unlimited
    const Stopwatch* stopwatch = nullptr;
};

struct SearchOutcome {
    BestEntry best;
    bool pruned_anywhere = false; // negation of the root optimal flag
    long long nodes_expanded = 0;
    bool deadline_hit = false;
};

// Called whenever the root adopts a strictly better candidate tree.
using RootImprovement = std::function<void(const Tree&, Count error)>;

// Recursive branch-and-bound search over the OR-AND tree, with the generic
// rule hooks deciding which candidates stay in the current beam. With rule
// None this is exactly plain DL8.5.
class BeamSearch {
public:
    BeamSearch(const BinaryDataset& ds, const SearchParams& params, RuleConfig rule,
               TrieCache& cache)
        : ds_(ds), params_(params), rule_(std::move(rule)), cache_(cache) {}

    void set_root_callback(RootImprovement cb) { on_root_improve_ = std::move(cb); }

    SearchOutcome run(Bound ub) {
        ExampleSet all = ds_.all_examples();
        auto [e0, lbl0] = leaf_error(ds_, all);
        Context ctx0{0, e0, static_cast<Count>(ds_.n_examples())};
        RuleState st0 = initial_state(rule_, ctx0);
        return run(ub, ctx0, st0);
    }

    SearchOutcome run(Bound ub, const Context& ctx0, const RuleState& st0) {
        nodes_expanded_ = 0;
        deadline_hit_ = false;
        BestEntry best = search(Branch{}, ds_.all_examples(), ub, ctx0, st0);
        SearchOutcome out;
        out.best = std::move(best);
        out.pruned_anywhere = !out.best.state.terminal;
        out.nodes_expanded = nodes_expanded_;
        out.deadline_hit = deadline_hit_;
        return out;
    }

private:
    bool deadline_passed() {
        if (params_.time_limit_s <= 0.0 || !params_.stopwatch) return false;
        if (deadline_hit_) return true;
        if (params_.stopwatch->elapsed_s() >= params_.time_limit_s) deadline_hit_ = true;
        return deadline_hit_;
    }

    BestEntry leaf_entry(const ExampleSet& s, Bound ub, RuleState st) const {
        auto [e, label] = leaf_error(ds_, s);
        BestEntry out;
        out.error = e;
        out.ub = ub;
        out.tree = Tree::leaf(label, e);
        out.state = std::move(st);
        return out;
    }

    BestEntry search(const Branch& b, const ExampleSet& s, Bound ub, Context ctx, RuleState st) {
        // Terminal: depth exhausted or already pure.
        if (static_cast<int>(b.size()) == params_.maxdepth || ctx.e == 0)
            return leaf_entry(s, ub, terminal_state(st));

        // Out of time, or the node itself is pruned (Purity): stop here,
        // keep the leaf, stay non-terminal.
        if (deadline_passed() || prune(st, rule_))
            return leaf_entry(s, ub, st);

        if (params_.use_cache) {
            if (const BestEntry* hit = cache_.get(b)) {
                // Only proven-optimal entries are replayed; a partial entry
                // would freeze the restart loop on its stale result.
                if (hit->state.terminal && reusable(*hit, ub, rule_)) return *hit;
            }
        }

        OrderedCandidates cands = order_features(ds_, s, b, params_.heuristic, params_.minsup,
                                                 params_.rank_before_filter);
        // No feasible split: this branch can only be a leaf, which is optimal.
        if (cands.empty()) return leaf_entry(s, ub, terminal_state(st));

        ++nodes_expanded_;

        double best_gain = 0.0;
        for (const Candidate& c : cands) best_gain = std::max(best_gain, c.gain);

        const bool skip_on_prune = !prune_keeps_leaf(rule_.kind);
        Tree tau;
        Bound child_ub = ub;
        bool optimal = true;

        for (const Candidate& c : cands) {
            Literal neg{c.feature, false}, pos{c.feature, true};
            GainAux aux{best_gain, c.gain};

            ExampleSet s_left = cover(ds_, s, neg);
            Context ctx_l{c.rank, leaf_error(ds_, s_left).first, c.n_left};
            RuleState st_l = update(st, ctx_l, aux);
            if (skip_on_prune && prune(st_l, rule_)) {
                optimal = false;
                continue;
            }
            BestEntry left = search(b.extended(neg), s_left, child_ub, ctx_l, st_l);
            if (!left.state.terminal) optimal = false;
            if (left.tree.is_empty()) continue;

            ExampleSet s_right = cover(ds_, s, pos);
            Context ctx_r{c.rank, leaf_error(ds_, s_right).first, c.n_right};
            RuleState st_r = update(st, ctx_r, aux);
            if (skip_on_prune && prune(st_r, rule_)) {
                optimal = false;
                continue;
            }
            BestEntry right =
                search(b.extended(pos), s_right, bound_minus(child_ub, left.error), ctx_r, st_r);
            if (!right.state.terminal) optimal = false;
            if (right.tree.is_empty()) continue;

            Count e = static_cast<Count>(left.error + right.error);
            if (e < child_ub) {
                child_ub = e;
                tau = Tree::node(c.feature, left.tree, right.tree);
                ctx.e = e;
                st = refresh_on_adopt(st, ctx);
                if (b.empty() && on_root_improve_) on_root_improve_(tau, e);
            }
            if (e == 0) break;
        }

        BestEntry node;
        node.error = child_ub;
        node.ub = ub;
        node.tree = std::move(tau);
        node.state = optimal ? terminal_state(st) : st;
        if (params_.use_cache) cache_.save(b, node);
        return node;
    }

    const BinaryDataset& ds_;
    SearchParams params_;
    RuleConfig rule_;
    TrieCache& cache_;
    RootImprovement on_root_improve_;
    long long nodes_expanded_ = 0;
    bool deadline_hit_ = false;
};

// Plain exact DL8.5: beam search with rule None, infinite bound, fresh
// cache.
inline SearchOutcome dl85(const BinaryDataset& ds, const SearchParams& params) {
    TrieCache cache(params.cache_node_cap);
    BeamSearch search(ds, params, RuleConfig::none(), cache);
    return search.run(kInfiniteBound);
}

// Depth-limited greedy baseline: always take the rank-0 candidate.
inline Tree greedy_tree(const BinaryDataset& ds, const SearchParams& params) {
    std::function<Tree(const Branch&, const ExampleSet&, int)> build =
        [&](const Branch& b, const ExampleSet& s, int depth_left) -> Tree {
        auto [e, label] = leaf_error(ds, s);
        if (depth_left == 0 || e == 0) return Tree::leaf(label, e);
        OrderedCandidates cands = order_features(ds, s, b, params.heuristic, params.minsup,
                                                 params.rank_before_filter);
        if (cands.empty()) return Tree::leaf(label, e);
        const Candidate& c = cands.front();
        Literal neg{c.feature, false}, pos{c.feature, true};
        return Tree::node(c.feature, build(b.extended(neg), cover(ds, s, neg), depth_left - 1),
                          build(b.extended(pos), cover(ds, s, pos), depth_left - 1));
    };
    return build(Branch{}, ds.all_examples(), params.maxdepth);
}

} // namespace cadl
