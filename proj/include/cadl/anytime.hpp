#pragma once

#include <optional>
#include <utility>

#include "cadl/search.hpp"
#include "cadl/trace.hpp"

namespace cadl {

struct RunResult {
    Tree best_tree;
    Count best_error = kInfiniteBound;
    bool proved_optimal = false;
    int iterations = 0;
    IncumbentTrace trace;
};

namespace detail {

class Emitter {
public:
    Emitter(IncumbentTrace& trace, const Stopwatch& sw, TraceSink sink)
        : trace_(trace), sw_(sw), sink_(std::move(sink)) {}

    void emit(EventKind kind, Count error, int iteration) {
        TraceEvent e{sw_.elapsed_s(), error, kind, iteration};
        trace_.events.push_back(e);
        if (sink_) sink_(e);
    }

private:
    IncumbentTrace& trace_;
    const Stopwatch& sw_;
    TraceSink sink_;
};

} // namespace detail

// Restart-based anytime driver: run the beam search, tighten the bound,
// relax the rule, repeat. The cache persists across iterations. Stops on
// proven optimality, a perfect tree, an exhausted relaxation schedule
// (after one final fully-relaxed pass), or the deadline.
inline RunResult cadl85(const BinaryDataset& ds, RuleConfig rule, SearchParams params,
                        double time_limit_s, const Stopwatch& stopwatch,
                        TraceMeta meta = {}, TraceSink sink = nullptr) {
    params.stopwatch = &stopwatch;
    params.time_limit_s = time_limit_s;
    meta.time_limit_s = time_limit_s;

    RunResult result;
    result.trace.meta = std::move(meta);
    detail::Emitter emitter(result.trace, stopwatch, std::move(sink));

    TrieCache cache(params.cache_node_cap);

    ExampleSet all = ds.all_examples();
    Context ctx0{0, leaf_error(ds, all).first, static_cast<Count>(ds.n_examples())};
    RuleState st0 = initial_state(rule, ctx0);

    Bound ub = kInfiniteBound;
    int iteration = 0;
    while (true) {
        const bool final_pass = !is_relaxable(rule);

        BeamSearch search(ds, params, rule, cache);
        search.set_root_callback([&](const Tree& tree, Count error) {
            if (error < result.best_error) {
                result.best_tree = tree;
                result.best_error = error;
                emitter.emit(EventKind::Incumbent, error, iteration);
            }
        });
        SearchOutcome out = search.run(ub, ctx0, st0);
        result.iterations = iteration + 1;

        // Root returned without any root-level adoption (leaf root, cache
        // replay): still an improvement worth recording, unless the
        // iteration was cut short by the deadline.
        if (!out.deadline_hit && !out.best.tree.is_empty() && out.best.error < result.best_error) {
            result.best_tree = out.best.tree;
            result.best_error = out.best.error;
            emitter.emit(EventKind::Incumbent, result.best_error, iteration);
        }
        emitter.emit(EventKind::IterationEnd, result.best_error, iteration);

        // A zero-error tree is optimal regardless of how much was pruned.
        if (result.best_error == 0 || (!out.deadline_hit && !out.pruned_anywhere)) {
            result.proved_optimal = true;
            emitter.emit(EventKind::ProvedOptimal, result.best_error, iteration);
            break;
        }
        if (out.deadline_hit) {
            emitter.emit(EventKind::Timeout, result.best_error, iteration);
            break;
        }
        if (final_pass) break; // fully relaxed pass completed

        ub = out.best.error;
        rule = relax(rule);
        st0 = initial_state(rule, ctx0); // thresholds live in the config; reseed the state
        ++iteration;
    }
    // Never end empty-handed: the root majority leaf is always a valid
    // (if weak) tree. Not traced as an incumbent.
    if (result.best_tree.is_empty()) {
        auto [e, label] = leaf_error(ds, ds.all_examples());
        result.best_tree = Tree::leaf(label, e);
        result.best_error = e;
    }
    return result;
}

// DL8.5 with incumbent reporting: a single iteration with rule None.
inline RunResult dl85_anytime(const BinaryDataset& ds, SearchParams params, double time_limit_s,
                              const Stopwatch& stopwatch, TraceMeta meta = {},
                              TraceSink sink = nullptr) {
    meta.algo = meta.algo.empty() ? "dl85" : meta.algo;
    meta.rule = "none";
    return cadl85(ds, RuleConfig::none(), std::move(params), time_limit_s, stopwatch,
                  std::move(meta), std::move(sink));
}

// Fixed Top-k baseline: one beam iteration, no relaxation. Complete only
// when nothing was pruned (k >= the number of candidates everywhere).
inline RunResult topk_fixed(const BinaryDataset& ds, int k, SearchParams params,
                            double time_limit_s, const Stopwatch& stopwatch,
                            TraceMeta meta = {}, TraceSink sink = nullptr) {
    if (k < 1) throw std::domain_error("topk_fixed: k must be >= 1");
    params.stopwatch = &stopwatch;
    params.time_limit_s = time_limit_s;
    meta.algo = meta.algo.empty() ? "topk" : meta.algo;
    meta.rule = "topk";
    meta.time_limit_s = time_limit_s;

    RunResult result;
    result.trace.meta = std::move(meta);
    detail::Emitter emitter(result.trace, stopwatch, std::move(sink));

    RuleConfig rule = RuleConfig::make(RuleKind::TopK, ds, params.maxdepth);
    rule.k = k;

    TrieCache cache(params.cache_node_cap);
    BeamSearch search(ds, params, rule, cache);
    search.set_root_callback([&](const Tree& tree, Count error) {
        if (error < result.best_error) {
            result.best_tree = tree;
            result.best_error = error;
            emitter.emit(EventKind::Incumbent, error, 0);
        }
    });
    SearchOutcome out = search.run(kInfiniteBound);
    result.iterations = 1;
    if (!out.deadline_hit && !out.best.tree.is_empty() && out.best.error < result.best_error) {
        result.best_tree = out.best.tree;
        result.best_error = out.best.error;
        emitter.emit(EventKind::Incumbent, result.best_error, 0);
    }
    emitter.emit(EventKind::IterationEnd, result.best_error, 0);
    if (result.best_error == 0 || (!out.deadline_hit && !out.pruned_anywhere)) {
        result.proved_optimal = true;
        emitter.emit(EventKind::ProvedOptimal, result.best_error, 0);
    } else if (out.deadline_hit) {
        emitter.emit(EventKind::Timeout, result.best_error, 0);
    }
    if (result.best_tree.is_empty()) {
        auto [e, label] = leaf_error(ds, ds.all_examples());
        result.best_tree = Tree::leaf(label, e);
        result.best_error = e;
    }
    return result;
}

// Greedy baseline wrapped as a run: one incumbent event, never proved.
inline RunResult greedy_run(const BinaryDataset& ds, SearchParams params, const Stopwatch& stopwatch,
                            TraceMeta meta = {}, TraceSink sink = nullptr) {
    RunResult result;
    meta.algo = meta.algo.empty() ? "greedy" : meta.algo;
    result.trace.meta = std::move(meta);
    detail::Emitter emitter(result.trace, stopwatch, std::move(sink));
    result.best_tree = greedy_tree(ds, params);
    result.best_error = tree_error(result.best_tree, ds);
    result.iterations = 1;
    emitter.emit(EventKind::Incumbent, result.best_error, 0);
    return result;
}

} // namespace cadl
