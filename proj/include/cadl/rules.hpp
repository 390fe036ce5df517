#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cadl/dataset.hpp"

namespace cadl {

// Per-node search context: candidate rank, node error, node support.
struct Context {
    int i = 0;
    Count e = 0;
    Count s = 0;
};

enum class RuleKind { None, Purity, Gain, Discrepancy, TopK, TopKStar };

inline std::string rule_name(RuleKind k) {
    switch (k) {
    case RuleKind::None: return "none";
    case RuleKind::Purity: return "purity";
    case RuleKind::Gain: return "gain";
    case RuleKind::Discrepancy: return "discrepancy";
    case RuleKind::TopK: return "topk";
    case RuleKind::TopKStar: return "topk-star";
    }
    return "?";
}

// Per-node rule bookkeeping. One numeric slot per rule variant plus an
// explicit terminal flag: a terminal state is exempt from every prune.
struct RuleState {
    RuleKind kind = RuleKind::None;
    bool terminal = false;
    double purity = 0.0;
    double cum_gap = 0.0;
    Count tot_discr = 0;
    int feat_idx = 0;
    int level_k = 0;
};

enum class RelaxKind { Monotonic, Exponential, Luby };

inline std::string relax_name(RelaxKind k) {
    switch (k) {
    case RelaxKind::Monotonic: return "monotonic";
    case RelaxKind::Exponential: return "exponential";
    case RelaxKind::Luby: return "luby";
    }
    return "?";
}

struct RelaxSchedule {
    RelaxKind kind = RelaxKind::Monotonic;
    double step = 1.0;      // monotonic increment
    double factor = 2.0;    // exponential multiplier
    Count luby_unit = 1;    // luby increment unit
    Count n_relax = 0;      // relax calls so far (drives the Luby index)
};

// Luby sequence: 1,1,2,1,1,2,4,1,1,2,1,1,2,4,8,...
inline Count luby(Count n) {
    if (n < 1) throw std::domain_error("luby: n must be >= 1");
    for (Count k = 1; ; ++k) {
        Count pow_k = Count{1} << k; // 2^k
        if (n == pow_k - 1) return Count{1} << (k - 1);
        if (n < pow_k - 1) return luby(n - (pow_k >> 1) + 1);
    }
}

// Current rule thresholds plus the ceilings that decide relaxability.
// Ceilings depend on the instance (n_features, maxdepth, n_classes) and
// are fixed at construction.
struct RuleConfig {
    RuleKind kind = RuleKind::None;
    RelaxSchedule schedule;

    double min_purity = 0.5;
    double purity_delta = 0.1;

    double max_gap = 0.0;
    double gap_ceiling = 0.0; // maxdepth * log2(n_classes)

    Count max_discr = 0;
    Count discr_ceiling = 0;  // (n_features - 1) * maxdepth

    int k = 1;
    int k_ceiling = 1;        // n_features

    static RuleConfig none() { return RuleConfig{}; }

    static RuleConfig make(RuleKind kind, const BinaryDataset& ds, int maxdepth,
                           RelaxSchedule schedule = {}) {
        RuleConfig r;
        r.kind = kind;
        r.schedule = schedule;
        r.gap_ceiling = maxdepth * std::log2(static_cast<double>(ds.n_classes()));
        r.discr_ceiling = static_cast<Count>(ds.n_features() - 1) * maxdepth;
        r.k_ceiling = static_cast<int>(ds.n_features());
        if (kind == RuleKind::TopKStar) {
            // the per-level budget halves with depth, so the root budget must
            // be n_features at the deepest level to stop pruning everywhere
            int shift = std::min(maxdepth, 24);
            r.k_ceiling = static_cast<int>(std::min<long long>(
                static_cast<long long>(ds.n_features()) << shift, 1LL << 30));
        }
        if (kind == RuleKind::Purity && schedule.kind != RelaxKind::Monotonic)
            throw std::domain_error("rules: Purity supports only the monotonic schedule");
        return r;
    }
};

// Extra inputs for the Gain rule: best candidate gain at the node and the
// gain of the chosen feature.
struct GainAux {
    double best_gain = 0.0;
    double gain = 0.0;
};

inline RuleState initial_state(const RuleConfig& r, const Context& c0) {
    if (c0.s == 0) throw std::domain_error("initial_state: empty root");
    RuleState t;
    t.kind = r.kind;
    switch (r.kind) {
    case RuleKind::None: break;
    case RuleKind::Purity:
        t.purity = 1.0 - static_cast<double>(c0.e) / static_cast<double>(c0.s);
        break;
    case RuleKind::Gain: t.cum_gap = 0.0; break;
    case RuleKind::Discrepancy: t.tot_discr = 0; break;
    case RuleKind::TopK: t.feat_idx = 0; break;
    case RuleKind::TopKStar:
        t.feat_idx = 0;
        t.level_k = r.k;
        break;
    }
    return t;
}

inline RuleState update(const RuleState& parent, const Context& c, GainAux aux = {}) {
    if (parent.terminal) throw std::domain_error("update: terminal parent state");
    RuleState t;
    t.kind = parent.kind;
    switch (parent.kind) {
    case RuleKind::None: break;
    case RuleKind::Purity:
        if (c.s == 0) throw std::domain_error("update: zero support");
        t.purity = 1.0 - static_cast<double>(c.e) / static_cast<double>(c.s);
        break;
    case RuleKind::Gain:
        if (aux.gain > aux.best_gain + 1e-12)
            throw std::domain_error("update: feature gain exceeds best gain");
        t.cum_gap = parent.cum_gap + (aux.best_gain - aux.gain);
        break;
    case RuleKind::Discrepancy: t.tot_discr = parent.tot_discr + c.i; break;
    case RuleKind::TopK: t.feat_idx = c.i; break;
    case RuleKind::TopKStar:
        t.feat_idx = c.i;
        t.level_k = std::max(1, parent.level_k / 2);
        break;
    }
    return t;
}

// Re-update of a node's own state when a better candidate is adopted
// (the update with an unchanged rank). Only Purity actually changes: its
// purity is refreshed with the improved subtree error. For the cumulative
// rules, re-applying the node's own rank would double-count it.
inline RuleState refresh_on_adopt(const RuleState& t, const Context& c) {
    if (t.kind != RuleKind::Purity || t.terminal) return t;
    RuleState out = t;
    out.purity = 1.0 - static_cast<double>(c.e) / static_cast<double>(c.s);
    return out;
}

inline bool prune(const RuleState& t, const RuleConfig& r) {
    if (t.kind != r.kind) throw std::domain_error("prune: state/config variant mismatch");
    if (t.terminal) return false;
    switch (r.kind) {
    case RuleKind::None: return false;
    case RuleKind::Purity: return t.purity >= r.min_purity;
    case RuleKind::Gain: return t.cum_gap > r.max_gap;
    case RuleKind::Discrepancy: return t.tot_discr > r.max_discr; // budget-inclusive
    case RuleKind::TopK: return t.feat_idx >= r.k;
    case RuleKind::TopKStar: return t.feat_idx >= t.level_k;
    }
    return false;
}

// Whether a prune verdict removes the candidate from the beam (skip) or
// stops expansion of the node itself (keep it as a leaf). Purity prunes
// nodes that are already pure enough; the beam rules prune candidates.
inline bool prune_keeps_leaf(RuleKind k) { return k == RuleKind::Purity; }

inline RuleState terminal_state(RuleState t) {
    t.terminal = true;
    return t;
}

inline bool is_relaxable(const RuleConfig& r) {
    switch (r.kind) {
    case RuleKind::None: return false;
    case RuleKind::Purity: return r.min_purity < 1.0;
    case RuleKind::Gain: return r.max_gap < r.gap_ceiling;
    case RuleKind::Discrepancy: return r.max_discr < r.discr_ceiling;
    case RuleKind::TopK:
    case RuleKind::TopKStar: return r.k < r.k_ceiling;
    }
    return false;
}

namespace detail {
inline double relax_real(double t, const RelaxSchedule& s, Count n) {
    switch (s.kind) {
    case RelaxKind::Monotonic: return t + s.step;
    case RelaxKind::Exponential: return std::max(t * s.factor, t + 1.0);
    case RelaxKind::Luby: return t + static_cast<double>(s.luby_unit * luby(n));
    }
    return t;
}
inline Count relax_int(Count t, const RelaxSchedule& s, Count n) {
    switch (s.kind) {
    case RelaxKind::Monotonic: return t + static_cast<Count>(s.step);
    case RelaxKind::Exponential:
        return std::max(static_cast<Count>(static_cast<double>(t) * s.factor), t + 1);
    case RelaxKind::Luby: return t + s.luby_unit * luby(n);
    }
    return t;
}
} // namespace detail

inline RuleConfig relax(RuleConfig r) {
    if (!is_relaxable(r)) throw std::domain_error("relax: rule is not relaxable");
    Count n = ++r.schedule.n_relax;
    switch (r.kind) {
    case RuleKind::None: break;
    case RuleKind::Purity: // always monotonic, capped at 1.0
        r.min_purity = std::min(1.0, r.min_purity + r.purity_delta);
        break;
    case RuleKind::Gain:
        r.max_gap = detail::relax_real(r.max_gap, r.schedule, n);
        break;
    case RuleKind::Discrepancy:
        r.max_discr = detail::relax_int(r.max_discr, r.schedule, n);
        break;
    case RuleKind::TopK:
    case RuleKind::TopKStar:
        r.k = static_cast<int>(detail::relax_int(r.k, r.schedule, n));
        break;
    }
    return r;
}

} // namespace cadl
