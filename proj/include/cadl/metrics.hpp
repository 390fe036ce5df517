#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cadl/anytime.hpp"
#include "cadl/trace.hpp"

namespace cadl {

// gamma(x) = |x - x_opt| / |x|, zero when x equals the optimum (including
// the 0/0 case, by intent: a run sitting at the optimum has zero gap).
inline double primal_gap(Count x, Count x_opt) {
    if (x < x_opt) throw std::domain_error("primal_gap: incumbent below best known");
    if (x == x_opt) return 0.0;
    return static_cast<double>(x - x_opt) / static_cast<double>(x);
}

// Step function p(t): 1 before the first incumbent, then the gap of the
// most recent incumbent. Right-continuous at incumbent instants.
inline double primal_function(const IncumbentTrace& trace, Count x_opt, double t) {
    if (t < 0) throw std::domain_error("primal_function: negative time");
    double p = 1.0;
    for (const auto& e : trace.events) {
        if (e.kind != EventKind::Incumbent) continue;
        if (e.t_s > t) break;
        p = primal_gap(e.error, x_opt);
    }
    return p;
}

// P(T) = integral of p over [0, T], evaluated as the exact step sum with
// breakpoints at incumbent times and T.
inline double primal_integral(const IncumbentTrace& trace, Count x_opt, double horizon_s) {
    if (horizon_s < 0) throw std::domain_error("primal_integral: negative horizon");
    double total = 0.0;
    double t_prev = 0.0;
    double p_prev = 1.0;
    for (const auto& e : trace.events) {
        if (e.kind != EventKind::Incumbent) continue;
        double t = std::min(e.t_s, horizon_s);
        if (t > t_prev) {
            total += p_prev * (t - t_prev);
            t_prev = t;
        }
        if (e.t_s <= horizon_s) p_prev = primal_gap(e.error, x_opt);
    }
    total += p_prev * (horizon_s - t_prev);
    return total;
}

// Count of runs with a proved-optimal event at or before each grid point.
inline std::vector<std::size_t> cumulative_solved(const std::vector<RunResult>& runs,
                                                  const std::vector<double>& grid_s) {
    std::vector<std::size_t> out(grid_s.size(), 0);
    for (const auto& run : runs) {
        auto proof = run.trace.proof_time_s();
        if (!proof) continue;
        for (std::size_t i = 0; i < grid_s.size(); ++i)
            if (*proof <= grid_s[i]) ++out[i];
    }
    return out;
}

// Best-known error for one instance: minimum final error across all runs,
// replaced by the proven optimum when any run proved it.
inline Count best_known(const std::vector<IncumbentTrace>& traces) {
    if (traces.empty()) throw std::domain_error("best_known: no traces");
    std::optional<Count> best;
    for (const auto& tr : traces) {
        auto fin = tr.final_error();
        if (tr.proved() && fin) return *fin;
        if (fin && (!best || *fin < *best)) best = *fin;
    }
    if (!best) throw std::domain_error("best_known: no run produced a solution");
    return *best;
}

} // namespace cadl
