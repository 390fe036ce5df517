#pragma once

#include <algorithm>
#include <vector>

#include "cadl/dataset.hpp"

namespace cadl {

enum class Heuristic { GainDesc, InputOrder };

// One minsup-feasible split candidate at a node. `rank` defines what
// "leftmost" means for every rule.
struct Candidate {
    int rank = 0;
    int feature = 0;
    double gain = 0.0;
    Count n_left = 0;  // support of the negative side
    Count n_right = 0; // support of the positive side
};

using OrderedCandidates = std::vector<Candidate>;

// Ordered candidate features at a node. Features already on the branch and
// features with an infeasible side are excluded. By default ranks are dense
// over the surviving candidates; rank_before_filter reproduces the
// alternative where ranks count infeasible features too.
inline OrderedCandidates order_features(const BinaryDataset& ds, const ExampleSet& s,
                                        const Branch& b, Heuristic heuristic, Count minsup,
                                        bool rank_before_filter = false) {
    OrderedCandidates out;
    for (int f = 0; f < static_cast<int>(ds.n_features()); ++f) {
        if (b.contains_feature(f)) continue;
        Candidate c;
        c.feature = f;
        c.n_right = static_cast<Count>(Bitset::count_and(s, ds.feature_positives(f)));
        c.n_left = static_cast<Count>(s.count()) - c.n_right;
        c.gain = (c.n_left + c.n_right) > 0 ? information_gain(ds, s, f) : 0.0;
        out.push_back(c);
    }
    if (heuristic == Heuristic::GainDesc) {
        std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
            if (a.gain != b.gain) return a.gain > b.gain;
            return a.feature < b.feature;
        });
    } // InputOrder: already ascending by feature index

    OrderedCandidates kept;
    int rank = 0;
    for (const Candidate& c : out) {
        bool feasible = c.n_left >= minsup && c.n_right >= minsup;
        if (rank_before_filter) {
            Candidate r = c;
            r.rank = rank++;
            if (feasible) kept.push_back(r);
        } else if (feasible) {
            Candidate r = c;
            r.rank = rank++;
            kept.push_back(r);
        }
    }
    return kept;
}

} // namespace cadl
