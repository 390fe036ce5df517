#pragma once

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "cadl/dataset.hpp"
#include "cadl/rules.hpp"
#include "cadl/tree.hpp"

namespace cadl {

// Upper bounds are error counts with a representable +infinity.
using Bound = long long;
inline constexpr Bound kInfiniteBound = (std::numeric_limits<Bound>::max)() / 4;

inline Bound bound_minus(Bound b, Count e) {
    return b >= kInfiniteBound ? kInfiniteBound : b - e;
}

// Cached subproblem result. `ub` is the bound in force when the entry was
// stored. An Empty tree means no tree with error < ub was found; callers
// must test tree emptiness, not error, to detect that case.
struct BestEntry {
    Bound error = kInfiniteBound;
    Bound ub = kInfiniteBound;
    Tree tree;
    RuleState state;
};

// True iff the entry answers the current query: the stored bound is at
// least as loose and the stored state survives the current rule.
inline bool reusable(const BestEntry& e, Bound current_ub, const RuleConfig& r) {
    return current_ub <= e.ub && !prune(e.state, r);
}

struct CacheCapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Trie keyed by canonical branch; one entry per canonical literal set, so
// permutations of the same itemset share a slot.
class TrieCache {
public:
    explicit TrieCache(std::size_t node_cap = 0) : node_cap_(node_cap) {}

    const BestEntry* get(const Branch& b) const {
        const TrieNode* n = &root_;
        for (const Literal& l : b.literals()) {
            auto it = n->children.find(l);
            if (it == n->children.end()) return nullptr;
            n = it->second.get();
        }
        return n->entry ? &*n->entry : nullptr;
    }

    void save(const Branch& b, BestEntry e) {
        TrieNode* n = &root_;
        for (const Literal& l : b.literals()) {
            auto it = n->children.find(l);
            if (it == n->children.end()) {
                if (node_cap_ && n_nodes_ >= node_cap_)
                    throw CacheCapacityError("cache node cap of " + std::to_string(node_cap_) +
                                             " exceeded");
                it = n->children.emplace(l, std::make_unique<TrieNode>()).first;
                ++n_nodes_;
            }
            n = it->second.get();
        }
        n->entry = std::move(e); // overwrite-on-save
    }

    std::size_t node_count() const { return n_nodes_; }

private:
    struct TrieNode {
        std::optional<BestEntry> entry;
        std::map<Literal, std::unique_ptr<TrieNode>> children;
    };

    TrieNode root_;
    std::size_t n_nodes_ = 1;
    std::size_t node_cap_ = 0;
};

} // namespace cadl
