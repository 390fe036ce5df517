#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cadl/bitset.hpp"

namespace cadl {

using Count = long long;

// Dataset file or value errors (ragged lines, non-binary features, ...).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A feature taken positively (f) or negatively (f-bar).
struct Literal {
    int feature = 0;
    bool positive = true;

    friend bool operator==(const Literal& a, const Literal& b) {
        return a.feature == b.feature && a.positive == b.positive;
    }
    friend bool operator<(const Literal& a, const Literal& b) {
        if (a.feature != b.feature) return a.feature < b.feature;
        return a.positive < b.positive; // negative sorts before positive
    }
};

// Canonical ordered set of literals identifying a subproblem. Kept sorted
// and feature-unique so permutations of the same itemset compare equal.
class Branch {
public:
    Branch() = default;

    const std::vector<Literal>& literals() const { return lits_; }
    std::size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }

    bool contains_feature(int f) const {
        return std::any_of(lits_.begin(), lits_.end(),
                           [f](const Literal& l) { return l.feature == f; });
    }

    // Returns a new branch with l added, preserving canonical order.
    Branch extended(Literal l) const {
        if (contains_feature(l.feature))
            throw std::domain_error("Branch: feature already on the branch");
        Branch b = *this;
        b.lits_.insert(std::upper_bound(b.lits_.begin(), b.lits_.end(), l), l);
        return b;
    }

    friend bool operator==(const Branch& a, const Branch& b) { return a.lits_ == b.lits_; }

private:
    friend Branch canonicalize(std::vector<Literal> literals);
    std::vector<Literal> lits_;
};

// Sorts literals into canonical (feature, polarity) order.
inline Branch canonicalize(std::vector<Literal> literals) {
    std::sort(literals.begin(), literals.end());
    for (std::size_t i = 1; i < literals.size(); ++i)
        if (literals[i].feature == literals[i - 1].feature)
            throw std::domain_error("canonicalize: duplicate feature in branch");
    Branch b;
    b.lits_ = std::move(literals);
    return b;
}

using ExampleSet = Bitset;

// Immutable bitset-encoded binary classification dataset. Class labels are
// remapped to 0..n_classes-1 by sorted original value.
class BinaryDataset {
public:
    static BinaryDataset from_rows(const std::vector<std::vector<int>>& rows,
                                   const std::vector<int>& labels) {
        if (rows.empty() || rows.size() != labels.size())
            throw FormatError("dataset: empty input");
        const std::size_t n = rows.size();
        const std::size_t nf = rows[0].size();
        if (nf == 0) throw FormatError("dataset: no features");

        std::map<int, int> remap;
        for (int c : labels) remap.emplace(c, 0);
        if (remap.size() < 2) throw FormatError("dataset: fewer than 2 classes");
        int next = 0;
        for (auto& [orig, idx] : remap) idx = next++;

        BinaryDataset ds;
        ds.n_examples_ = n;
        ds.n_features_ = nf;
        ds.n_classes_ = remap.size();
        ds.feature_positives_.assign(nf, Bitset(n));
        ds.class_members_.assign(ds.n_classes_, Bitset(n));
        for (std::size_t e = 0; e < n; ++e) {
            if (rows[e].size() != nf)
                throw FormatError("dataset: ragged row at line " + std::to_string(e + 1));
            ds.class_members_[static_cast<std::size_t>(remap.at(labels[e]))].set(e);
            for (std::size_t f = 0; f < nf; ++f) {
                int v = rows[e][f];
                if (v != 0 && v != 1)
                    throw FormatError("dataset: feature value " + std::to_string(v) +
                                      " not in {0,1} at line " + std::to_string(e + 1));
                if (v == 1) ds.feature_positives_[f].set(e);
            }
        }
        return ds;
    }

    std::size_t n_examples() const { return n_examples_; }
    std::size_t n_features() const { return n_features_; }
    std::size_t n_classes() const { return n_classes_; }

    const Bitset& feature_positives(int f) const {
        return feature_positives_.at(static_cast<std::size_t>(f));
    }
    const Bitset& class_members(int c) const {
        return class_members_.at(static_cast<std::size_t>(c));
    }

    ExampleSet all_examples() const { return Bitset::full(n_examples_); }

    bool example_has_feature(std::size_t example, int f) const {
        return feature_positives(f).test(example);
    }
    int example_class(std::size_t example) const {
        for (std::size_t c = 0; c < n_classes_; ++c)
            if (class_members_[c].test(example)) return static_cast<int>(c);
        throw std::logic_error("dataset: example without class");
    }

private:
    std::size_t n_examples_ = 0, n_features_ = 0, n_classes_ = 0;
    std::vector<Bitset> feature_positives_;
    std::vector<Bitset> class_members_;
};

// Whitespace-separated integer rows, class label first. No header.
inline BinaryDataset load_dataset(std::istream& in) {
    std::vector<std::vector<int>> rows;
    std::vector<int> labels;
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<long long> vals;
        long long v;
        while (ls >> v) vals.push_back(v);
        if (!ls.eof()) throw FormatError("dataset: non-integer token at line " + std::to_string(lineno));
        if (vals.empty()) continue; // blank line
        if (width == 0) {
            width = vals.size();
            if (width < 2) throw FormatError("dataset: line " + std::to_string(lineno) +
                                             " has no feature columns");
        } else if (vals.size() != width) {
            throw FormatError("dataset: ragged line " + std::to_string(lineno) + " (expected " +
                              std::to_string(width) + " columns, got " +
                              std::to_string(vals.size()) + ")");
        }
        labels.push_back(static_cast<int>(vals[0]));
        std::vector<int> row(vals.size() - 1);
        for (std::size_t i = 1; i < vals.size(); ++i) {
            if (vals[i] != 0 && vals[i] != 1)
                throw FormatError("dataset: feature value " + std::to_string(vals[i]) +
                                  " not in {0,1} at line " + std::to_string(lineno));
            row[i - 1] = static_cast<int>(vals[i]);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("dataset: empty input");
    return BinaryDataset::from_rows(rows, labels);
}

inline BinaryDataset load_dataset(const std::string& text) {
    std::istringstream in(text);
    return load_dataset(in);
}

// S(b u {f}) = S AND positives(f); S(b u {f-bar}) = S AND-NOT positives(f).
inline ExampleSet cover(const BinaryDataset& ds, const ExampleSet& s, Literal l) {
    const Bitset& pos = ds.feature_positives(l.feature);
    return l.positive ? (s & pos) : s.and_not(pos);
}

// |s| - max_c |s intersect class c|; ties to the lowest class index.
// Empty set yields (0, class 0).
inline std::pair<Count, int> leaf_error(const BinaryDataset& ds, const ExampleSet& s) {
    Count total = static_cast<Count>(s.count());
    Count best = -1;
    int label = 0;
    for (std::size_t c = 0; c < ds.n_classes(); ++c) {
        Count n = static_cast<Count>(Bitset::count_and(s, ds.class_members(static_cast<int>(c))));
        if (n > best) { best = n; label = static_cast<int>(c); }
    }
    if (total == 0) return {0, 0};
    return {total - best, label};
}

namespace detail {
inline double entropy_from_counts(const std::vector<Count>& counts, Count total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (Count n : counts) {
        if (n == 0) continue;
        double p = static_cast<double>(n) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}
} // namespace detail

// Shannon information gain (base 2) of splitting s on feature f.
inline double information_gain(const BinaryDataset& ds, const ExampleSet& s, int f) {
    if (s.count() == 0) throw std::domain_error("information_gain: empty example set");
    const Bitset& pos = ds.feature_positives(f);
    std::vector<Count> total(ds.n_classes()), on(ds.n_classes()), off(ds.n_classes());
    Count n_total = 0, n_on = 0, n_off = 0;
    for (std::size_t c = 0; c < ds.n_classes(); ++c) {
        const Bitset& cls = ds.class_members(static_cast<int>(c));
        on[c] = static_cast<Count>(Bitset::count_and3(s, pos, cls));
        off[c] = static_cast<Count>(Bitset::count_andnot3(s, pos, cls));
        total[c] = on[c] + off[c];
        n_on += on[c];
        n_off += off[c];
        n_total += total[c];
    }
    double h = detail::entropy_from_counts(total, n_total);
    double h_on = detail::entropy_from_counts(on, n_on);
    double h_off = detail::entropy_from_counts(off, n_off);
    double cond = 0.0;
    if (n_on > 0) cond += (static_cast<double>(n_on) / n_total) * h_on;
    if (n_off > 0) cond += (static_cast<double>(n_off) / n_total) * h_off;
    return h - cond;
}

} // namespace cadl
