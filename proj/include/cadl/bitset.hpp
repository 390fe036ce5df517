#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cadl {

// Fixed-capacity bit set over example indices. All sets drawn from one
// dataset share the same capacity, so word-wise AND / AND-NOT kernels
// never need bounds reconciliation.
class Bitset {
public:
    Bitset() = default;

    explicit Bitset(std::size_t capacity)
        : n_(capacity), words_((capacity + 63) / 64, 0) {}

    static Bitset full(std::size_t capacity) {
        Bitset b(capacity);
        for (auto& w : b.words_) w = ~std::uint64_t{0};
        b.trim();
        return b;
    }

    std::size_t capacity() const { return n_; }

    void set(std::size_t i) {
        if (i >= n_) throw std::out_of_range("Bitset::set: index out of range");
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    bool test(std::size_t i) const {
        if (i >= n_) throw std::out_of_range("Bitset::test: index out of range");
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool empty() const {
        for (auto w : words_) if (w) return false;
        return true;
    }

    Bitset operator&(const Bitset& o) const {
        Bitset r(n_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
        return r;
    }

    // this AND NOT o
    Bitset and_not(const Bitset& o) const {
        Bitset r(n_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & ~o.words_[i];
        return r;
    }

    bool operator==(const Bitset& o) const { return n_ == o.n_ && words_ == o.words_; }

    static std::size_t count_and(const Bitset& a, const Bitset& b) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i]));
        return c;
    }

    static std::size_t count_and_not(const Bitset& a, const Bitset& b) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(a.words_[i] & ~b.words_[i]));
        return c;
    }

    static std::size_t count_and3(const Bitset& a, const Bitset& b, const Bitset& c) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            n += static_cast<std::size_t>(std::popcount(a.words_[i] & b.words_[i] & c.words_[i]));
        return n;
    }

    // a AND (NOT b) AND c
    static std::size_t count_andnot3(const Bitset& a, const Bitset& b, const Bitset& c) {
        std::size_t n = 0;
        for (std::size_t i = 0; i < a.words_.size(); ++i)
            n += static_cast<std::size_t>(std::popcount(a.words_[i] & ~b.words_[i] & c.words_[i]));
        return n;
    }

private:
    void trim() {
        if (n_ & 63) words_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace cadl
