#pragma once

#include <cstdint>
#include <vector>

namespace stripsmorph {

// Fixed-size bitset over dense integer ids, sized at runtime.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(int size, bool fill = false)
        : size_(size), words_((size + 63) / 64, fill ? ~std::uint64_t{0} : 0) {
        trim();
    }

    int size() const { return size_; }

    bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    int count() const {
        int c = 0;
        for (auto w : words_) c += __builtin_popcountll(w);
        return c;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    // First set bit at position >= from, or -1.
    int next(int from = 0) const {
        if (from >= size_) return -1;
        int wi = from >> 6;
        std::uint64_t w = words_[wi] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (w) return (wi << 6) + __builtin_ctzll(w);
            if (++wi >= static_cast<int>(words_.size())) return -1;
            w = words_[wi];
        }
    }

    bool intersects(const Bitset& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i]) return true;
        return false;
    }

    bool is_subset_of(const Bitset& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }

    Bitset& operator&=(const Bitset& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
        return *this;
    }
    Bitset& operator|=(const Bitset& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
        return *this;
    }
    Bitset& operator-=(const Bitset& other) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
        return *this;
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator-(Bitset a, const Bitset& b) { return a -= b; }

    friend bool operator==(const Bitset& a, const Bitset& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }
    friend bool operator!=(const Bitset& a, const Bitset& b) { return !(a == b); }

    // Lexicographic on words; used as an ordered-map key.
    friend bool operator<(const Bitset& a, const Bitset& b) { return a.words_ < b.words_; }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        for (int i = next(); i != -1; i = next(i + 1)) out.push_back(i);
        return out;
    }

private:
    void trim() {
        if (size_ & 63) words_.back() &= (~std::uint64_t{0} >> (64 - (size_ & 63)));
    }

    int size_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace stripsmorph
