#pragma once

// Arithmetic of n-bit binary expansions and the dyadic interval
// partition of [0,1] induced by each bit.

#include <cmath>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace binexp {

// Doubles carry 52 fraction bits; beyond that an expansion reflects the
// representation, not the sampled value.
inline constexpr int kMaxBits = 52;

/// Ordered n-bit expansion b1..bn, b1 most significant:
/// value = sum_i b_i * 2^-i in [0, 1 - 2^-n].
class BitVector {
public:
    using Bits = std::vector<std::uint8_t>;

    BitVector() = default;

    explicit BitVector(Bits bits) : bits_(std::move(bits)) {
        if (bits_.empty() || static_cast<int>(bits_.size()) > kMaxBits)
            throw std::domain_error("BitVector: size must be in [1, 52]");
        for (auto b : bits_)
            if (b > 1) throw std::domain_error("BitVector: entries must be 0 or 1");
    }

    int size() const { return static_cast<int>(bits_.size()); }

    /// 1-based access, bit(1) most significant.
    int bit(int i) const {
        if (i < 1 || i > size()) throw std::domain_error("BitVector: bit index out of range");
        return bits_[static_cast<std::size_t>(i - 1)];
    }

    const std::vector<std::uint8_t>& bits() const { return bits_; }

    std::string to_string() const {
        std::string s;
        s.reserve(bits_.size());
        for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
        return s;
    }

    bool operator==(const BitVector&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Half-open interval [lo, hi), optionally closed at the right edge
/// (used only for the interval ending at 1).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool closed_right = false;

    double length() const { return hi - lo; }

    bool contains(double x) const {
        return lo <= x && (x < hi || (closed_right && x == hi));
    }
};

namespace detail {

/// i-th expansion bit of x by repeated doubling; bit-exact, no formatting.
inline int expansion_bit(double x, int i) {
    if (x == 1.0) return 1;  // right-endpoint convention: all ones
    double y = x;
    int b = 0;
    for (int k = 0; k < i; ++k) {
        y += y;  // exact: exponent shift
        if (y >= 1.0) {
            b = 1;
            y -= 1.0;  // exact for y in [1,2)
        } else {
            b = 0;
        }
    }
    return b;
}

}  // namespace detail

/// The 2^{i-1} subintervals of [0,1] on which bit i equals a given value.
/// For value 1 these are [(2j-1)*2^-i, 2j*2^-i), j = 1..2^{i-1}, with the
/// final interval closed at 1. Intervals are computed on demand so that
/// large i stays cheap.
class DyadicIntervalSet {
public:
    DyadicIntervalSet(int bit_index, int bit_value)
        : bit_index_(bit_index), bit_value_(bit_value) {
        if (bit_index < 1 || bit_index > kMaxBits)
            throw std::domain_error("DyadicIntervalSet: bit index must be in [1, 52]");
        if (bit_value != 0 && bit_value != 1)
            throw std::domain_error("DyadicIntervalSet: bit value must be 0 or 1");
    }

    int bit_index() const { return bit_index_; }
    int bit_value() const { return bit_value_; }

    std::uint64_t count() const { return std::uint64_t{1} << (bit_index_ - 1); }

    /// j-th interval, 0-based, sorted by lo. Endpoints are exact dyadics.
    Interval interval(std::uint64_t j) const {
        if (j >= count()) throw std::domain_error("DyadicIntervalSet: interval index out of range");
        const double w = std::ldexp(1.0, -bit_index_);
        const double lo = static_cast<double>(2 * j + bit_value_) * w;
        const double hi = static_cast<double>(2 * j + bit_value_ + 1) * w;
        const bool closed = bit_value_ == 1 && j + 1 == count();
        return Interval{lo, hi, closed};
    }

    /// Membership, consistent with expansion bits: x in the set iff the
    /// bit_index-th expansion bit of x equals bit_value.
    bool contains(double x) const {
        if (!(x >= 0.0 && x <= 1.0)) return false;
        return detail::expansion_bit(x, bit_index_) == bit_value_;
    }

    double total_length() const { return 0.5; }

    class const_iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = Interval;
        using difference_type = std::ptrdiff_t;
        using pointer = const Interval*;
        using reference = Interval;

        const_iterator(const DyadicIntervalSet* set, std::uint64_t idx) : set_(set), idx_(idx) {}
        Interval operator*() const { return set_->interval(idx_); }
        const_iterator& operator++() { ++idx_; return *this; }
        const_iterator operator++(int) { auto t = *this; ++idx_; return t; }
        bool operator==(const const_iterator& o) const { return idx_ == o.idx_; }
        bool operator!=(const const_iterator& o) const { return idx_ != o.idx_; }

    private:
        const DyadicIntervalSet* set_;
        std::uint64_t idx_;
    };

    const_iterator begin() const { return {this, 0}; }
    const_iterator end() const { return {this, count()}; }

private:
    int bit_index_;
    int bit_value_;
};

/// n-bit binary expansion of x in [0,1], truncating. x = 1 expands to all
/// ones (value 1 - 2^-n, the closest representable expansion).
inline BitVector expand(double x, int n) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("expand: x must be in [0, 1]");
    if (n < 1 || n > kMaxBits) throw std::domain_error("expand: n must be in [1, 52]");
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
    if (x == 1.0) {
        for (auto& b : bits) b = 1;
        return BitVector(std::move(bits));
    }
    double y = x;
    for (int i = 0; i < n; ++i) {
        y += y;
        if (y >= 1.0) {
            bits[static_cast<std::size_t>(i)] = 1;
            y -= 1.0;
        }
    }
    return BitVector(std::move(bits));
}

/// Interval set on which bit i takes the requested value.
inline DyadicIntervalSet bit_intervals(int i, int value) { return DyadicIntervalSet(i, value); }

/// Inverse of expand: sum_i b_i * 2^-i. Exact (the sum fits a double mantissa).
inline double value_of(const BitVector& bits) {
    double v = 0.0;
    for (int i = 1; i <= bits.size(); ++i)
        v += std::ldexp(static_cast<double>(bits.bit(i)), -i);
    return v;
}

}  // namespace binexp
