#pragma once

// Seeded Monte Carlo generation of bit expansions and empirical estimation
// of bit statistics. Every model is sampled by inverse transform, one
// uniform variate per draw, addressed by (seed, stream, index) so runs are
// reproducible and chunk-parallel partitions merge to identical results.

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "binexp/distribution.hpp"
#include "binexp/dyadic.hpp"
#include "binexp/exact.hpp"
#include "binexp/philox.hpp"

namespace binexp {

/// One seeded run: count rows of n bits, packed per row with b1 at the
/// high end (row value = floor(x * 2^n), with x = 1 mapped to 2^n - 1).
struct SampleRun {
    DistributionModel model = DistributionModel::uniform();
    int n = 0;
    std::uint64_t count = 0;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::vector<std::uint64_t> rows;

    /// 1-based bit of a 0-based row.
    int bit(std::uint64_t row, int i) const {
        return static_cast<int>((rows[row] >> (n - i)) & 1u);
    }
};

namespace detail {

inline std::uint64_t pack_bits(const BitVector& bits) {
    std::uint64_t row = 0;
    for (int i = 1; i <= bits.size(); ++i) row = (row << 1) | static_cast<std::uint64_t>(bits.bit(i));
    return row;
}

}  // namespace detail

/// Expansion of one inverse-transform draw from the given uniform variate.
inline BitVector bits_from_uniform(const DistributionModel& model, double u, int n) {
    return expand(model.inverse_cdf(u), n);
}

/// Streaming accumulator of bit and bit-pair counts. Associative: chunks
/// accumulated separately and merged give the same statistics as one pass.
class BitAccumulator {
public:
    explicit BitAccumulator(int n) : n_(n), ones_(static_cast<std::size_t>(n), 0),
                                     pair_ones_(static_cast<std::size_t>(n) * n, 0) {
        if (n < 1 || n > kMaxBits) throw std::domain_error("BitAccumulator: n must be in [1, 52]");
    }

    int bits() const { return n_; }
    std::uint64_t count() const { return count_; }

    void add_row(std::uint64_t row) {
        ++count_;
        for (int i = 1; i <= n_; ++i) {
            if (!((row >> (n_ - i)) & 1u)) continue;
            ++ones_[static_cast<std::size_t>(i - 1)];
            for (int j = i + 1; j <= n_; ++j)
                if ((row >> (n_ - j)) & 1u)
                    ++pair_ones_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)];
        }
    }

    void merge(const BitAccumulator& other) {
        if (other.n_ != n_) throw std::domain_error("BitAccumulator: merge with mismatched width");
        count_ += other.count_;
        for (std::size_t k = 0; k < ones_.size(); ++k) ones_[k] += other.ones_[k];
        for (std::size_t k = 0; k < pair_ones_.size(); ++k) pair_ones_[k] += other.pair_ones_[k];
    }

    /// Empirical statistics with the same moment formulas as the exact path.
    BitStatistics finalize(std::uint64_t seed) const {
        if (count_ < 2) throw std::domain_error("BitAccumulator: need at least 2 draws");
        BitStatistics stats;
        stats.n = n_;
        stats.source = StatisticsSource::empirical(count_, seed);
        const double inv = 1.0 / static_cast<double>(count_);
        stats.marginals.resize(static_cast<std::size_t>(n_));
        for (int i = 1; i <= n_; ++i)
            stats.marginals[static_cast<std::size_t>(i - 1)] =
                static_cast<double>(ones_[static_cast<std::size_t>(i - 1)]) * inv;
        stats.joint = SymmetricMatrix(n_);
        for (int i = 1; i <= n_; ++i) {
            stats.joint.set(i, i, stats.marginal(i));
            for (int j = i + 1; j <= n_; ++j)
                stats.joint.set(
                    i, j,
                    static_cast<double>(pair_ones_[static_cast<std::size_t>(i - 1) * n_ + (j - 1)]) *
                        inv);
        }
        detail::derive_moments(stats);
        return stats;
    }

private:
    int n_;
    std::uint64_t count_ = 0;
    std::vector<std::uint64_t> ones_;
    std::vector<std::uint64_t> pair_ones_;  // row-major upper triangle, (i-1)*n + (j-1)
};

/// Draw `count` rows of n bits by inverse-transform sampling.
inline SampleRun draw_bits(const DistributionModel& model, int n, std::uint64_t count,
                           std::uint64_t seed, std::uint64_t stream = 0) {
    if (count < 1) throw std::domain_error("draw_bits: count must be at least 1");
    if (n < 1 || n > kMaxBits) throw std::domain_error("draw_bits: n must be in [1, 52]");
    SampleRun run;
    run.model = model;
    run.n = n;
    run.count = count;
    run.seed = seed;
    run.stream = stream;
    run.rows.reserve(count);
    for (std::uint64_t index = 0; index < count; ++index) {
        const double u = rng::uniform01(seed, stream, index);
        run.rows.push_back(detail::pack_bits(bits_from_uniform(model, u, n)));
    }
    return run;
}

inline BitStatistics empirical_statistics(const SampleRun& run) {
    if (run.count < 2) throw std::domain_error("empirical_statistics: need at least 2 draws");
    BitAccumulator acc(run.n);
    for (std::uint64_t r = 0; r < run.count; ++r) acc.add_row(run.rows[r]);
    return acc.finalize(run.seed);
}

/// Empirical statistics without materializing the bit matrix; memory stays
/// flat regardless of count.
inline BitStatistics sample_statistics(const DistributionModel& model, int n, std::uint64_t count,
                                       std::uint64_t seed, std::uint64_t stream = 0) {
    if (count < 2) throw std::domain_error("sample_statistics: need at least 2 draws");
    if (n < 1 || n > kMaxBits) throw std::domain_error("sample_statistics: n must be in [1, 52]");
    BitAccumulator acc(n);
    for (std::uint64_t index = 0; index < count; ++index) {
        const double u = rng::uniform01(seed, stream, index);
        acc.add_row(detail::pack_bits(bits_from_uniform(model, u, n)));
    }
    return acc.finalize(seed);
}

/// Raw-bit export: one line per draw, '0'/'1' characters, no separators.
inline void write_raw_bits(const SampleRun& run, std::ostream& os) {
    for (std::uint64_t r = 0; r < run.count; ++r) {
        for (int i = 1; i <= run.n; ++i) os.put(static_cast<char>('0' + run.bit(r, i)));
        os.put('\n');
    }
}

}  // namespace binexp
