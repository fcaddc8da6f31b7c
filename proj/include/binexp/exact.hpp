#pragma once

// Quadrature-backed theoretical bit statistics: marginals, pairwise joint
// probabilities, covariance, and correlation matrices for any model and
// precision n. Joint probabilities intersect the two dyadic interval sets
// explicitly, so the cost is O(2^max(i,j)) intervals rather than 2^n cells.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "binexp/distribution.hpp"
#include "binexp/dyadic.hpp"

namespace binexp {

struct StatisticsSource {
    enum class Kind { Exact, Empirical };
    Kind kind = Kind::Exact;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;

    static StatisticsSource exact() { return {}; }
    static StatisticsSource empirical(std::uint64_t count, std::uint64_t seed) {
        return {Kind::Empirical, count, seed};
    }
};

/// Symmetric n x n table with 1-based indexing.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0.0) {}

    int size() const { return n_; }

    double operator()(int i, int j) const { return data_[index(i, j)]; }

    void set(int i, int j, double v) {
        data_[index(i, j)] = v;
        data_[index(j, i)] = v;
    }

private:
    std::size_t index(int i, int j) const {
        if (i < 1 || i > n_ || j < 1 || j > n_)
            throw std::domain_error("SymmetricMatrix: index out of range");
        return static_cast<std::size_t>(i - 1) * n_ + static_cast<std::size_t>(j - 1);
    }

    int n_ = 0;
    std::vector<double> data_;
};

/// Bit marginals p_i, pairwise joints Pr[B_i=1, B_j=1] (diagonal p_i),
/// covariance, and correlation. Correlation entries whose variance
/// vanishes (p_i in {0,1}) are undefined and reported as NaN.
struct BitStatistics {
    int n = 0;
    std::vector<double> marginals;  // marginals[i-1] = Pr[B_i = 1]
    SymmetricMatrix joint;
    SymmetricMatrix covariance;
    SymmetricMatrix correlation;
    StatisticsSource source;

    double marginal(int i) const {
        if (i < 1 || i > n) throw std::domain_error("BitStatistics: bit index out of range");
        return marginals[static_cast<std::size_t>(i - 1)];
    }

    bool correlation_defined(int i, int j) const { return !std::isnan(correlation(i, j)); }
};

namespace detail {

inline void check_bit_index(int i, const char* op) {
    if (i < 1 || i > kMaxBits)
        throw std::domain_error(std::string(op) + ": bit index must be in [1, 52]");
}

inline double interval_mass(const DistributionModel& model, const Interval& iv) {
    return model.cdf(iv.hi) - model.cdf(iv.lo);
}

/// Populate covariance/correlation from marginals and the joint table.
inline void derive_moments(BitStatistics& stats) {
    const int n = stats.n;
    stats.covariance = SymmetricMatrix(n);
    stats.correlation = SymmetricMatrix(n);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 1; i <= n; ++i) {
        const double pi = stats.marginal(i);
        stats.covariance.set(i, i, pi * (1.0 - pi));
        stats.correlation.set(i, i, pi * (1.0 - pi) > 0.0 ? 1.0 : nan);
        for (int j = i + 1; j <= n; ++j) {
            const double pj = stats.marginal(j);
            const double cov = stats.joint(i, j) - pi * pj;
            stats.covariance.set(i, j, cov);
            const double var = pi * (1.0 - pi) * pj * (1.0 - pj);
            stats.correlation.set(i, j, var > 0.0 ? cov / std::sqrt(var) : nan);
        }
    }
}

}  // namespace detail

/// Pr[B_i = 1]: the model's measure of the value-1 dyadic set at level i,
/// as a sum of cdf differences over its 2^{i-1} intervals.
inline double bit_marginal(const DistributionModel& model, int i) {
    detail::check_bit_index(i, "bit_marginal");
    double p = 0.0;
    for (const Interval& iv : bit_intervals(i, 1)) p += detail::interval_mass(model, iv);
    return std::clamp(p, 0.0, 1.0);
}

/// Pr[B_i = bi, B_j = bj] by explicit intersection of the two dyadic
/// interval sets (two-pointer walk over the sorted interval lists).
inline double joint_probability(const DistributionModel& model, int i, int j, int bi, int bj) {
    detail::check_bit_index(i, "joint_probability");
    detail::check_bit_index(j, "joint_probability");
    if (i == j) throw std::domain_error("joint_probability: bit indices must differ");
    if ((bi != 0 && bi != 1) || (bj != 0 && bj != 1))
        throw std::domain_error("joint_probability: bit values must be 0 or 1");

    const DyadicIntervalSet a = bit_intervals(i, bi);
    const DyadicIntervalSet b = bit_intervals(j, bj);
    std::uint64_t ka = 0, kb = 0;
    const std::uint64_t na = a.count(), nb = b.count();
    double p = 0.0;
    while (ka < na && kb < nb) {
        const Interval ia = a.interval(ka);
        const Interval ib = b.interval(kb);
        const double lo = std::max(ia.lo, ib.lo);
        const double hi = std::min(ia.hi, ib.hi);
        if (lo < hi) p += model.cdf(hi) - model.cdf(lo);
        if (ia.hi <= ib.hi)
            ++ka;
        else
            ++kb;
    }
    return std::clamp(p, 0.0, 1.0);
}

/// Fully populated exact statistics for the first n bits.
inline BitStatistics statistics(const DistributionModel& model, int n) {
    if (n < 1 || n > kMaxBits) throw std::domain_error("statistics: n must be in [1, 52]");
    BitStatistics stats;
    stats.n = n;
    stats.source = StatisticsSource::exact();
    stats.marginals.resize(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i)
        stats.marginals[static_cast<std::size_t>(i - 1)] = bit_marginal(model, i);
    stats.joint = SymmetricMatrix(n);
    for (int i = 1; i <= n; ++i) {
        stats.joint.set(i, i, stats.marginal(i));
        for (int j = i + 1; j <= n; ++j)
            stats.joint.set(i, j, joint_probability(model, i, j, 1, 1));
    }
    detail::derive_moments(stats);
    return stats;
}

struct IndependenceDeviation {
    int i = 0;
    int j = 0;
    double deviation = 0.0;
};

/// Pairs whose joint distribution fails to factorize within the tolerance,
/// with the max deviation over the four (b_i, b_j) cells. An empty result
/// means pairwise independence within tolerance.
inline std::vector<IndependenceDeviation> independence_check(const BitStatistics& stats,
                                                             double tolerance) {
    if (stats.source.kind != StatisticsSource::Kind::Exact)
        throw std::domain_error("independence_check: requires exact-source statistics");
    std::vector<IndependenceDeviation> out;
    for (int i = 1; i <= stats.n; ++i) {
        for (int j = i + 1; j <= stats.n; ++j) {
            const double pi = stats.marginal(i);
            const double pj = stats.marginal(j);
            const double j11 = stats.joint(i, j);
            const double j10 = pi - j11;
            const double j01 = pj - j11;
            const double j00 = 1.0 - pi - pj + j11;
            double dev = std::abs(j11 - pi * pj);
            dev = std::max(dev, std::abs(j10 - pi * (1.0 - pj)));
            dev = std::max(dev, std::abs(j01 - (1.0 - pi) * pj));
            dev = std::max(dev, std::abs(j00 - (1.0 - pi) * (1.0 - pj)));
            if (dev > tolerance) out.push_back({i, j, dev});
        }
    }
    return out;
}

}  // namespace binexp
