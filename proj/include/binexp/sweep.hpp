#pragma once

// Experiment runner: parameter sweeps over distribution families with
// side-by-side theoretical and estimated pairwise correlations, and the
// two-bit probability curve of the sliding trapezoid. Emits CSV.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "binexp/distribution.hpp"
#include "binexp/exact.hpp"
#include "binexp/sampler.hpp"

namespace binexp {

/// Invalid flags, grids, or config values. CLI exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;
inline constexpr double kEquicorrelationThreshold = 0.05;

enum class SweepFamily { BetaSymmetric, TrapezoidSymmetric, TrapezoidC, Custom };

inline SweepFamily sweep_family_from_name(const std::string& name) {
    if (name == "beta-symmetric") return SweepFamily::BetaSymmetric;
    if (name == "trapezoid-symmetric") return SweepFamily::TrapezoidSymmetric;
    if (name == "trapezoid-C" || name == "trapezoid-c") return SweepFamily::TrapezoidC;
    if (name == "custom") return SweepFamily::Custom;
    throw UsageError("unknown sweep family '" + name + "'");
}

inline std::string sweep_family_name(SweepFamily f) {
    switch (f) {
        case SweepFamily::BetaSymmetric: return "beta-symmetric";
        case SweepFamily::TrapezoidSymmetric: return "trapezoid-symmetric";
        case SweepFamily::TrapezoidC: return "trapezoid-C";
        case SweepFamily::Custom: return "custom";
    }
    return "?";
}

/// Grid spec: either a comma list "0.1,0.25,2" or "start:stop:count".
inline std::vector<double> parse_grid(const std::string& spec) {
    if (spec.empty()) throw UsageError("empty grid spec");
    std::vector<double> values;
    if (spec.find(':') != std::string::npos) {
        double start = 0, stop = 0;
        long count = 0;
        char extra = 0;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%ld%c", &start, &stop, &count, &extra) != 3)
            throw UsageError("bad grid spec '" + spec + "' (want start:stop:count)");
        if (count < 1) throw UsageError("grid count must be at least 1");
        if (count == 1) return {start};
        for (long k = 0; k < count; ++k)
            values.push_back(start + (stop - start) * (static_cast<double>(k) /
                                                       static_cast<double>(count - 1)));
        return values;
    }
    std::string item;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const std::size_t comma = spec.find(',', pos);
        item = spec.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("bad grid value '" + item + "'");
        }
        if (used != item.size()) throw UsageError("bad grid value '" + item + "'");
        values.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (values.empty()) throw UsageError("empty grid spec");
    return values;
}

/// The alpha grid reported for the beta sweep: {0.1, 0.25, 0.75, 1} then
/// the integers 2..20.
inline std::vector<double> default_beta_grid() {
    std::vector<double> grid = {0.1, 0.25, 0.75, 1.0};
    for (int a = 2; a <= 20; ++a) grid.push_back(static_cast<double>(a));
    return grid;
}

/// Ten equally spaced plateau half-widths from 0 to 0.5.
inline std::vector<double> default_trapezoid_delta_grid() {
    std::vector<double> grid;
    for (int k = 0; k < 10; ++k) grid.push_back(0.5 * static_cast<double>(k) / 9.0);
    return grid;
}

inline std::vector<double> default_trapezoid_c_grid() {
    std::vector<double> grid;
    for (int k = 0; k <= 30; ++k) grid.push_back(0.75 * static_cast<double>(k) / 30.0);
    return grid;
}

struct SweepConfig {
    SweepFamily family = SweepFamily::BetaSymmetric;
    std::string custom_template;  // dist fragment with a {param} placeholder
    std::vector<double> grid;     // empty selects the family default
    int bits = 3;
    std::uint64_t samples = 100000;
    std::uint64_t seed = kDefaultSeed;
    std::string out;         // combined CSV path ("" or "-" writes to stdout)
    std::string theory_out;  // optional seed-independent theory CSV
};

struct SweepPoint {
    double param = 0.0;
    std::vector<double> rho_theory;  // pairs (1,2), (1,3), ..., (n-1,n)
    std::vector<double> rho_emp;
    std::vector<double> marginals;  // theoretical p_1..p_n
};

struct SweepResult {
    int bits = 3;
    std::vector<std::pair<int, int>> pairs;
    std::vector<SweepPoint> points;
};

/// Spread max - min over a point's theoretical pairwise correlations.
inline double correlation_spread(const SweepPoint& point) {
    double lo = point.rho_theory.front(), hi = lo;
    for (double r : point.rho_theory) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return hi - lo;
}

namespace detail {

inline std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string substitute_param(const std::string& tmpl, double param) {
    const std::string placeholder = "{param}";
    const auto at = tmpl.find(placeholder);
    if (at == std::string::npos)
        throw UsageError("custom sweep template must contain {param}");
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", param);
    std::string out = tmpl;
    out.replace(at, placeholder.size(), buf);
    return out;
}

}  // namespace detail

/// Model factory for one sweep family, with its parameter-domain checks.
inline std::function<DistributionModel(double)> sweep_model_factory(const SweepConfig& config) {
    switch (config.family) {
        case SweepFamily::BetaSymmetric:
            return [](double a) {
                if (!(a > 0.0)) throw UsageError("beta-symmetric: alpha must be positive");
                return DistributionModel::beta(a, a);
            };
        case SweepFamily::TrapezoidSymmetric:
            return [](double delta) {
                if (!(delta >= 0.0 && delta <= 0.5))
                    throw UsageError("trapezoid-symmetric: delta must be in [0, 0.5]");
                return DistributionModel::trapezoidal_symmetric(delta);
            };
        case SweepFamily::TrapezoidC:
            return [](double c) {
                if (!(c >= 0.0 && c <= 0.75))
                    throw UsageError("trapezoid-C: C must be in [0, 0.75]");
                return DistributionModel::trapezoidal(c, c + 0.25);
            };
        case SweepFamily::Custom:
            return [tmpl = config.custom_template](double p) {
                try {
                    return parse_model(detail::substitute_param(tmpl, p));
                } catch (const std::invalid_argument& e) {
                    throw UsageError(e.what());
                }
            };
    }
    throw UsageError("unknown sweep family");
}

inline std::vector<double> sweep_default_grid(SweepFamily family) {
    switch (family) {
        case SweepFamily::BetaSymmetric: return default_beta_grid();
        case SweepFamily::TrapezoidSymmetric: return default_trapezoid_delta_grid();
        case SweepFamily::TrapezoidC: return default_trapezoid_c_grid();
        case SweepFamily::Custom: break;
    }
    throw UsageError("custom sweep needs an explicit grid");
}

/// Run the sweep: per grid point, exact statistics and a seeded empirical
/// run on the point's own substream (stream = point index). Theory columns
/// are independent of the seed by construction.
inline SweepResult run_sweep(const SweepConfig& config) {
    if (config.bits < 2 || config.bits > kMaxBits)
        throw UsageError("sweep: bits must be in [2, 52]");
    if (config.samples < 2) throw UsageError("sweep: samples must be at least 2");
    const std::vector<double> grid =
        config.grid.empty() ? sweep_default_grid(config.family) : config.grid;
    if (grid.empty()) throw UsageError("sweep: empty parameter grid");
    const auto factory = sweep_model_factory(config);

    SweepResult result;
    result.bits = config.bits;
    for (int i = 1; i <= config.bits; ++i)
        for (int j = i + 1; j <= config.bits; ++j) result.pairs.emplace_back(i, j);

    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double param = grid[k];
        try {
            const DistributionModel model = factory(param);
            const BitStatistics exact = statistics(model, config.bits);
            const BitStatistics emp =
                sample_statistics(model, config.bits, config.samples, config.seed, k);
            SweepPoint point;
            point.param = param;
            for (auto [i, j] : result.pairs) {
                point.rho_theory.push_back(exact.correlation(i, j));
                point.rho_emp.push_back(emp.correlation(i, j));
            }
            point.marginals = exact.marginals;
            result.points.push_back(std::move(point));
        } catch (const NumericalError& e) {
            throw NumericalError("sweep point param=" + detail::format_g9(param) + ": " +
                                 e.what());
        }
    }
    return result;
}

/// Combined CSV, one row per grid point:
/// param,rho12_theory,...,rho12_emp,...,p1..pn (9 significant digits).
inline void write_sweep_csv(const SweepResult& result, std::ostream& os) {
    os << "param";
    for (auto [i, j] : result.pairs) os << ",rho" << i << j << "_theory";
    for (auto [i, j] : result.pairs) os << ",rho" << i << j << "_emp";
    for (int i = 1; i <= result.bits; ++i) os << ",p" << i;
    os << "\n";
    for (const SweepPoint& pt : result.points) {
        os << detail::format_g9(pt.param);
        for (double r : pt.rho_theory) os << ',' << detail::format_g9(r);
        for (double r : pt.rho_emp) os << ',' << detail::format_g9(r);
        for (double p : pt.marginals) os << ',' << detail::format_g9(p);
        os << "\n";
    }
}

/// Theory-only CSV (param, theoretical correlations, marginals); identical
/// across reruns regardless of seed, suitable as a golden file.
inline void write_theory_csv(const SweepResult& result, std::ostream& os) {
    os << "param";
    for (auto [i, j] : result.pairs) os << ",rho" << i << j << "_theory";
    for (int i = 1; i <= result.bits; ++i) os << ",p" << i;
    os << "\n";
    for (const SweepPoint& pt : result.points) {
        os << detail::format_g9(pt.param);
        for (double r : pt.rho_theory) os << ',' << detail::format_g9(r);
        for (double p : pt.marginals) os << ',' << detail::format_g9(p);
        os << "\n";
    }
}

struct Example1Point {
    double c = 0.0;
    double p1 = 0.0;  // Pr[B1 = 1]
    double p2 = 0.0;  // Pr[B2 = 1]
};

/// First- and second-bit probabilities of the sliding trapezoid with fixed
/// plateau width D - C = 1/4, over a grid of C values.
inline std::vector<Example1Point> run_example1(const std::vector<double>& c_grid) {
    if (c_grid.empty()) throw UsageError("example1: empty grid");
    std::vector<Example1Point> points;
    points.reserve(c_grid.size());
    for (double c : c_grid) {
        if (!(c >= 0.0 && c <= 0.75))
            throw UsageError("example1: C must be in [0, 0.75]");
        const DistributionModel model = DistributionModel::trapezoidal(c, c + 0.25);
        points.push_back({c, bit_marginal(model, 1), bit_marginal(model, 2)});
    }
    return points;
}

inline void write_example1_csv(const std::vector<Example1Point>& points, std::ostream& os) {
    os << "c,p1,p2\n";
    for (const Example1Point& pt : points)
        os << detail::format_g9(pt.c) << ',' << detail::format_g9(pt.p1) << ','
           << detail::format_g9(pt.p2) << "\n";
}

/// C value in [0, 0.75] where Pr[B_i = 1] of the sliding trapezoid crosses
/// 1/2, by bisection on the exact marginal. Bracket width below 1e-12.
inline double find_marginal_crossing(int bit_index) {
    auto deviation = [bit_index](double c) {
        return bit_marginal(DistributionModel::trapezoidal(c, c + 0.25), bit_index) - 0.5;
    };
    double lo = 0.0, hi = 0.75;
    double f_lo = deviation(lo);
    if (f_lo == 0.0) return lo;
    const double f_hi = deviation(hi);
    if (f_hi == 0.0) return hi;
    if ((f_lo < 0.0) == (f_hi < 0.0))
        throw NumericalError("find_marginal_crossing: no sign change over [0, 0.75]");
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = deviation(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace binexp
