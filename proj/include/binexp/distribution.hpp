#pragma once

// Catalogue of continuous distributions on [0,1]: uniform, beta,
// trapezoidal, piecewise-constant, and user-supplied densities. Each model
// exposes pdf, cdf, inverse cdf, and a symmetry predicate.
//
// Uniform, trapezoidal, and piecewise-constant use closed forms. Beta and
// custom densities are quadrature-backed: the cdf is an adaptive-Simpson
// integral of the pdf with a cached prefix table. Beta integrates in the
// substituted variable x = s^p (integer p, see substitution_power), which
// removes the endpoint singularity for alpha < 1 and the fractional-power
// corner for non-integer alpha; the upper half mirrors via
// I(x; a, b) = 1 - I(1 - x; b, a).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "binexp/quadrature.hpp"

namespace binexp {

namespace detail {

// Prefix table of F(s) = integral of g over [0, s] on a fixed grid, with
// local refinement between grid points. g must be smooth within each panel.
struct CdfTable {
    std::function<double(double)> g;
    std::vector<double> grid;  // ascending, grid.front() == 0
    std::vector<double> cdf;   // cdf[k] = integral of g over [0, grid[k]]

    void build() {
        cdf.assign(grid.size(), 0.0);
        for (std::size_t k = 0; k + 1 < grid.size(); ++k)
            cdf[k + 1] = cdf[k] + integrate(g, grid[k], grid[k + 1], {1e-16, 40});
    }

    double total() const { return cdf.back(); }

    double eval(double s) const {
        if (s <= grid.front()) return 0.0;
        if (s >= grid.back()) return total();
        auto it = std::upper_bound(grid.begin(), grid.end(), s);
        std::size_t k = static_cast<std::size_t>(it - grid.begin()) - 1;
        return cdf[k] + integrate(g, grid[k], s, {1e-14, 40});
    }

    // Smallest s with eval(s) = u, by bracketed Newton on the panel
    // containing u. Stops at |residual| <= 1e-13 or bracket width 1e-15.
    double invert(double u) const {
        if (u <= 0.0) return grid.front();
        if (u >= total()) return grid.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t k = static_cast<std::size_t>(it - cdf.begin()) - 1;
        if (k + 1 >= grid.size()) return grid.back();
        double lo = grid[k], hi = grid[k + 1];
        const double base = cdf[k];
        const double span = cdf[k + 1] - base;
        double s = span > 0.0 ? lo + (hi - lo) * ((u - base) / span) : 0.5 * (lo + hi);
        s = std::clamp(s, lo, hi);
        for (int iter = 0; iter < 100; ++iter) {
            const double resid = base + integrate(g, grid[k], s, {1e-14, 40}) - u;
            if (std::abs(resid) <= 1e-13) break;
            if (resid < 0.0)
                lo = s;
            else
                hi = s;
            if (hi - lo <= 1e-15) break;
            const double slope = g(s);
            double next = slope > 0.0 ? s - resid / slope : std::numeric_limits<double>::quiet_NaN();
            s = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
        }
        return s;
    }
};

inline std::vector<double> uniform_grid(double lo, double hi, std::size_t panels) {
    std::vector<double> grid(panels + 1);
    for (std::size_t k = 0; k <= panels; ++k)
        grid[k] = lo + (hi - lo) * (static_cast<double>(k) / static_cast<double>(panels));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

}  // namespace detail

class DistributionModel {
public:
    enum class Kind { Uniform, Beta, Trapezoidal, PiecewiseConstant, CustomPdf };

    static DistributionModel uniform() { return DistributionModel(Kind::Uniform); }

    static DistributionModel beta(double alpha, double beta) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("beta: alpha and beta must be positive");
        DistributionModel m(Kind::Beta);
        m.alpha_ = alpha;
        m.beta_ = beta;
        m.log_beta_norm_ = std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
        m.lower_ = m.make_beta_half_table(alpha, beta);
        m.upper_ = m.make_beta_half_table(beta, alpha);
        // The halves must cover the whole distribution; extreme shapes whose
        // density underflows the table resolution fail here instead of
        // returning silently wrong probabilities.
        const double mass = m.lower_.total() + m.upper_.total();
        if (std::abs(mass - 1.0) > 1e-9)
            throw NumericalError("beta: quadrature lost mass for alpha=" +
                                 std::to_string(alpha) + ", beta=" + std::to_string(beta));
        return m;
    }

    static DistributionModel trapezoidal(double c, double d) {
        if (!(c >= 0.0 && c <= d && d <= 1.0))
            throw std::invalid_argument("trapezoidal: need 0 <= C <= D <= 1");
        DistributionModel m(Kind::Trapezoidal);
        m.c_ = c;
        m.d_ = d;
        m.h_ = 2.0 / (1.0 + d - c);
        return m;
    }

    /// Symmetric family from the plateau half-width: C = 1/2 - delta, D = 1/2 + delta.
    static DistributionModel trapezoidal_symmetric(double delta) {
        if (!(delta >= 0.0 && delta <= 0.5))
            throw std::invalid_argument("trapezoidal_symmetric: delta must be in [0, 0.5]");
        return trapezoidal(0.5 - delta, 0.5 + delta);
    }

    static DistributionModel piecewise_constant(std::vector<double> breakpoints,
                                                std::vector<double> densities) {
        if (breakpoints.size() < 2 || densities.size() + 1 != breakpoints.size())
            throw std::invalid_argument(
                "piecewise_constant: need K+1 breakpoints for K densities, K >= 1");
        if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
            throw std::invalid_argument("piecewise_constant: breakpoints must run from 0 to 1");
        for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k)
            if (!(breakpoints[k] < breakpoints[k + 1]))
                throw std::invalid_argument("piecewise_constant: breakpoints must be strictly increasing");
        double total = 0.0;
        for (std::size_t k = 0; k < densities.size(); ++k) {
            if (!(densities[k] >= 0.0))
                throw std::invalid_argument("piecewise_constant: densities must be nonnegative");
            total += densities[k] * (breakpoints[k + 1] - breakpoints[k]);
        }
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("piecewise_constant: densities must integrate to 1");
        DistributionModel m(Kind::PiecewiseConstant);
        m.breaks_ = std::move(breakpoints);
        m.densities_ = std::move(densities);
        for (auto& d : m.densities_) d /= total;  // absorb rounding in the supplied mass
        m.cum_.assign(m.breaks_.size(), 0.0);
        for (std::size_t k = 0; k < m.densities_.size(); ++k)
            m.cum_[k + 1] = m.cum_[k] + m.densities_[k] * (m.breaks_[k + 1] - m.breaks_[k]);
        m.cum_.back() = 1.0;
        return m;
    }

    /// User-supplied density, already normalized to unit mass. split_hints
    /// lists interior points where the density is not smooth, so quadrature
    /// panels never straddle them.
    static DistributionModel custom_pdf(std::function<double(double)> density,
                                        std::vector<double> split_hints = {}) {
        if (!density) throw std::invalid_argument("custom_pdf: density must be callable");
        DistributionModel m(Kind::CustomPdf);
        m.custom_pdf_ = std::move(density);
        std::vector<double> grid = detail::uniform_grid(0.0, 1.0, 2048);
        for (double h : split_hints)
            if (h > 0.0 && h < 1.0) grid.push_back(h);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
        m.full_.g = m.custom_pdf_;
        m.full_.grid = std::move(grid);
        m.full_.build();
        if (std::abs(m.full_.total() - 1.0) > 1e-6)
            throw std::invalid_argument("custom_pdf: density must integrate to 1 over [0,1]");
        return m;
    }

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double beta_param() const { return beta_; }
    double c() const { return c_; }
    double d() const { return d_; }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<double>& densities() const { return densities_; }

    double pdf(double x) const {
        check_domain(x, "pdf");
        switch (kind_) {
            case Kind::Uniform:
                return 1.0;
            case Kind::Beta:
                return beta_pdf(x);
            case Kind::Trapezoidal:
                return trapezoid_pdf(x);
            case Kind::PiecewiseConstant:
                return densities_[segment_index(x)];
            case Kind::CustomPdf:
                return custom_pdf_(x);
        }
        return 0.0;
    }

    double cdf(double x) const {
        check_domain(x, "cdf");
        switch (kind_) {
            case Kind::Uniform:
                return x;
            case Kind::Beta: {
                if (x == 0.0) return 0.0;
                if (x == 1.0) return 1.0;
                if (x <= 0.5) return std::clamp(beta_half_cdf(lower_, alpha_, x), 0.0, 1.0);
                return std::clamp(1.0 - beta_half_cdf(upper_, beta_, 1.0 - x), 0.0, 1.0);
            }
            case Kind::Trapezoidal:
                return trapezoid_cdf(x);
            case Kind::PiecewiseConstant: {
                if (x == 1.0) return 1.0;
                const std::size_t k = segment_index(x);
                return cum_[k] + densities_[k] * (x - breaks_[k]);
            }
            case Kind::CustomPdf: {
                if (x == 1.0) return 1.0;
                return std::clamp(full_.eval(x), 0.0, 1.0);
            }
        }
        return 0.0;
    }

    double inverse_cdf(double u) const {
        if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("inverse_cdf: u must be in [0, 1]");
        switch (kind_) {
            case Kind::Uniform:
                return u;
            case Kind::Beta: {
                const double f_half = lower_.total();
                if (u <= f_half) {
                    const double s = lower_.invert(u);
                    return std::clamp(from_substituted(s, alpha_), 0.0, 0.5);
                }
                const double s = upper_.invert(1.0 - u);
                return std::clamp(1.0 - from_substituted(s, beta_), 0.5, 1.0);
            }
            case Kind::Trapezoidal:
                return trapezoid_inverse(u);
            case Kind::PiecewiseConstant:
                return piecewise_inverse(u);
            case Kind::CustomPdf:
                return full_.invert(u);
        }
        return 0.0;
    }

    /// True when the distribution is symmetric about 1/2.  Parametric kinds
    /// are decided structurally (beta: alpha = beta; trapezoid: C + D = 1,
    /// both to a few ulps); piecewise-constant and custom densities are
    /// checked through the mirror identity F(1/2 - e) = 1 - F(1/2 + e) on a
    /// 1025-point grid of exact dyadic offsets against the supplied
    /// tolerance.  The cdf, not the density, is compared so that the answer
    /// does not depend on which side of a jump a breakpoint value lands on.
    bool is_symmetric(double tolerance = 1e-9) const {
        switch (kind_) {
            case Kind::Uniform:
                return true;
            case Kind::Beta:
                return std::abs(alpha_ - beta_) <= 1e-12 * std::max({1.0, alpha_, beta_});
            case Kind::Trapezoidal:
                return std::abs(c_ + d_ - 1.0) <= 1e-12;
            case Kind::PiecewiseConstant:
            case Kind::CustomPdf: {
                for (int k = 0; k <= 1024; ++k) {
                    const double eps = static_cast<double>(k) / 2048.0;
                    if (std::abs(cdf(0.5 - eps) - (1.0 - cdf(0.5 + eps))) > tolerance)
                        return false;
                }
                return true;
            }
        }
        return false;
    }

    std::string describe() const {
        std::ostringstream os;
        switch (kind_) {
            case Kind::Uniform:
                os << "uniform";
                break;
            case Kind::Beta:
                os << "beta(alpha=" << alpha_ << ", beta=" << beta_ << ")";
                break;
            case Kind::Trapezoidal:
                os << "trapezoidal(c=" << c_ << ", d=" << d_ << ")";
                break;
            case Kind::PiecewiseConstant:
                os << "piecewise-constant(" << densities_.size() << " segments)";
                break;
            case Kind::CustomPdf:
                os << "custom pdf";
                break;
        }
        return os.str();
    }

private:
    explicit DistributionModel(Kind kind) : kind_(kind) {}

    static void check_domain(double x, const char* op) {
        if (!(x >= 0.0 && x <= 1.0))
            throw std::domain_error(std::string(op) + ": x must be in [0, 1]");
    }

    // ---- beta ----

    // Evaluation point for the capped endpoint convention: a density with
    // alpha < 1 diverges at 0 (beta < 1 at 1); direct pdf calls inside
    // [0, eps0] report pdf(eps0) instead of an infinity. The quadrature
    // path never evaluates here because it works in the substituted variable.
    static constexpr double kEndpointCap = 1e-12;

    double beta_pdf(double x) const {
        double xe = x;
        if (alpha_ < 1.0 && xe < kEndpointCap) xe = kEndpointCap;
        if (beta_ < 1.0 && xe > 1.0 - kEndpointCap) xe = 1.0 - kEndpointCap;
        const double t1 = alpha_ == 1.0 ? 0.0 : (alpha_ - 1.0) * std::log(xe);
        const double t2 = beta_ == 1.0 ? 0.0 : (beta_ - 1.0) * std::log1p(-xe);
        return std::exp(t1 + t2 - log_beta_norm_);
    }

    // Change of variable x = s^p for the half-table integrals. An integer p
    // with p*a - 1 >= 5 makes the substituted integrand C^4 at s = 0 (plain
    // x^(a-1) has a corner there for fractional a, which stalls the adaptive
    // rule at tight tolerances), while s^p stays analytic for the
    // (1-x)^(b-1) factor.
    static double substitution_power(double a) {
        if (a >= 6.0) return 1.0;
        return std::ceil(6.0 / a);
    }

    detail::CdfTable make_beta_half_table(double a, double b) const {
        const double p = substitution_power(a);
        const double q = p * a - 1.0;  // >= 5 by construction
        const double log_norm = log_beta_norm_;
        detail::CdfTable table;
        table.g = [p, q, b, log_norm](double s) {
            if (s <= 0.0) return 0.0;
            const double t1 = q * std::log(s);
            const double sp = std::pow(s, p);
            const double t2 = b == 1.0 ? 0.0 : (b - 1.0) * std::log1p(-sp);
            return p * std::exp(t1 + t2 - log_norm);
        };
        table.grid = detail::uniform_grid(0.0, std::pow(0.5, 1.0 / p), 2048);
        table.build();
        return table;
    }

    double beta_half_cdf(const detail::CdfTable& table, double a, double x) const {
        const double p = substitution_power(a);
        const double s = p == 1.0 ? x : std::pow(x, 1.0 / p);
        return table.eval(std::min(s, table.grid.back()));
    }

    static double from_substituted(double s, double a) {
        const double p = substitution_power(a);
        return p == 1.0 ? s : std::pow(s, p);
    }

    // ---- trapezoid ----

    double trapezoid_pdf(double x) const {
        if (x < c_) return h_ * x / c_;
        if (x <= d_) return h_;
        return h_ * (1.0 - x) / (1.0 - d_);
    }

    double trapezoid_cdf(double x) const {
        if (x < c_) return 0.5 * h_ * x * x / c_;
        if (x <= d_) return 0.5 * h_ * c_ + h_ * (x - c_);
        const double tail = 1.0 - x;
        return 1.0 - 0.5 * h_ * tail * tail / (1.0 - d_);
    }

    double trapezoid_inverse(double u) const {
        const double f_c = 0.5 * h_ * c_;
        const double f_d = f_c + h_ * (d_ - c_);
        if (u <= f_c) return std::sqrt(2.0 * u * c_ / h_);
        if (u <= f_d) return c_ + (u - f_c) / h_;
        return 1.0 - std::sqrt(2.0 * (1.0 - u) * (1.0 - d_) / h_);
    }

    // ---- piecewise-constant ----

    // Segment holding x under the half-open convention [b_{k-1}, b_k),
    // with x = 1 assigned to the last segment.
    std::size_t segment_index(double x) const {
        if (x >= breaks_.back()) return densities_.size() - 1;
        auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
        return static_cast<std::size_t>(it - breaks_.begin()) - 1;
    }

    double piecewise_inverse(double u) const {
        // Leftmost x with cdf(x) = u; zero-density plateaus resolve to
        // their left edge so the inverse stays monotone.
        auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
        if (it == cum_.begin()) return 0.0;
        std::size_t k = static_cast<std::size_t>(it - cum_.begin()) - 1;
        if (cum_[k] == u) {
            while (k > 0 && cum_[k - 1] == u) --k;
            return breaks_[k];
        }
        const double dk = densities_[k];
        if (dk == 0.0) return breaks_[k];
        return std::clamp(breaks_[k] + (u - cum_[k]) / dk, breaks_[k], breaks_[k + 1]);
    }

    Kind kind_;
    double alpha_ = 0.0, beta_ = 0.0, log_beta_norm_ = 0.0;
    double c_ = 0.0, d_ = 0.0, h_ = 0.0;
    std::vector<double> breaks_, densities_, cum_;
    std::function<double(double)> custom_pdf_;
    detail::CdfTable lower_, upper_, full_;
};

inline double pdf(const DistributionModel& m, double x) { return m.pdf(x); }
inline double cdf(const DistributionModel& m, double x) { return m.cdf(x); }
inline double inverse_cdf(const DistributionModel& m, double u) { return m.inverse_cdf(u); }
inline bool is_symmetric(const DistributionModel& m, double tolerance = 1e-9) {
    return m.is_symmetric(tolerance);
}

namespace detail {

inline std::vector<double> parse_double_list(const std::string& text, const std::string& key) {
    std::vector<double> values;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        std::size_t pos = 0;
        double v;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_model: bad number '" + item + "' in " + key);
        }
        if (pos != item.size())
            throw std::invalid_argument("parse_model: bad number '" + item + "' in " + key);
        values.push_back(v);
    }
    if (values.empty()) throw std::invalid_argument("parse_model: empty list for " + key);
    return values;
}

inline double parse_double(const std::string& text, const std::string& key) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("parse_model: bad number '" + text + "' for " + key);
    }
    if (pos != text.size())
        throw std::invalid_argument("parse_model: bad number '" + text + "' for " + key);
    return v;
}

}  // namespace detail

/// Build a model from a plain-text fragment of whitespace-separated
/// key=value pairs, e.g. "kind=beta alpha=2 beta=2" or
/// "kind=piecewise-constant breakpoints=0,0.5,1 densities=0.5,1.5".
/// Recognized keys: kind, alpha, beta, c, d, delta, breakpoints, densities.
inline DistributionModel parse_model(const std::string& fragment) {
    std::string kind;
    bool has_alpha = false, has_beta = false, has_c = false, has_d = false, has_delta = false;
    double alpha = 0, beta = 0, c = 0, d = 0, delta = 0;
    std::vector<double> breakpoints, densities;

    std::istringstream is(fragment);
    std::string token;
    while (is >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("parse_model: expected key=value, got '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "kind") {
            kind = value;
        } else if (key == "alpha") {
            alpha = detail::parse_double(value, key);
            has_alpha = true;
        } else if (key == "beta") {
            beta = detail::parse_double(value, key);
            has_beta = true;
        } else if (key == "c") {
            c = detail::parse_double(value, key);
            has_c = true;
        } else if (key == "d") {
            d = detail::parse_double(value, key);
            has_d = true;
        } else if (key == "delta") {
            delta = detail::parse_double(value, key);
            has_delta = true;
        } else if (key == "breakpoints") {
            breakpoints = detail::parse_double_list(value, key);
        } else if (key == "densities") {
            densities = detail::parse_double_list(value, key);
        } else {
            throw std::invalid_argument("parse_model: unknown key '" + key + "'");
        }
    }

    if (kind.empty()) throw std::invalid_argument("parse_model: missing kind");
    if (kind == "uniform") return DistributionModel::uniform();
    if (kind == "beta") {
        if (!has_alpha || !has_beta)
            throw std::invalid_argument("parse_model: beta needs alpha and beta");
        return DistributionModel::beta(alpha, beta);
    }
    if (kind == "trapezoidal") {
        if (has_delta) {
            if (has_c || has_d)
                throw std::invalid_argument("parse_model: give either delta or c and d, not both");
            return DistributionModel::trapezoidal_symmetric(delta);
        }
        if (!has_c || !has_d)
            throw std::invalid_argument("parse_model: trapezoidal needs c and d (or delta)");
        return DistributionModel::trapezoidal(c, d);
    }
    if (kind == "piecewise-constant") {
        if (breakpoints.empty() || densities.empty())
            throw std::invalid_argument("parse_model: piecewise-constant needs breakpoints and densities");
        return DistributionModel::piecewise_constant(std::move(breakpoints), std::move(densities));
    }
    throw std::invalid_argument("parse_model: unknown kind '" + kind + "'");
}

}  // namespace binexp
