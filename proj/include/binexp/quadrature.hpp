#pragma once

// Adaptive Simpson quadrature for the density integrals. Integrands must
// be finite on the closed interval; endpoint singularities are removed by
// substitution before they reach here (see distribution.hpp).

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace binexp {

/// Quadrature could not reach the requested tolerance within the depth cap.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string format_interval(double a, double b) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "[%.6g, %.6g]", a, b);
    return buf;
}

}  // namespace detail

struct QuadratureOptions {
    double abs_tol = 1e-9;
    int max_depth = 40;
};

namespace detail {

template <class F>
double adaptive_simpson_step(F& f, double a, double b, double fa, double fm, double fb,
                             double whole, double tol, int depth, int max_depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth)
        throw NumericalError("adaptive Simpson: depth cap reached on " +
                             detail::format_interval(a, b));
    return adaptive_simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
           adaptive_simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

/// Integral of f over [a, b] to the given absolute tolerance.
template <class F>
double integrate(F&& f, double a, double b, QuadratureOptions opt = {}) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw NumericalError("adaptive Simpson: integrand not finite at an endpoint of " +
                             detail::format_interval(a, b));
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_step(f, a, b, fa, fm, fb, whole, opt.abs_tol, 0,
                                         opt.max_depth);
}

}  // namespace binexp
