#pragma once

#include <cmath>
#include <functional>

#include "slfv/errors.hpp"

namespace slfv {

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (!std::isfinite(delta))
        throw input_error("integrate: integrand produced a non-finite value");
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature of f over [a,b] with absolute tolerance tol.
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-10, int max_depth = 28) {
    if (!(b >= a)) throw input_error("integrate: require b >= a");
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Panel-summed adaptive quadrature for oscillatory integrands: fixed-width
/// panels stop the subdivision heuristic from aliasing across whole periods.
template <typename F>
double integrate_panels(const F& f, double a, double b, double panel, double tol_per_panel) {
    double total = 0.0;
    double lo = a;
    while (lo < b) {
        const double hi = std::min(b, lo + panel);
        total += integrate(f, lo, hi, tol_per_panel);
        lo = hi;
    }
    return total;
}

/// Trapezoid rule over sampled series (t_i, y_i).
inline double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw input_error("trapezoid: size mismatch");
    double s = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
    return s;
}

} // namespace slfv
