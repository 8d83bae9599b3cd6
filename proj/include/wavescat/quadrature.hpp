#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "wavescat/errors.hpp"

namespace wavescat {

struct QuadratureOptions {
    double rtol = 1e-10;
    double atol = 1e-14;
    int max_depth = 60;
};

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb,
                            double m, double fm, double whole, double eps,
                            int depth, const QuadratureOptions& opt, bool& converged) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h = b - a;
    const double left = h / 12.0 * (fa + 4.0 * flm + fm);
    const double right = h / 12.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps || depth >= opt.max_depth) {
        if (depth >= opt.max_depth && std::abs(delta) > 15.0 * eps) converged = false;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth + 1, opt, converged) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth + 1, opt, converged);
}

}  // namespace detail

/// Adaptive Simpson quadrature on [a, b] with dyadic subdivision.
/// Throws QuadratureError if the tolerance could not be met.
template <class F>
double integrate(const F& f, double a, double b, const QuadratureOptions& opt = {}) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double eps0 = std::max(opt.atol, opt.rtol * std::abs(whole));
    bool converged = true;
    double result =
        detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, eps0, 0, opt, converged);
    // One refinement pass when the first scale estimate was far off.
    const double eps1 = std::max(opt.atol, opt.rtol * std::abs(result));
    if (eps1 < 0.25 * eps0) {
        converged = true;
        result = detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, eps1, 0, opt, converged);
    }
    if (!converged)
        throw QuadratureError("adaptive quadrature did not converge on [" + std::to_string(a) +
                                  ", " + std::to_string(b) + "]",
                              opt.rtol);
    return result;
}

/// Improper integral over [a, inf): doubling panels until the increment is
/// below tolerance. Throws QuadratureError when no convergence is detected.
template <class F>
double integrate_to_infinity(const F& f, double a, const QuadratureOptions& opt = {},
                             double panel0 = 1.0, int max_doublings = 80) {
    double total = 0.0;
    double left = a;
    double width = panel0;
    double prev_inc = std::numeric_limits<double>::infinity();
    for (int k = 0; k < max_doublings; ++k) {
        const double right = left + width;
        const double inc = integrate(f, left, right, opt);
        total += inc;
        const double tol = std::max(opt.atol, opt.rtol * std::abs(total));
        if (std::abs(inc) < tol && std::abs(prev_inc) < tol) return total;
        prev_inc = inc;
        left = right;
        width *= 2.0;
    }
    throw QuadratureError("improper integral from " + std::to_string(a) +
                              " shows no convergence under doubling horizons",
                          opt.rtol);
}

/// Prefix integrals I[i] = int_{x0}^{x_i} f on a uniform grid. Even indices
/// are chained with Simpson panels (4th order accumulated); odd indices hop
/// from the even anchor with a local cubic rule, so its error stays local.
/// T must support zero-init from `f[0] - f[0]`, +, and scalar multiplication.
template <class T>
std::vector<T> cumulative_integral(const std::vector<T>& f, double h) {
    const std::size_t n = f.size();
    std::vector<T> out(n, f.empty() ? T() : T(f[0] - f[0]));
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    for (std::size_t i = 0; i + 2 < n; i += 2)
        out[i + 2] = out[i] + (h / 3.0) * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    for (std::size_t i = 1; i < n; i += 2) {
        if (i + 1 < n)
            out[i] = out[i - 1] + (h / 12.0) * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
        else
            out[i] = out[i - 1] +
                     (h / 12.0) * (-1.0 * f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
    }
    return out;
}

}  // namespace wavescat
