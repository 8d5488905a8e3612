#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace psidec {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trapezoid rule for ∫_a^b f(r) dr on a log-spaced grid (substitution r=e^u).
/// Requires 0 < a < b.
inline double log_trapezoid(const std::function<double(double)>& f, double a,
                            double b, int points) {
    const double ua = std::log(a), ub = std::log(b);
    const double du = (ub - ua) / (points - 1);
    double sum = 0.0;
    for (int i = 0; i < points; ++i) {
        const double r = std::exp(ua + i * du);
        const double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
        sum += w * f(r) * r;
    }
    return sum * du;
}

/// Log-grid trapezoid with doubling refinement until two successive levels
/// agree to rel_tol.  Throws QuadratureError when the cap is hit.
inline double adaptive_log_quadrature(const std::function<double(double)>& f,
                                      double a, double b, double rel_tol,
                                      int initial_points = 257,
                                      int max_points = (1 << 21)) {
    double prev = log_trapezoid(f, a, b, initial_points);
    for (int m = 2 * initial_points - 1; m <= max_points; m = 2 * m - 1) {
        const double cur = log_trapezoid(f, a, b, m);
        const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
        if (std::abs(cur - prev) <= rel_tol * scale) return cur;
        prev = cur;
    }
    throw QuadratureError("quadrature did not converge on [" +
                          std::to_string(a) + ", " + std::to_string(b) +
                          "], last=" + std::to_string(prev));
}

/// ∫_a^∞ f: grow the upper limit geometrically until the last chunk is
/// negligible, integrating each chunk adaptively.
inline double adaptive_tail_quadrature(const std::function<double(double)>& f,
                                       double a, double rel_tol,
                                       double first_span = 4.0,
                                       int max_chunks = 64) {
    double lo = a, hi = a * first_span;
    double total = 0.0;
    for (int c = 0; c < max_chunks; ++c) {
        const double chunk = adaptive_log_quadrature(f, lo, hi, rel_tol);
        total += chunk;
        if (c > 0 && std::abs(chunk) <= 0.5 * rel_tol * std::abs(total))
            return total;
        lo = hi;
        hi *= 4.0;
    }
    throw QuadratureError("tail quadrature did not converge from " +
                          std::to_string(a));
}

/// Maximum of a concave function on [lo, hi] by golden-section search.
inline double golden_section_max(const std::function<double(double)>& f,
                                 double lo, double hi, double tol) {
    const double gr = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

/// Solve g(x) = target for nondecreasing g, bracketing by geometric growth
/// from an initial guess, then bisecting in log-space to rel_tol.
/// Domain is (0, ∞); returns 0 when target <= g(0+).
inline double invert_increasing(const std::function<double(double)>& g,
                                double target, double rel_tol = 1e-13,
                                double guess = 1.0) {
    if (!(target > 0.0)) return 0.0;
    double hi = guess;
    int k = 0;
    while (g(hi) <= target) {
        hi *= 4.0;
        if (++k > 600) throw std::runtime_error("invert_increasing: no upper bracket");
    }
    double lo = hi;
    k = 0;
    while (g(lo) > target) {
        lo /= 4.0;
        if (++k > 600) return 0.0;  // target below g(0+)
    }
    double la = std::log(lo), lb = std::log(hi);
    while (lb - la > rel_tol) {
        const double mid = 0.5 * (la + lb);
        (g(std::exp(mid)) > target ? lb : la) = mid;
    }
    return std::exp(0.5 * (la + lb));
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

}  // namespace psidec
