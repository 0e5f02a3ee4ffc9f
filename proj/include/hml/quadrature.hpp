#pragma once

// Gauss-Legendre rules (nodes by Newton iteration on the Legendre recurrence)
// and an adaptive Simpson integrator for smooth 1-D integrands.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hml {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

// Nodes/weights of the n-point Gauss-Legendre rule. Newton converges in a
// handful of steps from the Chebyshev-angle initial guess.
inline const GaussRule& gauss_legendre(int n) {
    thread_local std::vector<GaussRule> cache;
    if (n <= 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    if (static_cast<int>(cache.size()) <= n) cache.resize(n + 1);
    GaussRule& rule = cache[n];
    if (!rule.x.empty()) return rule;

    rule.x.resize(n);
    rule.w.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        rule.w[i] = rule.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return rule;
}

template <typename Fn>
double gauss_integrate(Fn&& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.w[i] * f(mid + rad * rule.x[i]);
    return sum * rad;
}

namespace detail {

template <typename Fn>
double adaptive_simpson_rec(Fn& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// tol is an absolute tolerance on the result.
template <typename Fn>
double adaptive_simpson(Fn&& f, double a, double b, double tol, int max_depth = 60) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace hml
