#pragma once

// Modified Bessel functions K0 and K1 on (0, inf).
//
// K0 solves x^2 y'' + x y' - x^2 y = 0 and is the solution with
// lim_{x->inf} K0(x) = 0; integral form K0(x) = int_0^inf cos(x t)/sqrt(t^2+1) dt.
//
// Two branches, crossing over at x = 8:
//   x <= 8 : ascending series around 0. The log term cancels against the sum
//            to ~1e3 of the result size near the crossover, so the series is
//            accumulated in long double.
//   x >  8 : large-argument branch sqrt(pi/2x) e^{-x} (1 - 1/8x + ...),
//            evaluated through its convergent Laplace representation
//              K0(x) = e^{-x} (2x)^{-1/2} * 2 int_0^inf e^{-v^2} (1+v^2/2x)^{-1/2} dv
//            (substituting u = v^2 in DLMF 10.32.8; Watson's lemma applied to
//            this integral generates the asymptotic series, so this is the
//            same branch without the divergent-truncation floor).
// The quadrature oracle k0_quadrature integrates e^{-x cosh s} ds, which is
// the cos(xt)/sqrt(t^2+1) integral after t = sinh(s) and a contour rotation
// that trades the oscillation for e-folding decay.

#include <cmath>
#include <stdexcept>

#include "hml/quadrature.hpp"

namespace hml::specfn {

inline constexpr double k0_crossover = 8.0;
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

namespace detail {

// K0 = -(log(x/2)+gamma) I0 + sum_{k>=1} (x^2/4)^k / (k!)^2 H_k, fused so the
// cancellation runs in extended precision.
inline long double k0_series_ld(long double x) {
    const long double q = x * x / 4.0L;
    const long double lg = std::log(x / 2.0L) + (long double)euler_gamma;
    long double term = 1.0L;  // q^k / (k!)^2
    long double hk = 0.0L;
    long double i0 = 1.0L;
    long double sum = 0.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / (long double)(k) / (long double)(k);
        hk += 1.0L / k;
        i0 += term;
        sum += term * hk;
        if (term * (hk + 1.0L) < 1e-25L * (std::fabs(sum) + 1.0L)) break;
    }
    return -lg * i0 + sum;
}

// K1 = 1/x + (x/2) [ (log(x/2)+gamma) I1hat - sum_k q^k/(k!(k+1)!)(H_k+H_{k+1})/2 ]
// with I1hat = sum_k q^k/(k!(k+1)!)  (DLMF 10.31.2 at n = 1).
inline long double k1_series_ld(long double x) {
    const long double q = x * x / 4.0L;
    const long double lg = std::log(x / 2.0L) + (long double)euler_gamma;
    long double term = 1.0L;  // q^k / (k! (k+1)!)
    long double i1h = 1.0L;
    long double sum = 0.5L;  // k = 0: (H_0 + H_1)/2 = 1/2
    long double hk = 0.0L, hk1 = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / (long double)(k) / (long double)(k + 1);
        hk += 1.0L / k;
        hk1 += 1.0L / (k + 1);
        i1h += term;
        sum += term * 0.5L * (hk + hk1);
        if (term * (hk1 + 1.0L) < 1e-25L * (std::fabs(sum) + 1.0L)) break;
    }
    return 1.0L / x + (x / 2.0L) * (lg * i1h - sum);
}

// 2 int_0^inf e^{-v^2} (1 + v^2/(2x))^{p/2} dv for p = -1 (K0) and p = +1 (K1).
inline double laplace_factor(double x, int p) {
    const double inv2x = 1.0 / (2.0 * x);
    auto f = [&](double v) {
        const double w = 1.0 + v * v * inv2x;
        const double g = (p < 0) ? 1.0 / std::sqrt(w) : std::sqrt(w);
        return std::exp(-v * v) * g * (p > 0 ? v * v : 1.0);
    };
    return 2.0 * adaptive_simpson(f, 0.0, 7.0, 1e-16);
}

}  // namespace detail

inline double k0(double x) {
    if (!(x > 0.0)) throw std::domain_error("k0: argument must be positive");
    if (x <= k0_crossover) return static_cast<double>(detail::k0_series_ld(x));
    return std::exp(-x) / std::sqrt(2.0 * x) * detail::laplace_factor(x, -1);
}

inline double k1(double x) {
    if (!(x > 0.0)) throw std::domain_error("k1: argument must be positive");
    if (x <= k0_crossover) return static_cast<double>(detail::k1_series_ld(x));
    // K1(x) = e^{-x} sqrt(2/x) * 2 int e^{-v^2} v^2 (1+v^2/2x)^{1/2} dv
    return std::exp(-x) * std::sqrt(2.0 / x) * detail::laplace_factor(x, +1);
}

// dK0/dx = -K1.
inline double k0_prime(double x) { return -k1(x); }

// Oracle: K0(x) = int_0^inf e^{-x cosh s} ds, adaptive Simpson to ~1e-13 rel.
inline double k0_quadrature(double x) {
    if (!(x > 0.0)) throw std::domain_error("k0_quadrature: argument must be positive");
    const double smax = std::acosh(std::max(2.0, 760.0 / x));
    const double scale = std::exp(-x);
    return adaptive_simpson([x](double s) { return std::exp(-x * std::cosh(s)); }, 0.0, smax,
                            1e-14 * scale * std::max(1.0, smax));
}

enum class K0Method { series, asymptotic, quadrature };

struct BesselEval {
    double x;
    double value;
    K0Method method;
};

inline BesselEval k0_eval(double x, bool use_quadrature = false) {
    if (use_quadrature) return {x, k0_quadrature(x), K0Method::quadrature};
    return {x, k0(x), x <= k0_crossover ? K0Method::series : K0Method::asymptotic};
}

// |x^2 y'' + x y' - x^2 y| with y = k0 and central differences of step h.
// Self-test hook; O(h^2) accurate.
inline double k0_ode_residual(double x, double h) {
    if (!(x > 2.0 * h) || !(h > 0.0)) throw std::domain_error("k0_ode_residual: need x > 2h > 0");
    const double ym = k0(x - h), y0 = k0(x), yp = k0(x + h);
    const double d1 = (yp - ym) / (2.0 * h);
    const double d2 = (yp - 2.0 * y0 + ym) / (h * h);
    return std::abs(x * x * d2 + x * d1 - x * x * y0);
}

}  // namespace hml::specfn
