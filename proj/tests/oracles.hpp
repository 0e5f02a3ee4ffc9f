#pragma once

// Independent oracles used only by the test suite. These deliberately avoid
// the library solver paths they are checking.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hml/bessel.hpp"

namespace oracles {

// Inward RK4 shooting for the model ODE u'' = -u'/r + 8 t^2 r sinh(2u) at
// t = 1, starting from Bessel tail data at r_start scaled by beta. The
// one-parameter family u_beta approaches u ~ -sigma(beta) log r near zero with
// sigma increasing in beta; the connecting solution has sigma = 1/2 (solutions
// with larger tails develop a pole at finite radius instead). Bisection runs
// on the inner log-slope sigma_eff = -r u'(r_end) against its subleading-
// corrected target; u(1) is read off along the separatrix trajectory.
struct ShootResult {
    double slope_excess;  // sigma_eff - corrected target; +inf if a pole was hit
    double u_at_one;      // value recorded when passing r = 1 (NaN if not reached)
};

inline ShootResult shoot_inward(double beta, double r_start, double r_end, int steps_per_unit) {
    const double theta = (8.0 / 3.0) * std::pow(r_start, 1.5);
    double u = beta * hml::specfn::k0(theta) / M_PI;
    double v = beta * (-hml::specfn::k1(theta)) * 4.0 * std::sqrt(r_start) / M_PI;  // du/dr
    double r = r_start;
    const double dr = 1.0 / steps_per_unit;
    ShootResult res{0.0, std::nan("")};

    auto rhs = [](double rr, double uu, double vv, double& du, double& dv) {
        du = vv;
        dv = -vv / rr + 8.0 * rr * std::sinh(2.0 * uu);
    };

    while (r > r_end + 0.5 * dr) {
        const double h = -dr;
        double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
        rhs(r, u, v, k1u, k1v);
        rhs(r + 0.5 * h, u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v);
        rhs(r + 0.5 * h, u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v);
        rhs(r + h, u + h * k3u, v + h * k3v, k4u, k4v);
        u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        r += h;
        if (std::abs(r - 1.0) < 0.25 * dr) res.u_at_one = u;
        if (u > -0.5 * std::log(r) + 5.0) {  // pole side
            res.slope_excess = std::numeric_limits<double>::infinity();
            return res;
        }
    }
    // sigma_eff = -r u'; the connecting solution satisfies
    // -r u' = 1/2 - 2 e^{2 c0} r^2 + ... with c0 = u + log(r)/2
    const double c0 = u + 0.5 * std::log(r);
    const double target = 0.5 - 2.0 * std::exp(2.0 * c0) * r * r;
    res.slope_excess = (-r * v) - target;
    return res;
}

inline double shooting_u1_at_one() {
    const double r_start = 4.0, r_end = 1e-3;
    const int steps = 32768;  // dr divides r_start - 1 so r = 1 is hit exactly
    double lo = 0.5, hi = 2.0;
    if (!(shoot_inward(lo, r_start, r_end, steps).slope_excess < 0.0))
        throw std::runtime_error("shooting oracle: lower bracket slope not below 1/2");
    if (!(shoot_inward(hi, r_start, r_end, steps).slope_excess > 0.0))
        throw std::runtime_error("shooting oracle: upper bracket slope not above 1/2");
    double u1 = std::nan("");
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const ShootResult r = shoot_inward(mid, r_start, r_end, steps);
        if (!std::isnan(r.u_at_one)) u1 = r.u_at_one;
        if (r.slope_excess > 0.0)
            hi = mid;
        else
            lo = mid;
        if (hi - lo < 1e-16 * hi) break;
    }
    return u1;
}

inline double shooting_separatrix_beta() {
    const double r_start = 4.0, r_end = 1e-3;
    const int steps = 16384;
    double lo = 0.5, hi = 2.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (shoot_inward(mid, r_start, r_end, steps).slope_excess > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace oracles
