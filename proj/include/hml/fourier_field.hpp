#pragma once

// Complex field on the disk stored as angular modes times radial samples on a
// shared grid: F(z) = sum_m F_m(|z|) e^{i m theta}. Only modes excited by the
// forcing are populated. Radial evaluation between nodes is local cubic
// Lagrange interpolation (the grids are uniform, cell-centered).

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace hml::varsolve {

using cplx = std::complex<double>;

struct FourierRadialField {
    std::vector<double> grid;  // radii, strictly increasing, in (0, R]
    struct Mode {
        int m;
        std::vector<cplx> samples;
        cplx boundary_value{0.0};  // imposed Dirichlet value of F_m at r = R
    };
    std::vector<Mode> modes;

    // Assembled field on the outer rim from the imposed data.
    cplx eval_boundary(double theta) const {
        cplx acc(0.0);
        for (const auto& mode : modes) acc += mode.boundary_value * std::polar(1.0, mode.m * theta);
        return acc;
    }

    cplx eval_mode(const Mode& mode, double r) const {
        const std::size_t n = grid.size();
        if (n < 4) throw std::logic_error("FourierRadialField: grid too small to interpolate");
        if (r <= grid.front()) {
            // inside the first cell: F ~ r^{|m|} regularity scaling
            const double s = std::pow(r / grid.front(), std::abs(mode.m));
            return mode.samples.front() * s;
        }
        if (r >= grid.back()) return mode.samples.back();
        auto it = std::upper_bound(grid.begin(), grid.end(), r);
        std::size_t i = static_cast<std::size_t>(it - grid.begin());
        // 4-point stencil around interval [i-1, i]
        std::size_t i0 = (i >= 2) ? i - 2 : 0;
        if (i0 + 3 >= n) i0 = n - 4;
        cplx acc(0.0);
        for (std::size_t a = 0; a < 4; ++a) {
            double w = 1.0;
            for (std::size_t b = 0; b < 4; ++b)
                if (b != a) w *= (r - grid[i0 + b]) / (grid[i0 + a] - grid[i0 + b]);
            acc += w * mode.samples[i0 + a];
        }
        return acc;
    }

    cplx eval(cplx z) const {
        const double r = std::abs(z);
        const double th = std::arg(z);
        cplx acc(0.0);
        for (const auto& mode : modes)
            acc += eval_mode(mode, r) * std::polar(1.0, mode.m * th);
        return acc;
    }

    // Pointwise difference of fields sharing grid and mode set.
    friend FourierRadialField operator-(const FourierRadialField& a, const FourierRadialField& b) {
        if (a.grid != b.grid || a.modes.size() != b.modes.size())
            throw std::invalid_argument("FourierRadialField: mismatched fields");
        FourierRadialField out = a;
        for (std::size_t k = 0; k < out.modes.size(); ++k) {
            if (out.modes[k].m != b.modes[k].m)
                throw std::invalid_argument("FourierRadialField: mismatched modes");
            for (std::size_t i = 0; i < out.modes[k].samples.size(); ++i)
                out.modes[k].samples[i] -= b.modes[k].samples[i];
        }
        return out;
    }

    // sup over the sample nodes in [r_lo, r_hi] x uniform angles.
    double sup_annulus(double r_lo, double r_hi, int n_theta = 256) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i] < r_lo || grid[i] > r_hi) continue;
            for (int k = 0; k < n_theta; ++k) {
                const double th = 2.0 * M_PI * k / n_theta;
                cplx acc(0.0);
                for (const auto& mode : modes)
                    acc += mode.samples[i] * std::polar(1.0, mode.m * th);
                worst = std::max(worst, std::abs(acc));
            }
        }
        return worst;
    }
};

}  // namespace hml::varsolve
