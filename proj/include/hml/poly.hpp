#pragma once

// Univariate polynomials with complex coefficients (index = power). Shared by
// the holomorphic deformation data, the spectral-curve module, and the SU(n)
// normal-form algebra. Root finding is Durand-Kerner iteration followed by a
// Newton polish of each root.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

namespace hml {

using cplx = std::complex<double>;

class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<cplx> coeffs) : c_(coeffs) { trim(); }
    explicit Poly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Poly constant(cplx a) { return Poly({a}); }
    static Poly identity() { return Poly({cplx(0.0), cplx(1.0)}); }  // z

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
    bool is_zero() const { return c_.empty(); }
    cplx coeff(int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : cplx(0.0); }
    const std::vector<cplx>& coeffs() const { return c_; }

    cplx operator()(cplx z) const {
        cplx acc(0.0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * z + c_[i];
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<cplx> d(c_.size() - 1);
        for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = double(k) * c_[k];
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<cplx> s(std::max(a.c_.size(), b.c_.size()), cplx(0.0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) s[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) s[i] += b.c_[i];
        return Poly(std::move(s));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-1.0) * b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<cplx> p(a.c_.size() + b.c_.size() - 1, cplx(0.0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) p[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(p));
    }
    friend Poly operator*(cplx s, const Poly& a) {
        std::vector<cplx> p(a.c_.size());
        for (std::size_t i = 0; i < a.c_.size(); ++i) p[i] = s * a.c_[i];
        return Poly(std::move(p));
    }
    friend Poly operator*(const Poly& a, cplx s) { return s * a; }
    Poly operator-() const { return cplx(-1.0) * *this; }

    double max_abs_coeff() const {
        double m = 0.0;
        for (auto& a : c_) m = std::max(m, std::abs(a));
        return m;
    }

private:
    void trim() {
        while (!c_.empty() && std::abs(c_.back()) == 0.0) c_.pop_back();
    }
    std::vector<cplx> c_;
};

// All roots of p, with multiplicity. Durand-Kerner on the monic normalization,
// then Newton polish; backward error |p(r)| / (scale) <= ~1e-12 for the modest
// degrees used here.
inline std::vector<cplx> roots(const Poly& p) {
    const int n = p.degree();
    if (n < 1) return {};
    std::vector<cplx> a(n + 1);
    for (int k = 0; k <= n; ++k) a[k] = p.coeff(k) / p.coeff(n);

    auto eval_monic = [&](cplx z) {
        cplx acc(0.0);
        for (int k = n; k >= 0; --k) acc = acc * z + a[k];
        return acc;
    };

    // Initial guesses on a circle of the Cauchy-bound radius.
    double radius = 0.0;
    for (int k = 0; k < n; ++k) radius = std::max(radius, std::pow(std::abs(a[k]), 1.0 / (n - k)));
    radius = 2.0 * radius + 0.5;
    std::vector<cplx> r(n);
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * M_PI * i / n + 0.4;  // irrational-ish offset breaks symmetry
        r[i] = radius * cplx(std::cos(th), std::sin(th));
    }

    for (int it = 0; it < 500; ++it) {
        double shift = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx denom(1.0);
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= (r[i] - r[j]);
            cplx d = eval_monic(r[i]) / denom;
            r[i] -= d;
            shift = std::max(shift, std::abs(d));
        }
        if (shift < 1e-14 * (1.0 + radius)) break;
    }

    // Newton polish against the original polynomial.
    const Poly dp = p.derivative();
    for (auto& z : r) {
        for (int it = 0; it < 30; ++it) {
            cplx f = p(z), df = dp(z);
            if (std::abs(df) == 0.0) break;
            cplx d = f / df;
            z -= d;
            if (std::abs(d) < 1e-15 * (1.0 + std::abs(z))) break;
        }
    }
    std::sort(r.begin(), r.end(), [](cplx x, cplx y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return r;
}

// Expand prod_i (x - lambda_i).
inline Poly poly_from_roots(const std::vector<cplx>& lambda) {
    Poly p = Poly::constant(1.0);
    for (cplx l : lambda) p = p * Poly({-l, cplx(1.0)});
    return p;
}

}  // namespace hml
