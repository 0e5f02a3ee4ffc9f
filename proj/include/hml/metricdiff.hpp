#pragma once

// Disk integrals of the metric-difference density
//
//   delta((0, t phi_dot), (h1, nu1), (h2, nu2))
//       = 2<phi_dot_t + [nu1, phi_t], phi_dot_t>_{h1} - 2<...>_{h2},
//
// for the diagonal pairs of the local model, plus the Stokes cross-check
// against the boundary form, the g_app - g_sf scan over a t-ray with
// exponential rate fitting, and the semiflat disk consistency identity.
//
// Densities follow the area convention fixed in deform_identities.hpp. For the
// diagonal data nu = -(1/2) F sigma3 the pairing collapses to the closed form
//   2 t^2 Re[ conj(Pdot) (Pdot - F z) ] e^{-2w} / |z|,
// which is the fast path; delta_integrand_matrix recomputes it through the
// generic matrix trace as an oracle. Metric differences are always integrated
// as a single pointwise-differenced density, never as a difference of two
// separately computed integrals.

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "hml/deform_identities.hpp"
#include "hml/io.hpp"
#include "hml/local_model.hpp"
#include "hml/parallel.hpp"
#include "hml/quadrature.hpp"
#include "hml/varsolve.hpp"

namespace hml::metricdiff {

using cplx = std::complex<double>;
using hml::localmodel::LocalModel;
using hml::localmodel::Metric;
using hml::varsolve::FourierRadialField;
using HolomorphicPoly = hml::Poly;

// ---------------------------------------------------------------------------
// disk quadrature: Gauss-Legendre panels in radius x periodic trapezoid in
// angle. Panel breakpoints let callers split at the cutoff radii where the
// integrand loses smoothness.

struct DiskGrid {
    int n_r = 200;     // Gauss-Legendre nodes per radial panel
    int n_theta = 64;  // uniform angular nodes
    std::vector<double> breakpoints;  // interior radii splitting the panels

    DiskGrid half() const {
        DiskGrid g = *this;
        g.n_r = std::max(8, n_r / 2);
        g.n_theta = std::max(8, n_theta / 2);
        return g;
    }
};

template <typename Fn>
auto integrate_disk(Fn&& f, double R, const DiskGrid& grid) -> decltype(f(cplx())) {
    using Ret = decltype(f(cplx()));
    std::vector<double> edges{0.0};
    for (double b : grid.breakpoints)
        if (b > 0.0 && b < R) edges.push_back(b);
    edges.push_back(R);

    const auto& rule = gauss_legendre(grid.n_r);
    Ret total{};
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double rad = 0.5 * (edges[p + 1] - edges[p]);
        for (int i = 0; i < grid.n_r; ++i) {
            const double r = mid + rad * rule.x[i];
            Ret ring{};
            for (int k = 0; k < grid.n_theta; ++k) {
                const double th = 2.0 * M_PI * k / grid.n_theta;
                ring += f(std::polar(r, th));
            }
            total += ring * (2.0 * M_PI / grid.n_theta) * (rule.w[i] * rad * r);
        }
    }
    return total;
}

struct CheckedIntegral {
    double value;
    double drift;  // |value - half-grid value| relative to the integrand's L1 mass
};

// Drift is measured against the L1 mass of the integrand: metric-difference
// integrands carry O(t^2) bulk that cancels to exponentially small values, so
// a drift relative to the cancelled value would be meaningless at large t.
template <typename Fn>
CheckedIntegral integrate_disk_checked(Fn&& f, double R, const DiskGrid& grid) {
    const double v = integrate_disk(f, R, grid);
    const double vh = integrate_disk(f, R, grid.half());
    const double mass = integrate_disk([&](cplx z) { return std::abs(f(z)); }, R, grid.half());
    return {v, std::abs(v - vh) / std::max({mass, std::abs(v), 1e-300})};
}

// ---------------------------------------------------------------------------
// diagonal metric/variation pairs. The factories capture the LocalModel by
// reference; the model must outlive the pair.

struct DiagonalPair {
    std::function<double(double)> weight;  // w(r): h = diag(|z|^{-1/2}e^{-w}, |z|^{1/2}e^{w})
    std::function<cplx(cplx)> F;           // nu = -(1/2) F(z) sigma3
    hml::defalg::HermitianField h;         // the same metric, for the matrix oracle
};

inline DiagonalPair limit_pair(const HolomorphicPoly& p_dot) {
    DiagonalPair p;
    p.weight = [](double) { return 0.0; };
    p.F = [p_dot](cplx z) { return p_dot(z) / (2.0 * z); };
    p.h = hml::defalg::HermitianField::h_infinity();
    return p;
}

inline DiagonalPair model_pair(const LocalModel& model, const HolomorphicPoly& p_dot) {
    DiagonalPair p;
    p.weight = [m = &model](double r) { return m->u(r); };
    p.F = [m = &model, p_dot](cplx z) { return hml::localmodel::f_x(*m, p_dot, z); };
    p.h = model.metric(Metric::model);
    return p;
}

inline DiagonalPair app_pair(const LocalModel& model,
                             std::shared_ptr<const FourierRadialField> f_app) {
    DiagonalPair p;
    p.weight = [m = &model](double r) { return m->weight(Metric::app, r); };
    p.F = [f = std::move(f_app)](cplx z) { return f->eval(z); };
    p.h = model.metric(Metric::app);
    return p;
}

// <t phi_dot + [nu, t phi], t phi_dot>_h density for diagonal data, real part.
inline double pair_density(const HolomorphicPoly& p_dot, double t, const DiagonalPair& pair,
                           cplx z) {
    const double r = std::abs(z);
    if (r == 0.0) throw std::domain_error("pair_density: z = 0");
    const cplx pd = p_dot(z);
    const cplx b12 = pd - pair.F(z) * z;
    const double w = pair.weight(r);
    return 2.0 * t * t * (b12 * std::conj(pd)).real() * std::exp(-2.0 * w) / r;
}

// delta((0, t phi_dot), pair1, pair2) as a density against dx dy.
inline double delta_integrand(const HolomorphicPoly& p_dot, double t, const DiagonalPair& pair1,
                              const DiagonalPair& pair2, cplx z) {
    return pair_density(p_dot, t, pair1, z) - pair_density(p_dot, t, pair2, z);
}

// The app-vs-model channel regrouped so the smallness is pointwise:
//   delta(app, model) = 2 t^2 Re{ conj(Pdot) [ (Pdot - F_app z) e^{-2u} expm1(2u(1-X))
//                                              + e^{-2u} z (F_model - F_app) ] } / r.
// F_model - F_app is interpolated from differenced samples (the two solves
// share the grid and operator structure, so their discretization errors cancel
// in the difference); the weight difference goes through expm1. Without this
// regrouping the O(t^2) bulk of the two pair densities must cancel through the
// quadrature, which caps the resolvable channel at the interpolation-noise
// floor of F_app.
inline double annulus_channel_density(const HolomorphicPoly& p_dot, const LocalModel& model,
                                      const FourierRadialField& f_app,
                                      const FourierRadialField& f_diff_model_minus_app, cplx z) {
    const double r = std::abs(z);
    if (r == 0.0) throw std::domain_error("annulus_channel_density: z = 0");
    const double t = model.t();
    const double u = model.u(r);
    const double one_minus_cut = 1.0 - model.cutoff()(r);
    const cplx pd = p_dot(z);
    const cplx term = (pd - f_app.eval(z) * z) * std::expm1(2.0 * u * one_minus_cut) +
                      z * f_diff_model_minus_app.eval(z);
    return 2.0 * t * t * (std::conj(pd) * term).real() * std::exp(-2.0 * u) / r;
}

// Same quantity through the generic matrix machinery (adjoint_h + traces).
inline double delta_integrand_matrix(const HolomorphicPoly& p_dot, double t,
                                     const DiagonalPair& pair1, const DiagonalPair& pair2,
                                     cplx z) {
    using namespace hml::defalg;
    Mat phi(2, 2), phid(2, 2);
    phi << 0.0, z, 1.0, 0.0;
    phid << 0.0, p_dot(z), 0.0, 0.0;
    auto one = [&](const DiagonalPair& pair) {
        Mat nu = Mat::Zero(2, 2);
        const cplx f = pair.F(z);
        nu(0, 0) = -0.5 * f;
        nu(1, 1) = 0.5 * f;
        const Mat b = phid + (nu * phi - phi * nu);
        return 2.0 * t * t * (b * adjoint_h(phid, pair.h, z)).trace().real();
    };
    return one(pair1) - one(pair2);
}

// ---------------------------------------------------------------------------
// Stokes cross-check: the model-vs-limit difference integrand is exact,
//   int_D delta = oint_{|z|=R} beta_t.

struct StokesReport {
    double lhs;      // disk integral of delta(model, limit)
    double rhs;      // boundary integral of beta_t
    double rel_err;  // |lhs-rhs| / max(|lhs|,|rhs|,1e-300)
    double quad_drift;
};

inline StokesReport stokes_check(const LocalModel& model, const HolomorphicPoly& p_dot,
                                 DiskGrid grid = {}) {
    const double R = model.disk_radius();
    if (grid.breakpoints.empty()) grid.breakpoints = {model.cutoff().r1};
    const DiagonalPair pm = model_pair(model, p_dot);
    const DiagonalPair pi = limit_pair(p_dot);
    auto f = [&](cplx z) { return delta_integrand(p_dot, model.t(), pm, pi, z); };
    const CheckedIntegral lhs = integrate_disk_checked(f, R, grid);
    const double rhs = hml::localmodel::beta_boundary_integral(model, p_dot, R,
                                                               std::max(512, grid.n_theta));
    StokesReport rep;
    rep.lhs = lhs.value;
    rep.rhs = rhs;
    rep.rel_err = std::abs(lhs.value - rhs) / std::max({std::abs(lhs.value), std::abs(rhs), 1e-300});
    rep.quad_drift = lhs.drift;
    return rep;
}

// ---------------------------------------------------------------------------
// semiflat disk consistency: the metric value through the deformation pairing
// equals the special-Kahler form 2 int_{double cover} |Pdot/(2 sqrt z)|^2.

struct SfReport {
    double lhs;
    double rhs;
    double rel_err;
};

inline SfReport sf_disk_consistency(const HolomorphicPoly& p_dot, double R = 1.0,
                                    DiskGrid grid = {}) {
    const DiagonalPair pi = limit_pair(p_dot);
    auto lhs_f = [&](cplx z) { return pair_density(p_dot, 1.0, pi, z); };
    const double lhs = integrate_disk(lhs_f, R, grid);
    // |tau_dot|^2 = |Pdot|^2/(4|z|) per sheet; two sheets and the leading 2.
    auto tau_f = [&](cplx z) { return std::norm(p_dot(z)) / (4.0 * std::abs(z)); };
    const double rhs = 2.0 * 2.0 * integrate_disk(tau_f, R, grid);
    return {lhs, rhs, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300})};
}

// ---------------------------------------------------------------------------
// decay scan over a t-ray

struct DeltaDecomposition {
    double term_app_vs_model;
    double term_model_vs_inf;
    double total;
    double t;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("fit_line: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = f.intercept + f.slope * x[i];
        ss_res += (y[i] - pred) * (y[i] - pred);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    f.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

// Rate of v ~ C t^p e^{-gamma t}: slope of log|v| - p log t against t.
inline LineFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& v,
                              double log_power = 0.0) {
    std::vector<double> y(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        y[i] = std::log(std::abs(v[i])) - log_power * std::log(t[i]);
    return fit_line(t, y);
}

struct DecayReport {
    std::vector<double> t_values;
    std::vector<double> diff_values;      // g_app - g_sf per t (signed)
    std::vector<double> g_app_values;
    std::vector<double> g_sf_values;
    std::vector<double> term_app_model;   // decomposition channels
    std::vector<double> term_model_inf;
    double gamma_fit = 0.0;
    double gamma_predicted = 0.0;
    double fit_t_lo = 0.0, fit_t_hi = 0.0;
    double r_squared = 0.0;
    double max_quad_drift = 0.0;
    int n_r = 0, n_theta = 0;
    double r1 = 0.0, r2 = 0.0;
    bool pass = false;  // r^2 >= 0.99 and gamma_fit > 0

    void write_csv(const std::string& path, const std::vector<std::string>& config = {}) const {
        CsvWriter csv(path);
        for (auto& line : config) csv.comment(line);
        csv.header("t,g_app,g_sf,diff,term_app_model,term_model_inf");
        for (std::size_t i = 0; i < t_values.size(); ++i)
            csv.row({t_values[i], g_app_values[i], g_sf_values[i], diff_values[i],
                     term_app_model[i], term_model_inf[i]});
    }

    JsonWriter to_json() const {
        JsonWriter j;
        j.field("t_values", t_values);
        j.field("diff_values", diff_values);
        j.field("gamma_fit", gamma_fit);
        j.field("gamma_predicted", gamma_predicted);
        JsonWriter w;
        w.field("t_lo", fit_t_lo);
        w.field("t_hi", fit_t_hi);
        j.object("fit_window", w);
        j.field("r_squared", r_squared);
        JsonWriter g;
        g.field("n_r", n_r);
        g.field("n_theta", n_theta);
        j.object("grid", g);
        JsonWriter a;
        a.field("r1", r1);
        a.field("r2", r2);
        j.object("annulus", a);
        j.field("max_quad_drift", max_quad_drift);
        j.field("verdict", pass ? "PASS" : "FAIL");
        return j;
    }
};

struct ScanOptions {
    double r1 = 0.25;
    double r2 = 1.0;
    DiskGrid grid{200, 64, {}};
    int pde_cells = 4000;
    // fit window: indices >= skip_fraction * n whose |diff| is above the
    // cancellation floor 1e3 * eps * |g_sf|
    double skip_fraction = 1.0 / 3.0;
};

inline std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return t;
}

// u1: t = 1 profile covering [r_min, t_max^{2/3} r2].
inline DecayReport decay_scan(const hml::painleve::RadialProfile& u1, const HolomorphicPoly& p_dot,
                              const std::vector<double>& t_grid, ScanOptions opt = {}) {
    if (t_grid.size() < 6 || t_grid.front() < 2.0)
        throw std::invalid_argument("decay_scan: need >= 6 t-values with min >= 2");
    int max_mode = 0;
    for (int k = 0; k <= p_dot.degree(); ++k)
        if (std::abs(p_dot.coeff(k)) != 0.0) max_mode = std::max(max_mode, std::abs(k - 1));
    if (opt.grid.n_theta < 4 * max_mode + 8)
        throw std::invalid_argument("decay_scan: n_theta must be >= 4 * max excited mode + 8");

    DecayReport rep;
    const std::size_t n = t_grid.size();
    rep.t_values = t_grid;
    rep.diff_values.resize(n);
    rep.g_app_values.resize(n);
    rep.g_sf_values.resize(n);
    rep.term_app_model.resize(n);
    rep.term_model_inf.resize(n);
    rep.n_r = opt.grid.n_r;
    rep.n_theta = opt.grid.n_theta;
    rep.r1 = opt.r1;
    rep.r2 = opt.r2;

    DiskGrid grid = opt.grid;
    if (grid.breakpoints.empty()) grid.breakpoints = {opt.r1};

    std::vector<double> drifts(n, 0.0);
    hml::parallel_for(n, [&](std::size_t i) {
        const double t = t_grid[i];
        LocalModel model(u1, t, opt.r1, opt.r2);
        auto f_app = std::make_shared<FourierRadialField>(
            hml::varsolve::solve_f(model, p_dot, Metric::app, opt.pde_cells));
        const FourierRadialField f_model =
            hml::varsolve::solve_f(model, p_dot, Metric::model, opt.pde_cells);
        const FourierRadialField f_diff = f_model - *f_app;

        const DiagonalPair pa = app_pair(model, f_app);
        const DiagonalPair pm = model_pair(model, p_dot);
        const DiagonalPair pi = limit_pair(p_dot);
        const double R = model.disk_radius();

        auto chan_am = [&](cplx z) {
            return annulus_channel_density(p_dot, model, *f_app, f_diff, z);
        };
        auto chan_mi = [&](cplx z) { return delta_integrand(p_dot, t, pm, pi, z); };
        const CheckedIntegral total =
            integrate_disk_checked([&](cplx z) { return chan_am(z) + chan_mi(z); }, R, grid);
        rep.diff_values[i] = total.value;
        drifts[i] = total.drift;

        rep.term_app_model[i] = integrate_disk(chan_am, R, grid);
        rep.term_model_inf[i] = integrate_disk(chan_mi, R, grid);
        rep.g_app_values[i] =
            integrate_disk([&](cplx z) { return pair_density(p_dot, t, pa, z); }, R, grid);
        rep.g_sf_values[i] =
            integrate_disk([&](cplx z) { return pair_density(p_dot, t, pi, z); }, R, grid);
    });
    for (double d : drifts) rep.max_quad_drift = std::max(rep.max_quad_drift, d);

    // fit window
    std::vector<double> ft, fv;
    const std::size_t start = static_cast<std::size_t>(opt.skip_fraction * n);
    for (std::size_t i = start; i < n; ++i) {
        if (std::abs(rep.diff_values[i]) <= 1e3 * 2.2e-16 * std::abs(rep.g_sf_values[i])) break;
        ft.push_back(t_grid[i]);
        fv.push_back(rep.diff_values[i]);
    }
    if (ft.size() < 3) throw std::runtime_error("decay_scan: fit window degenerate (differences underflow)");
    const LineFit fit = fit_decay_rate(ft, fv);
    rep.gamma_fit = -fit.slope;
    rep.r_squared = fit.r_squared;
    rep.fit_t_lo = ft.front();
    rep.fit_t_hi = ft.back();

    // predicted boundary rates (8/3) R^{3/2} for the two contributing radii;
    // tag the one nearest the fitted rate
    const double cand1 = (8.0 / 3.0) * std::pow(opt.r1, 1.5);
    const double cand2 = (8.0 / 3.0) * std::pow(opt.r2, 1.5);
    rep.gamma_predicted =
        (std::abs(rep.gamma_fit - cand1) <= std::abs(rep.gamma_fit - cand2)) ? cand1 : cand2;
    rep.pass = rep.r_squared >= 0.99 && rep.gamma_fit > 0.0;
    return rep;
}

inline DeltaDecomposition decomposition_at(const DecayReport& rep, std::size_t i) {
    return {rep.term_app_model[i], rep.term_model_inf[i], rep.diff_values[i], rep.t_values[i]};
}

}  // namespace hml::metricdiff
