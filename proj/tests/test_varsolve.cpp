#include <catch2/catch_amalgamated.hpp>

#include "hml/varsolve.hpp"

using namespace hml::varsolve;
using namespace hml::localmodel;
using hml::Poly;
using hml::cplx;

namespace {
const hml::painleve::RadialProfile& u1_shared() {
    static auto p = hml::painleve::solve_u1(1e-4, 12.0, 2000);
    return p;
}

hml::painleve::RadialProfile zero_profile() {
    hml::painleve::RadialProfile p;
    p.t = 1.0;
    for (double r = 1e-3; r < 10.0; r *= 1.05) {
        p.grid.push_back(r);
        p.values.push_back(0.0);
        p.derivs.push_back(0.0);
    }
    return p;
}
}  // namespace

TEST_CASE("zero forcing gives the zero field") {
    LocalModel model(u1_shared(), 4.0);
    const auto f = solve_f(model, Poly{}, Metric::app, 512);
    CHECK(f.modes.empty());
    CHECK(std::abs(f.eval(cplx(0.5, 0.1))) == 0.0);
}

TEST_CASE("monomial forcing excites exactly one mode") {
    LocalModel model(u1_shared(), 4.0);
    for (int n : {0, 1, 3}) {
        std::vector<cplx> c(n + 1, cplx(0.0));
        c[n] = cplx(1.0);
        const auto f = solve_f(model, Poly(c), Metric::app, 1024);
        REQUIRE(f.modes.size() == 1);
        CHECK(f.modes[0].m == n - 1);
    }
}

TEST_CASE("model solve reproduces the closed-form complex variation") {
    LocalModel model(u1_shared(), 4.0);
    // constant and quadratic deformations exercise the m = -1 and m = 1 modes
    for (const Poly& pdot : {Poly{cplx(1.0)}, Poly{cplx(0.0), cplx(0.0), cplx(1.0, 0.5)}}) {
        SolveStats stats;
        const auto f = solve_f(model, pdot, Metric::model, 4000, &stats);
        CHECK(stats.residual <= 1e-8);
        double worst = 0.0;
        for (double r = 0.1; r <= 0.9; r += 0.04)
            for (double th = 0.0; th < 6.2; th += 0.6) {
                const cplx z = std::polar(r, th);
                worst = std::max(worst, std::abs(f.eval(z) - f_x(model, pdot, z)));
            }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("field samples reproduce the stored values at the nodes") {
    LocalModel model(u1_shared(), 4.0);
    const auto f = solve_f(model, Poly{cplx(1.0), cplx(0.5)}, Metric::app, 1024);
    for (std::size_t i = 1; i < f.grid.size(); i += 101) {
        const double th = 0.77;
        cplx direct(0.0);
        for (auto& mode : f.modes) direct += mode.samples[i] * std::polar(1.0, mode.m * th);
        CHECK(std::abs(f.eval(std::polar(f.grid[i], th)) - direct) <= 1e-13);
    }
}

TEST_CASE("outer boundary data matches the limiting variation") {
    LocalModel model(u1_shared(), 8.0);
    const Poly pdot{cplx(1.0), cplx(0.0, 0.4)};
    const auto f = solve_f(model, pdot, Metric::app, 2048);
    double worst = 0.0;
    for (double th = 0.0; th < 6.3; th += 0.3) {
        const cplx z = std::polar(1.0, th);
        worst = std::max(worst, std::abs(f.eval_boundary(th) - pdot(z) / (2.0 * z)));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("homogeneous operator is far from singular") {
    LocalModel model(u1_shared(), 4.0);
    SolveStats stats;
    solve_f(model, Poly{cplx(1.0)}, Metric::app, 2048, &stats);
    CHECK(stats.min_singular > 1e-8);
}

TEST_CASE("maximum-principle bound on the annulus") {
    const Poly pdot{cplx(1.0)};
    double prev = 0.0;
    for (double t : {4.0, 8.0, 12.0}) {
        LocalModel model(u1_shared(), t);
        const auto fa = solve_f(model, pdot, Metric::app, 3000);
        const auto fm = solve_f(model, pdot, Metric::model, 3000);
        const auto rep = max_principle_bound(model, pdot, fa, fm);
        CHECK(rep.satisfied_pde);
        CHECK(rep.satisfied_typeset);
        if (prev > 0.0) CHECK(prev / rep.lhs >= std::exp(1.0));
        prev = rep.lhs;
    }
}

TEST_CASE("identical weights make model and app coincide") {
    // with u == 0 both equations have the same coefficients and boundary data
    LocalModel flat(zero_profile(), 4.0);
    const Poly pdot{cplx(1.0)};
    const auto fa = solve_f(flat, pdot, Metric::app, 1024);
    const auto fm = solve_f(flat, pdot, Metric::model, 1024);
    const auto rep = max_principle_bound(flat, pdot, fa, fm);
    CHECK(rep.lhs <= 1e-14);
}

TEST_CASE("argument validation") {
    LocalModel model(u1_shared(), 4.0);
    CHECK_THROWS_AS(solve_f(model, Poly{cplx(1.0)}, Metric::inf, 512), std::invalid_argument);
}
