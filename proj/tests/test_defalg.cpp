#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "hml/deform_identities.hpp"
#include "hml/instances.hpp"
#include "hml/local_model.hpp"
#include "hml/metricdiff.hpp"

using namespace hml::defalg;
using hml::instances::random_sl_field;

namespace {
Mat id2() { return Mat::Identity(2, 2); }
}  // namespace

TEST_CASE("dbar on monomial fields") {
    SECTION("dbar(zbar Id) = Id dzbar") {
        const auto f = MatrixPolyField::monomial(0, 1, id2());
        const auto d = dbar(f);
        REQUIRE(d.form() == FormType::form01);
        CHECK((d.eval(cplx(0.3, 0.7)) - id2()).cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("holomorphic fields are annihilated") {
        const auto f = MatrixPolyField::monomial(2, 0, id2());
        CHECK(dbar(f).coeffs().empty());
    }
    SECTION("dbar(z zbar M) = z M dzbar") {
        Mat m(2, 2);
        m << 1, 2, 3, -1;
        const auto d = dbar(MatrixPolyField::monomial(1, 1, m));
        const cplx z(0.4, -0.2);
        CHECK((d.eval(z) - z * m).cwiseAbs().maxCoeff() <= 1e-15);
    }
    SECTION("degree bound drops by one in zbar") {
        std::mt19937_64 rng(5);
        const auto f = random_sl_field(2, 3, FormType::scalar, rng);
        const auto d = dbar(f);
        CHECK(d.degree_bound() <= f.degree_bound());
        for (auto& [jk, m] : d.coeffs()) CHECK(jk.second <= 2);
    }
    SECTION("arithmetic closure: degree bounds add, tracelessness is preserved by brackets") {
        std::mt19937_64 rng(6);
        const auto a = random_sl_field(3, 2, FormType::scalar, rng);
        const auto b = random_sl_field(3, 3, FormType::scalar, rng);
        CHECK((a * b).degree_bound() <= a.degree_bound() + b.degree_bound());
        CHECK(a.is_traceless());
        CHECK(bracket(a, b).is_traceless(1e-12));
    }
}

TEST_CASE("adjoint_h") {
    std::mt19937_64 rng(11);
    SECTION("h = Id reduces to the conjugate transpose") {
        const auto h = HermitianField::identity(3);
        const Mat m = hml::instances::random_sl_matrix(3, rng);
        CHECK((adjoint_h(m, h, cplx(0.5, 0.2)) - m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
    SECTION("diagonal h maps strictly upper to scaled strictly lower") {
        // direct 2x2 computation: h = diag(h1, h2), f = (0 1; 0 0):
        // h^{-1} f^dag h = (0 0; h1/h2 0)
        const auto h = HermitianField::h_infinity();  // diag(r^{-1/2}, r^{1/2})
        Mat f = Mat::Zero(2, 2);
        f(0, 1) = 1.0;
        const cplx z(0.5, 0.0);
        const Mat a = adjoint_h(f, h, z);
        CHECK(std::abs(a(0, 0)) == 0.0);
        CHECK(std::abs(a(0, 1)) == 0.0);
        CHECK(std::abs(a(1, 1)) == 0.0);
        const double expect = std::pow(0.5, -0.5) / std::pow(0.5, 0.5);  // h1/h2 = 1/r
        CHECK(std::abs(a(1, 0) - expect) <= 1e-15);
    }
    SECTION("involution") {
        const auto h = HermitianField::h_infinity();
        const cplx z(0.3, -0.8);
        const Mat m = hml::instances::random_sl_matrix(2, rng);
        CHECK((adjoint_h(adjoint_h(m, h, z), h, z) - m).cwiseAbs().maxCoeff() <= 1e-14);
    }
    SECTION("singular point throws") {
        CHECK_THROWS_AS(HermitianField::h_infinity().value(cplx(0.0)), std::domain_error);
    }
}

TEST_CASE("Coulomb-gauge packaging identity on seeded random fields") {
    std::mt19937_64 rng(20260809);
    double worst_re = 0.0, worst_im = 0.0;
    for (int n = 2; n <= 4; ++n) {
        for (int k = 0; k < 34; ++k) {
            const auto a01 = random_sl_field(n, 2, FormType::form01, rng);
            const auto phi = random_sl_field(n, 2, FormType::form10, rng);
            const auto da01 = random_sl_field(n, 2, FormType::form01, rng);
            const auto dphi = random_sl_field(n, 2, FormType::form10, rng);
            const auto rep = coulomb_identity_check(a01, phi, da01, dphi);
            worst_re = std::max(worst_re, rep.re_residual);
            worst_im = std::max(worst_im, rep.im_residual);
        }
    }
    CHECK(worst_re <= 1e-12);
    CHECK(worst_im <= 1e-12);
}

TEST_CASE("Coulomb identity: zero deformation gives exactly zero") {
    std::mt19937_64 rng(3);
    const auto a01 = random_sl_field(2, 2, FormType::form01, rng);
    const auto phi = random_sl_field(2, 2, FormType::form10, rng);
    const auto rep = coulomb_identity_check(a01, phi, MatrixPolyField(2, FormType::form01),
                                            MatrixPolyField(2, FormType::form10));
    CHECK(rep.re_residual == 0.0);
    CHECK(rep.im_residual == 0.0);
}

TEST_CASE("triple gauge equation") {
    using namespace hml::localmodel;
    const MatrixPolyField phi = higgs_field();
    std::vector<cplx> samples;
    for (int k = 0; k < 12; ++k) samples.push_back(std::polar(0.2 + 0.07 * k, 0.9 * k));

    SECTION("the normal-form triple against h_inf") {
        const HolomorphicPoly pdot{cplx(0.0), cplx(1.0), cplx(0.5, 0.2)};  // Pdot(0) = 0 so nu is polynomial
        const auto eta = MatrixPolyField(2, FormType::form01);
        const auto phid = phi_dot_field(pdot);
        const auto nu = nu_inf_field(pdot);
        const double res = triple_gauge_residual(eta, phid, nu, phi,
                                                 HermitianField::h_infinity(), samples);
        CHECK(res <= 1e-10);
    }
    SECTION("zero triple gives zero") {
        const double res = triple_gauge_residual(
            MatrixPolyField(2, FormType::form01), MatrixPolyField(2, FormType::form10),
            MatrixPolyField(2, FormType::scalar), phi, HermitianField::h_infinity(), samples);
        CHECK(res == 0.0);
    }
    SECTION("perturbing nu breaks the equation") {
        const HolomorphicPoly pdot{cplx(0.0), cplx(1.0)};
        const auto eta = MatrixPolyField(2, FormType::form01);
        const auto phid = phi_dot_field(pdot);
        auto nu = nu_inf_field(pdot);
        Mat s3 = Mat::Zero(2, 2);
        s3(0, 0) = 1.0;
        s3(1, 1) = -1.0;
        nu += MatrixPolyField::monomial(0, 1, s3);  // + zbar sigma3
        const double res = triple_gauge_residual(eta, phid, nu, phi,
                                                 HermitianField::h_infinity(), samples);
        CHECK(res > 0.1);
    }
    SECTION("samples at the metric singularity are rejected") {
        const auto eta = MatrixPolyField(2, FormType::form01);
        const auto phid = MatrixPolyField(2, FormType::form10);
        const auto nu = MatrixPolyField(2, FormType::scalar);
        CHECK_THROWS_AS(triple_gauge_residual(eta, phid, nu, phi, HermitianField::h_infinity(),
                                              {cplx(0.0)}),
                        std::domain_error);
    }
}

TEST_CASE("l2 integrand") {
    using namespace hml::localmodel;
    const MatrixPolyField phi = higgs_field();
    const MatrixPolyField zero_eta(2, FormType::form01);
    const MatrixPolyField zero_nu(2, FormType::scalar);
    const auto h0 = HermitianField::identity(2);

    SECTION("all-zero deformation") {
        const MatrixPolyField zero_phid(2, FormType::form10);
        CHECK(l2_integrand(zero_eta, zero_phid, zero_nu, phi, h0, cplx(0.4, 0.1)) == 0.0);
    }
    SECTION("constant upper-triangular phi_dot at h = Id has density 2") {
        Mat e12 = Mat::Zero(2, 2);
        e12(0, 1) = 1.0;
        const auto phid = MatrixPolyField::monomial(0, 0, e12, FormType::form10);
        CHECK(l2_integrand(zero_eta, phid, zero_nu, phi, h0, cplx(0.7, -0.3)) ==
              Catch::Approx(2.0).epsilon(1e-14));
    }
    SECTION("norm case is real for the gauged model triple") {
        const HolomorphicPoly pdot{cplx(0.0), cplx(1.0), cplx(0.0, 0.7)};
        const auto phid = phi_dot_field(pdot);
        const auto nu = nu_inf_field(pdot);
        for (cplx z : {cplx(0.5, 0.1), cplx(-0.2, 0.6), cplx(0.1, -0.4)}) {
            const cplx v = l2_integrand_c(zero_eta, phid, nu, phi,
                                          HermitianField::h_infinity(), z);
            CHECK(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v.real())));
        }
    }
    SECTION("singular point throws") {
        const MatrixPolyField zero_phid(2, FormType::form10);
        CHECK_THROWS_AS(l2_integrand(zero_eta, zero_phid, zero_nu, phi,
                                     HermitianField::h_infinity(), cplx(0.0)),
                        std::domain_error);
    }
}

TEST_CASE("pairing core: sesquilinearity, conjugate symmetry, polarization") {
    std::mt19937_64 rng(17);
    const auto phi = hml::localmodel::higgs_field();
    const auto h = HermitianField::h_infinity();
    const cplx z(0.45, -0.3);

    auto triple = [&](int) {
        return std::tuple{random_sl_field(2, 2, FormType::form01, rng),
                          random_sl_field(2, 2, FormType::form10, rng),
                          random_sl_field(2, 2, FormType::scalar, rng)};
    };
    auto [e1, p1, n1] = triple(0);
    auto [e2, p2, n2] = triple(1);

    const cplx pab = pairing_core(e1, p1, n1, e2, p2, n2, phi, h, z);
    const cplx pba = pairing_core(e2, p2, n2, e1, p1, n1, phi, h, z);
    CHECK(std::abs(pab - std::conj(pba)) <= 1e-12 * std::max(1.0, std::abs(pab)));

    // linearity in the first slot
    const cplx s(0.3, 1.1);
    const cplx lhs = pairing_core(s * e1, s * p1, s * n1, e2, p2, n2, phi, h, z);
    CHECK(std::abs(lhs - s * pab) <= 1e-12 * std::max(1.0, std::abs(lhs)));

    // polarization: 4 Re<a,b> = |a+b|^2 - |a-b|^2
    const cplx paa = pairing_core(e1, p1, n1, e1, p1, n1, phi, h, z);
    const cplx pbb = pairing_core(e2, p2, n2, e2, p2, n2, phi, h, z);
    const cplx psum = pairing_core(e1 + e2, p1 + p2, n1 + n2, e1 + e2, p1 + p2, n1 + n2, phi, h, z);
    const cplx pdif = pairing_core(e1 - e2, p1 - p2, n1 - n2, e1 - e2, p1 - p2, n1 - n2, phi, h, z);
    CHECK(std::abs((psum - pdif) - 4.0 * cplx(pab.real(), 0.0)) <=
          1e-11 * (std::abs(paa) + std::abs(pbb) + 1.0));
}

TEST_CASE("h-pairing agrees with the unitary-frame pairing at points") {
    // conjugating a deformation by H^{1/2} (h = h0 H, h0 = Id) turns the
    // h-pairing into the plain trace pairing: tr(X h^{-1} Y^dag h) =
    // tr((H^{1/2} X H^{-1/2})(H^{1/2} Y H^{-1/2})^dag). This is the pointwise
    // bridge between the metric-variation and unitary formulations.
    std::mt19937_64 rng(41);
    const auto h = HermitianField::h_infinity();
    for (int trial = 0; trial < 5; ++trial) {
        const cplx z = std::polar(0.3 + 0.15 * trial, 1.1 * trial + 0.4);
        const Mat x = hml::instances::random_sl_matrix(2, rng);
        const Mat y = hml::instances::random_sl_matrix(2, rng);
        const cplx lhs = (x * adjoint_h(y, h, z)).trace();

        const Mat hv = h.value(z);
        Mat hr = Mat::Zero(2, 2), hri = Mat::Zero(2, 2);
        for (int i = 0; i < 2; ++i) {
            hr(i, i) = std::sqrt(hv(i, i).real());
            hri(i, i) = 1.0 / hr(i, i).real();
        }
        const Mat xu = hr * x * hri;
        const Mat yu = hr * y * hri;
        const cplx rhs = (xu * yu.adjoint()).trace();
        CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("energy identity under a vanishing-boundary window") {
    // fields xi = (R^2 - z zbar) * (random polynomial) vanish on |z| = R;
    // the pairing of the Dirichlet operator against xi integrates to
    // -(|dbar xi|^2 + |[phi, xi]|^2).
    std::mt19937_64 rng(23);
    const double R = 1.0;
    const auto phi = hml::localmodel::higgs_field();
    Mat negid = -Mat::Identity(2, 2);
    auto window = MatrixPolyField::monomial(0, 0, (R * R) * Mat::Identity(2, 2));
    window += MatrixPolyField::monomial(1, 1, negid);

    for (int trial = 0; trial < 3; ++trial) {
        const auto xi = window * random_sl_field(2, 1, FormType::scalar, rng);
        // P = del dbar xi + [phi^dag, [phi, xi]] as (1,1) coefficient
        const auto dd = del(dbar(xi));
        const auto br = bracket(conj_transpose(phi), bracket(phi, xi));
        const auto P = dd + br;

        hml::metricdiff::DiskGrid grid{160, 48, {}};
        const double lhs = hml::metricdiff::integrate_disk(
            [&](cplx z) { return ((P.eval(z) * xi.eval(z).adjoint()).trace()).real(); }, R, grid);
        const double rhs = hml::metricdiff::integrate_disk(
            [&](cplx z) {
                const Mat a = dbar(xi).eval(z);
                const Mat b = bracket(phi, xi).eval(z);
                return (a * a.adjoint()).trace().real() + (b * b.adjoint()).trace().real();
            },
            R, grid);
        const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
        CHECK(std::abs(lhs + rhs) / scale <= 1e-6);
    }
}
