#pragma once

// Gauge-theoretic identity checks and the L2 metric integrand on a chart.
//
// coulomb_identity_check verifies, by exact expansion in polynomial fields,
// that the single sl(E)-valued combination
//     L = del_A^{h0} Adot^{0,1} + [Phi^dagger, Phidot]
// packages the curvature-variation equation (as its coefficient-hermitian
// part) and the Coulomb gauge condition (as the anti-hermitian part):
//     L + L^dagger = d_A Adot + [Phi, Phidot^dagger] + [Phidot, Phi^dagger]
//     L - L^dagger = -i ( d_A star Adot - [Phidot - Phidot^dagger, star(Phi - Phi^dagger)] )
// with h0 = Id and the unitarity relations A^{1,0} = -(A^{0,1})^dagger.
//
// The area convention used by l2_integrand (and inherited by every disk
// integral downstream): a pairing <a, b>_h contributes the plain trace density
// tr(a h^{-1} b^dagger h) with respect to dx dy, and l2_integrand carries the
// single overall factor 2 of the metric normalization. All reported metric
// numbers and the boundary form in local_model.hpp use this one convention.

#include <complex>
#include <vector>

#include "hml/hermitian.hpp"
#include "hml/matrix_poly.hpp"

namespace hml::defalg {

struct IdentityReport {
    double re_residual;  // sup | (L + L^dag) - curvature-variation equation |
    double im_residual;  // sup | (L - L^dag) + i * Coulomb-gauge equation |
};

// A01, Phi: background connection (0,1)-part and Higgs field on the chart.
// dA01, dPhi: the deformation. All sl(n)-valued polynomial fields, h0 = Id.
inline IdentityReport coulomb_identity_check(const MatrixPolyField& A01,
                                             const MatrixPolyField& Phi,
                                             const MatrixPolyField& dA01,
                                             const MatrixPolyField& dPhi) {
    const MatrixPolyField A10 = -1.0 * conj_transpose(A01);
    const MatrixPolyField dA10 = -1.0 * conj_transpose(dA01);

    auto del_cov = [&](const MatrixPolyField& w01) { return del(w01) + bracket(A10, w01); };
    auto dbar_cov = [&](const MatrixPolyField& w10) { return dbar(w10) + bracket(A01, w10); };

    const MatrixPolyField L = del_cov(dA01) + bracket(conj_transpose(Phi), dPhi);

    const MatrixPolyField curvature_eq = del_cov(dA01) + dbar_cov(dA10) +
                                         bracket(Phi, conj_transpose(dPhi)) +
                                         bracket(dPhi, conj_transpose(Phi));

    // star(Adot) = i dA01 - i dA10; star(Phi - Phi^dag) = -i (Phi + Phi^dag).
    const MatrixPolyField d_star_A = del_cov(cplx(0, 1) * dA01) + dbar_cov(cplx(0, -1) * dA10);
    const MatrixPolyField mixed = cplx(0, -1) * (bracket(dPhi, conj_transpose(Phi)) +
                                                 bracket(cplx(-1, 0) * conj_transpose(dPhi), Phi));
    const MatrixPolyField coulomb_eq = d_star_A - mixed;

    IdentityReport rep;
    rep.re_residual = sup_on_grid(L + coeff_adjoint(L) - curvature_eq);
    rep.im_residual = sup_on_grid(L - coeff_adjoint(L) + cplx(0, 1) * coulomb_eq);
    return rep;
}

// Left side of the combined metric-variation / Coulomb-gauge equation for a
// triple (eta_dot, phi_dot, nu_dot) over the Higgs field phi and metric h,
// evaluated at z (dz^dzbar coefficient):
//     del^h (dbar nu_dot - eta_dot) + [phi^{dagger_h}, phi_dot + [nu_dot, phi]]
// where the last bracket already carries the mixed-form orientation sign.
inline Mat triple_gauge_lhs(const MatrixPolyField& eta_dot, const MatrixPolyField& phi_dot,
                            const MatrixPolyField& nu_dot, const MatrixPolyField& phi,
                            const HermitianField& h, cplx z) {
    const MatrixPolyField omega = dbar(nu_dot) - eta_dot;  // (0,1)
    const Mat om = omega.eval(z);
    const Mat dom = del(omega).eval(z);
    const Mat hlog = h.log_deriv_z(z);
    const Mat del_h = dom + hlog * om - om * hlog;

    const MatrixPolyField b = phi_dot + bracket(nu_dot, phi);  // (1,0)
    const Mat phi_adj = adjoint_h(phi.eval(z), h, z);          // (0,1) coefficient
    const Mat bm = b.eval(z);
    // [ (0,1), (1,0) ] -> -[.,.] on dz^dzbar; it enters the equation with a
    // minus sign, so the net contribution is +[phi_adj, bm].
    return del_h + (phi_adj * bm - bm * phi_adj);
}

inline double triple_gauge_residual(const MatrixPolyField& eta_dot,
                                    const MatrixPolyField& phi_dot,
                                    const MatrixPolyField& nu_dot, const MatrixPolyField& phi,
                                    const HermitianField& h, const std::vector<cplx>& samples) {
    double worst = 0.0;
    for (cplx z : samples) {
        if (z == cplx(0.0) && h.singular_at_zero())
            throw std::domain_error("triple_gauge_residual: sample at metric singularity");
        worst = std::max(worst,
                         triple_gauge_lhs(eta_dot, phi_dot, nu_dot, phi, h, z).cwiseAbs().maxCoeff());
    }
    return worst;
}

// Complex pairing density of the metric integrand at z (see the convention
// note above): 2 [ tr((eta-dbar nu) h^{-1} eta^dag h) + tr((phi_dot+[nu,phi]) h^{-1} phi_dot^dag h) ].
inline cplx l2_integrand_c(const MatrixPolyField& eta_dot, const MatrixPolyField& phi_dot,
                           const MatrixPolyField& nu_dot, const MatrixPolyField& phi,
                           const HermitianField& h, cplx z) {
    if (z == cplx(0.0) && h.singular_at_zero())
        throw std::domain_error("l2_integrand: z at metric singularity");
    const Mat a1 = (eta_dot - dbar(nu_dot)).eval(z);
    const Mat a2 = adjoint_h(eta_dot.eval(z), h, z);
    const Mat b1 = (phi_dot + bracket(nu_dot, phi)).eval(z);
    const Mat b2 = adjoint_h(phi_dot.eval(z), h, z);
    return 2.0 * ((a1 * a2).trace() + (b1 * b2).trace());
}

// Real density against dx dy. The norm case is real up to rounding; callers
// needing the imaginary part (polarization tests) use l2_integrand_c.
inline double l2_integrand(const MatrixPolyField& eta_dot, const MatrixPolyField& phi_dot,
                           const MatrixPolyField& nu_dot, const MatrixPolyField& phi,
                           const HermitianField& h, cplx z) {
    return l2_integrand_c(eta_dot, phi_dot, nu_dot, phi, h, z).real();
}

// Slot-symmetric core of the pairing: both arguments enter through their
// gauge-covariant combinations. Sesquilinear and conjugate-symmetric
// pointwise; integrates to the same value as l2_integrand for deformations
// satisfying the gauge equation (integration by parts).
inline cplx pairing_core(const MatrixPolyField& eta1, const MatrixPolyField& phi1,
                         const MatrixPolyField& nu1, const MatrixPolyField& eta2,
                         const MatrixPolyField& phi2, const MatrixPolyField& nu2,
                         const MatrixPolyField& phi, const HermitianField& h, cplx z) {
    const Mat a1 = (eta1 - dbar(nu1)).eval(z);
    const Mat a2 = adjoint_h((eta2 - dbar(nu2)).eval(z), h, z);
    const Mat b1 = (phi1 + bracket(nu1, phi)).eval(z);
    const Mat b2 = adjoint_h((phi2 + bracket(nu2, phi)).eval(z), h, z);
    return 2.0 * ((a1 * a2).trace() + (b1 * b2).trace());
}

}  // namespace hml::defalg
