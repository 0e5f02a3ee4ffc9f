#pragma once

// Seeded random instances for property suites and the CLI report commands.
// Everything is driven by std::mt19937_64 so identical seeds give identical
// instances across runs and platforms.

#include <random>

#include "hml/matrix_poly.hpp"
#include "hml/sunform.hpp"

namespace hml::instances {

using hml::defalg::FormType;
using hml::defalg::Mat;
using hml::defalg::MatrixPolyField;

inline Mat random_sl_matrix(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat m(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m(a, b) = cplx(u(rng), u(rng));
    m -= (m.trace() / double(n)) * Mat::Identity(n, n);
    return m;
}

// sl(n)-valued polynomial field with total degree bound deg in (z, zbar).
inline MatrixPolyField random_sl_field(int n, int deg, FormType form, std::mt19937_64& rng) {
    MatrixPolyField f(n, form);
    for (int j = 0; j <= deg; ++j)
        for (int k = 0; j + k <= deg; ++k) f.add_coeff(j, k, random_sl_matrix(n, rng));
    return f;
}

// holomorphic sl(n)-valued (1,0) field of degree deg
inline MatrixPolyField random_holomorphic_sl_field(int n, int deg, std::mt19937_64& rng) {
    MatrixPolyField f(n, FormType::form10);
    for (int j = 0; j <= deg; ++j) f.add_coeff(j, 0, random_sl_matrix(n, rng));
    return f;
}

// A deformation pair (eta_dot, phi_dot) satisfying the linearized
// holomorphicity constraint dbar phi_dot + [eta_dot, phi] = 0 on the rank-2
// model chart: draw eta_dot and a holomorphic part of phi_dot, then complete
// phi_dot with the exact zbar-antiderivative of -[eta_dot, phi].
inline std::pair<MatrixPolyField, MatrixPolyField> random_higgs_deformation(
    const MatrixPolyField& phi, int deg, std::mt19937_64& rng) {
    const int n = phi.n();
    MatrixPolyField eta = random_sl_field(n, deg, FormType::form01, rng);
    MatrixPolyField phid = random_holomorphic_sl_field(n, deg, rng);
    // The constraint as (1,1) coefficients reads d_zbar(phi_dot_z) =
    // -[eta_z, phi_z]; bracket(eta(01), phi(10)) already carries that minus
    // sign, so the completion is its plain zbar-antiderivative.
    const MatrixPolyField br = hml::defalg::bracket(eta, phi);  // form11
    for (auto& [jk, m] : br.coeffs())
        phid.add_coeff(jk.first, jk.second + 1, m / double(jk.second + 1));
    return {eta, phid};
}

// Block Higgs field with ell 2x2 blocks and n - 2 ell 1x1 blocks, base
// eigenvalues spread with small random holomorphic jitter. Ramified blocks
// carry eigenvalues lhat +- sqrt(z), so two such blocks only separate on the
// unit disk when |lhat_j - lhat_k| > 2; the spacing of 4 keeps every
// denominator family certified with a wide margin.
inline hml::sunform::BlockHiggsField random_block_higgs(int n, int ell, std::mt19937_64& rng) {
    using namespace hml::sunform;
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    std::vector<Block2> b2;
    std::vector<Block1> b1;
    int placed = 0;
    for (int j = 0; j < ell; ++j, ++placed) {
        Poly lhat{cplx(4.0 * placed + u(rng), u(rng)), cplx(u(rng), u(rng))};
        b2.push_back({lhat, Poly::identity()});
    }
    for (int q = 0; q < n - 2 * ell; ++q, ++placed) {
        Poly lam{cplx(4.0 * placed + u(rng), u(rng)), cplx(u(rng), u(rng))};
        b1.push_back({lam});
    }
    return BlockHiggsField(std::move(b2), std::move(b1));
}

}  // namespace hml::instances
