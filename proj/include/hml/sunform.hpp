#pragma once

// SU(n) local normal forms at a simple eigenvalue crossing. The Higgs field on
// the chart is block-diagonal: ramified 2x2 blocks (lhat_j Id + N_j with
// N_j = (0, f_j f_j'; f_j', 0) in the base coordinate, z_j = f_j(z)) and 1x1
// blocks with holomorphic eigenvalues. The infinitesimal gauge transformation
// gamma that brings a holomorphic deformation phi_dot to its block normal form
// is assembled in closed form, blockwise:
//
//   self 2x2:   gamma = (-P3/(2f'), P1/f'; 0, P3/(2f')),
//               normal = (P0, P2 + f P3; 0, P0)
//   1x1 / 1x1:  gamma_pq = -Q_pq / (l_p - l_q)
//   2x2 / 1x1:  gamma = -(delta - N) Q / (delta^2 - f f'^2)   (and transposed row case)
//   2x2 / 2x2:  4x4 polynomial system (delta + L) vec G = -vec Q solved by
//               symbolic adjugate over det = the eigenvalue-difference quartic
//
// Every denominator is certified nonvanishing on the closed disk: winding
// number zero along the boundary plus boundary minimum modulus > 1e-6 (by the
// minimum-modulus principle the boundary minimum is then the disk minimum).
// gamma is holomorphic by construction: numerators and denominators are
// polynomials in z alone.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hml/io.hpp"
#include "hml/matrix_poly.hpp"
#include "hml/poly.hpp"

namespace hml::sunform {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// ---------------------------------------------------------------------------
// small matrices of polynomials

class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(int rows, int cols) : r_(rows), c_(cols), d_(rows * cols) {}
    int rows() const { return r_; }
    int cols() const { return c_; }
    Poly& at(int i, int j) { return d_[i * c_ + j]; }
    const Poly& at(int i, int j) const { return d_[i * c_ + j]; }

    Mat eval(cplx z) const {
        Mat m(r_, c_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(i, j) = at(i, j)(z);
        return m;
    }

    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
        PolyMatrix out(a.r_, b.c_);
        for (int i = 0; i < a.r_; ++i)
            for (int j = 0; j < b.c_; ++j) {
                Poly acc;
                for (int k = 0; k < a.c_; ++k) acc = acc + a.at(i, k) * b.at(k, j);
                out.at(i, j) = acc;
            }
        return out;
    }

    Poly trace() const {
        Poly acc;
        for (int i = 0; i < r_; ++i) acc = acc + at(i, i);
        return acc;
    }

private:
    int r_ = 0, c_ = 0;
    std::vector<Poly> d_;
};

// Laplace-expansion determinant; fine for the <= 7x7 Sylvester matrices here.
inline Poly poly_det(const PolyMatrix& m) {
    const int n = m.rows();
    if (n == 1) return m.at(0, 0);
    Poly acc;
    for (int k = 0; k < n; ++k) {
        if (m.at(0, k).is_zero()) continue;
        PolyMatrix minor(n - 1, n - 1);
        for (int i = 1; i < n; ++i) {
            int jj = 0;
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                minor.at(i - 1, jj++) = m.at(i, j);
            }
        }
        Poly term = m.at(0, k) * poly_det(minor);
        acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// block Higgs fields

struct Block2 {
    Poly lhat;                     // holomorphic base eigenvalue
    Poly coord = Poly::identity(); // z_j = f(z), f(0) = 0, f'(0) != 0
};

struct Block1 {
    Poly lam;
};

class BlockHiggsField {
public:
    BlockHiggsField(std::vector<Block2> b2, std::vector<Block1> b1)
        : b2_(std::move(b2)), b1_(std::move(b1)) {}

    int ell() const { return static_cast<int>(b2_.size()); }
    int n() const { return 2 * ell() + static_cast<int>(b1_.size()); }
    const std::vector<Block2>& blocks2() const { return b2_; }
    const std::vector<Block1>& blocks1() const { return b1_; }
    int offset2(int j) const { return 2 * j; }
    int offset1(int q) const { return 2 * ell() + q; }

    // dz-coefficient of the Higgs field as a polynomial matrix
    PolyMatrix poly_matrix() const {
        PolyMatrix m(n(), n());
        for (int j = 0; j < ell(); ++j) {
            const Poly f = b2_[j].coord;
            const Poly fp = f.derivative();
            const int o = offset2(j);
            m.at(o, o) = b2_[j].lhat;
            m.at(o, o + 1) = f * fp;
            m.at(o + 1, o) = fp;
            m.at(o + 1, o + 1) = b2_[j].lhat;
        }
        for (std::size_t q = 0; q < b1_.size(); ++q) {
            const int o = offset1(static_cast<int>(q));
            m.at(o, o) = b1_[q].lam;
        }
        return m;
    }

    Mat value(cplx z) const { return poly_matrix().eval(z); }

    bool traceless(double tol = 1e-14) const {
        Poly tr;
        for (auto& b : b2_) tr = tr + 2.0 * b.lhat;
        for (auto& b : b1_) tr = tr + b.lam;
        return tr.max_abs_coeff() <= tol;
    }

private:
    std::vector<Block2> b2_;
    std::vector<Block1> b1_;
};

// ---------------------------------------------------------------------------
// characteristic polynomial, resultant, crossing detection

// coefficients of det(lambda I - A): lambda^n - e1 lambda^{n-1} + e2 ... via
// Newton's identities on power-sum traces (polynomials in z)
inline std::vector<Poly> char_poly_coeffs(const PolyMatrix& a) {
    const int n = a.rows();
    std::vector<Poly> p(n + 1);  // power sums p[k] = tr(A^k)
    PolyMatrix acc = a;
    for (int k = 1; k <= n; ++k) {
        p[k] = acc.trace();
        if (k < n) acc = acc * a;
    }
    std::vector<Poly> e(n + 1);
    e[0] = Poly::constant(1.0);
    for (int k = 1; k <= n; ++k) {
        Poly s;
        for (int i = 1; i <= k; ++i) {
            Poly term = e[k - i] * p[i];
            s = (i % 2 == 1) ? s + term : s - term;
        }
        e[k] = (1.0 / k) * s;
    }
    // char(lambda) coefficients by descending power: 1, -e1, +e2, ...
    std::vector<Poly> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = ((k % 2 == 0) ? 1.0 : -1.0) * e[k];
    return c;
}

// Sylvester resultant in lambda of char and d char / d lambda; a polynomial in
// z whose zeros are the branch points (up to the leading constant).
inline Poly discriminant_resultant(const PolyMatrix& a) {
    const std::vector<Poly> c = char_poly_coeffs(a);  // descending, degree n
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<Poly> d(n);  // derivative, descending, degree n-1
    for (int k = 0; k < n; ++k) d[k] = double(n - k) * c[k];

    const int rows = 2 * n - 1;
    PolyMatrix s(rows, rows);
    for (int i = 0; i < n - 1; ++i)
        for (int k = 0; k <= n; ++k) s.at(i, i + k) = c[k];
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= n - 1; ++k) s.at(n - 1 + i, i + k) = d[k];
    return poly_det(s);
}

// Pointwise discriminant prod_{i<j} (lambda_i - lambda_j)^2 by numerical
// eigenvalues of the matrix value.
inline cplx discriminant(const Mat& phi_value) {
    Eigen::ComplexEigenSolver<Mat> es(phi_value, false);
    if (es.info() != Eigen::Success) throw std::runtime_error("discriminant: eigensolver failed");
    const auto& lam = es.eigenvalues();
    cplx acc(1.0);
    for (int i = 0; i < lam.size(); ++i)
        for (int j = i + 1; j < lam.size(); ++j) {
            const cplx d = lam[i] - lam[j];
            acc *= d * d;
        }
    return acc;
}

inline cplx discriminant(const BlockHiggsField& phi, cplx z) { return discriminant(phi.value(z)); }
inline cplx discriminant(const hml::defalg::MatrixPolyField& phi, cplx z) {
    return discriminant(phi.eval(z));
}

// Largest eigenvalue-cluster size of a matrix value, with a scale-aware cutoff.
inline int max_eigenvalue_cluster(const Mat& value, double cutoff_rel = 1e-5) {
    Eigen::ComplexEigenSolver<Mat> es(value, false);
    const auto& lam = es.eigenvalues();
    const int n = static_cast<int>(lam.size());
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(lam[i]));
    const double cutoff = cutoff_rel * scale;
    // union-find on the proximity graph
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(lam[i] - lam[j]) < cutoff) parent[find(i)] = find(j);
    std::map<int, int> count;
    int worst = 0;
    for (int i = 0; i < n; ++i) worst = std::max(worst, ++count[find(i)]);
    return worst;
}

// Simple eigenvalue crossing on the closed disk |z| <= R: every zero of the
// resultant Res(char, d_lambda char) inside the disk is a crossing of at most
// a pair of eigenvalues. Crossings of triples or worse are rejected (these are
// the higher strata; only pairwise square-root ramification is admissible).
//
// Multiple resultant roots are refined to their cluster mean before the
// eigenvalue test: root-finder errors on an m-fold root are symmetric to
// leading order, and a position error eps at the branch point splits an m-fold
// eigenvalue crossing by eps^{1/m}, so the cluster cutoff must sit above that
// amplified noise floor.
inline bool check_simple_crossing(const PolyMatrix& phi, double R = 1.0) {
    const Poly res = discriminant_resultant(phi);
    if (res.degree() < 1) return !res.is_zero();
    std::vector<cplx> rts = roots(res);

    // greedy clustering of resultant roots
    const double root_cluster = 1e-4 * (1.0 + R);
    std::vector<bool> used(rts.size(), false);
    for (std::size_t i = 0; i < rts.size(); ++i) {
        if (used[i]) continue;
        cplx sum = rts[i];
        int count = 1;
        for (std::size_t j = i + 1; j < rts.size(); ++j) {
            if (!used[j] && std::abs(rts[j] - rts[i]) < root_cluster) {
                used[j] = true;
                sum += rts[j];
                ++count;
            }
        }
        const cplx z0 = sum / double(count);
        if (std::abs(z0) > R * (1.0 + 1e-9)) continue;
        if (max_eigenvalue_cluster(phi.eval(z0), 1e-3) > 2) return false;
    }
    return true;
}

inline bool check_simple_crossing(const BlockHiggsField& phi, double R = 1.0) {
    return check_simple_crossing(phi.poly_matrix(), R);
}

// ---------------------------------------------------------------------------
// gauge fixing

struct SeparationError : std::runtime_error {
    cplx witness;
    SeparationError(const std::string& what, cplx w)
        : std::runtime_error(what + " (witness z = " + fmt17(w) + ")"), witness(w) {}
};

struct DenominatorCheck {
    double boundary_min = 0.0;
    int winding = 0;
    bool certified = false;
    cplx argmin{0.0};
};

inline DenominatorCheck certify_nonvanishing(const Poly& den, double R, int samples = 4096) {
    DenominatorCheck c;
    double prev_arg = 0.0;
    double total_turn = 0.0;
    bool first = true;
    c.boundary_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= samples; ++k) {
        const double th = 2.0 * M_PI * k / samples;
        const cplx z = std::polar(R, th);
        const cplx v = den(z);
        const double av = std::abs(v);
        if (av < c.boundary_min) {
            c.boundary_min = av;
            c.argmin = z;
        }
        const double a = std::arg(v);
        if (!first) {
            double d = a - prev_arg;
            while (d > M_PI) d -= 2.0 * M_PI;
            while (d < -M_PI) d += 2.0 * M_PI;
            total_turn += d;
        }
        prev_arg = a;
        first = false;
    }
    c.winding = static_cast<int>(std::lround(total_turn / (2.0 * M_PI)));
    c.certified = (c.winding == 0) && (c.boundary_min > 1e-6);
    return c;
}

struct RationalEntry {
    Poly num;
    Poly den = Poly::constant(1.0);
    cplx eval(cplx z) const { return num(z) / den(z); }
    bool is_zero() const { return num.is_zero(); }
};

struct GaugeFixResult {
    std::vector<std::vector<RationalEntry>> gamma;  // n x n rational field
    PolyMatrix normal;                              // block-diagonal normal form of phi_dot
    std::vector<RationalEntry> p_hat;               // upper entry per 2x2 block, dz_j convention
    double residual = 0.0;
    std::map<std::string, DenominatorCheck> denominators;

    Mat gamma_at(cplx z) const {
        const int n = static_cast<int>(gamma.size());
        Mat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = gamma[i][j].eval(z);
        return g;
    }

    // nu_inf = (+) sum over 2x2 blocks of -P_hat_j / (4 z_j) sigma3, zeros on
    // the 1x1 part (the diagonal holomorphic residues are removed by the
    // commuting gauge, implemented as their omission here).
    Mat nu_inf_at(const BlockHiggsField& phi, cplx z) const {
        const int n = static_cast<int>(gamma.size());
        Mat m = Mat::Zero(n, n);
        for (int j = 0; j < phi.ell(); ++j) {
            const cplx zj = phi.blocks2()[j].coord(z);
            if (zj == cplx(0.0)) throw std::domain_error("nu_inf_at: z_j = 0");
            const cplx v = -p_hat[j].eval(z) / (4.0 * zj);
            m(phi.offset2(j), phi.offset2(j)) = v;
            m(phi.offset2(j) + 1, phi.offset2(j) + 1) = -v;
        }
        return m;
    }

    JsonWriter to_json() const {
        JsonWriter j;
        j.field("n", gamma.size());
        j.field("residual", residual);
        int idx = 0;
        JsonWriter dens;
        for (auto& [name, chk] : denominators) {
            JsonWriter d;
            d.field("boundary_min", chk.boundary_min);
            d.field("winding", chk.winding);
            d.field("certified", chk.certified);
            dens.object(name, d);
            ++idx;
        }
        j.object("denominators", dens);
        return j;
    }
};

// extract the holomorphic polynomial entries of a (1,0) deformation field
inline PolyMatrix to_poly_matrix(const hml::defalg::MatrixPolyField& f) {
    const int n = f.n();
    std::vector<std::vector<cplx>> entries(n * n);
    for (auto& [jk, m] : f.coeffs()) {
        if (jk.second != 0)
            throw std::invalid_argument("gauge_fix: deformation must be holomorphic");
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                auto& v = entries[a * n + b];
                if (static_cast<int>(v.size()) <= jk.first) v.resize(jk.first + 1, cplx(0.0));
                v[jk.first] = m(a, b);
            }
    }
    PolyMatrix out(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out.at(a, b) = Poly(entries[a * n + b]);
    return out;
}

inline bool check_simple_crossing(const hml::defalg::MatrixPolyField& phi, double R = 1.0) {
    return check_simple_crossing(to_poly_matrix(phi), R);
}

namespace detail {

struct BlockRef {
    bool is2;
    int index;   // index within its list
    int offset;  // row/col offset in the full matrix
    int dim() const { return is2 ? 2 : 1; }
};

inline std::vector<BlockRef> block_refs(const BlockHiggsField& phi) {
    std::vector<BlockRef> refs;
    for (int j = 0; j < phi.ell(); ++j) refs.push_back({true, j, phi.offset2(j)});
    for (std::size_t q = 0; q < phi.blocks1().size(); ++q)
        refs.push_back({false, static_cast<int>(q), phi.offset1(static_cast<int>(q))});
    return refs;
}

}  // namespace detail

// Closed-form infinitesimal gauge fixing. phi_dot must be a holomorphic
// (1,0)-valued polynomial field of the same rank.
inline GaugeFixResult gauge_fix(const BlockHiggsField& phi,
                                const hml::defalg::MatrixPolyField& phi_dot, double R = 1.0) {
    const int n = phi.n();
    if (phi_dot.n() != n) throw std::invalid_argument("gauge_fix: rank mismatch");
    const PolyMatrix q = to_poly_matrix(phi_dot);
    const auto refs = detail::block_refs(phi);

    GaugeFixResult out;
    out.gamma.assign(n, std::vector<RationalEntry>(n));
    out.normal = PolyMatrix(n, n);
    out.p_hat.resize(phi.ell());

    auto certify = [&](const std::string& name, const Poly& den, const std::string& pair_desc) {
        auto it = out.denominators.find(name);
        if (it == out.denominators.end()) {
            DenominatorCheck c = certify_nonvanishing(den, R);
            out.denominators[name] = c;
            if (!c.certified) {
                cplx witness = c.argmin;
                if (c.winding != 0) {
                    for (cplx r : roots(den))
                        if (std::abs(r) <= R) witness = r;
                }
                throw SeparationError("separation violated for " + pair_desc, witness);
            }
        }
    };

    for (std::size_t bi = 0; bi < refs.size(); ++bi) {
        for (std::size_t bj = 0; bj < refs.size(); ++bj) {
            const auto& rb = refs[bi];
            const auto& cb = refs[bj];
            if (bi == bj) {
                if (rb.is2) {
                    const Block2& blk = phi.blocks2()[rb.index];
                    const Poly f = blk.coord;
                    const Poly fp = f.derivative();
                    const Poly p11 = q.at(rb.offset, rb.offset);
                    const Poly p12 = q.at(rb.offset, rb.offset + 1);
                    const Poly p21 = q.at(rb.offset + 1, rb.offset);
                    const Poly p22 = q.at(rb.offset + 1, rb.offset + 1);
                    const Poly p0 = 0.5 * (p11 + p22);
                    const Poly p1 = 0.5 * (p11 - p22);
                    const std::string dn = "f_prime_block" + std::to_string(rb.index);
                    certify(dn, fp, "coordinate map of block " + std::to_string(rb.index));
                    out.gamma[rb.offset][rb.offset] = {(-0.5) * p21, fp};
                    out.gamma[rb.offset][rb.offset + 1] = {p1, fp};
                    out.gamma[rb.offset + 1][rb.offset + 1] = {0.5 * p21, fp};
                    out.normal.at(rb.offset, rb.offset) = p0;
                    out.normal.at(rb.offset + 1, rb.offset + 1) = p0;
                    out.normal.at(rb.offset, rb.offset + 1) = p12 + f * p21;
                    out.p_hat[rb.index] = {p12 + f * p21, fp};
                } else {
                    out.normal.at(rb.offset, rb.offset) = q.at(rb.offset, rb.offset);
                }
                continue;
            }
            // off-diagonal pair (rb rows, cb cols)
            if (!rb.is2 && !cb.is2) {
                const Poly delta = phi.blocks1()[rb.index].lam - phi.blocks1()[cb.index].lam;
                const std::string dn =
                    "delta_1x1_" + std::to_string(rb.index) + "_" + std::to_string(cb.index);
                certify(dn, delta, "1x1 blocks " + std::to_string(rb.index) + "," +
                                       std::to_string(cb.index));
                out.gamma[rb.offset][cb.offset] = {-1.0 * q.at(rb.offset, cb.offset), delta};
            } else if (rb.is2 && !cb.is2) {
                // column case: (delta + N) g = -Q, g = -(delta - N) Q / (delta^2 - w^2)
                const Block2& blk = phi.blocks2()[rb.index];
                const Poly f = blk.coord;
                const Poly fp = f.derivative();
                const Poly a = f * fp, b = fp;
                const Poly delta = blk.lhat - phi.blocks1()[cb.index].lam;
                const Poly den = delta * delta - f * fp * fp;
                const std::string dn =
                    "sep_2x2_" + std::to_string(rb.index) + "_1x1_" + std::to_string(cb.index);
                certify(dn, den, "2x2 block " + std::to_string(rb.index) + " vs 1x1 block " +
                                     std::to_string(cb.index));
                const Poly q0 = q.at(rb.offset, cb.offset);
                const Poly q1 = q.at(rb.offset + 1, cb.offset);
                out.gamma[rb.offset][cb.offset] = {-1.0 * (delta * q0 - a * q1), den};
                out.gamma[rb.offset + 1][cb.offset] = {-1.0 * (delta * q1 - b * q0), den};
            } else if (!rb.is2 && cb.is2) {
                // row case: g (delta + N) = Q, g = Q (delta - N) / (delta^2 - w^2)
                const Block2& blk = phi.blocks2()[cb.index];
                const Poly f = blk.coord;
                const Poly fp = f.derivative();
                const Poly a = f * fp, b = fp;
                const Poly delta = blk.lhat - phi.blocks1()[rb.index].lam;
                const Poly den = delta * delta - f * fp * fp;
                const std::string dn =
                    "sep_2x2_" + std::to_string(cb.index) + "_1x1_" + std::to_string(rb.index);
                certify(dn, den, "2x2 block " + std::to_string(cb.index) + " vs 1x1 block " +
                                     std::to_string(rb.index));
                const Poly q0 = q.at(rb.offset, cb.offset);
                const Poly q1 = q.at(rb.offset, cb.offset + 1);
                // note: here delta = lhat - l, and l g - g B = -(delta g + g N)
                out.gamma[rb.offset][cb.offset] = {delta * q0 - b * q1, den};
                out.gamma[rb.offset][cb.offset + 1] = {delta * q1 - a * q0, den};
            } else {
                // 2x2 vs 2x2: (delta + L) vec G = -vec Q via symbolic adjugate
                const Block2& bj = phi.blocks2()[rb.index];
                const Block2& bk = phi.blocks2()[cb.index];
                const Poly aj = bj.coord * bj.coord.derivative(), bjp = bj.coord.derivative();
                const Poly ak = bk.coord * bk.coord.derivative(), bkp = bk.coord.derivative();
                const Poly delta = bj.lhat - bk.lhat;
                PolyMatrix M(4, 4);
                M.at(0, 0) = delta;
                M.at(0, 1) = -1.0 * bkp;
                M.at(0, 2) = aj;
                M.at(1, 0) = -1.0 * ak;
                M.at(1, 1) = delta;
                M.at(1, 3) = aj;
                M.at(2, 0) = bjp;
                M.at(2, 2) = delta;
                M.at(2, 3) = -1.0 * bkp;
                M.at(3, 1) = bjp;
                M.at(3, 2) = -1.0 * ak;
                M.at(3, 3) = delta;
                const Poly det4 = poly_det(M);
                const std::string dn =
                    "quartic_2x2_" + std::to_string(rb.index) + "_" + std::to_string(cb.index);
                certify(dn, det4, "2x2 blocks " + std::to_string(rb.index) + "," +
                                      std::to_string(cb.index));
                // adjugate columns: cofactors
                Poly qv[4] = {q.at(rb.offset, cb.offset), q.at(rb.offset, cb.offset + 1),
                              q.at(rb.offset + 1, cb.offset), q.at(rb.offset + 1, cb.offset + 1)};
                for (int gi = 0; gi < 4; ++gi) {
                    Poly num;
                    for (int m = 0; m < 4; ++m) {
                        // cofactor C_{m,gi} of M
                        PolyMatrix minor(3, 3);
                        int rr = 0;
                        for (int i = 0; i < 4; ++i) {
                            if (i == m) continue;
                            int cc = 0;
                            for (int j = 0; j < 4; ++j) {
                                if (j == gi) continue;
                                minor.at(rr, cc++) = M.at(i, j);
                            }
                            ++rr;
                        }
                        Poly cof = poly_det(minor);
                        if ((m + gi) % 2 == 1) cof = -cof;
                        num = num - cof * qv[m];  // G = -M^{-1} Q = -adj(M) Q / det
                    }
                    const int ro = rb.offset + gi / 2;
                    const int co = cb.offset + gi % 2;
                    out.gamma[ro][co] = {num, det4};
                }
            }
        }
    }

    // residual on a sample grid
    const PolyMatrix phim = phi.poly_matrix();
    double worst = 0.0;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            const cplx z(-0.9 + 0.45 * a, -0.9 + 0.45 * b);
            if (std::abs(z) > R) continue;
            const Mat pv = phim.eval(z);
            const Mat gv = out.gamma_at(z);
            const Mat res = q.eval(z) + (pv * gv - gv * pv) - out.normal.eval(z);
            worst = std::max(worst, res.cwiseAbs().maxCoeff());
        }
    out.residual = worst;
    return out;
}

// Pointwise dense least-squares oracle for the off-block entries of gamma:
// for each off-diagonal block pair solve phi_J G - G phi_K = -phi_dot_{JK}
// at z and compare with the closed form. Returns the worst deviation.
inline double gauge_fix_oracle_deviation(const BlockHiggsField& phi,
                                         const hml::defalg::MatrixPolyField& phi_dot,
                                         const GaugeFixResult& fix,
                                         const std::vector<cplx>& samples) {
    const auto refs = detail::block_refs(phi);
    const PolyMatrix phim = phi.poly_matrix();
    const PolyMatrix q = to_poly_matrix(phi_dot);
    double worst = 0.0;
    for (cplx z : samples) {
        const Mat pv = phim.eval(z);
        const Mat qv = q.eval(z);
        for (std::size_t bi = 0; bi < refs.size(); ++bi)
            for (std::size_t bj = 0; bj < refs.size(); ++bj) {
                if (bi == bj) continue;
                const auto& rb = refs[bi];
                const auto& cb = refs[bj];
                const int dr = rb.dim(), dc = cb.dim();
                const Mat A = pv.block(rb.offset, rb.offset, dr, dr);
                const Mat B = pv.block(cb.offset, cb.offset, dc, dc);
                Eigen::MatrixXcd op(dr * dc, dr * dc);
                for (int c = 0; c < dr * dc; ++c) {
                    Mat E = Mat::Zero(dr, dc);
                    E(c / dc, c % dc) = 1.0;
                    const Mat L = A * E - E * B;
                    for (int rr = 0; rr < dr; ++rr)
                        for (int cc = 0; cc < dc; ++cc) op(rr * dc + cc, c) = L(rr, cc);
                }
                Eigen::VectorXcd rhs(dr * dc);
                for (int rr = 0; rr < dr; ++rr)
                    for (int cc = 0; cc < dc; ++cc)
                        rhs(rr * dc + cc) = -qv(rb.offset + rr, cb.offset + cc);
                const Eigen::VectorXcd g = op.colPivHouseholderQr().solve(rhs);
                for (int rr = 0; rr < dr; ++rr)
                    for (int cc = 0; cc < dc; ++cc) {
                        const cplx closed = fix.gamma[rb.offset + rr][cb.offset + cc].eval(z);
                        worst = std::max(worst, std::abs(closed - g(rr * dc + cc)));
                    }
            }
    }
    return worst;
}

// First-order variation of the coefficients of prod_i (x - lambda_i) under
// lambda_i -> lambda_i + eps lambda_dot_i: the polynomial
// -sum_i lambda_dot_i prod_{k != i} (x - lambda_k).
inline Poly roots_to_coeffs_deriv(const std::vector<cplx>& lambdas,
                                  const std::vector<cplx>& lambda_dots) {
    if (lambdas.size() != lambda_dots.size())
        throw std::invalid_argument("roots_to_coeffs_deriv: size mismatch");
    Poly acc;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        std::vector<cplx> others;
        for (std::size_t k = 0; k < lambdas.size(); ++k)
            if (k != i) others.push_back(lambdas[k]);
        acc = acc - lambda_dots[i] * poly_from_roots(others);
    }
    return acc;
}

// Evaluation matrix [prod_{k != i} (x_j - lambda_k)]_{j,i}; nonsingular for
// distinct lambdas, which is the injectivity statement behind the vertical
// deformation criterion.
inline Mat roots_to_coeffs_eval_matrix(const std::vector<cplx>& lambdas,
                                       const std::vector<cplx>& probes) {
    const int n = static_cast<int>(lambdas.size());
    Mat m(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            cplx acc(1.0);
            for (int k = 0; k < n; ++k)
                if (k != i) acc *= (probes[j] - lambdas[k]);
            m(j, i) = acc;
        }
    return m;
}

}  // namespace hml::sunform
