#pragma once

// Planar spectral-curve periods for the rank-2 case: zeros of the quadratic
// differential q2 dz^2, straight-segment saddle-connection periods
// Z = int sqrt(q2) dz with a continuously tracked branch, flat lengths
// M = int |sqrt(q2)| |dz|, and the leading Bessel correction envelope
// (2 t^2 / pi) K0(2 t |Z_gamma0|) with |Z_gamma0| = 2M (segment periods are
// doubled to cycle periods on the double cover; recorded convention).

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "hml/bessel.hpp"
#include "hml/io.hpp"
#include "hml/poly.hpp"
#include "hml/quadrature.hpp"

namespace hml::spectral {

using cplx = std::complex<double>;

struct QuadraticDifferential {
    Poly q2;
    std::vector<cplx> zeros;
    bool simple = false;  // all pairwise root distances > 1e-8

    static QuadraticDifferential from_poly(const Poly& p) {
        QuadraticDifferential q;
        q.q2 = p;
        q.zeros = roots(p);
        q.simple = true;
        for (std::size_t i = 0; i < q.zeros.size(); ++i)
            for (std::size_t j = i + 1; j < q.zeros.size(); ++j)
                if (std::abs(q.zeros[i] - q.zeros[j]) <= 1e-8) q.simple = false;
        return q;
    }
};

struct BranchTrackingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PeriodEntry {
    int i, j;
    cplx Z;    // segment period int sqrt(q2) dz from zero i to zero j
    double M;  // flat length int |sqrt(q2)| |dz|
};

struct PeriodTable {
    std::vector<PeriodEntry> pairs;  // all ordered pairs i != j; Z_ji = -Z_ij
    double M = 0.0;                  // min over pairs of M_ij
    int min_i = -1, min_j = -1;
    // Cycle periods on the double cover are twice the segment values; the
    // shortest-geodesic modulus used downstream is |Z_{gamma0}| = 2 M.
    double abs_Z_gamma0() const { return 2.0 * M; }

    const PeriodEntry& entry(int i, int j) const {
        for (auto& e : pairs)
            if (e.i == i && e.j == j) return e;
        throw std::out_of_range("PeriodTable::entry");
    }

    void write_csv(const std::string& path, const std::vector<std::string>& config = {}) const {
        CsvWriter csv(path);
        for (auto& line : config) csv.comment(line);
        csv.header("i,j,re_Z,im_Z,M_ij");
        for (auto& e : pairs) csv.row({double(e.i), double(e.j), e.Z.real(), e.Z.imag(), e.M});
    }

    JsonWriter to_json() const {
        JsonWriter j;
        j.field("n_pairs", pairs.size());
        j.field("M", M);
        j.field("min_i", min_i);
        j.field("min_j", min_j);
        j.field("abs_Z_gamma0", abs_Z_gamma0());
        return j;
    }
};

namespace detail {

struct SegmentResult {
    cplx Z;
    double M;
    double max_phase_step;
};

// Integrate sqrt(q2) along the straight segment between two zeros. The
// substitution s = (1 - cos(phi))/2 absorbs the square-root vanishing at both
// endpoints; the branch is continued node to node by sign choice.
inline SegmentResult integrate_segment(const Poly& q2, cplx za, cplx zb, int n_panels = 16,
                                       int n_gauss = 32) {
    const auto& rule = gauss_legendre(n_gauss);
    const cplx dz = zb - za;
    SegmentResult out{cplx(0.0), 0.0, 0.0};
    cplx w_prev(0.0);
    bool have_prev = false;
    for (int p = 0; p < n_panels; ++p) {
        const double lo = M_PI * p / n_panels, hi = M_PI * (p + 1) / n_panels;
        const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
        for (int g = 0; g < n_gauss; ++g) {
            const double phi = mid + rad * rule.x[g];
            const double s = 0.5 * (1.0 - std::cos(phi));
            const double ds_dphi = 0.5 * std::sin(phi);
            const cplx z = za + s * dz;
            cplx w = std::sqrt(q2(z));
            if (have_prev) {
                if (std::abs(w - w_prev) > std::abs(w + w_prev)) w = -w;
                if (std::abs(w) > 0 && std::abs(w_prev) > 0) {
                    double dphase = std::abs(std::arg(w / w_prev));
                    out.max_phase_step = std::max(out.max_phase_step, dphase);
                    if (dphase > 0.5 * M_PI)
                        throw BranchTrackingError("branch tracking lost continuity");
                }
            }
            w_prev = w;
            have_prev = true;
            const double weight = rule.w[g] * rad * ds_dphi;
            out.Z += w * dz * weight;
            out.M += std::abs(w) * std::abs(dz) * weight;
        }
    }
    return out;
}

inline double point_segment_distance(cplx p, cplx a, cplx b) {
    const cplx ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double s = ((p - a) * std::conj(ab)).real() / len2;
    s = std::min(1.0, std::max(0.0, s));
    return std::abs(p - (a + s * ab));
}

}  // namespace detail

// Periods for every zero pair. Throws BranchTrackingError when a third zero
// obstructs a segment (within 1e-6), naming the obstruction.
inline PeriodTable periods(const QuadraticDifferential& q) {
    if (!q.simple) throw std::invalid_argument("periods: zeros must be simple");
    PeriodTable table;
    const int n = static_cast<int>(q.zeros.size());
    if (n < 2) return table;  // no saddle connections

    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double d = detail::point_segment_distance(q.zeros[k], q.zeros[i], q.zeros[j]);
                if (d < 1e-6)
                    throw BranchTrackingError("segment " + std::to_string(i) + "-" +
                                              std::to_string(j) + " obstructed by zero " +
                                              std::to_string(k));
            }
            const auto seg = detail::integrate_segment(q.q2, q.zeros[i], q.zeros[j]);
            table.pairs.push_back({i, j, seg.Z, seg.M});
            table.pairs.push_back({j, i, -seg.Z, seg.M});
        }
    }
    for (auto& e : table.pairs) {
        if (table.min_i < 0 || e.M < table.M) {
            table.M = e.M;
            table.min_i = e.i;
            table.min_j = e.j;
        }
    }
    return table;
}

// Scalar envelope of the leading correction: (2 t^2 / pi) K0(2 t |Z_gamma0|).
// The integer weight and the tensor direction d|Z|^2 are not modeled.
inline double gmn_envelope(const PeriodTable& table, double t) {
    if (table.pairs.empty()) throw std::invalid_argument("gmn_envelope: empty period table");
    if (!(t > 0.0)) throw std::invalid_argument("gmn_envelope: t must be positive");
    return 2.0 * t * t / M_PI * hml::specfn::k0(2.0 * t * table.abs_Z_gamma0());
}

}  // namespace hml::spectral
