#pragma once

// Diagonal hermitian metrics of the local models: entries |z|^{p_i} e^{s_i w(|z|)}
// with a shared radial weight w. Covers h_inf (w = 0), h_model (w = u_t) and
// h_app (w = u_t * cutoff), and their SU(n) block versions. Determinant is 1
// whenever sum p_i = 0 and sum s_i = 0, which all factories maintain.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hml::defalg {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

class HermitianField {
public:
    using RadialFn = std::function<double(double)>;

    struct Entry {
        double power;  // exponent of |z|
        double wsign;  // coefficient of w(|z|) in the exponent
    };

    HermitianField() = default;
    HermitianField(std::vector<Entry> entries, RadialFn w = nullptr, RadialFn w_prime = nullptr)
        : entries_(std::move(entries)), w_(std::move(w)), wp_(std::move(w_prime)) {}

    static HermitianField identity(int n) {
        return HermitianField(std::vector<Entry>(n, Entry{0.0, 0.0}));
    }
    // diag(|z|^{-1/2}, |z|^{1/2})
    static HermitianField h_infinity() {
        return HermitianField({{-0.5, 0.0}, {0.5, 0.0}});
    }
    // diag(|z|^{-1/2} e^{-w}, |z|^{1/2} e^{w}) for a supplied radial weight
    static HermitianField h_weighted(RadialFn w, RadialFn w_prime) {
        return HermitianField({{-0.5, -1.0}, {0.5, 1.0}}, std::move(w), std::move(w_prime));
    }

    int n() const { return static_cast<int>(entries_.size()); }
    bool singular_at_zero() const {
        for (auto& e : entries_)
            if (e.power != 0.0) return true;
        return false;
    }

    double entry(int i, cplx z) const {
        const double r = std::abs(z);
        check_point(z);
        const Entry& e = entries_[i];
        double v = (e.power == 0.0) ? 1.0 : std::pow(r, e.power);
        if (e.wsign != 0.0 && w_) v *= std::exp(e.wsign * w_(r));
        return v;
    }

    Mat value(cplx z) const {
        Mat m = Mat::Zero(n(), n());
        for (int i = 0; i < n(); ++i) m(i, i) = entry(i, z);
        return m;
    }

    // diag of d_z log h_i = p_i/(2z) + s_i w'(|z|) zbar/(2|z|)
    Mat log_deriv_z(cplx z) const {
        check_point(z);
        const double r = std::abs(z);
        const cplx zb = std::conj(z);
        Mat m = Mat::Zero(n(), n());
        for (int i = 0; i < n(); ++i) {
            cplx v = entries_[i].power / (2.0 * z);
            if (entries_[i].wsign != 0.0 && wp_) v += entries_[i].wsign * wp_(r) * zb / (2.0 * r);
            m(i, i) = v;
        }
        return m;
    }

private:
    void check_point(cplx z) const {
        if (z == cplx(0.0) && singular_at_zero())
            throw std::domain_error("HermitianField: metric singular at z = 0");
    }
    std::vector<Entry> entries_;
    RadialFn w_, wp_;
};

// h-hermitian adjoint of a pointwise matrix value: h^{-1} M^dagger h.
inline Mat adjoint_h(const Mat& m, const HermitianField& h, cplx z) {
    const Mat hv = h.value(z);
    Mat out = m.adjoint();
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) out(i, j) *= hv(j, j).real() / hv(i, i).real();
    return out;
}

}  // namespace hml::defalg
