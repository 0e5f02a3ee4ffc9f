#pragma once

// Matrix-valued polynomials in (z, zbar) carrying a form type: 0-form, dz,
// dzbar, or dz^dzbar coefficient. Derivatives and brackets are exact
// coefficient operations, which is what makes the gauge-identity checks
// machine-precision statements instead of discretization statements.
//
// Conventions (flat chart, h0 = Id unless an explicit metric is passed):
//   * a (1,1)-form is stored as its dz^dzbar coefficient;
//   * dbar of (X dz) contributes -d_zbar X to the dz^dzbar coefficient
//     (dzbar^dz = -dz^dzbar), del of (X dzbar) contributes +d_z X;
//   * the graded bracket of mixed 1-forms lands on dz^dzbar with the sign of
//     the written order: [X dz, Y dzbar] -> [X,Y], [X dzbar, Y dz] -> -[X,Y];
//   * dagger (conjugate transpose) swaps dz <-> dzbar and z^j zbar^k -> z^k zbar^j;
//     on (1,1)-forms it also flips the orientation sign.

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace hml::defalg {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

enum class FormType { scalar, form10, form01, form11 };

class MatrixPolyField {
public:
    MatrixPolyField() = default;
    MatrixPolyField(int n, FormType form) : n_(n), form_(form) {}

    static MatrixPolyField monomial(int j, int k, const Mat& m, FormType form = FormType::scalar) {
        MatrixPolyField f(static_cast<int>(m.rows()), form);
        f.add_coeff(j, k, m);
        return f;
    }

    int n() const { return n_; }
    FormType form() const { return form_; }
    const std::map<std::pair<int, int>, Mat>& coeffs() const { return c_; }

    void add_coeff(int j, int k, const Mat& m) {
        if (m.rows() != n_ || m.cols() != n_) throw std::invalid_argument("coefficient size mismatch");
        auto it = c_.find({j, k});
        if (it == c_.end())
            c_[{j, k}] = m;
        else
            it->second += m;
    }

    int degree_bound() const {
        int d = 0;
        for (auto& [jk, m] : c_) d = std::max(d, std::max(jk.first, jk.second));
        return d;
    }

    Mat eval(cplx z) const {
        Mat acc = Mat::Zero(n_, n_);
        const cplx zb = std::conj(z);
        for (auto& [jk, m] : c_) acc += std::pow(z, jk.first) * std::pow(zb, jk.second) * m;
        return acc;
    }

    MatrixPolyField& operator+=(const MatrixPolyField& o) {
        require_same(o);
        for (auto& [jk, m] : o.c_) add_coeff(jk.first, jk.second, m);
        return *this;
    }
    friend MatrixPolyField operator+(MatrixPolyField a, const MatrixPolyField& b) { return a += b; }
    friend MatrixPolyField operator-(const MatrixPolyField& a, const MatrixPolyField& b) {
        return a + (-1.0) * b;
    }
    friend MatrixPolyField operator*(cplx s, const MatrixPolyField& a) {
        MatrixPolyField out(a.n_, a.form_);
        for (auto& [jk, m] : a.c_) out.c_[jk] = s * m;
        return out;
    }
    friend MatrixPolyField operator*(double s, const MatrixPolyField& a) { return cplx(s) * a; }

    // Pointwise matrix product; at most one factor may carry a form.
    friend MatrixPolyField operator*(const MatrixPolyField& a, const MatrixPolyField& b) {
        if (a.form_ != FormType::scalar && b.form_ != FormType::scalar)
            throw std::logic_error("product of two non-scalar forms; use bracket()");
        FormType form = (a.form_ == FormType::scalar) ? b.form_ : a.form_;
        MatrixPolyField out(a.n_, form);
        for (auto& [jk1, m1] : a.c_)
            for (auto& [jk2, m2] : b.c_)
                out.add_coeff(jk1.first + jk2.first, jk1.second + jk2.second, m1 * m2);
        return out;
    }

    double max_abs() const {
        double v = 0.0;
        for (auto& [jk, m] : c_) v = std::max(v, m.cwiseAbs().maxCoeff());
        return v;
    }

    // sl(E)-valued check: every coefficient matrix trace-free within tol
    bool is_traceless(double tol = 1e-14) const {
        for (auto& [jk, m] : c_)
            if (std::abs(m.trace()) > tol) return false;
        return true;
    }

private:
    void require_same(const MatrixPolyField& o) const {
        if (o.n_ != n_ || o.form_ != form_) throw std::logic_error("form/size mismatch in +");
    }
    int n_ = 0;
    FormType form_ = FormType::scalar;
    std::map<std::pair<int, int>, Mat> c_;
};

// d/dzbar. Allowed on 0-forms (-> form01) and (1,0)-forms (-> form11 with the
// orientation sign from dzbar^dz).
inline MatrixPolyField dbar(const MatrixPolyField& f) {
    FormType out_form;
    double sign = 1.0;
    if (f.form() == FormType::scalar) {
        out_form = FormType::form01;
    } else if (f.form() == FormType::form10) {
        out_form = FormType::form11;
        sign = -1.0;
    } else {
        throw std::logic_error("dbar: only 0-forms and (1,0)-forms");
    }
    MatrixPolyField out(f.n(), out_form);
    for (auto& [jk, m] : f.coeffs())
        if (jk.second > 0) out.add_coeff(jk.first, jk.second - 1, sign * double(jk.second) * m);
    return out;
}

// d/dz. Allowed on 0-forms (-> form10) and (0,1)-forms (-> form11).
inline MatrixPolyField del(const MatrixPolyField& f) {
    FormType out_form;
    if (f.form() == FormType::scalar)
        out_form = FormType::form10;
    else if (f.form() == FormType::form01)
        out_form = FormType::form11;
    else
        throw std::logic_error("del: only 0-forms and (0,1)-forms");
    MatrixPolyField out(f.n(), out_form);
    for (auto& [jk, m] : f.coeffs())
        if (jk.first > 0) out.add_coeff(jk.first - 1, jk.second, double(jk.first) * m);
    return out;
}

// Graded bracket. Mixed 1-form brackets land on dz^dzbar with the sign of the
// written order; brackets with a 0-form are plain commutators.
inline MatrixPolyField bracket(const MatrixPolyField& a, const MatrixPolyField& b) {
    auto commutator = [](const MatrixPolyField& x, const MatrixPolyField& y, FormType form,
                         double sign) {
        MatrixPolyField out(x.n(), form);
        for (auto& [jk1, m1] : x.coeffs())
            for (auto& [jk2, m2] : y.coeffs())
                out.add_coeff(jk1.first + jk2.first, jk1.second + jk2.second,
                              sign * (m1 * m2 - m2 * m1));
        return out;
    };
    const FormType fa = a.form(), fb = b.form();
    if (fa == FormType::scalar || fb == FormType::scalar) {
        FormType form = (fa == FormType::scalar) ? fb : fa;
        return commutator(a, b, form, 1.0);
    }
    if (fa == FormType::form10 && fb == FormType::form01)
        return commutator(a, b, FormType::form11, 1.0);
    if (fa == FormType::form01 && fb == FormType::form10)
        return commutator(a, b, FormType::form11, -1.0);
    throw std::logic_error("bracket: unsupported form combination");
}

// h0 = Id hermitian adjoint: z^j zbar^k -> z^k zbar^j with matrix dagger;
// dz <-> dzbar; on (1,1)-forms an extra orientation sign.
inline MatrixPolyField conj_transpose(const MatrixPolyField& f) {
    FormType form = f.form();
    double sign = 1.0;
    if (form == FormType::form10)
        form = FormType::form01;
    else if (form == FormType::form01)
        form = FormType::form10;
    else if (form == FormType::form11)
        sign = -1.0;
    MatrixPolyField out(f.n(), form);
    for (auto& [jk, m] : f.coeffs()) out.add_coeff(jk.second, jk.first, sign * m.adjoint());
    return out;
}

// Coefficient-level hermitian adjoint of a (1,1)-form (no orientation sign):
// the "real part" of L dz^dzbar is (L + coeff_adjoint(L))/2 in this sense.
inline MatrixPolyField coeff_adjoint(const MatrixPolyField& f) {
    if (f.form() != FormType::form11) throw std::logic_error("coeff_adjoint: (1,1)-forms only");
    MatrixPolyField out(f.n(), FormType::form11);
    for (auto& [jk, m] : f.coeffs()) out.add_coeff(jk.second, jk.first, m.adjoint());
    return out;
}

// Hodge star on 1-forms of the flat chart: star dz = -i dz, star dzbar = i dzbar.
inline MatrixPolyField hodge_star(const MatrixPolyField& f) {
    if (f.form() == FormType::form10) return cplx(0.0, -1.0) * f;
    if (f.form() == FormType::form01) return cplx(0.0, 1.0) * f;
    throw std::logic_error("hodge_star: 1-forms only");
}

// sup of the Frobenius-max entry over a square sample grid in [-box, box]^2.
template <typename FieldLike>
double sup_on_grid(const FieldLike& f, double box = 1.0, int per_side = 7) {
    double worst = 0.0;
    for (int a = 0; a < per_side; ++a)
        for (int b = 0; b < per_side; ++b) {
            cplx z(-box + 2.0 * box * a / (per_side - 1), -box + 2.0 * box * b / (per_side - 1));
            worst = std::max(worst, f.eval(z).cwiseAbs().maxCoeff());
        }
    return worst;
}

}  // namespace hml::defalg
