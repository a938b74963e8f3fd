#include "pnv/multivector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace pnv {

void mv_wedge1_acc(int dim, const double* w, const double* v, double* out) {
    const unsigned n = 1u << dim;
    for (int r = 0; r < dim; ++r) {
        if (w[r] == 0.0) continue;
        const unsigned bit = 1u << r;
        for (unsigned m = 0; m < n; ++m) {
            if (m & bit) continue;
            out[m | bit] += w[r] * insert_sign(m, r) * v[m];
        }
    }
}

void mv_interior_acc(int dim, const double* X, const double* v, double* out) {
    const unsigned n = 1u << dim;
    for (int r = 0; r < dim; ++r) {
        if (X[r] == 0.0) continue;
        const unsigned bit = 1u << r;
        for (unsigned m = 0; m < n; ++m) {
            if (!(m & bit)) continue;
            out[m & ~bit] += X[r] * insert_sign(m & ~bit, r) * v[m];
        }
    }
}

void mv_clifford_acc(int dim, const double* X, const double* g, const double* v,
                     double* out) {
    double flat[9] = {};
    for (int nu = 0; nu < dim; ++nu) {
        double a = 0.0;
        for (int mu = 0; mu < dim; ++mu) a += g[mu * dim + nu] * X[mu];
        flat[nu] = a;
    }
    mv_wedge1_acc(dim, flat, v, out);
    double neg[9] = {};
    for (int r = 0; r < dim; ++r) neg[r] = -X[r];
    mv_interior_acc(dim, neg, v, out);
}

MultiVector wedge1(const std::vector<double>& oneform, const MultiVector& v) {
    MultiVector out(v.dim);
    mv_wedge1_acc(v.dim, oneform.data(), v.c.data(), out.c.data());
    return out;
}

MultiVector interior(const std::vector<double>& X, const MultiVector& v) {
    MultiVector out(v.dim);
    mv_interior_acc(v.dim, X.data(), v.c.data(), out.c.data());
    return out;
}

MultiVector clifford_multiply(const std::vector<double>& X, const MultiVector& v,
                              const std::vector<double>& g) {
    MultiVector out(v.dim);
    mv_clifford_acc(v.dim, X.data(), g.data(), v.c.data(), out.c.data());
    return out;
}

double lambda_inner(const MultiVector& a, const MultiVector& b) {
    double s = 0.0;
    for (int i = 0; i < a.ncomp(); ++i) s += a.c[i] * b.c[i];
    return s;
}

std::vector<double> clifford_matrix(int dim, const std::vector<double>& X,
                                    const std::vector<double>& g) {
    const int n = 1 << dim;
    std::vector<double> mat(std::size_t(n) * n, 0.0);
    std::vector<double> basis(n, 0.0), col(n, 0.0);
    for (int j = 0; j < n; ++j) {
        basis.assign(n, 0.0);
        basis[j] = 1.0;
        col.assign(n, 0.0);
        mv_clifford_acc(dim, X.data(), g.data(), basis.data(), col.data());
        for (int i = 0; i < n; ++i) mat[std::size_t(i) * n + j] = col[i];
    }
    return mat;
}

Frame gram_schmidt_frame(int dim, const double* g, bool lorentzian) {
    if (dim < 1 || dim > 9)
        throw std::invalid_argument("gram_schmidt_frame: dim out of range");
    Frame f;
    f.dim = dim;
    // Rows of v hold the current candidate legs in coordinate components.
    double v[9][9] = {};
    for (int mu = 0; mu < dim; ++mu) v[mu][mu] = 1.0;

    auto inner = [&](const double* a, const double* b) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) s += g[i * dim + j] * a[i] * b[j];
        return s;
    };

    constexpr double kTol = 1e-12;
    for (int mu = 0; mu < dim; ++mu) {
        for (int nu = 0; nu < mu; ++nu) {
            const double proj = f.eps[nu] * inner(v[mu], &f.zeta[nu * dim]);
            for (int r = 0; r < dim; ++r) v[mu][r] -= proj * f.zeta[nu * dim + r];
        }
        const double q = inner(v[mu], v[mu]);
        const bool timelike = lorentzian && mu == 0;
        if (timelike) {
            if (q >= -kTol)
                throw std::domain_error(
                    "gram_schmidt_frame: leg 0 is not timelike (g(v,v) = " +
                    std::to_string(q) + ")");
            f.eps[mu] = -1.0;
        } else {
            if (q <= kTol)
                throw std::domain_error(
                    "gram_schmidt_frame: leg " + std::to_string(mu) +
                    " is not spacelike (g(v,v) = " + std::to_string(q) + ")");
            f.eps[mu] = 1.0;
        }
        const double inv = 1.0 / std::sqrt(std::abs(q));
        for (int r = 0; r < dim; ++r) f.zeta[mu * dim + r] = v[mu][r] * inv;
    }
    return f;
}

}  // namespace pnv
