#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <vector>

namespace pnv {

// Element of the exterior algebra over an ambient space of dimension `dim`
// (up to 9). Coefficients are indexed by bitmask: bit r set means the basis
// covector sigma^r occurs, factors ordered by increasing index.
struct MultiVector {
    int dim = 0;
    std::vector<double> c;

    explicit MultiVector(int d) : dim(d), c(std::size_t(1) << d, 0.0) {}
    int ncomp() const { return 1 << dim; }
};

inline int grade(unsigned mask) { return std::popcount(mask); }

// Parity sign for moving sigma^r past the factors of `mask` below r.
inline double insert_sign(unsigned mask, int r) {
    return (std::popcount(mask & ((1u << r) - 1u)) & 1) ? -1.0 : 1.0;
}

// In-place kernels on raw coefficient arrays (size 1 << dim). `out` is
// accumulated into; callers zero it first.

// out += (w_nu sigma^nu) wedge v
void mv_wedge1_acc(int dim, const double* w, const double* v, double* out);
// out += interior product of the vector X with v
void mv_interior_acc(int dim, const double* X, const double* v, double* out);
// out += c(X) v = (X-flat wedge v) - (X interior v); g is the dense dim x dim
// metric at the point (row-major), used to lower X.
void mv_clifford_acc(int dim, const double* X, const double* g, const double* v,
                     double* out);

MultiVector wedge1(const std::vector<double>& oneform, const MultiVector& v);
MultiVector interior(const std::vector<double>& X, const MultiVector& v);
MultiVector clifford_multiply(const std::vector<double>& X, const MultiVector& v,
                              const std::vector<double>& g);

// Positive definite inner product on the exterior algebra: the Euclidean dot
// of coefficient arrays.
double lambda_inner(const MultiVector& a, const MultiVector& b);

// Dense matrix of c(X) acting on the 2^dim coefficients (row-major).
std::vector<double> clifford_matrix(int dim, const std::vector<double>& X,
                                    const std::vector<double>& g);

// Pseudo-orthonormal frame s_mu = sum_rho zeta[mu][rho] d_rho, lower
// triangular with positive diagonal, g(s_mu, s_nu) = eps_mu delta_{mu nu}.
struct Frame {
    int dim = 0;
    std::array<double, 81> zeta{};  // row-major, zeta[mu*dim + rho]
    std::array<double, 9> eps{};

    double z(int mu, int rho) const { return zeta[mu * dim + rho]; }
};

// Gram-Schmidt on the coordinate basis of a metric given densely at a point.
// `lorentzian` selects the (-,+,...,+) signature (leg 0 timelike); otherwise
// all legs must be spacelike. Throws std::domain_error naming the failing leg
// when the metric is inadmissible.
Frame gram_schmidt_frame(int dim, const double* g, bool lorentzian);

}  // namespace pnv
