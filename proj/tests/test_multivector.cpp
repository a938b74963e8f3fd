#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pnv/multivector.hpp"

using namespace pnv;

namespace {

std::vector<double> matmul(int n, const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(std::size_t(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const double aik = a[std::size_t(i) * n + k];
            if (aik == 0.0) continue;
            for (int j = 0; j < n; ++j) c[std::size_t(i) * n + j] += aik * b[std::size_t(k) * n + j];
        }
    return c;
}

// Independent wedge oracle on sorted index lists, for cross-checking the
// bitmask sign bookkeeping.
std::map<std::vector<int>, double> wedge_oracle(int a, const std::map<std::vector<int>, double>& v) {
    std::map<std::vector<int>, double> out;
    for (const auto& [idx, coef] : v) {
        std::vector<int> merged{a};
        double sign = 1.0;
        bool dup = false;
        for (int r : idx) {
            if (r == a) dup = true;
            if (r < a) sign = -sign;
        }
        if (dup) continue;
        merged.insert(merged.end(), idx.begin(), idx.end());
        std::sort(merged.begin(), merged.end());
        out[merged] += sign * coef;
    }
    return out;
}

std::vector<double> random_lorentzian(int dim, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    std::vector<double> L(std::size_t(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i) {
        L[std::size_t(i) * dim + i] = 1.0 + std::abs(u(rng));
        for (int j = 0; j < i; ++j) L[std::size_t(i) * dim + j] = u(rng);
    }
    std::vector<double> g(std::size_t(dim) * dim, 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k) {
                const double eps = (k == 0) ? -1.0 : 1.0;
                g[std::size_t(i) * dim + j] +=
                    L[std::size_t(i) * dim + k] * eps * L[std::size_t(j) * dim + k];
            }
    return g;
}

double metric_dot(int dim, const std::vector<double>& g, const std::vector<double>& x,
                  const std::vector<double>& y) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s += g[std::size_t(i) * dim + j] * x[i] * y[j];
    return s;
}

}  // namespace

TEST_CASE("clifford action on simple elements") {
    // dim 2, signature (-,+): c(e_0) 1 = -sigma^0, c(e_1) sigma^1 = -1
    const std::vector<double> g{-1, 0, 0, 1};
    MultiVector one(2);
    one.c[0] = 1.0;
    const MultiVector a = clifford_multiply({1, 0}, one, g);
    CHECK(a.c[0] == 0.0);
    CHECK(a.c[1] == doctest::Approx(-1.0));
    CHECK(a.c[2] == 0.0);
    CHECK(a.c[3] == 0.0);

    MultiVector s1(2);
    s1.c[2] = 1.0;  // sigma^1 (bit 1)
    const MultiVector b = clifford_multiply({0, 1}, s1, g);
    CHECK(b.c[0] == doctest::Approx(-1.0));
    CHECK(b.c[1] == 0.0);
    CHECK(b.c[2] == 0.0);
    CHECK(b.c[3] == 0.0);

    // wedge and interior separately on sigma^0: c(e_0) sigma^0 = -sigma^0 ^ sigma^0 - 1
    MultiVector s0(2);
    s0.c[1] = 1.0;
    const MultiVector w = wedge1({-1, 0}, s0);  // e_0 flat = -sigma^0
    CHECK(w.c[3] == 0.0);
    const MultiVector i0 = interior({1, 0}, s0);
    CHECK(i0.c[0] == doctest::Approx(1.0));
}

TEST_CASE("wedge matches an independent sign oracle") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int dim = 2; dim <= 5; ++dim) {
        MultiVector v(dim);
        std::map<std::vector<int>, double> vm;
        for (unsigned m = 0; m < unsigned(v.ncomp()); ++m) {
            v.c[m] = u(rng);
            std::vector<int> idx;
            for (int r = 0; r < dim; ++r)
                if (m & (1u << r)) idx.push_back(r);
            vm[idx] = v.c[m];
        }
        for (int a = 0; a < dim; ++a) {
            std::vector<double> oneform(dim, 0.0);
            oneform[a] = 1.0;
            const MultiVector w = wedge1(oneform, v);
            const auto wm = wedge_oracle(a, vm);
            for (unsigned m = 0; m < unsigned(v.ncomp()); ++m) {
                std::vector<int> idx;
                for (int r = 0; r < dim; ++r)
                    if (m & (1u << r)) idx.push_back(r);
                const auto it = wm.find(idx);
                const double expect = (it == wm.end()) ? 0.0 : it->second;
                CHECK(w.c[m] == doctest::Approx(expect).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("interior product is the lambda adjoint of the wedge") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int dim = 2; dim <= 5; ++dim) {
        for (int rep = 0; rep < 4; ++rep) {
            MultiVector a(dim), b(dim);
            std::vector<double> X(dim);
            for (auto& c : a.c) c = u(rng);
            for (auto& c : b.c) c = u(rng);
            for (auto& c : X) c = u(rng);
            // <X^flat_euclid wedge a, b> = <a, iota_X b> for the Euclidean pairing
            const MultiVector wa = wedge1(X, a);
            const MultiVector ib = interior(X, b);
            CHECK(lambda_inner(wa, b) == doctest::Approx(lambda_inner(a, ib)).epsilon(1e-12));
        }
    }
}

TEST_CASE("clifford anticommutator closes on the metric") {
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int dim = 2; dim <= 4; ++dim) {
        const auto g = random_lorentzian(dim, rng);
        std::vector<double> X(dim), Y(dim);
        for (auto& c : X) c = u(rng);
        for (auto& c : Y) c = u(rng);
        const double gXY = metric_dot(dim, g, X, Y);
        // check on every basis monomial
        for (unsigned m = 0; m < (1u << dim); ++m) {
            MultiVector v(dim);
            v.c[m] = 1.0;
            const MultiVector xy = clifford_multiply(X, clifford_multiply(Y, v, g), g);
            const MultiVector yx = clifford_multiply(Y, clifford_multiply(X, v, g), g);
            for (int c = 0; c < v.ncomp(); ++c) {
                const double expect = -2.0 * gXY * v.c[c];
                CHECK(std::abs(xy.c[c] + yx.c[c] - expect) < 1e-13);
            }
        }
        // and c(X)c(X) = -g(X,X) Id on a random element
        MultiVector w(dim);
        for (auto& c : w.c) c = u(rng);
        const MultiVector xxw = clifford_multiply(X, clifford_multiply(X, w, g), g);
        for (int c = 0; c < w.ncomp(); ++c)
            CHECK(std::abs(xxw.c[c] + metric_dot(dim, g, X, X) * w.c[c]) < 1e-13);
    }
}

TEST_CASE("orthonormal clifford matrices have signature-fixed symmetry") {
    const int dim = 4;
    const int n = 1 << dim;
    std::vector<double> g(16, 0.0);
    g[0] = -1.0;
    g[5] = g[10] = g[15] = 1.0;
    std::vector<std::vector<double>> M;
    for (int mu = 0; mu < dim; ++mu) {
        std::vector<double> X(dim, 0.0);
        X[mu] = 1.0;
        M.push_back(clifford_matrix(dim, X, g));
    }
    // <c(e_mu) a, b> = -eps_mu <a, c(e_mu) b>: M_0 symmetric, M_i antisymmetric
    for (int mu = 0; mu < dim; ++mu) {
        const double sgn = (mu == 0) ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(M[mu][std::size_t(i) * n + j] -
                               sgn * M[mu][std::size_t(j) * n + i]) < 1e-13);
    }
    // c(e_0) c(e_i) is symmetric
    for (int i = 1; i < dim; ++i) {
        const auto P = matmul(n, M[0], M[i]);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                CHECK(std::abs(P[std::size_t(a) * n + b] - P[std::size_t(b) * n + a]) < 1e-13);
    }
}

TEST_CASE("gram_schmidt_frame on Minkowski is the identity") {
    std::vector<double> g(16, 0.0);
    g[0] = -1.0;
    g[5] = g[10] = g[15] = 1.0;
    const Frame f = gram_schmidt_frame(4, g.data(), true);
    for (int mu = 0; mu < 4; ++mu) {
        CHECK(f.eps[mu] == doctest::Approx(mu == 0 ? -1.0 : 1.0));
        for (int rho = 0; rho < 4; ++rho)
            CHECK(f.z(mu, rho) == doctest::Approx(mu == rho ? 1.0 : 0.0));
    }
}

TEST_CASE("gram_schmidt_frame orthonormalizes generic admissible metrics") {
    std::mt19937 rng(5150);
    for (int rep = 0; rep < 20; ++rep) {
        const int dim = 4;
        const auto g = random_lorentzian(dim, rng);
        const Frame f = gram_schmidt_frame(dim, g.data(), true);
        for (int mu = 0; mu < dim; ++mu) {
            // lower triangular, positive diagonal
            CHECK(f.z(mu, mu) > 0.0);
            for (int rho = mu + 1; rho < dim; ++rho) CHECK(f.z(mu, rho) == 0.0);
            for (int nu = 0; nu < dim; ++nu) {
                std::vector<double> smu(dim), snu(dim);
                for (int r = 0; r < dim; ++r) {
                    smu[r] = f.z(mu, r);
                    snu[r] = f.z(nu, r);
                }
                const double dot = metric_dot(dim, g, smu, snu);
                const double expect = (mu == nu) ? f.eps[mu] : 0.0;
                CHECK(std::abs(dot - expect) < 1e-12);
            }
        }
    }
}

TEST_CASE("gram_schmidt_frame on a block lapse metric puts no time leg in space") {
    const double lam = 1.7;
    std::vector<double> g(16, 0.0);
    g[0] = -lam * lam;
    g[5] = 1.2;
    g[10] = 0.9;
    g[15] = 1.05;
    g[6] = g[9] = 0.1;  // spatial off-diagonal only
    const Frame f = gram_schmidt_frame(4, g.data(), true);
    CHECK(f.z(0, 0) == doctest::Approx(1.0 / lam));
    for (int k = 1; k < 4; ++k) CHECK(f.z(k, 0) == 0.0);
}

TEST_CASE("gram_schmidt_frame rejects inadmissible metrics") {
    std::vector<double> g(16, 0.0);
    g[0] = +1.0;  // leg 0 not timelike
    g[5] = g[10] = g[15] = 1.0;
    CHECK_THROWS_AS(gram_schmidt_frame(4, g.data(), true), std::domain_error);

    std::vector<double> h{-1, 0, 0, -0.5};  // spacelike leg fails
    CHECK_THROWS_AS(gram_schmidt_frame(2, h.data(), true), std::domain_error);

    std::vector<double> e{1, 0, 0, -1};  // euclidean mode wants SPD
    CHECK_THROWS_AS(gram_schmidt_frame(2, e.data(), false), std::domain_error);
}

TEST_CASE("frame pairs c(s_0)c(s_k) satisfy the inversion identity") {
    // (C0 Ck)(C0 Cl) + (C0 Cl)(C0 Ck) = 2 delta_kl Id underlies the closed-form
    // inverse of the gauge-block symmetrizer.
    std::mt19937 rng(1234);
    const int dim = 4;
    const int n = 1 << dim;
    const auto g = random_lorentzian(dim, rng);
    const Frame f = gram_schmidt_frame(dim, g.data(), true);
    std::vector<std::vector<double>> C;
    for (int mu = 0; mu < dim; ++mu) {
        std::vector<double> s(dim);
        for (int r = 0; r < dim; ++r) s[r] = f.z(mu, r);
        C.push_back(clifford_matrix(dim, s, g));
    }
    for (int k = 1; k < dim; ++k)
        for (int l = 1; l < dim; ++l) {
            const auto A = matmul(n, matmul(n, C[0], C[k]), matmul(n, C[0], C[l]));
            const auto B = matmul(n, matmul(n, C[0], C[l]), matmul(n, C[0], C[k]));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double expect = (k == l && i == j) ? 2.0 : 0.0;
                    CHECK(std::abs(A[std::size_t(i) * n + j] + B[std::size_t(i) * n + j] -
                                   expect) < 1e-12);
                }
        }
}
