#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pnv {

// Periodic uniform grid on a torus, 1 to 3 axes. Axis 0 is the slowest
// index in the flattened point ordering.
struct Grid {
    int dim = 0;
    std::array<int, 3> n{1, 1, 1};
    std::array<double, 3> length{0.0, 0.0, 0.0};

    std::int64_t npts() const {
        std::int64_t p = 1;
        for (int a = 0; a < dim; ++a) p *= n[a];
        return p;
    }
    double dx(int axis) const { return length[axis] / n[axis]; }
    double min_dx() const {
        double m = dx(0);
        for (int a = 1; a < dim; ++a) m = std::min(m, dx(a));
        return m;
    }
    std::array<int, 3> unflatten(std::int64_t p) const {
        std::array<int, 3> ix{0, 0, 0};
        for (int a = dim - 1; a >= 0; --a) {
            ix[a] = static_cast<int>(p % n[a]);
            p /= n[a];
        }
        return ix;
    }
    std::int64_t flatten(const std::array<int, 3>& ix) const {
        std::int64_t p = 0;
        for (int a = 0; a < dim; ++a) p = p * n[a] + ix[a];
        return p;
    }
    double coord(const std::array<int, 3>& ix, int axis) const {
        return ix[axis] * dx(axis);
    }
    bool operator==(const Grid& o) const {
        return dim == o.dim && n == o.n && length == o.length;
    }
};

Grid make_grid(int dim, const std::array<int, 3>& sizes,
               const std::array<double, 3>& lengths = {0.0, 0.0, 0.0});

// Dense tensor field over a grid. Components are stored per point
// (index = point * ncomp + comp). Slots are ordered contravariant first,
// then covariant, row-major over slots. A rank-2 field with a single
// variance may be stored symmetric-packed (upper triangle, row-major).
struct Field {
    Grid grid;
    int rank_cov = 0;
    int rank_con = 0;
    bool spacetime = false;  // components run over dim+1 ambient indices
    bool sym = false;
    int ncomp = 1;
    std::vector<double> data;

    int adim() const { return grid.dim + (spacetime ? 1 : 0); }
    int rank() const { return rank_cov + rank_con; }

    double& at(std::int64_t p, int c) { return data[p * ncomp + c]; }
    double at(std::int64_t p, int c) const { return data[p * ncomp + c]; }
    double* pt(std::int64_t p) { return data.data() + p * ncomp; }
    const double* pt(std::int64_t p) const { return data.data() + p * ncomp; }

    // Row-major component offset for a full (non-packed) tensor.
    int cidx(std::initializer_list<int> idx) const {
        int c = 0;
        const int a = adim();
        for (int i : idx) c = c * a + i;
        return c;
    }
};

// Upper-triangle row-major offset for a symmetric pair (i, j) in dimension a.
inline int sym_index(int i, int j, int a) {
    if (i > j) std::swap(i, j);
    return i * a - i * (i - 1) / 2 + (j - i);
}
inline int sym_count(int a) { return a * (a + 1) / 2; }

Field make_field(const Grid& g, int rank_cov, int rank_con,
                 bool spacetime = false, bool sym = false);
Field make_scalar(const Grid& g);
// Rank-0 field carrying `ncomp` raw components per point (multivector
// coefficients, packed state vectors).
Field make_bundle(const Grid& g, int ncomp);

// Fills a scalar field from a callable of the point coordinates.
Field sample_scalar(const Grid& g,
                    const std::function<double(const std::array<double, 3>&)>& f);

// Fourth-order centred first derivative along a grid axis, all components.
Field partial_derivative(const Field& f, int axis);

// Sixth-order Kreiss-Oliger stencil [1,-6,15,-20,15,-6,1]/(64 dx) along one
// axis; adding sigma times the result to a right-hand side damps the highest
// modes (on exp(i k x) it multiplies by -sin^6(k dx / 2)/dx <= 0).
Field kreiss_oliger(const Field& f, int axis);

struct FieldNorms {
    double linf = 0.0;
    double l2 = 0.0;
};
FieldNorms field_norms(const Field& f);

}  // namespace pnv
