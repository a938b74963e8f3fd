// Shared builders for the test suites: flat and manufactured states, probe
// lookups, and the two-resolution convergence check.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

#include "doctest.h"
#include "oracle_data/mms_oracle.hpp"
#include "pnv/evolver.hpp"
#include "pnv/initial_data.hpp"

namespace testsup {

using namespace pnv;

// Halving the spacing must shrink the error by at least a factor 10 (a
// fourth-order scheme gives 16), with an absolute floor for roundoff.
inline void check_fourth_order_pair(double coarse, double fine,
                                    double scale = 1.0) {
    CHECK(coarse < 0.2 * scale);
    CHECK(fine < coarse / 10.0 + 1e-11 * scale);
}

inline MetricField flat_metric(const Grid& grid) {
    Field g = make_field(grid, 2, 0, false, true);
    for (std::int64_t p = 0; p < grid.npts(); ++p)
        for (int i = 0; i < grid.dim; ++i) g.at(p, sym_index(i, i, grid.dim)) = 1.0;
    return make_metric(std::move(g));
}

inline Field const_scalar(const Grid& grid, double v) {
    Field f = make_scalar(grid);
    for (std::int64_t p = 0; p < grid.npts(); ++p) f.at(p, 0) = v;
    return f;
}

// Minkowski state with the flat parallel null field alpha = -sigma^0 - sigma^1.
inline CauchyState flat_state(const Grid& grid) {
    const int sd = grid.dim + 1;
    Field g = make_field(grid, 2, 0, true, true);
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        g.at(p, sym_index(0, 0, sd)) = -1.0;
        for (int i = 1; i < sd; ++i) g.at(p, sym_index(i, i, sd)) = 1.0;
    }
    CauchyState st;
    st.gbar = make_metric(std::move(g), true);
    for (int i = 0; i < grid.dim; ++i)
        st.dgbar[i] = make_field(grid, 2, 0, true, true);
    st.k = make_field(grid, 2, 0, true, true);
    st.alpha = make_bundle(grid, 1 << sd);
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        st.alpha.at(p, 1) = -1.0;
        st.alpha.at(p, 2) = -1.0;
    }
    st.Z = make_field(grid, 2, 0, false, true);
    return st;
}

inline BackgroundData flat_background(const Grid& grid) {
    return make_background_data(
        background_metric(const_scalar(grid, 1.0), flat_metric(grid)));
}

inline double linf_diff(const Field& a, const Field& b) {
    REQUIRE(a.data.size() == b.data.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

inline double tangent_linf(const StateTangent& t, int dim) {
    double m = field_norms(t.dt_gbar).linf;
    for (int i = 0; i < dim; ++i) m = std::max(m, field_norms(t.dt_dgbar[i]).linf);
    m = std::max(m, field_norms(t.dt_k).linf);
    m = std::max(m, field_norms(t.dt_alpha).linf);
    return std::max(m, field_norms(t.dt_Z).linf);
}

struct MmsState {
    CauchyState st;
    BackgroundData bg;
};

// Manufactured slice at t = 0 on an n^3 torus; the derivative blocks are the
// grid derivatives of the sampled metric.
inline MmsState mms_state(int n) {
    const Grid grid = make_grid(3, {n, n, n});
    Field g = make_field(grid, 2, 0, true, true);
    Field k = make_field(grid, 2, 0, true, true);
    Field alpha = make_bundle(grid, 16);
    Field Z = make_field(grid, 2, 0, false, true);
    Field lam = make_scalar(grid);
    Field gt = make_field(grid, 2, 0, false, true);
    double buf[16], a4[4], z9[9];
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        const auto ix = grid.unflatten(p);
        const double y1 = grid.coord(ix, 0), y2 = grid.coord(ix, 1),
                     y3 = grid.coord(ix, 2);
        mms::gbar(0.0, y1, y2, y3, buf);
        for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b) g.at(p, sym_index(a, b, 4)) = buf[a * 4 + b];
        mms::k(0.0, y1, y2, y3, buf);
        for (int a = 0; a < 4; ++a)
            for (int b = a; b < 4; ++b) k.at(p, sym_index(a, b, 4)) = buf[a * 4 + b];
        mms::alpha1(0.0, y1, y2, y3, a4);
        for (int nu = 0; nu < 4; ++nu) alpha.at(p, 1 << nu) = a4[nu];
        mms::z(0.0, y1, y2, y3, z9);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) Z.at(p, sym_index(i, j, 3)) = z9[i * 3 + j];
        lam.at(p, 0) = mms::lambda_bg(y1, y2, y3);
        mms::gtilde(y1, y2, y3, z9);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) gt.at(p, sym_index(i, j, 3)) = z9[i * 3 + j];
    }
    MmsState d;
    d.st.t = 0.0;
    d.st.gbar = make_metric(std::move(g), true);
    for (int i = 0; i < 3; ++i) d.st.dgbar[i] = partial_derivative(d.st.gbar.g, i);
    d.st.k = std::move(k);
    d.st.alpha = std::move(alpha);
    d.st.Z = std::move(Z);
    d.bg = make_background_data(background_metric(lam, make_metric(std::move(gt))));
    return d;
}

inline std::int64_t probe_index(const Grid& grid, const double* pt) {
    std::array<int, 3> ix{0, 0, 0};
    for (int a = 0; a < grid.dim; ++a)
        ix[a] = static_cast<int>(std::llround(pt[a] / grid.dx(a))) % grid.n[a];
    return grid.flatten(ix);
}

inline double oneform_err(const Field& f, std::int64_t p, const double* ref) {
    double m = 0.0;
    for (int nu = 0; nu < 4; ++nu) m = std::max(m, std::abs(f.at(p, nu) - ref[nu]));
    return m;
}

inline double packed16_err(const Field& f, std::int64_t p, const double* ref) {
    double m = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            m = std::max(m, std::abs(f.at(p, sym_index(a, b, 4)) - ref[a * 4 + b]));
    return m;
}

inline double packed9_err(const Field& f, std::int64_t p, const double* ref) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m = std::max(m, std::abs(f.at(p, sym_index(i, j, 3)) - ref[i * 3 + j]));
    return m;
}

}  // namespace testsup
