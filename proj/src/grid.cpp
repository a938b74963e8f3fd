#include "pnv/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pnv {

Grid make_grid(int dim, const std::array<int, 3>& sizes,
               const std::array<double, 3>& lengths) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("make_grid: dim must be 1, 2 or 3, got " +
                                    std::to_string(dim));
    Grid g;
    g.dim = dim;
    for (int a = 0; a < dim; ++a) {
        if (sizes[a] < 8)
            throw std::invalid_argument("make_grid: axis " + std::to_string(a) +
                                        " needs at least 8 points, got " +
                                        std::to_string(sizes[a]));
        if (lengths[a] < 0.0 || !std::isfinite(lengths[a]))
            throw std::invalid_argument("make_grid: axis " + std::to_string(a) +
                                        " length must be positive (or 0 for "
                                        "the default), got " +
                                        std::to_string(lengths[a]));
        g.n[a] = sizes[a];
        g.length[a] = lengths[a] > 0.0 ? lengths[a] : 2.0 * std::numbers::pi;
    }
    return g;
}

Field make_field(const Grid& g, int rank_cov, int rank_con, bool spacetime,
                 bool sym) {
    if (sym && !(rank_cov + rank_con == 2 && (rank_cov == 2 || rank_con == 2)))
        throw std::invalid_argument(
            "make_field: symmetric packing requires a rank-2 tensor of a single "
            "variance");
    Field f;
    f.grid = g;
    f.rank_cov = rank_cov;
    f.rank_con = rank_con;
    f.spacetime = spacetime;
    f.sym = sym;
    const int a = f.adim();
    if (sym) {
        f.ncomp = sym_count(a);
    } else {
        f.ncomp = 1;
        for (int r = 0; r < rank_cov + rank_con; ++r) f.ncomp *= a;
    }
    f.data.assign(g.npts() * static_cast<std::int64_t>(f.ncomp), 0.0);
    return f;
}

Field make_scalar(const Grid& g) { return make_field(g, 0, 0); }

Field make_bundle(const Grid& g, int ncomp) {
    if (ncomp < 1) throw std::invalid_argument("make_bundle: ncomp must be positive");
    Field f = make_field(g, 0, 0);
    f.ncomp = ncomp;
    f.data.assign(g.npts() * static_cast<std::int64_t>(ncomp), 0.0);
    return f;
}

Field sample_scalar(
    const Grid& g,
    const std::function<double(const std::array<double, 3>&)>& f) {
    Field out = make_scalar(g);
    const std::int64_t np = g.npts();
    for (std::int64_t p = 0; p < np; ++p) {
        const auto ix = g.unflatten(p);
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < g.dim; ++a) x[a] = g.coord(ix, a);
        out.data[p] = f(x);
    }
    return out;
}

namespace {

// Applies a centred periodic stencil along `axis`. Offsets are symmetric:
// weights[k] multiplies f(i + offs[k]).
template <int W>
Field apply_stencil(const Field& f, int axis, const std::array<int, W>& offs,
                    const std::array<double, W>& w, double scale) {
    if (axis < 0 || axis >= f.grid.dim)
        throw std::invalid_argument("stencil: axis " + std::to_string(axis) +
                                    " out of range for dim " +
                                    std::to_string(f.grid.dim));
    Field out = f;
    const Grid& g = f.grid;
    const int nc = f.ncomp;
    const int na = g.n[axis];

    // Stride (in points) of one step along `axis`, and the number of
    // contiguous blocks the axis decomposes into.
    std::int64_t stride = 1;
    for (int a = axis + 1; a < g.dim; ++a) stride *= g.n[a];
    const std::int64_t nblocks = g.npts() / (stride * na);

    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::int64_t base = b * stride * na;
        for (int i = 0; i < na; ++i) {
            std::array<std::int64_t, W> src;
            for (int k = 0; k < W; ++k) {
                int j = i + offs[k];
                j -= na * static_cast<int>(std::floor(double(j) / na));
                src[k] = (base + std::int64_t(j) * stride) * nc;
            }
            double* o = out.data.data() + (base + std::int64_t(i) * stride) * nc;
            for (std::int64_t s = 0; s < stride; ++s) {
                for (int c = 0; c < nc; ++c) {
                    double acc = 0.0;
                    for (int k = 0; k < W; ++k)
                        acc += w[k] * f.data[src[k] + s * nc + c];
                    o[s * nc + c] = acc * scale;
                }
            }
        }
    }
    return out;
}

}  // namespace

Field partial_derivative(const Field& f, int axis) {
    const double dx = f.grid.dx(axis);
    return apply_stencil<4>(f, axis, {-2, -1, 1, 2},
                            {1.0, -8.0, 8.0, -1.0}, 1.0 / (12.0 * dx));
}

Field kreiss_oliger(const Field& f, int axis) {
    const double dx = f.grid.dx(axis);
    return apply_stencil<7>(f, axis, {-3, -2, -1, 0, 1, 2, 3},
                            {1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0},
                            1.0 / (64.0 * dx));
}

FieldNorms field_norms(const Field& f) {
    FieldNorms n;
    double sum = 0.0;
    for (double v : f.data) {
        n.linf = std::max(n.linf, std::abs(v));
        sum += v * v;
    }
    n.l2 = f.data.empty() ? 0.0 : std::sqrt(sum / f.data.size());
    return n;
}

}  // namespace pnv
