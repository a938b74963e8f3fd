#include "pnv/constraint.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace pnv {

namespace {

void fill_delta(int fd, double* h) {
    for (int c = 0; c < sym_count(fd); ++c) h[c] = 0.0;
    for (int i = 0; i < fd; ++i) h[sym_index(i, i, fd)] = 1.0;
}

std::vector<MetricFamily> make_registry() {
    std::vector<MetricFamily> reg;

    MetricFamily flat;
    flat.name = "flat_static";
    flat.fiber_dim = 2;
    flat.sup_u = 1.0;
    flat.h = [](double, const double*, int fd, double* h) { fill_delta(fd, h); };
    flat.hdot = [](double, const double*, int fd, double* h) {
        for (int c = 0; c < sym_count(fd); ++c) h[c] = 0.0;
    };
    flat.default_u = [](double, const double*) { return 1.0; };
    reg.push_back(flat);

    MetricFamily conf;
    conf.name = "conformal_exp";
    conf.fiber_dim = 3;
    conf.s_periodic = false;
    conf.sup_u = 1.0;
    conf.h = [](double s, const double*, int fd, double* h) {
        fill_delta(fd, h);
        const double f = std::exp(2.0 * s);
        for (int c = 0; c < sym_count(fd); ++c) h[c] *= f;
    };
    conf.hdot = [](double s, const double*, int fd, double* h) {
        fill_delta(fd, h);
        const double f = 2.0 * std::exp(2.0 * s);
        for (int c = 0; c < sym_count(fd); ++c) h[c] *= f;
    };
    conf.default_u = [](double, const double*) { return 1.0; };
    reg.push_back(conf);

    MetricFamily aniso;
    aniso.name = "anisotropic_torus";
    aniso.fiber_dim = 2;
    aniso.sup_u = 1.15;
    aniso.h = [](double s, const double* x, int fd, double* h) {
        for (int i = 0; i < fd; ++i)
            h[sym_index(i, i, fd)] = 1.0 + 0.2 * std::sin(s + x[i]);
        for (int i = 0; i < fd; ++i)
            for (int j = i + 1; j < fd; ++j)
                h[sym_index(i, j, fd)] = 0.05 * std::sin(s) * std::cos(x[i] - x[j]);
    };
    aniso.hdot = [](double s, const double* x, int fd, double* h) {
        for (int i = 0; i < fd; ++i)
            h[sym_index(i, i, fd)] = 0.2 * std::cos(s + x[i]);
        for (int i = 0; i < fd; ++i)
            for (int j = i + 1; j < fd; ++j)
                h[sym_index(i, j, fd)] = 0.05 * std::cos(s) * std::cos(x[i] - x[j]);
    };
    aniso.default_u = [](double s, const double* x) {
        return 1.0 + 0.15 * std::cos(s) * std::sin(x[0]);
    };
    reg.push_back(aniso);

    MetricFamily wave;
    wave.name = "brinkmann_wave";
    wave.fiber_dim = 2;
    wave.sup_u = 1.0;
    wave.h = [](double s, const double*, int fd, double* h) {
        fill_delta(fd, h);
        const double f = 1.0 + 0.1 * std::sin(s);
        for (int c = 0; c < sym_count(fd); ++c) h[c] *= f;
    };
    wave.hdot = [](double s, const double*, int fd, double* h) {
        fill_delta(fd, h);
        const double f = 0.1 * std::cos(s);
        for (int c = 0; c < sym_count(fd); ++c) h[c] *= f;
    };
    wave.default_u = [](double, const double*) { return 1.0; };
    reg.push_back(wave);

    MetricFamily cfib;
    cfib.name = "conformal_fiber";
    cfib.fiber_dim = 2;
    cfib.sup_u = 1.0;
    cfib.h = [](double, const double* x, int fd, double* h) {
        fill_delta(fd, h);
        const double f =
            std::exp(2.0 * (0.3 * std::sin(x[0]) + 0.2 * std::cos(x[fd > 1 ? 1 : 0])));
        for (int c = 0; c < sym_count(fd); ++c) h[c] *= f;
    };
    cfib.hdot = [](double, const double*, int fd, double* h) {
        for (int c = 0; c < sym_count(fd); ++c) h[c] = 0.0;
    };
    cfib.default_u = [](double, const double*) { return 1.0; };
    reg.push_back(cfib);

    return reg;
}

}  // namespace

const std::vector<MetricFamily>& family_registry() {
    static const std::vector<MetricFamily> reg = make_registry();
    return reg;
}

MetricFamily find_family(const std::string& name, int fiber_dim) {
    for (const MetricFamily& fam : family_registry()) {
        if (fam.name != name) continue;
        MetricFamily out = fam;
        if (fiber_dim > 0) out.fiber_dim = fiber_dim;
        return out;
    }
    throw std::invalid_argument("find_family: unknown family \"" + name + "\"");
}

Field sample_family_u(const MetricFamily& fam, const Grid& grid) {
    Field u = make_scalar(grid);
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        const auto ix = grid.unflatten(p);
        double x[3] = {};
        for (int a = 1; a < grid.dim; ++a) x[a - 1] = grid.coord(ix, a);
        u.at(p, 0) = fam.default_u(grid.coord(ix, 0), x);
    }
    return u;
}

NormalFormData build_normal_form(const Field& u, const MetricFamily& fam,
                                 const Grid& grid) {
    const int d = grid.dim;
    if (d != fam.fiber_dim + 1)
        throw std::invalid_argument(
            "build_normal_form: grid dim " + std::to_string(d) +
            " does not match fiber dim " + std::to_string(fam.fiber_dim) + " + 1");
    if (u.rank() != 0 || u.grid.npts() != grid.npts())
        throw std::invalid_argument("build_normal_form: u must be a grid scalar");
    const std::int64_t np = grid.npts();
    for (std::int64_t p = 0; p < np; ++p)
        if (!(u.at(p, 0) > 0.0))
            throw std::domain_error("build_normal_form: u must be positive");

    const int fd = fam.fiber_dim;
    Field g = make_field(grid, 2, 0, false, true);
    Field hdot_field = make_bundle(grid, sym_count(fd));
    double hbuf[9], x[3];
    for (std::int64_t p = 0; p < np; ++p) {
        const auto ix = grid.unflatten(p);
        const double s = grid.coord(ix, 0);
        for (int a = 1; a < d; ++a) x[a - 1] = grid.coord(ix, a);
        const double uu = u.at(p, 0);
        g.at(p, sym_index(0, 0, d)) = 1.0 / (uu * uu);
        fam.h(s, x, fd, hbuf);
        for (int i = 0; i < fd; ++i)
            for (int j = i; j < fd; ++j)
                g.at(p, sym_index(i + 1, j + 1, d)) = hbuf[sym_index(i, j, fd)];
        if (fam.hdot) fam.hdot(s, x, fd, hdot_field.pt(p));
    }
    if (!fam.hdot) {
        Field hsample = make_bundle(grid, sym_count(fd));
        for (std::int64_t p = 0; p < np; ++p) {
            const auto ix = grid.unflatten(p);
            const double s = grid.coord(ix, 0);
            for (int a = 1; a < d; ++a) x[a - 1] = grid.coord(ix, a);
            fam.h(s, x, fd, hsample.pt(p));
        }
        hdot_field = partial_derivative(hsample, 0);
    }

    std::array<Field, 3> du;
    for (int a = 0; a < d; ++a) du[a] = partial_derivative(u, a);

    NormalFormData out;
    out.grid = grid;
    out.u = u;
    out.U = make_field(grid, 0, 1);
    out.W = make_field(grid, 2, 0, false, true);
    for (std::int64_t p = 0; p < np; ++p) {
        const double uu = u.at(p, 0);
        out.U.at(p, 0) = uu * uu;
        for (int a = 0; a < d; ++a)
            out.W.at(p, sym_index(0, a, d)) = -du[a].at(p, 0) / (uu * uu);
        for (int i = 0; i < fd; ++i)
            for (int j = i; j < fd; ++j)
                out.W.at(p, sym_index(i + 1, j + 1, d)) =
                    -0.5 * uu * hdot_field.at(p, sym_index(i, j, fd));
    }
    out.g = make_metric(std::move(g));
    return out;
}

Field constraint_residual(const MetricField& g, const Field& U, const Field& W) {
    const Grid& grid = U.grid;
    const int d = grid.dim;
    const std::int64_t np = grid.npts();

    Field u = make_scalar(grid);
    Field Ub = make_field(grid, 1, 0);
    for (std::int64_t p = 0; p < np; ++p) {
        double norm2 = 0.0;
        for (int a = 0; a < d; ++a) {
            double low = 0.0;
            for (int b = 0; b < d; ++b)
                low += g.g.at(p, sym_index(a, b, d)) * U.at(p, b);
            Ub.at(p, a) = low;
            norm2 += low * U.at(p, a);
        }
        if (!(norm2 > 0.0))
            throw std::domain_error("constraint_residual: U vanishes at a point");
        u.at(p, 0) = std::sqrt(norm2);
    }

    const Field nab = covariant_derivative(Ub, g);
    Field res = make_field(grid, 2, 0);
    for (std::int64_t p = 0; p < np; ++p)
        for (int m = 0; m < d; ++m)
            for (int a = 0; a < d; ++a)
                res.at(p, m * d + a) = nab.at(p, m * d + a) +
                                       u.at(p, 0) * W.at(p, sym_index(m, a, d));
    return res;
}

ConstraintIdentityResiduals constraint_identities(const NormalFormData& data) {
    const Grid& grid = data.grid;
    const int d = grid.dim;
    const std::int64_t np = grid.npts();

    Field Nb = make_field(grid, 1, 0);
    Field Nup = make_field(grid, 0, 1);
    for (std::int64_t p = 0; p < np; ++p) {
        const double uu = data.u.at(p, 0);
        for (int a = 0; a < d; ++a) {
            Nup.at(p, a) = data.U.at(p, a) / uu;
            double low = 0.0;
            for (int b = 0; b < d; ++b)
                low += data.g.g.at(p, sym_index(a, b, d)) * data.U.at(p, b);
            Nb.at(p, a) = low / uu;
        }
    }

    std::array<Field, 3> du;
    for (int a = 0; a < d; ++a) du[a] = partial_derivative(data.u, a);
    const Field nabN = covariant_derivative(Nb, data.g);

    ConstraintIdentityResiduals out;
    out.res_du = make_field(grid, 1, 0);
    out.res_dN = make_field(grid, 2, 0);
    for (std::int64_t p = 0; p < np; ++p) {
        const double uu = data.u.at(p, 0);
        for (int i = 0; i < d; ++i) {
            double nw = 0.0;
            for (int k = 0; k < d; ++k)
                nw += Nup.at(p, k) * data.W.at(p, sym_index(i, k, d));
            out.res_du.at(p, i) = du[i].at(p, 0) + uu * nw;
            for (int j = 0; j < d; ++j)
                out.res_dN.at(p, i * d + j) = nabN.at(p, i * d + j) -
                                              nw * Nb.at(p, j) +
                                              data.W.at(p, sym_index(i, j, d));
        }
    }
    return out;
}

const char* to_string(CompletenessVerdict v) {
    return v == CompletenessVerdict::complete ? "complete" : "inconclusive";
}

CompletenessVerdict completeness_check(const Field& u, bool fiber_compact,
                                       const IntervalDescriptor& interval) {
    for (std::int64_t p = 0; p < u.grid.npts(); ++p)
        if (!(u.at(p, 0) > 0.0)) return CompletenessVerdict::inconclusive;
    if (!fiber_compact) return CompletenessVerdict::inconclusive;
    if (interval.circle) return CompletenessVerdict::complete;
    const double witness = interval.sup_u_witness;
    if (!(witness > 0.0) || !std::isfinite(witness))
        return CompletenessVerdict::inconclusive;
    for (std::int64_t p = 0; p < u.grid.npts(); ++p)
        if (u.at(p, 0) > witness * (1.0 + 1e-12))
            return CompletenessVerdict::inconclusive;
    return CompletenessVerdict::complete;
}

}  // namespace pnv
