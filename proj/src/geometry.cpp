#include "pnv/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace pnv {

namespace {

std::string point_label(const Grid& g, std::int64_t p) {
    const auto ix = g.unflatten(p);
    std::string s = "(";
    for (int a = 0; a < g.dim; ++a)
        s += std::to_string(ix[a]) + (a + 1 < g.dim ? "," : "");
    return s + ")";
}

// Expands a symmetric-packed rank-2 field to full storage.
Field expand_full(const Field& f) {
    if (!f.sym) return f;
    Field out = make_field(f.grid, f.rank_cov, f.rank_con, f.spacetime, false);
    const int a = f.adim();
    const std::int64_t np = f.grid.npts();
    for (std::int64_t p = 0; p < np; ++p)
        for (int i = 0; i < a; ++i)
            for (int j = 0; j < a; ++j)
                out.at(p, i * a + j) = f.at(p, sym_index(i, j, a));
    return out;
}

}  // namespace

void unpack_sym(const Field& f, std::int64_t p, double* dense) {
    const int a = f.adim();
    for (int i = 0; i < a; ++i)
        for (int j = i; j < a; ++j)
            dense[i * a + j] = dense[j * a + i] = f.at(p, sym_index(i, j, a));
}

void invert_dense_sym(int d, const double* a, double* inv,
                      const std::string& where) {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = a[i * d + j];
    const double det = m.determinant();
    if (!std::isfinite(det) || std::abs(det) < 1e-14)
        throw std::domain_error(where + ": singular metric (det = " +
                                std::to_string(det) + ")");
    const Eigen::Matrix4d mi = m.inverse();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) inv[i * d + j] = mi(i, j);
}

MetricField make_metric(Field g, bool lorentzian) {
    if (!g.sym || g.rank_cov != 2 || g.rank_con != 0)
        throw std::invalid_argument("make_metric: expected a packed (2,0) field");
    if (g.adim() > 4) throw std::invalid_argument("make_metric: dimension cap is 4");
    MetricField m;
    m.lorentzian = lorentzian;
    m.ginv = make_field(g.grid, 0, 2, g.spacetime, true);
    const int d = g.adim();
    const std::int64_t np = g.grid.npts();
    double dense[16], inv[16];
    for (std::int64_t p = 0; p < np; ++p) {
        unpack_sym(g, p, dense);
        invert_dense_sym(d, dense, inv,
                         "make_metric at point " + point_label(g.grid, p));
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j)
                m.ginv.at(p, sym_index(i, j, d)) = inv[i * d + j];
    }
    m.g = std::move(g);
    return m;
}

Field christoffel(const MetricField& m) {
    const Grid& grid = m.g.grid;
    const int d = m.g.adim();
    if (m.g.spacetime)
        throw std::invalid_argument("christoffel: expected a grid-dim metric");
    std::vector<Field> dg;
    for (int b = 0; b < grid.dim; ++b) dg.push_back(partial_derivative(m.g, b));

    Field gamma = make_field(grid, 2, 1);
    const std::int64_t np = grid.npts();
    double ginv[16];
    for (std::int64_t p = 0; p < np; ++p) {
        unpack_sym(m.ginv, p, ginv);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int c = b; c < d; ++c) {
                    double s = 0.0;
                    for (int e = 0; e < d; ++e) {
                        const double t = dg[b].at(p, sym_index(e, c, d)) +
                                         dg[c].at(p, sym_index(e, b, d)) -
                                         dg[e].at(p, sym_index(b, c, d));
                        s += ginv[a * d + e] * t;
                    }
                    s *= 0.5;
                    gamma.at(p, (a * d + b) * d + c) = s;
                    gamma.at(p, (a * d + c) * d + b) = s;
                }
    }
    return gamma;
}

CurvatureBundle curvature(const MetricField& m) {
    const Grid& grid = m.g.grid;
    const int d = m.g.adim();
    const Field gamma = christoffel(m);
    std::vector<Field> dgamma;
    for (int c = 0; c < d; ++c) dgamma.push_back(partial_derivative(gamma, c));

    CurvatureBundle out;
    out.riemann = make_field(grid, 4, 0);
    out.ricci = make_field(grid, 2, 0, false, true);
    out.scal = make_scalar(grid);
    out.einstein = make_field(grid, 2, 0, false, true);

    const std::int64_t np = grid.npts();
    double g[16], ginv[16], up[256];
    for (std::int64_t p = 0; p < np; ++p) {
        unpack_sym(m.g, p, g);
        unpack_sym(m.ginv, p, ginv);
        const double* G = gamma.pt(p);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int c = 0; c < d; ++c)
                    for (int e = 0; e < d; ++e) {
                        double r = dgamma[c].at(p, (a * d + e) * d + b) -
                                   dgamma[e].at(p, (a * d + c) * d + b);
                        for (int f = 0; f < d; ++f)
                            r += G[(a * d + c) * d + f] * G[(f * d + e) * d + b] -
                                 G[(a * d + e) * d + f] * G[(f * d + c) * d + b];
                        up[((a * d + b) * d + c) * d + e] = r;
                    }
        double* R = out.riemann.pt(p);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int c = 0; c < d; ++c)
                    for (int e = 0; e < d; ++e) {
                        double r = 0.0;
                        for (int f = 0; f < d; ++f)
                            r += g[a * d + f] * up[((f * d + b) * d + c) * d + e];
                        R[((a * d + b) * d + c) * d + e] = r;
                    }
        double scal = 0.0;
        for (int b = 0; b < d; ++b)
            for (int e = b; e < d; ++e) {
                double ric = 0.0;
                for (int a = 0; a < d; ++a) ric += up[((a * d + b) * d + a) * d + e];
                out.ricci.at(p, sym_index(b, e, d)) = ric;
            }
        for (int b = 0; b < d; ++b)
            for (int e = 0; e < d; ++e)
                scal += ginv[b * d + e] * out.ricci.at(p, sym_index(b, e, d));
        out.scal.at(p, 0) = scal;
        for (int b = 0; b < d; ++b)
            for (int e = b; e < d; ++e)
                out.einstein.at(p, sym_index(b, e, d)) =
                    out.ricci.at(p, sym_index(b, e, d)) -
                    0.5 * scal * g[b * d + e];
    }
    return out;
}

Field covariant_derivative(const Field& t_in, const MetricField& m,
                           const Field* gamma_in) {
    const Field t = expand_full(t_in);
    const Grid& grid = t.grid;
    if (t.spacetime)
        throw std::invalid_argument("covariant_derivative: expected grid-dim components");
    const int d = t.adim();
    const int ru = t.rank_con, rl = t.rank_cov;
    const int rank = ru + rl;

    Field gamma_local;
    const Field* gamma = gamma_in;
    if (!gamma) {
        gamma_local = christoffel(m);
        gamma = &gamma_local;
    }

    std::vector<Field> dt;
    for (int a = 0; a < grid.dim; ++a) dt.push_back(partial_derivative(t, a));

    // Output component order: contravariant slots, then the derivative index,
    // then the original covariant slots.
    Field out = make_field(grid, rl + 1, ru);
    const std::int64_t np = grid.npts();
    std::vector<int> idx(rank, 0);
    for (std::int64_t p = 0; p < np; ++p) {
        const double* G = gamma->pt(p);
        for (int dir = 0; dir < d; ++dir) {
            std::fill(idx.begin(), idx.end(), 0);
            for (int c = 0; c < t.ncomp; ++c) {
                // Decode the row-major component of t.
                int rem = c;
                for (int s = rank - 1; s >= 0; --s) {
                    idx[s] = rem % d;
                    rem /= d;
                }
                double v = dt[dir].at(p, c);
                for (int s = 0; s < rank; ++s) {
                    const int stride = [&] {
                        int st = 1;
                        for (int q = s + 1; q < rank; ++q) st *= d;
                        return st;
                    }();
                    const int base = c - idx[s] * stride;
                    if (s < ru) {
                        for (int e = 0; e < d; ++e)
                            v += G[(idx[s] * d + dir) * d + e] *
                                 t.at(p, base + e * stride);
                    } else {
                        for (int e = 0; e < d; ++e)
                            v -= G[(e * d + dir) * d + idx[s]] *
                                 t.at(p, base + e * stride);
                    }
                }
                // Output index: uppers, dir, lowers.
                int oc = 0;
                for (int s = 0; s < ru; ++s) oc = oc * d + idx[s];
                oc = oc * d + dir;
                for (int s = ru; s < rank; ++s) oc = oc * d + idx[s];
                out.at(p, oc) = v;
            }
        }
    }
    return out;
}

Field divergence(const Field& t_in, const MetricField& m, const Field* gamma) {
    const Field t = expand_full(t_in);
    if (t.rank() == 0)
        throw std::invalid_argument("divergence: rank-0 input");
    const int d = t.adim();
    const Field grad = covariant_derivative(t, m, gamma);
    const std::int64_t np = t.grid.npts();

    if (t.rank_cov >= 1) {
        // (delta B)_{rest} = -g^{ma} grad_m B_{a rest}; grad component order is
        // (uppers, m, a, rest).
        Field out = make_field(t.grid, t.rank_cov - 1, t.rank_con);
        int lr = 1;
        for (int q = 0; q < t.rank_cov - 1; ++q) lr *= d;
        int nup = 1;
        for (int q = 0; q < t.rank_con; ++q) nup *= d;
        double ginv[16];
        for (std::int64_t p = 0; p < np; ++p) {
            unpack_sym(m.ginv, p, ginv);
            for (int uc = 0; uc < nup; ++uc)
                for (int rc = 0; rc < lr; ++rc) {
                    double s = 0.0;
                    for (int mm = 0; mm < d; ++mm)
                        for (int a = 0; a < d; ++a)
                            s += ginv[mm * d + a] *
                                 grad.at(p, ((uc * d + mm) * d + a) * lr + rc);
                    out.at(p, uc * lr + rc) = -s;
                }
        }
        return out;
    }

    // Purely contravariant: delta V = -grad_a V^{a rest}; grad order is
    // (uppers, m). Contract the first upper with m.
    Field out = make_field(t.grid, 0, t.rank_con - 1);
    const int nrest = out.ncomp;
    for (std::int64_t p = 0; p < np; ++p)
        for (int rc = 0; rc < nrest; ++rc) {
            double s = 0.0;
            for (int a = 0; a < d; ++a) s += grad.at(p, (a * nrest + rc) * d + a);
            out.at(p, rc) = -s;
        }
    return out;
}

CurvatureBundle fiber_curvature(const MetricField& m) {
    const Grid& grid = m.g.grid;
    const int d = m.g.adim();
    if (d < 2)
        throw std::invalid_argument("fiber_curvature: needs at least one fiber axis");
    const std::int64_t np = grid.npts();

    // Fiber Christoffels: indices 1..d-1, derivatives along fiber axes only.
    std::vector<Field> dg;
    dg.emplace_back();  // axis 0 unused
    for (int b = 1; b < d; ++b) dg.push_back(partial_derivative(m.g, b));

    Field gamma = make_field(grid, 2, 1);
    double dense[16], fib[9], fibinv[9];
    for (std::int64_t p = 0; p < np; ++p) {
        unpack_sym(m.g, p, dense);
        const int fd = d - 1;
        for (int i = 0; i < fd; ++i)
            for (int j = 0; j < fd; ++j) fib[i * fd + j] = dense[(i + 1) * d + (j + 1)];
        invert_dense_sym(fd, fib, fibinv,
                         "fiber_curvature at point " + point_label(grid, p));
        for (int a = 1; a < d; ++a)
            for (int b = 1; b < d; ++b)
                for (int c = b; c < d; ++c) {
                    double s = 0.0;
                    for (int e = 1; e < d; ++e) {
                        const double t = dg[b].at(p, sym_index(e, c, d)) +
                                         dg[c].at(p, sym_index(e, b, d)) -
                                         dg[e].at(p, sym_index(b, c, d));
                        s += fibinv[(a - 1) * fd + (e - 1)] * t;
                    }
                    s *= 0.5;
                    gamma.at(p, (a * d + b) * d + c) = s;
                    gamma.at(p, (a * d + c) * d + b) = s;
                }
    }

    std::vector<Field> dgamma;
    dgamma.emplace_back();
    for (int c = 1; c < d; ++c) dgamma.push_back(partial_derivative(gamma, c));

    CurvatureBundle out;
    out.riemann = make_field(grid, 4, 0);
    out.ricci = make_field(grid, 2, 0, false, true);
    out.scal = make_scalar(grid);
    out.einstein = make_field(grid, 2, 0, false, true);
    double up[256];
    for (std::int64_t p = 0; p < np; ++p) {
        unpack_sym(m.g, p, dense);
        const int fd = d - 1;
        for (int i = 0; i < fd; ++i)
            for (int j = 0; j < fd; ++j) fib[i * fd + j] = dense[(i + 1) * d + (j + 1)];
        invert_dense_sym(fd, fib, fibinv, "fiber_curvature");
        const double* G = gamma.pt(p);
        for (int a = 1; a < d; ++a)
            for (int b = 1; b < d; ++b)
                for (int c = 1; c < d; ++c)
                    for (int e = 1; e < d; ++e) {
                        double r = dgamma[c].at(p, (a * d + e) * d + b) -
                                   dgamma[e].at(p, (a * d + c) * d + b);
                        for (int f = 1; f < d; ++f)
                            r += G[(a * d + c) * d + f] * G[(f * d + e) * d + b] -
                                 G[(a * d + e) * d + f] * G[(f * d + c) * d + b];
                        up[((a * d + b) * d + c) * d + e] = r;
                    }
        double* R = out.riemann.pt(p);
        for (int a = 1; a < d; ++a)
            for (int b = 1; b < d; ++b)
                for (int c = 1; c < d; ++c)
                    for (int e = 1; e < d; ++e) {
                        double r = 0.0;
                        for (int f = 1; f < d; ++f)
                            r += dense[a * d + f] * up[((f * d + b) * d + c) * d + e];
                        R[((a * d + b) * d + c) * d + e] = r;
                    }
        double scal = 0.0;
        for (int b = 1; b < d; ++b)
            for (int e = b; e < d; ++e) {
                double ric = 0.0;
                for (int a = 1; a < d; ++a) ric += up[((a * d + b) * d + a) * d + e];
                out.ricci.at(p, sym_index(b, e, d)) = ric;
            }
        for (int b = 1; b < d; ++b)
            for (int e = 1; e < d; ++e)
                scal += fibinv[(b - 1) * fd + (e - 1)] *
                        out.ricci.at(p, sym_index(b, e, d));
        out.scal.at(p, 0) = scal;
        for (int b = 1; b < d; ++b)
            for (int e = b; e < d; ++e)
                out.einstein.at(p, sym_index(b, e, d)) =
                    out.ricci.at(p, sym_index(b, e, d)) - 0.5 * scal * dense[b * d + e];
    }
    return out;
}

GaussCodazziResidual gauss_codazzi_residual(const MetricField& g, const Field& W_in,
                                            const CurvatureBundle& ambient,
                                            const EmbeddingData& emb) {
    const Grid& grid = g.g.grid;
    const int d = g.g.adim();
    const std::int64_t np = grid.npts();

    // Symmetry gate, then work with the packed form.
    Field W = make_field(grid, 2, 0, false, true);
    if (W_in.sym) {
        W = W_in;
    } else {
        for (std::int64_t p = 0; p < np; ++p)
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j) {
                    const double a = W_in.at(p, i * d + j);
                    const double b = W_in.at(p, j * d + i);
                    if (std::abs(a - b) > 1e-10)
                        throw std::invalid_argument(
                            "gauss_codazzi_residual: W asymmetric at point " +
                            point_label(grid, p));
                    W.at(p, sym_index(i, j, d)) = 0.5 * (a + b);
                }
    }

    const Field gamma = christoffel(g);
    const CurvatureBundle slice = curvature(g);
    const CurvatureBundle fiber = fiber_curvature(g);
    const Field gradW = covariant_derivative(W, g, &gamma);

    // Fiber-connection derivative of the fiber block of W.
    const Field Wfull = expand_full(W);
    std::vector<Field> dW;
    dW.emplace_back();
    for (int a = 1; a < d; ++a) dW.push_back(partial_derivative(Wfull, a));

    // Fiber Christoffels recomputed here (cheap relative to curvature).
    Field gamma_f = make_field(grid, 2, 1);
    {
        std::vector<Field> dg;
        dg.emplace_back();
        for (int b = 1; b < d; ++b) dg.push_back(partial_derivative(g.g, b));
        double dense[16], fib[9], fibinv[9];
        for (std::int64_t p = 0; p < np; ++p) {
            unpack_sym(g.g, p, dense);
            const int fd = d - 1;
            for (int i = 0; i < fd; ++i)
                for (int j = 0; j < fd; ++j)
                    fib[i * fd + j] = dense[(i + 1) * d + (j + 1)];
            invert_dense_sym(fd, fib, fibinv, "gauss_codazzi_residual");
            for (int a = 1; a < d; ++a)
                for (int b = 1; b < d; ++b)
                    for (int c = b; c < d; ++c) {
                        double s = 0.0;
                        for (int e = 1; e < d; ++e)
                            s += fibinv[(a - 1) * fd + (e - 1)] *
                                 (dg[b].at(p, sym_index(e, c, d)) +
                                  dg[c].at(p, sym_index(e, b, d)) -
                                  dg[e].at(p, sym_index(b, c, d)));
                        s *= 0.5;
                        gamma_f.at(p, (a * d + b) * d + c) = s;
                        gamma_f.at(p, (a * d + c) * d + b) = s;
                    }
        }
    }

    GaussCodazziResidual out;
    out.res_hamiltonian = make_scalar(grid);
    out.res_momentum = make_field(grid, 1, 0);
    out.res_gauss = make_field(grid, 4, 0);
    out.res_codazzi = make_field(grid, 3, 0);

    const int sd = d + 1;  // spacetime component dimension of `ambient`
    double ginv[16], Wd[16];
    for (std::int64_t p = 0; p < np; ++p) {
        unpack_sym(g.ginv, p, ginv);
        unpack_sym(W, p, Wd);
        const double lam = emb.lapse ? emb.lapse->at(p, 0) : 1.0;
        const double uu = emb.u ? emb.u->at(p, 0) : 1.0;

        double trW = 0.0, trW2 = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                trW += ginv[i * d + j] * Wd[i * d + j];
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l)
                        trW2 += ginv[i * d + k] * ginv[j * d + l] * Wd[i * d + j] *
                                Wd[k * d + l];
            }

        const double Gtt =
            ambient.einstein.at(p, sym_index(0, 0, sd)) / (lam * lam);
        out.res_hamiltonian.at(p, 0) =
            Gtt - 0.5 * (slice.scal.at(p, 0) - trW2 + trW * trW);

        for (int i = 0; i < d; ++i) {
            const double GtX =
                ambient.einstein.at(p, sym_index(0, i + 1, sd)) / lam;
            // (delta W)_i = -g^{ma} grad_m W_{a i}; grad order is (m, a, i).
            double divW = 0.0;
            for (int mm = 0; mm < d; ++mm)
                for (int a = 0; a < d; ++a)
                    divW -= ginv[mm * d + a] * gradW.at(p, (mm * d + a) * d + i);
            // d trW in direction i: grad of the scalar trace.
            double dtr = 0.0;
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b)
                    dtr += ginv[a * d + b] * gradW.at(p, (i * d + a) * d + b);
            out.res_momentum.at(p, i) = GtX - (divW + dtr);
        }

        const double* Rs = slice.riemann.pt(p);
        const double* Rf = fiber.riemann.pt(p);
        for (int i = 1; i < d; ++i)
            for (int j = 1; j < d; ++j)
                for (int k = 1; k < d; ++k)
                    for (int l = 1; l < d; ++l)
                        out.res_gauss.at(p, ((i * d + j) * d + k) * d + l) =
                            Rs[((i * d + j) * d + k) * d + l] -
                            Rf[((i * d + j) * d + k) * d + l] +
                            Wd[i * d + k] * Wd[j * d + l] -
                            Wd[i * d + l] * Wd[j * d + k];

        for (int x = 1; x < d; ++x)
            for (int y = 1; y < d; ++y)
                for (int z = 1; z < d; ++z) {
                    // (grad^f_Y W)(Z,X) with the fiber connection.
                    auto nabWf = [&](int yy, int zz, int xx) {
                        double v = dW[yy].at(p, zz * d + xx);
                        for (int e = 1; e < d; ++e)
                            v -= gamma_f.at(p, (e * d + yy) * d + zz) * Wd[e * d + xx] +
                                 gamma_f.at(p, (e * d + yy) * d + xx) * Wd[zz * d + e];
                        return v;
                    };
                    const double lhs = -uu * Rs[((x * d + 0) * d + y) * d + z];
                    out.res_codazzi.at(p, (x * d + y) * d + z) =
                        lhs - (nabWf(y, z, x) - nabWf(z, y, x));
                }
    }
    return out;
}

}  // namespace pnv
