#include "pnv/evolver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "pnv/multivector.hpp"
#include "slice_kernels.hpp"

namespace pnv {

using namespace detail;

namespace {

Field gauge_F_field(const CauchyState& st, const BackgroundData& bg) {
    const Grid& grid = st.gbar.g.grid;
    const int sd = grid.dim + 1;
    Field F = make_field(grid, 1, 0, true);
    PointState ps;
    BackgroundPoint bp;
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        load_point(st, p, sd, ps);
        load_background_point(bg, p, sd, bp);
        gauge_point(sd, ps, bp, F.pt(p), nullptr);
    }
    return F;
}

}  // namespace

BackgroundData make_background_data(BackgroundMetric m) {
    BackgroundData bg;
    for (int i = 0; i < m.h.g.grid.dim; ++i) bg.dh[i] = partial_derivative(m.h.g, i);
    bg.metric = std::move(m);
    return bg;
}

ProjectionData projection_data(const MetricField& gbar, const Field& alpha,
                               std::int64_t p) {
    const Grid& grid = gbar.g.grid;
    const int sd = grid.dim + 1;
    double g[kMaxDense], gi[kMaxDense];
    unpack_sym(gbar.g, p, g);
    unpack_sym(gbar.ginv, p, gi);
    const ProjPoint pr =
        projection_point(sd, g, gi, alpha.pt(p), grid, p, Admissibility{}.u_min);
    ProjectionData out;
    out.lamt = pr.lamt;
    out.u = pr.u;
    for (int mu = 0; mu < sd; ++mu) out.V[mu] = pr.V[mu];
    for (int i = 0; i + 1 < sd; ++i) out.N[i] = pr.N[i];
    // full projector: pr^rho_mu = delta + gbar_{0 mu} V^rho / (lamt u)
    const double c = 1.0 / (pr.lamt * pr.u);
    for (int rho = 0; rho < sd; ++rho)
        for (int mu = 0; mu < sd; ++mu)
            out.pr[rho * sd + mu] = (rho == mu ? 1.0 : 0.0) + g[mu] * pr.V[rho] * c;
    return out;
}

GaugeSource gauge_source(const CauchyState& st, const BackgroundData& bg) {
    check_state_shapes(st, bg);
    const Grid& grid = st.gbar.g.grid;
    const int sd = grid.dim + 1;
    GaugeSource gs;
    gs.F = make_field(grid, 1, 0, true);
    gs.E = make_field(grid, 1, 0, true);
    PointState ps;
    BackgroundPoint bp;
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        load_point(st, p, sd, ps);
        load_background_point(bg, p, sd, bp);
        gauge_point(sd, ps, bp, gs.F.pt(p), gs.E.pt(p));
    }
    return gs;
}

StateTangent make_tangent(const CauchyState& st) {
    StateTangent t;
    auto zero_like = [](const Field& f) {
        Field z = f;
        std::fill(z.data.begin(), z.data.end(), 0.0);
        return z;
    };
    t.dt_gbar = zero_like(st.gbar.g);
    for (int i = 0; i < st.gbar.g.grid.dim; ++i) t.dt_dgbar[i] = zero_like(st.dgbar[i]);
    t.dt_k = zero_like(st.k);
    t.dt_alpha = zero_like(st.alpha);
    t.dt_Z = zero_like(st.Z);
    return t;
}

void rhs_into(const CauchyState& st, const BackgroundData& bg, StateTangent& out) {
    check_state_shapes(st, bg);
    require_admissible(st);
    const Grid& grid = st.gbar.g.grid;
    const int dim = grid.dim, sd = dim + 1;
    const std::int64_t npts = grid.npts();

    // (f1): dt gbar = k, and the explicit form of (f2): dt gbar_{,i} = d_i k.
    out.dt_gbar.data = st.k.data;
    Field dk[3];
    for (int a = 0; a < dim; ++a) {
        dk[a] = partial_derivative(st.k, a);
        out.dt_dgbar[a].data = dk[a].data;
    }

    Field ddg[3][3];
    for (int a = 0; a < dim; ++a)
        for (int i = 0; i < dim; ++i) ddg[a][i] = partial_derivative(st.dgbar[i], a);
    Field dal[3], dZ[3];
    for (int a = 0; a < dim; ++a) {
        dal[a] = partial_derivative(st.alpha, a);
        dZ[a] = partial_derivative(st.Z, a);
    }
    const Field F = gauge_F_field(st, bg);
    Field dF[3];
    for (int a = 0; a < dim; ++a) dF[a] = partial_derivative(F, a);

    PointState ps;
    BackgroundPoint bp;
    for (std::int64_t p = 0; p < npts; ++p) {
        load_point(st, p, sd, ps);
        load_background_point(bg, p, sd, bp);
        const ProjPoint proj =
            projection_point(sd, ps.g, ps.gi, ps.al, grid, p, Admissibility{}.u_min);

        double hterm[kMaxDense], zpr[kMaxDense], snf[kMaxDense];
        h_term_point(sd, ps.g, ps.gi, ps.gam, hterm);
        z_pr_point(sd, ps, proj, zpr);
        double dtF[kMaxSd];
        dt_F_point(sd, ps, bp, dtF);
        const double* dFrows[kMaxSd];
        dFrows[0] = dtF;
        for (int a = 0; a < dim; ++a) dFrows[1 + a] = dF[a].pt(p);
        sym_nabla_point(sd, ps.gam, F.pt(p), dFrows, snf);

        // (f3) solved for dt k
        const double inv00 = -ps.gi[0];
        for (int m = 0; m < sd; ++m)
            for (int n = m; n < sd; ++n) {
                const int c = sym_index(m, n, sd);
                double s = 0.0;
                for (int j = 0; j < dim; ++j) s += 2.0 * ps.gi[j + 1] * dk[j].at(p, c);
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        s += ps.gi[(i + 1) * sd + (j + 1)] * ddg[j][i].at(p, c);
                s += -2.0 * hterm[m * sd + n] - 2.0 * snf[m * sd + n] +
                     2.0 * zpr[m * sd + n];
                out.dt_k.at(p, c) = s / inv00;
            }

        const double* dalrows[3];
        const double* dZrows[3];
        for (int i = 0; i < dim; ++i) {
            dalrows[i] = dal[i].pt(p);
            dZrows[i] = dZ[i].pt(p);
        }
        alpha_rhs_point(sd, ps, proj, grid, p, dalrows, out.dt_alpha.pt(p));
        z_rhs_point(sd, ps, proj, dZrows, out.dt_Z.pt(p));
    }
}

StateTangent rhs(const CauchyState& st, const BackgroundData& bg) {
    StateTangent out = make_tangent(st);
    rhs_into(st, bg, out);
    return out;
}

ReducedRicciFields reduced_ricci_fields(const CauchyState& st,
                                        const BackgroundData& bg) {
    check_state_shapes(st, bg);
    const Grid& grid = st.gbar.g.grid;
    const int dim = grid.dim, sd = dim + 1;
    ReducedRicciFields rr;
    rr.H = make_field(grid, 2, 0, true, true);
    rr.sym_nabla_F = make_field(grid, 2, 0, true, true);
    rr.z_pr = make_field(grid, 2, 0, true, true);
    const Field F = gauge_F_field(st, bg);
    Field dF[3];
    for (int a = 0; a < dim; ++a) dF[a] = partial_derivative(F, a);
    PointState ps;
    BackgroundPoint bp;
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        load_point(st, p, sd, ps);
        load_background_point(bg, p, sd, bp);
        const ProjPoint proj =
            projection_point(sd, ps.g, ps.gi, ps.al, grid, p, Admissibility{}.u_min);
        double hterm[kMaxDense], zpr[kMaxDense], snf[kMaxDense];
        h_term_point(sd, ps.g, ps.gi, ps.gam, hterm);
        z_pr_point(sd, ps, proj, zpr);
        double dtF[kMaxSd];
        dt_F_point(sd, ps, bp, dtF);
        const double* dFrows[kMaxSd];
        dFrows[0] = dtF;
        for (int a = 0; a < dim; ++a) dFrows[1 + a] = dF[a].pt(p);
        sym_nabla_point(sd, ps.gam, F.pt(p), dFrows, snf);
        for (int m = 0; m < sd; ++m)
            for (int n = m; n < sd; ++n) {
                const int c = sym_index(m, n, sd);
                rr.H.at(p, c) = hterm[m * sd + n];
                rr.sym_nabla_F.at(p, c) = snf[m * sd + n];
                rr.z_pr.at(p, c) = zpr[m * sd + n];
            }
    }
    return rr;
}

SymbolMatrices symbol_matrices(const CauchyState& st, std::int64_t p) {
    const Grid& grid = st.gbar.g.grid;
    const int dim = grid.dim, sd = dim + 1;
    const int nsym = sym_count(sd), nal = 1 << sd, nz = sym_count(dim);
    const int size = nsym * (dim + 2) + nal + nz;

    double g[kMaxDense], gi[kMaxDense];
    unpack_sym(st.gbar.g, p, g);
    unpack_sym(st.gbar.ginv, p, gi);
    const double* al = st.alpha.pt(p);
    const double g00 = g[0];
    if (!(g00 < 0.0))
        throw std::domain_error("symbol_matrices: gbar(d_t, d_t) = " +
                                std::to_string(g00) + " is not negative at " +
                                point_label(grid, p));
    const double lamt = std::sqrt(-g00);
    const double u = -al[1] / lamt;
    if (!(std::abs(u) > 0.0) || !std::isfinite(u))
        throw std::domain_error("symbol_matrices: u vanishes at " +
                                point_label(grid, p));
    const Frame fr = gram_schmidt_frame(sd, g, true);

    SymbolMatrices sm;
    sm.size = size;
    sm.A0.assign(std::size_t(size) * size, 0.0);
    for (int a = 0; a < dim; ++a) sm.Ai[a].assign(std::size_t(size) * size, 0.0);
    auto at = [size](std::vector<double>& mat, int r, int c) -> double& {
        return mat[std::size_t(r) * size + c];
    };

    const int og = 0, od0 = nsym, ok = nsym * (1 + dim), oa = nsym * (2 + dim),
              oz = oa + nal;
    for (int c = 0; c < nsym; ++c) {
        at(sm.A0, og + c, og + c) = 1.0;
        at(sm.A0, ok + c, ok + c) = -gi[0];
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                at(sm.A0, od0 + i * nsym + c, od0 + j * nsym + c) =
                    gi[(i + 1) * sd + (j + 1)];
        for (int a = 0; a < dim; ++a) {
            at(sm.Ai[a], ok + c, ok + c) = 2.0 * gi[a + 1];
            for (int i = 0; i < dim; ++i) {
                at(sm.Ai[a], od0 + i * nsym + c, ok + c) = gi[(i + 1) * sd + (a + 1)];
                at(sm.Ai[a], ok + c, od0 + i * nsym + c) = gi[(i + 1) * sd + (a + 1)];
            }
        }
    }

    // alpha blocks in the frame representation: constant Minkowski Clifford
    // matrices weighted by the frame coefficients.
    std::vector<double> eta(std::size_t(sd) * sd, 0.0);
    eta[0] = -1.0;
    for (int i = 1; i < sd; ++i) eta[std::size_t(i) * sd + i] = 1.0;
    std::vector<std::vector<double>> E(sd);
    for (int mu = 0; mu < sd; ++mu) {
        std::vector<double> x(sd, 0.0);
        x[mu] = 1.0;
        E[mu] = clifford_matrix(sd, x, eta);
    }
    auto matmul = [nal](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> out(std::size_t(nal) * nal, 0.0);
        for (int i = 0; i < nal; ++i)
            for (int q = 0; q < nal; ++q) {
                const double v = a[std::size_t(i) * nal + q];
                if (v == 0.0) continue;
                for (int j = 0; j < nal; ++j)
                    out[std::size_t(i) * nal + j] += v * b[std::size_t(q) * nal + j];
            }
        return out;
    };
    for (int m = 0; m < nal; ++m) at(sm.A0, oa + m, oa + m) = 1.0 / lamt;
    for (int k = 1; k < sd; ++k) {
        const std::vector<double> e0ek = matmul(E[0], E[k]);
        const double w0 = fr.z(k, 0);
        for (int m = 0; m < nal; ++m)
            for (int n = 0; n < nal; ++n) {
                const double v = e0ek[std::size_t(m) * nal + n];
                if (v == 0.0) continue;
                at(sm.A0, oa + m, oa + n) -= w0 * v;
                for (int a = 0; a < dim; ++a)
                    at(sm.Ai[a], oa + m, oa + n) += fr.z(k, a + 1) * v;
            }
    }

    double V[kMaxSd];
    for (int mu = 0; mu < sd; ++mu) {
        double s = 0.0;
        for (int nu = 0; nu < sd; ++nu) s += gi[mu * sd + nu] * al[1u << nu];
        V[mu] = s;
    }
    for (int c = 0; c < nz; ++c) {
        at(sm.A0, oz + c, oz + c) = 1.0;
        for (int a = 0; a < dim; ++a)
            at(sm.Ai[a], oz + c, oz + c) = lamt * (-V[a + 1] / u);
    }

    double defect = 0.0;
    auto scan_defect = [&](const std::vector<double>& mat) {
        for (int r = 0; r < size; ++r)
            for (int c = r + 1; c < size; ++c)
                defect = std::max(defect,
                                  std::abs(mat[std::size_t(r) * size + c] -
                                           mat[std::size_t(c) * size + r]));
    };
    scan_defect(sm.A0);
    for (int a = 0; a < dim; ++a) scan_defect(sm.Ai[a]);
    sm.symmetry_defect = defect;

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        m0(sm.A0.data(), size, size);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (m0 + m0.transpose()));
    sm.min_eig_A0 = es.eigenvalues().minCoeff();
    return sm;
}

StateScan scan_state(const CauchyState& st, const Admissibility& adm) {
    const Grid& grid = st.gbar.g.grid;
    const int dim = grid.dim, sd = dim + 1;
    StateScan sc;
    sc.min_eig_A0 = std::numeric_limits<double>::infinity();
    double max_lamt = 0.0, max_spec = 0.0;
    double g[kMaxDense], gi[kMaxDense];
    auto fail = [&](const std::string& what) {
        sc.admissible = false;
        sc.reason = what;
    };
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        unpack_sym(st.gbar.g, p, g);
        unpack_sym(st.gbar.ginv, p, gi);
        const double g00 = g[0], gu00 = gi[0];
        if (!(-g00 > adm.metric_margin)) {
            fail("gbar(d_t, d_t) = " + std::to_string(g00) +
                 " fails the margin at " + point_label(grid, p));
            return sc;
        }
        if (!(-gu00 > adm.metric_margin)) {
            fail("gbar^{00} = " + std::to_string(gu00) + " fails the margin at " +
                 point_label(grid, p));
            return sc;
        }
        Eigen::Matrix3d gs = Eigen::Matrix3d::Identity(), gsu =
                                 Eigen::Matrix3d::Identity();
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                gs(i, j) = g[(i + 1) * sd + (j + 1)];
                gsu(i, j) = gi[(i + 1) * sd + (j + 1)];
            }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> esg, esu;
        esg.computeDirect(gs);
        esu.computeDirect(gsu);
        if (!(esg.eigenvalues()(0) > adm.metric_margin)) {
            fail("spatial block min eigenvalue " +
                 std::to_string(esg.eigenvalues()(0)) + " fails the margin at " +
                 point_label(grid, p));
            return sc;
        }
        const double lamt = std::sqrt(-g00);
        const double u = -st.alpha.at(p, 1) / lamt;
        if (!(u > adm.u_min)) {
            fail("u = " + std::to_string(u) + " below threshold " +
                 std::to_string(adm.u_min) + " at " + point_label(grid, p));
            return sc;
        }
        max_lamt = std::max(max_lamt, lamt);
        max_spec = std::max(max_spec, esu.eigenvalues()(2));
        const Frame fr = gram_schmidt_frame(sd, g, true);
        double z0sq = 0.0;
        for (int k = 1; k < sd; ++k) z0sq += fr.z(k, 0) * fr.z(k, 0);
        double eig = std::min(1.0, esu.eigenvalues()(0));
        eig = std::min(eig, -gu00);
        eig = std::min(eig, 1.0 / lamt - std::sqrt(z0sq));
        sc.min_eig_A0 = std::min(sc.min_eig_A0, eig);
    }
    sc.admissible = true;
    sc.c_max = 2.0 * max_lamt * std::sqrt(1.0 + max_spec);
    return sc;
}

void require_admissible(const CauchyState& st, const Admissibility& adm) {
    const Grid& grid = st.gbar.g.grid;
    const int dim = grid.dim, sd = dim + 1;
    double g[kMaxDense], gi[kMaxDense];
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        unpack_sym(st.gbar.g, p, g);
        unpack_sym(st.gbar.ginv, p, gi);
        const double g00 = g[0], gu00 = gi[0];
        if (!(-g00 > adm.metric_margin))
            throw std::domain_error("state not admissible: gbar(d_t, d_t) = " +
                                    std::to_string(g00) + " fails the margin at " +
                                    point_label(grid, p));
        if (!(-gu00 > adm.metric_margin))
            throw std::domain_error("state not admissible: gbar^{00} = " +
                                    std::to_string(gu00) + " fails the margin at " +
                                    point_label(grid, p));
        Eigen::Matrix3d gs = Eigen::Matrix3d::Identity();
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) gs(i, j) = g[(i + 1) * sd + (j + 1)];
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
        es.computeDirect(gs);
        if (!(es.eigenvalues()(0) > adm.metric_margin))
            throw std::domain_error(
                "state not admissible: spatial block min eigenvalue " +
                std::to_string(es.eigenvalues()(0)) + " fails the margin at " +
                point_label(grid, p));
        const double u = -st.alpha.at(p, 1) / std::sqrt(-g00);
        if (!(u > adm.u_min))
            throw std::domain_error("state not admissible: u = " +
                                    std::to_string(u) + " below threshold " +
                                    std::to_string(adm.u_min) + " at " +
                                    point_label(grid, p));
    }
}

namespace {

void tangent_copy(StateTangent& dst, const StateTangent& src, int dim) {
    dst.dt_gbar.data = src.dt_gbar.data;
    for (int i = 0; i < dim; ++i) dst.dt_dgbar[i].data = src.dt_dgbar[i].data;
    dst.dt_k.data = src.dt_k.data;
    dst.dt_alpha.data = src.dt_alpha.data;
    dst.dt_Z.data = src.dt_Z.data;
}

void tangent_acc(StateTangent& acc, double w, const StateTangent& t, int dim) {
    auto add = [w](Field& a, const Field& b) {
        for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += w * b.data[i];
    };
    add(acc.dt_gbar, t.dt_gbar);
    for (int i = 0; i < dim; ++i) add(acc.dt_dgbar[i], t.dt_dgbar[i]);
    add(acc.dt_k, t.dt_k);
    add(acc.dt_alpha, t.dt_alpha);
    add(acc.dt_Z, t.dt_Z);
}

void build_stage(CauchyState& out, const CauchyState& base, double c,
                 const StateTangent& t, int dim) {
    auto axpy = [c](Field& o, const Field& a, const Field& b) {
        o.data.resize(a.data.size());
        for (std::size_t i = 0; i < a.data.size(); ++i)
            o.data[i] = a.data[i] + c * b.data[i];
    };
    Field g = base.gbar.g;
    for (std::size_t i = 0; i < g.data.size(); ++i)
        g.data[i] += c * t.dt_gbar.data[i];
    out.gbar = make_metric(std::move(g), true);
    for (int i = 0; i < dim; ++i) {
        out.dgbar[i].grid = base.dgbar[i].grid;
        axpy(out.dgbar[i], base.dgbar[i], t.dt_dgbar[i]);
    }
    axpy(out.k, base.k, t.dt_k);
    axpy(out.alpha, base.alpha, t.dt_alpha);
    axpy(out.Z, base.Z, t.dt_Z);
    out.t = base.t + c;
}

void add_dissipation(StateTangent& t, const CauchyState& s, double sigma, int dim) {
    auto damp = [&](Field& dst, const Field& src) {
        for (int a = 0; a < dim; ++a) {
            const Field ko = kreiss_oliger(src, a);
            for (std::size_t i = 0; i < dst.data.size(); ++i)
                dst.data[i] += sigma * ko.data[i];
        }
    };
    damp(t.dt_gbar, s.gbar.g);
    for (int i = 0; i < dim; ++i) damp(t.dt_dgbar[i], s.dgbar[i]);
    damp(t.dt_k, s.k);
    damp(t.dt_alpha, s.alpha);
    damp(t.dt_Z, s.Z);
}

void assert_symbols(const CauchyState& st) {
    const std::int64_t n = st.gbar.g.grid.npts();
    const std::int64_t probes[5] = {0, n / 4, n / 2, (3 * n) / 4, n - 1};
    for (std::int64_t p : probes) {
        const SymbolMatrices sm = symbol_matrices(st, p);
        if (sm.symmetry_defect > 1e-12)
            throw std::domain_error(
                "symbol symmetry defect " + std::to_string(sm.symmetry_defect) +
                " exceeds 1e-12 at " + point_label(st.gbar.g.grid, p));
        if (!(sm.min_eig_A0 > 0.0))
            throw std::domain_error("A0 lost positive definiteness (min eig " +
                                    std::to_string(sm.min_eig_A0) + ") at " +
                                    point_label(st.gbar.g.grid, p));
    }
}

}  // namespace

EvolveReport evolve(CauchyState& st, const BackgroundData& bg,
                    const EvolveOptions& opt, const StepCallback& on_diag,
                    const StepCallback& on_checkpoint) {
    if (!(opt.cfl > 0.0 && opt.cfl < 1.0))
        throw std::invalid_argument("evolve: cfl must lie in (0,1), got " +
                                    std::to_string(opt.cfl));
    if (opt.diag_every < 1)
        throw std::invalid_argument("evolve: diag_every must be at least 1");
    if (opt.checkpoint_every < 0 || opt.symbol_check_stride < 0 ||
        opt.max_steps < 0)
        throw std::invalid_argument("evolve: strides must be non-negative");
    if (!(opt.ko_sigma >= 0.0))
        throw std::invalid_argument("evolve: ko_sigma must be non-negative");
    if (opt.t_end < st.t)
        throw std::invalid_argument("evolve: t_end lies before the state time");
    check_state_shapes(st, bg);

    const Grid& grid = st.gbar.g.grid;
    const int dim = grid.dim;
    EvolveReport rep;
    StateTangent k_cur = make_tangent(st), sum = make_tangent(st);
    CauchyState stage = st;

    auto emit = [&](int step, double dt, const StateScan& sc) {
        StepRecord rec{step, st.t, dt, sc.c_max, sc.min_eig_A0};
        rep.records.push_back(rec);
        if (on_diag) on_diag(st, rec);
    };

    int step = 0;
    const double t_tol = 1e-12 * std::max(1.0, std::abs(opt.t_end));
    while (st.t < opt.t_end - t_tol) {
        if (opt.max_steps > 0 && step >= opt.max_steps) break;
        const StateScan sc = scan_state(st, opt.adm);
        if (!sc.admissible) {
            rep.abort_reason = sc.reason;
            break;
        }
        double dt = opt.cfl * grid.min_dx() / sc.c_max;
        if (st.t + dt > opt.t_end) dt = opt.t_end - st.t;
        if (!(dt > 0.0)) {
            rep.abort_reason = "step size underflow (c_max = " +
                               std::to_string(sc.c_max) + ")";
            break;
        }
        if (step % opt.diag_every == 0) emit(step, dt, sc);
        try {
            if (opt.symbol_check_stride > 0 && step % opt.symbol_check_stride == 0)
                assert_symbols(st);
            rhs_into(st, bg, k_cur);
            if (opt.ko_sigma > 0.0) add_dissipation(k_cur, st, opt.ko_sigma, dim);
            tangent_copy(sum, k_cur, dim);
            build_stage(stage, st, 0.5 * dt, k_cur, dim);
            rhs_into(stage, bg, k_cur);
            if (opt.ko_sigma > 0.0) add_dissipation(k_cur, stage, opt.ko_sigma, dim);
            tangent_acc(sum, 2.0, k_cur, dim);
            build_stage(stage, st, 0.5 * dt, k_cur, dim);
            rhs_into(stage, bg, k_cur);
            if (opt.ko_sigma > 0.0) add_dissipation(k_cur, stage, opt.ko_sigma, dim);
            tangent_acc(sum, 2.0, k_cur, dim);
            build_stage(stage, st, dt, k_cur, dim);
            rhs_into(stage, bg, k_cur);
            if (opt.ko_sigma > 0.0) add_dissipation(k_cur, stage, opt.ko_sigma, dim);
            tangent_acc(sum, 1.0, k_cur, dim);
            build_stage(stage, st, dt / 6.0, sum, dim);
            stage.t = st.t + dt;
            std::swap(st, stage);
        } catch (const std::exception& e) {
            rep.abort_reason = e.what();
            break;
        }
        ++step;
        if (opt.checkpoint_every > 0 && step % opt.checkpoint_every == 0 &&
            on_checkpoint) {
            StepRecord rec{step, st.t, dt, sc.c_max, sc.min_eig_A0};
            on_checkpoint(st, rec);
        }
        if (step > 10000000) {
            rep.abort_reason = "step limit exceeded";
            break;
        }
    }
    if (rep.abort_reason.empty()) {
        const StateScan sc = scan_state(st, opt.adm);
        if (sc.admissible) {
            emit(step, 0.0, sc);
            rep.completed = true;
        } else {
            rep.abort_reason = sc.reason;
        }
    }
    rep.steps = step;
    rep.t_final = st.t;
    return rep;
}

}  // namespace pnv
