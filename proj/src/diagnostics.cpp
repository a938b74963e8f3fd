#include "pnv/diagnostics.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "slice_kernels.hpp"

namespace pnv {

using namespace detail;

namespace {

// d_m g^{-1} = -g^{-1} (D_m g) g^{-1}
void dginv_point(int sd, const double* gi, const double* Dm, double* dgi) {
    double tmp[kMaxDense];
    for (int a = 0; a < sd; ++a)
        for (int b = 0; b < sd; ++b) {
            double s = 0.0;
            for (int r = 0; r < sd; ++r) s += Dm[a * sd + r] * gi[r * sd + b];
            tmp[a * sd + b] = s;
        }
    for (int a = 0; a < sd; ++a)
        for (int b = 0; b < sd; ++b) {
            double s = 0.0;
            for (int r = 0; r < sd; ++r) s += gi[a * sd + r] * tmp[r * sd + b];
            dgi[a * sd + b] = -s;
        }
}

// Spacetime jets of V and of the projected Z at one point.
struct PointJets {
    double dgi[kMaxSd][kMaxDense];
    double al4[kMaxSd];
    double dal4[kMaxSd][kMaxSd];  // dal4[m][n] = d_m alpha_n (degree-one part)
    double dV[kMaxSd][kMaxSd];
    double Zpr[kMaxDense];
    double dZpr[kMaxSd][kMaxDense];
};

// dta4: time derivative of the degree-one alpha components; dtZ: packed time
// derivative of Z; dal_rows[i]: full multivector derivative d_i alpha;
// dZ_rows[i]: packed d_i Z.
void z_jets_point(int sd, const PointState& ps, const ProjPoint& proj,
                  const double* dta4, const double* dtZ,
                  const double* const* dal_rows, const double* const* dZ_rows,
                  PointJets& js) {
    const int dim = sd - 1, d = dim;
    for (int m = 0; m < sd; ++m) dginv_point(sd, ps.gi, ps.D[m], js.dgi[m]);
    for (int n = 0; n < sd; ++n) {
        js.al4[n] = ps.al[1u << n];
        js.dal4[0][n] = dta4[n];
        for (int i = 0; i < dim; ++i) js.dal4[1 + i][n] = dal_rows[i][1u << n];
    }
    for (int m = 0; m < sd; ++m)
        for (int mu = 0; mu < sd; ++mu) {
            double s = 0.0;
            for (int nu = 0; nu < sd; ++nu)
                s += js.dgi[m][mu * sd + nu] * js.al4[nu] +
                     ps.gi[mu * sd + nu] * js.dal4[m][nu];
            js.dV[m][mu] = s;
        }
    const double lamt = proj.lamt, u = proj.u;
    const double c = 1.0 / (lamt * u);
    double dlamt[kMaxSd], du[kMaxSd], dc[kMaxSd];
    for (int m = 0; m < sd; ++m) {
        dlamt[m] = -ps.D[m][0] / (2.0 * lamt);
        du[m] = -js.dal4[m][0] / lamt + js.al4[0] * dlamt[m] / (lamt * lamt);
        dc[m] = -(dlamt[m] * u + lamt * du[m]) * c * c;
    }
    double dP[kMaxSd][3][kMaxSd];
    for (int m = 0; m < sd; ++m)
        for (int k = 0; k < d; ++k)
            for (int mu = 0; mu < sd; ++mu)
                dP[m][k][mu] =
                    dc[m] * ps.g[mu] * proj.V[k + 1] +
                    c * (ps.D[m][mu] * proj.V[k + 1] + ps.g[mu] * js.dV[m][k + 1]);
    z_pr_point(sd, ps, proj, js.Zpr);
    double dZv[kMaxSd][9];
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const int ci = sym_index(a, b, d);
            dZv[0][a * d + b] = dtZ[ci];
            for (int i = 0; i < dim; ++i) dZv[1 + i][a * d + b] = dZ_rows[i][ci];
        }
    for (int m = 0; m < sd; ++m)
        for (int mu = 0; mu < sd; ++mu)
            for (int nu = mu; nu < sd; ++nu) {
                double s = 0.0;
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l)
                        s += dZv[m][k * d + l] * proj.P[k][mu] * proj.P[l][nu] +
                             ps.Zv[k * d + l] * (dP[m][k][mu] * proj.P[l][nu] +
                                                 proj.P[k][mu] * dP[m][l][nu]);
                js.dZpr[m][mu * sd + nu] = s;
                js.dZpr[m][nu * sd + mu] = s;
            }
}

// delta applied to L = Zpr - (1/2) tr(Zpr) g:
//   (delta L)_n = -g^{ma} (dL_m[a, n] - Gam^e_{ma} L_{en} - Gam^e_{mn} L_{ae})
void delta_L_point(int sd, const PointState& ps, const PointJets& js,
                   double* out) {
    double tr = 0.0;
    for (int a = 0; a < sd; ++a)
        for (int b = 0; b < sd; ++b) tr += ps.gi[a * sd + b] * js.Zpr[a * sd + b];
    double L[kMaxDense];
    for (int a = 0; a < sd * sd; ++a) L[a] = js.Zpr[a] - 0.5 * tr * ps.g[a];
    double dL[kMaxSd][kMaxDense];
    for (int m = 0; m < sd; ++m) {
        double dtr = 0.0;
        for (int a = 0; a < sd; ++a)
            for (int b = 0; b < sd; ++b)
                dtr += js.dgi[m][a * sd + b] * js.Zpr[a * sd + b] +
                       ps.gi[a * sd + b] * js.dZpr[m][a * sd + b];
        for (int a = 0; a < sd * sd; ++a)
            dL[m][a] = js.dZpr[m][a] - 0.5 * (dtr * ps.g[a] + tr * ps.D[m][a]);
    }
    for (int n = 0; n < sd; ++n) {
        double s = 0.0;
        for (int m = 0; m < sd; ++m)
            for (int a = 0; a < sd; ++a) {
                double nab = dL[m][a * sd + n];
                for (int e = 0; e < sd; ++e)
                    nab -= ps.gam[(e * sd + m) * sd + a] * L[e * sd + n] +
                           ps.gam[(e * sd + m) * sd + n] * L[a * sd + e];
                s += ps.gi[m * sd + a] * nab;
            }
        out[n] = -s;
    }
}

// nabla_V (Z o pr) as a symmetric bilinear form.
void dvz_point(int sd, const PointState& ps, const ProjPoint& proj,
               const PointJets& js, double* out) {
    for (int mu = 0; mu < sd; ++mu)
        for (int nu = mu; nu < sd; ++nu) {
            double s = 0.0;
            for (int q = 0; q < sd; ++q) {
                double cov = js.dZpr[q][mu * sd + nu];
                for (int e = 0; e < sd; ++e)
                    cov -= ps.gam[(e * sd + q) * sd + mu] * js.Zpr[e * sd + nu] +
                           ps.gam[(e * sd + q) * sd + nu] * js.Zpr[mu * sd + e];
                s += proj.V[q] * cov;
            }
            out[mu * sd + nu] = s;
            out[nu * sd + mu] = s;
        }
}

// Ric_{bd} = d_a Gam^a_{db} - d_d Gam^a_{ab}
//          + Gam^a_{af} Gam^f_{db} - Gam^a_{df} Gam^f_{ab}
void ricci_point(int sd, const double* gam, const double* const* dgam,
                 double* ric) {
    for (int b = 0; b < sd; ++b)
        for (int d = 0; d < sd; ++d) {
            double s = 0.0;
            for (int a = 0; a < sd; ++a) {
                s += dgam[a][(a * sd + d) * sd + b] -
                     dgam[d][(a * sd + a) * sd + b];
                for (int f = 0; f < sd; ++f)
                    s += gam[(a * sd + a) * sd + f] * gam[(f * sd + d) * sd + b] -
                         gam[(a * sd + d) * sd + f] * gam[(f * sd + a) * sd + b];
            }
            ric[b * sd + d] = s;
        }
}

// dt E_nu by the chain rule on E_nu = -gbar_{mu nu} gbar^{ab} A^mu_{ab} with
// A the difference tensor; the background connection is static, so
// dt A = dt Gam(bar).
void dt_E_point(int sd, const PointState& ps, const BackgroundPoint& bp,
                const double* dgi0, const double* dgam0, double* dtE) {
    double ca[kMaxSd], cdot[kMaxSd];
    for (int mu = 0; mu < sd; ++mu) {
        double s = 0.0, sdot = 0.0;
        for (int a = 0; a < sd; ++a)
            for (int b = 0; b < sd; ++b) {
                const double A = ps.gam[(mu * sd + a) * sd + b] -
                                 bp.gam[(mu * sd + a) * sd + b];
                s += ps.gi[a * sd + b] * A;
                sdot += dgi0[a * sd + b] * A +
                        ps.gi[a * sd + b] * dgam0[(mu * sd + a) * sd + b];
            }
        ca[mu] = s;
        cdot[mu] = sdot;
    }
    for (int nu = 0; nu < sd; ++nu) {
        double s = 0.0;
        for (int mu = 0; mu < sd; ++mu)
            s += ps.D[0][mu * sd + nu] * ca[mu] + ps.g[mu * sd + nu] * cdot[mu];
        dtE[nu] = -s;
    }
}

Field alpha_purity_field(const CauchyState& st) {
    const Grid& grid = st.gbar.g.grid;
    const int nal = st.alpha.ncomp;
    Field out = make_scalar(grid);
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        double s = 0.0;
        const double* al = st.alpha.pt(p);
        for (int m = 0; m < nal; ++m) {
            if (std::popcount(static_cast<unsigned>(m)) == 1) continue;
            s += al[m] * al[m];
        }
        out.at(p, 0) = std::sqrt(s);
    }
    return out;
}

}  // namespace

SliceSources evolution_sources(const CauchyState& st, const BackgroundData& bg) {
    const Grid& grid = st.gbar.g.grid;
    const int sd = grid.dim + 1;
    StateTangent tan = rhs(st, bg);
    SliceSources src;
    src.dt_k = std::move(tan.dt_k);
    src.dt_Z = std::move(tan.dt_Z);
    src.dt_alpha1 = make_field(grid, 1, 0, true);
    for (std::int64_t p = 0; p < grid.npts(); ++p)
        for (int n = 0; n < sd; ++n)
            src.dt_alpha1.at(p, n) = tan.dt_alpha.at(p, 1 << n);
    return src;
}

DiagnosticFields diagnostic_fields(const CauchyState& st,
                                   const BackgroundData& bg,
                                   const SliceSources& src) {
    check_state_shapes(st, bg);
    const Grid& grid = st.gbar.g.grid;
    const int dim = grid.dim, sd = dim + 1;
    if (!(src.dt_k.grid == grid) || src.dt_k.ncomp != sym_count(sd) ||
        !(src.dt_alpha1.grid == grid) || src.dt_alpha1.ncomp != sd ||
        !(src.dt_Z.grid == grid) || src.dt_Z.ncomp != sym_count(dim))
        throw std::invalid_argument("diagnostics: source field shapes mismatch");

    DiagnosticFields out;
    out.nabla_V = make_field(grid, 1, 1, true);
    out.null_V = make_scalar(grid);
    out.ricci_bar = make_field(grid, 2, 0, true);
    out.sym_nabla_E = make_field(grid, 2, 0, true, true);
    out.z_pr = make_field(grid, 2, 0, true, true);
    out.ricci_res = make_field(grid, 2, 0, true);
    out.ZV = make_field(grid, 1, 0, true);
    out.dVZ = make_field(grid, 2, 0, true, true);
    out.delta_L = make_field(grid, 1, 0, true);
    out.alpha_purity = alpha_purity_field(st);

    Field dk[3], dal[3], dZf[3];
    Field ddg[3][3];
    for (int i = 0; i < dim; ++i) {
        dk[i] = partial_derivative(st.k, i);
        dal[i] = partial_derivative(st.alpha, i);
        dZf[i] = partial_derivative(st.Z, i);
        for (int a = 0; a < dim; ++a) ddg[a][i] = partial_derivative(st.dgbar[i], a);
    }
    const GaugeSource gs = gauge_source(st, bg);
    out.E = gs.E;
    Field dE[3];
    for (int i = 0; i < dim; ++i) dE[i] = partial_derivative(gs.E, i);

    PointState ps;
    BackgroundPoint bp;
    PointJets js;
    const double u_min = Admissibility{}.u_min;
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        load_point(st, p, sd, ps);
        load_background_point(bg, p, sd, bp);
        const ProjPoint proj =
            projection_point(sd, ps.g, ps.gi, ps.al, grid, p, u_min);

        // second-derivative rows DD_m[b] = d_m D_b gbar: the time-time slot
        // comes from the supplied dt k, mixed slots from d_i k, and the
        // spatial block from d_a (gbar_{,i}).
        double dtk[kMaxDense];
        unpack_sym(src.dt_k, p, dtk);
        double dkp[3][kMaxDense];
        double ddgp[3][3][kMaxDense];
        for (int i = 0; i < dim; ++i) {
            unpack_sym(dk[i], p, dkp[i]);
            for (int a = 0; a < dim; ++a) unpack_sym(ddg[a][i], p, ddgp[a][i]);
        }
        double dgi[kMaxSd][kMaxDense];
        double dgam[kMaxSd][kMaxSd * kMaxDense];
        const double* DD[kMaxSd];
        for (int m = 0; m < sd; ++m) {
            dginv_point(sd, ps.gi, ps.D[m], dgi[m]);
            if (m == 0) {
                DD[0] = dtk;
                for (int j = 0; j < dim; ++j) DD[1 + j] = dkp[j];
            } else {
                DD[0] = dkp[m - 1];
                for (int j = 0; j < dim; ++j) DD[1 + j] = ddgp[m - 1][j];
            }
            dchristoffel_from_derivs(sd, ps.gi, dgi[m], ps.Dp, DD, dgam[m]);
        }
        const double* dgamrows[kMaxSd];
        for (int m = 0; m < sd; ++m) dgamrows[m] = dgam[m];
        double ric[kMaxDense];
        ricci_point(sd, ps.gam, dgamrows, ric);

        double dtE[kMaxSd];
        dt_E_point(sd, ps, bp, dgi[0], dgam[0], dtE);
        const double* DErows[kMaxSd];
        DErows[0] = dtE;
        for (int i = 0; i < dim; ++i) DErows[1 + i] = dE[i].pt(p);
        double sne[kMaxDense];
        sym_nabla_point(sd, ps.gam, gs.E.pt(p), DErows, sne);

        const double* dalrows[3];
        const double* dZrows[3];
        for (int i = 0; i < dim; ++i) {
            dalrows[i] = dal[i].pt(p);
            dZrows[i] = dZf[i].pt(p);
        }
        z_jets_point(sd, ps, proj, src.dt_alpha1.pt(p), src.dt_Z.pt(p), dalrows,
                     dZrows, js);

        for (int m = 0; m < sd; ++m)
            for (int n = 0; n < sd; ++n) {
                double s = js.dV[m][n];
                for (int e = 0; e < sd; ++e)
                    s += ps.gam[(n * sd + m) * sd + e] * proj.V[e];
                out.nabla_V.at(p, n * sd + m) = s;
            }
        double nv = 0.0;
        for (int n = 0; n < sd; ++n) nv += js.al4[n] * proj.V[n];
        out.null_V.at(p, 0) = nv;
        for (int m = 0; m < sd; ++m)
            for (int n = m; n < sd; ++n) {
                const int c = sym_index(m, n, sd);
                out.sym_nabla_E.at(p, c) = sne[m * sd + n];
                out.z_pr.at(p, c) = js.Zpr[m * sd + n];
            }
        for (int b = 0; b < sd; ++b)
            for (int d = 0; d < sd; ++d) {
                const int c = b * sd + d;
                out.ricci_bar.at(p, c) = ric[c];
                out.ricci_res.at(p, c) = ric[c] - js.Zpr[c] + sne[c];
            }
        for (int n = 0; n < sd; ++n) {
            double s = 0.0;
            for (int m = 0; m < sd; ++m) s += js.Zpr[m * sd + n] * proj.V[m];
            out.ZV.at(p, n) = s;
        }
        double dvz[kMaxDense];
        dvz_point(sd, ps, proj, js, dvz);
        for (int m = 0; m < sd; ++m)
            for (int n = m; n < sd; ++n)
                out.dVZ.at(p, sym_index(m, n, sd)) = dvz[m * sd + n];
        double dl[kMaxSd];
        delta_L_point(sd, ps, js, dl);
        for (int n = 0; n < sd; ++n) out.delta_L.at(p, n) = dl[n];
    }
    return out;
}

DiagnosticsReport residual_suite(const CauchyState& st, const BackgroundData& bg,
                                 double dt) {
    check_state_shapes(st, bg);
    DiagnosticsReport rep;
    rep.t = st.t;
    rep.dt = dt;
    const Admissibility adm{};
    Admissibility metric_only = adm;
    metric_only.u_min = -std::numeric_limits<double>::infinity();
    const StateScan ms = scan_state(st, metric_only);
    if (!ms.admissible) throw std::domain_error("residual_suite: " + ms.reason);
    rep.c_max = ms.c_max;
    rep.min_eig_A0 = ms.min_eig_A0;
    const StateScan fs = scan_state(st, adm);
    if (!fs.admissible) {
        rep.v_valid = false;
        rep.E = field_norms(gauge_source(st, bg).E);
        rep.alpha_purity = field_norms(alpha_purity_field(st));
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rep.nabla_V = {nan, nan};
        rep.null_V = {nan, nan};
        rep.ricci_res = {nan, nan};
        rep.ZV = {nan, nan};
        rep.dVZ = {nan, nan};
        rep.delta_L = {nan, nan};
        return rep;
    }
    const SliceSources src = evolution_sources(st, bg);
    const DiagnosticFields f = diagnostic_fields(st, bg, src);
    rep.E = field_norms(f.E);
    rep.nabla_V = field_norms(f.nabla_V);
    rep.null_V = field_norms(f.null_V);
    rep.ricci_res = field_norms(f.ricci_res);
    rep.ZV = field_norms(f.ZV);
    rep.dVZ = field_norms(f.dVZ);
    rep.delta_L = field_norms(f.delta_L);
    rep.alpha_purity = field_norms(f.alpha_purity);
    return rep;
}

Field delta_L(const CauchyState& st) {
    const Grid& grid = st.gbar.g.grid;
    const int dim = grid.dim, sd = dim + 1;
    if (st.alpha.ncomp != (1 << sd))
        throw std::invalid_argument("delta_L: alpha component count mismatch");
    Field out = make_field(grid, 1, 0, true);
    Field dal[3], dZf[3];
    for (int i = 0; i < dim; ++i) {
        dal[i] = partial_derivative(st.alpha, i);
        dZf[i] = partial_derivative(st.Z, i);
    }
    PointState ps;
    PointJets js;
    const double u_min = Admissibility{}.u_min;
    for (std::int64_t p = 0; p < grid.npts(); ++p) {
        load_point(st, p, sd, ps);
        const ProjPoint proj =
            projection_point(sd, ps.g, ps.gi, ps.al, grid, p, u_min);
        const double* dalrows[3];
        const double* dZrows[3];
        for (int i = 0; i < dim; ++i) {
            dalrows[i] = dal[i].pt(p);
            dZrows[i] = dZf[i].pt(p);
        }
        double dta16[kMaxMv], dta4[kMaxSd], dtZ[6];
        alpha_rhs_point(sd, ps, proj, grid, p, dalrows, dta16);
        for (int n = 0; n < sd; ++n) dta4[n] = dta16[1u << n];
        z_rhs_point(sd, ps, proj, dZrows, dtZ);
        z_jets_point(sd, ps, proj, dta4, dtZ, dalrows, dZrows, js);
        double dl[kMaxSd];
        delta_L_point(sd, ps, js, dl);
        for (int n = 0; n < sd; ++n) out.at(p, n) = dl[n];
    }
    return out;
}

ProjectionData split_V(const CauchyState& st, std::int64_t p) {
    return projection_data(st.gbar, st.alpha, p);
}

double convergence_order(const std::vector<double>& values,
                         const std::vector<double>& spacings) {
    if (values.size() != spacings.size())
        throw std::invalid_argument("convergence_order: length mismatch");
    if (values.size() < 2)
        throw std::invalid_argument("convergence_order: need at least two pairs");
    const std::size_t n = values.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(spacings[i] > 0.0))
            throw std::invalid_argument(
                "convergence_order: spacings must be positive");
        if (!(values[i] > 0.0))
            throw std::invalid_argument("convergence_order: value " +
                                        std::to_string(values[i]) +
                                        " is below floor, log slope undefined");
        x[i] = std::log(spacings[i]);
        y[i] = std::log(values[i]);
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0))
        throw std::invalid_argument("convergence_order: spacings are all equal");
    return sxy / sxx;
}

namespace {

void append_norms(std::ostringstream& os, const FieldNorms& n) {
    os << ',' << n.linf << ',' << n.l2;
}

}  // namespace

std::string DiagnosticsCsv::header() {
    return "t,E_linf,E_l2,nabla_V_linf,nabla_V_l2,null_V_linf,null_V_l2,"
           "ricci_res_linf,ricci_res_l2,ZV_linf,ZV_l2,dVZ_linf,dVZ_l2,"
           "delta_L_linf,delta_L_l2,alpha_purity_linf,alpha_purity_l2,"
           "dt,c_max,min_eig_A0";
}

std::string DiagnosticsCsv::format_row(const DiagnosticsReport& r) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << r.t;
    append_norms(os, r.E);
    append_norms(os, r.nabla_V);
    append_norms(os, r.null_V);
    append_norms(os, r.ricci_res);
    append_norms(os, r.ZV);
    append_norms(os, r.dVZ);
    append_norms(os, r.delta_L);
    append_norms(os, r.alpha_purity);
    os << ',' << r.dt << ',' << r.c_max << ',' << r.min_eig_A0;
    return os.str();
}

DiagnosticsCsv::DiagnosticsCsv(const std::string& path) : out_(path) {
    if (!out_)
        throw std::runtime_error("diagnostics: cannot open " + path +
                                 " for writing");
    out_ << header() << '\n';
}

void DiagnosticsCsv::append(const DiagnosticsReport& rep) {
    out_ << format_row(rep) << '\n';
    out_.flush();
}

}  // namespace pnv
