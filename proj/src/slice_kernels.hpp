// Pointwise kernels shared by the evolution right-hand side and the
// diagnostic residual assembly. Everything here works on small dense
// per-point buffers; fields are unpacked on entry and repacked by callers.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pnv/evolver.hpp"
#include "pnv/multivector.hpp"

namespace pnv {
namespace detail {

constexpr int kMaxSd = 4;
constexpr int kMaxDense = kMaxSd * kMaxSd;
constexpr int kMaxMv = 1 << kMaxSd;

inline std::string point_label(const Grid& g, std::int64_t p) {
    const auto ix = g.unflatten(p);
    std::ostringstream os;
    os << "point (";
    for (int a = 0; a < g.dim; ++a) {
        if (a) os << ", ";
        os << g.coord(ix, a);
    }
    os << ")";
    return os.str();
}

// Gamma^a_{bc} = (1/2) g^{ae} (D_b g_{ec} + D_c g_{eb} - D_e g_{bc}) from
// dense per-direction derivative matrices (D[0] is the time derivative).
// Output order (a; b, c), dense over spacetime indices.
inline void christoffel_from_derivs(int sd, const double* gi,
                                    const double* const* D, double* gam) {
    for (int a = 0; a < sd; ++a)
        for (int b = 0; b < sd; ++b)
            for (int c = b; c < sd; ++c) {
                double t = 0.0;
                for (int e = 0; e < sd; ++e)
                    t += gi[a * sd + e] *
                         (D[b][e * sd + c] + D[c][e * sd + b] - D[e][b * sd + c]);
                t *= 0.5;
                gam[(a * sd + b) * sd + c] = t;
                gam[(a * sd + c) * sd + b] = t;
            }
}

// Derivative of the Christoffel symbols in direction m, given dgi = d_m g^{-1},
// the first-derivative matrices D, and their m-derivatives DD[b] = d_m D_b g.
inline void dchristoffel_from_derivs(int sd, const double* gi, const double* dgi,
                                     const double* const* D,
                                     const double* const* DD, double* dgam) {
    for (int a = 0; a < sd; ++a)
        for (int b = 0; b < sd; ++b)
            for (int c = b; c < sd; ++c) {
                double t = 0.0;
                for (int e = 0; e < sd; ++e) {
                    t += dgi[a * sd + e] *
                         (D[b][e * sd + c] + D[c][e * sd + b] - D[e][b * sd + c]);
                    t += gi[a * sd + e] * (DD[b][e * sd + c] + DD[c][e * sd + b] -
                                           DD[e][b * sd + c]);
                }
                t *= 0.5;
                dgam[(a * sd + b) * sd + c] = t;
                dgam[(a * sd + c) * sd + b] = t;
            }
}

// Quadratic term of the reduced Ricci. With first-kind symbols
// Gl_{a,cm} = g_{ar} Gamma^r_{cm}:
//   A_mn = g^{ab} g^{cd} Gl_{m,ac} Gl_{b,nd}
//   B_mn = g^{ab} g^{cd} Gl_{a,mc} Gl_{b,nd}
//   H = A + A^T + B
inline void h_term_point(int sd, const double* g, const double* gi,
                         const double* gam, double* hout) {
    double gl[kMaxSd][kMaxSd][kMaxSd];
    for (int a = 0; a < sd; ++a)
        for (int c = 0; c < sd; ++c)
            for (int m = 0; m < sd; ++m) {
                double s = 0.0;
                for (int r = 0; r < sd; ++r)
                    s += g[a * sd + r] * gam[(r * sd + c) * sd + m];
                gl[a][c][m] = s;
            }
    double s1[kMaxSd][kMaxSd][kMaxSd], t1[kMaxSd][kMaxSd][kMaxSd];
    double s2[kMaxSd][kMaxSd][kMaxSd], t2[kMaxSd][kMaxSd][kMaxSd];
    for (int a = 0; a < sd; ++a)
        for (int d = 0; d < sd; ++d)
            for (int m = 0; m < sd; ++m) {
                double u = 0.0, v = 0.0;
                for (int c = 0; c < sd; ++c) {
                    u += gi[c * sd + d] * gl[m][a][c];
                    v += gi[c * sd + d] * gl[a][m][c];
                }
                s1[a][d][m] = u;
                s2[a][d][m] = v;
            }
    for (int b = 0; b < sd; ++b)
        for (int d = 0; d < sd; ++d)
            for (int m = 0; m < sd; ++m) {
                double u = 0.0, v = 0.0;
                for (int a = 0; a < sd; ++a) {
                    u += gi[a * sd + b] * s1[a][d][m];
                    v += gi[a * sd + b] * s2[a][d][m];
                }
                t1[b][d][m] = u;
                t2[b][d][m] = v;
            }
    double am[kMaxSd][kMaxSd], bm[kMaxSd][kMaxSd];
    for (int m = 0; m < sd; ++m)
        for (int n = 0; n < sd; ++n) {
            double u = 0.0, v = 0.0;
            for (int b = 0; b < sd; ++b)
                for (int d = 0; d < sd; ++d) {
                    u += t1[b][d][m] * gl[b][n][d];
                    v += t2[b][d][m] * gl[b][n][d];
                }
            am[m][n] = u;
            bm[m][n] = v;
        }
    for (int m = 0; m < sd; ++m)
        for (int n = 0; n < sd; ++n)
            hout[m * sd + n] = am[m][n] + am[n][m] + bm[m][n];
}

// out += Gamma_mu applied to the multivector coefficients: the connection
// action -Gamma^rho_{mu nu} sigma^nu wedge (e_rho interior in).
inline void connection_acc(int sd, const double* gam, int mu, const double* in,
                           double* out) {
    const unsigned n = 1u << sd;
    for (unsigned m = 0; m < n; ++m) {
        const double vi = in[m];
        if (vi == 0.0) continue;
        for (int rho = 0; rho < sd; ++rho) {
            const unsigned rb = 1u << rho;
            if (!(m & rb)) continue;
            const unsigned rem = m & ~rb;
            const double s1 = insert_sign(rem, rho);
            for (int nu = 0; nu < sd; ++nu) {
                const unsigned nb = 1u << nu;
                if (rem & nb) continue;
                out[rem | nb] -=
                    gam[(rho * sd + mu) * sd + nu] * s1 * insert_sign(rem, nu) * vi;
            }
        }
    }
}

struct PointState {
    double g[kMaxDense];
    double gi[kMaxDense];
    double D[kMaxSd][kMaxDense];  // D[0] = k, D[1+i] = gbar_{,i}
    const double* Dp[kMaxSd];
    double gam[kMaxSd * kMaxDense];
    const double* al = nullptr;
    double Zv[9];
};

inline void load_point(const CauchyState& st, std::int64_t p, int sd,
                       PointState& ps) {
    unpack_sym(st.gbar.g, p, ps.g);
    unpack_sym(st.gbar.ginv, p, ps.gi);
    unpack_sym(st.k, p, ps.D[0]);
    for (int i = 0; i + 1 < sd; ++i) unpack_sym(st.dgbar[i], p, ps.D[1 + i]);
    for (int mu = 0; mu < sd; ++mu) ps.Dp[mu] = ps.D[mu];
    christoffel_from_derivs(sd, ps.gi, ps.Dp, ps.gam);
    ps.al = st.alpha.pt(p);
    const int d = sd - 1;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) ps.Zv[a * d + b] = st.Z.at(p, sym_index(a, b, d));
}

// Background connection at a point through the same kernel as the evolved
// one, with an identically zero time row.
struct BackgroundPoint {
    double hg[kMaxDense];
    double hgi[kMaxDense];
    double zero[kMaxDense];
    double dh[3][kMaxDense];
    const double* Dp[kMaxSd];
    double gam[kMaxSd * kMaxDense];
};

inline void load_background_point(const BackgroundData& bg, std::int64_t p,
                                  int sd, BackgroundPoint& bp) {
    unpack_sym(bg.metric.h.g, p, bp.hg);
    unpack_sym(bg.metric.h.ginv, p, bp.hgi);
    std::memset(bp.zero, 0, sizeof(bp.zero));
    bp.Dp[0] = bp.zero;
    for (int i = 0; i + 1 < sd; ++i) {
        unpack_sym(bg.dh[i], p, bp.dh[i]);
        bp.Dp[1 + i] = bp.dh[i];
    }
    christoffel_from_derivs(sd, bp.hgi, bp.Dp, bp.gam);
}

struct ProjPoint {
    double lamt = 0.0;
    double u = 0.0;
    double V[kMaxSd];
    double N[3];
    double P[3][kMaxSd];  // spatial rows of the projector
};

inline ProjPoint projection_point(int sd, const double* g, const double* gi,
                                  const double* al, const Grid& grid,
                                  std::int64_t p, double u_min) {
    ProjPoint pr{};
    const double g00 = g[0];
    if (!(g00 < 0.0))
        throw std::domain_error("projection: gbar(d_t, d_t) = " +
                                std::to_string(g00) + " is not negative at " +
                                point_label(grid, p));
    pr.lamt = std::sqrt(-g00);
    for (int mu = 0; mu < sd; ++mu) {
        double s = 0.0;
        for (int nu = 0; nu < sd; ++nu) s += gi[mu * sd + nu] * al[1u << nu];
        pr.V[mu] = s;
    }
    pr.u = -al[1] / pr.lamt;
    if (!(pr.u > u_min))
        throw std::domain_error("projection: u = " + std::to_string(pr.u) +
                                " below threshold " + std::to_string(u_min) +
                                " at " + point_label(grid, p));
    const double c = 1.0 / (pr.lamt * pr.u);
    for (int i = 0; i + 1 < sd; ++i) pr.N[i] = -pr.V[i + 1] / pr.u;
    for (int k = 0; k + 1 < sd; ++k)
        for (int mu = 0; mu < sd; ++mu)
            pr.P[k][mu] = (k + 1 == mu ? 1.0 : 0.0) + g[mu] * pr.V[k + 1] * c;
    return pr;
}

inline void z_pr_point(int sd, const PointState& ps, const ProjPoint& proj,
                       double* out) {
    const int d = sd - 1;
    for (int m = 0; m < sd; ++m)
        for (int n = m; n < sd; ++n) {
            double s = 0.0;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    s += ps.Zv[k * d + l] * proj.P[k][m] * proj.P[l][n];
            out[m * sd + n] = s;
            out[n * sd + m] = s;
        }
}

// Time derivative of F_nu = gbar_{mu nu} gbar^{ab} GammaT^mu_{ab} by the
// chain rule: the background connection is static, so only gbar and its
// inverse move, with dt gbar = k and dt gbar^{ab} = -(gi k gi)^{ab}.
inline void dt_F_point(int sd, const PointState& ps, const BackgroundPoint& bp,
                       double* dtF) {
    double ct[kMaxSd], ctdot[kMaxSd];
    double kupup[kMaxDense];
    for (int a = 0; a < sd; ++a)
        for (int b = 0; b < sd; ++b) {
            double s = 0.0;
            for (int r = 0; r < sd; ++r)
                for (int q = 0; q < sd; ++q)
                    s += ps.gi[a * sd + r] * ps.D[0][r * sd + q] * ps.gi[q * sd + b];
            kupup[a * sd + b] = -s;
        }
    for (int mu = 0; mu < sd; ++mu) {
        double s = 0.0, sdot = 0.0;
        for (int a = 0; a < sd; ++a)
            for (int b = 0; b < sd; ++b) {
                const double gt = bp.gam[(mu * sd + a) * sd + b];
                s += ps.gi[a * sd + b] * gt;
                sdot += kupup[a * sd + b] * gt;
            }
        ct[mu] = s;
        ctdot[mu] = sdot;
    }
    for (int nu = 0; nu < sd; ++nu) {
        double s = 0.0;
        for (int mu = 0; mu < sd; ++mu)
            s += ps.D[0][mu * sd + nu] * ct[mu] + ps.g[mu * sd + nu] * ctdot[mu];
        dtF[nu] = s;
    }
}

// F and E at a point; E is contracted from the difference tensor so that it
// vanishes identically when the evolved connection equals the background one.
inline void gauge_point(int sd, const PointState& ps, const BackgroundPoint& bp,
                        double* Fout, double* Eout) {
    for (int nu = 0; nu < sd; ++nu) {
        double f = 0.0, e = 0.0;
        for (int mu = 0; mu < sd; ++mu) {
            double ct = 0.0, ca = 0.0;
            for (int a = 0; a < sd; ++a)
                for (int b = 0; b < sd; ++b) {
                    const double gt = bp.gam[(mu * sd + a) * sd + b];
                    ct += ps.gi[a * sd + b] * gt;
                    ca += ps.gi[a * sd + b] * (ps.gam[(mu * sd + a) * sd + b] - gt);
                }
            f += ps.g[mu * sd + nu] * ct;
            e -= ps.g[mu * sd + nu] * ca;
        }
        Fout[nu] = f;
        if (Eout) Eout[nu] = e;
    }
}

// Transport right-hand side of the alpha system at a point: invert
// (1/lamt - c(s0) c(y0)) against the spatial Clifford transport
// sum_k c(s0) c(s_k) zeta_k^i D_i alpha, then peel off the connection part
// of nabla_t. dal_rows[i] holds the coordinate derivative d_i alpha.
inline void alpha_rhs_point(int sd, const PointState& ps, const ProjPoint& proj,
                            const Grid& grid, std::int64_t p,
                            const double* const* dal_rows, double* dta) {
    const int dim = sd - 1;
    const int nal = 1 << sd;
    Frame fr;
    try {
        fr = gram_schmidt_frame(sd, ps.g, true);
    } catch (const std::domain_error& e) {
        throw std::domain_error(std::string(e.what()) + " at " +
                                point_label(grid, p));
    }
    double Dal[3][kMaxMv];
    for (int i = 0; i < dim; ++i) {
        std::memcpy(Dal[i], dal_rows[i], sizeof(double) * nal);
        connection_acc(sd, ps.gam, i + 1, ps.al, Dal[i]);
    }
    double S[kMaxMv] = {}, t1[kMaxMv], t2[kMaxMv];
    double leg[kMaxSd];
    for (int k = 1; k < sd; ++k) {
        double wsum[kMaxMv] = {};
        bool any = false;
        for (int i = 0; i < dim; ++i) {
            const double w = fr.z(k, i + 1);
            if (w == 0.0) continue;
            any = true;
            for (int m = 0; m < nal; ++m) wsum[m] += w * Dal[i][m];
        }
        if (!any) continue;
        for (int mu = 0; mu < sd; ++mu) leg[mu] = fr.z(k, mu);
        std::memset(t1, 0, sizeof(double) * nal);
        mv_clifford_acc(sd, leg, ps.g, wsum, t1);
        for (int mu = 0; mu < sd; ++mu) leg[mu] = fr.z(0, mu);
        mv_clifford_acc(sd, leg, ps.g, t1, S);
    }
    double z0sq = 0.0;
    double y0[kMaxSd] = {};
    for (int k = 1; k < sd; ++k) {
        const double w = fr.z(k, 0);
        z0sq += w * w;
        for (int mu = 0; mu < sd; ++mu) y0[mu] += w * fr.z(k, mu);
    }
    const double a = 1.0 / proj.lamt;
    const double denom = a * a - z0sq;
    if (!(denom > 1e-12))
        throw std::domain_error(
            "alpha symbol lost positive definiteness (1/lamt^2 - |zeta0|^2 = " +
            std::to_string(denom) + ") at " + point_label(grid, p));
    std::memset(t1, 0, sizeof(double) * nal);
    mv_clifford_acc(sd, y0, ps.g, S, t1);
    std::memset(t2, 0, sizeof(double) * nal);
    for (int mu = 0; mu < sd; ++mu) leg[mu] = fr.z(0, mu);
    mv_clifford_acc(sd, leg, ps.g, t1, t2);
    double conn0[kMaxMv] = {};
    connection_acc(sd, ps.gam, 0, ps.al, conn0);
    for (int m = 0; m < nal; ++m) dta[m] = (a * S[m] + t2[m]) / denom - conn0[m];
}

// Transport right-hand side of Z at a point; dZ_rows[i] holds the packed
// coordinate derivative d_i Z, dtZ receives the packed result.
inline void z_rhs_point(int sd, const PointState& ps, const ProjPoint& proj,
                        const double* const* dZ_rows, double* dtZ) {
    const int d = sd - 1;
    for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l) {
            const int c = sym_index(k, l, d);
            double s = 0.0;
            for (int i = 0; i < d; ++i) s += proj.N[i] * dZ_rows[i][c];
            s *= proj.lamt;
            for (int i = 0; i < d; ++i)
                s += ps.gam[((i + 1) * sd + 0) * sd + (k + 1)] * ps.Zv[l * d + i] +
                     ps.gam[((i + 1) * sd + 0) * sd + (l + 1)] * ps.Zv[k * d + i];
            double adv = 0.0;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    adv += proj.N[i] *
                           (ps.gam[((j + 1) * sd + (i + 1)) * sd + (k + 1)] *
                                ps.Zv[l * d + j] +
                            ps.gam[((j + 1) * sd + (i + 1)) * sd + (l + 1)] *
                                ps.Zv[k * d + j]);
            s -= proj.lamt * adv;
            dtZ[c] = s;
        }
}

inline void sym_nabla_point(int sd, const double* gam, const double* one,
                            const double* const* done, double* out) {
    for (int m = 0; m < sd; ++m)
        for (int n = m; n < sd; ++n) {
            double s = 0.5 * (done[m][n] + done[n][m]);
            for (int e = 0; e < sd; ++e) s -= gam[(e * sd + m) * sd + n] * one[e];
            out[m * sd + n] = s;
            out[n * sd + m] = s;
        }
}

inline void check_state_shapes(const CauchyState& st, const BackgroundData& bg) {
    const Grid& grid = st.gbar.g.grid;
    if (!(grid == bg.metric.h.g.grid))
        throw std::invalid_argument("evolver: state and background grids differ");
    if (st.alpha.ncomp != (1 << (grid.dim + 1)))
        throw std::invalid_argument("evolver: alpha component count mismatch");
    for (int i = 0; i < grid.dim; ++i)
        if (!(st.dgbar[i].grid == grid))
            throw std::invalid_argument("evolver: derivative block grid mismatch");
}

}  // namespace detail
}  // namespace pnv
