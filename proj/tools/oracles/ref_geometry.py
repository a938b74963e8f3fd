"""Reference tensor assembly used by the oracle generators.

Conventions (must stay in sync with include/pnv/geometry.hpp):
  Gamma^a_{bc} = 1/2 g^{ae} (d_b g_{ec} + d_c g_{eb} - d_e g_{bc})
  R^a_{bcd}    = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
               + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
  R_{abcd}     = g_{ae} R^e_{bcd}
  Ric_{bd}     = R^a_{bad}
  scal         = g^{bd} Ric_{bd}
  (delta B)_i  = -g^{ma} nabla_m B_{ai}   (divergence of a symmetric 2-tensor)
  delta V      = -nabla_a V^a             (divergence of a vector)

Inputs are exact point values (from sympy) of the metric and its first and
second coordinate derivatives; assembly is plain numpy.
"""

import numpy as np


def christoffel(g, dg):
    """dg[b][e][c] = d_b g_{ec}; returns Gam[a][b][c]."""
    d = g.shape[0]
    gi = np.linalg.inv(g)
    Gam = np.zeros((d, d, d))
    for a in range(d):
        for b in range(d):
            for c in range(d):
                s = 0.0
                for e in range(d):
                    s += gi[a, e] * (dg[b][e][c] + dg[c][e][b] - dg[e][b][c])
                Gam[a, b, c] = 0.5 * s
    return Gam


def dchristoffel(g, dg, ddg):
    """ddg[m][b][e][c] = d_m d_b g_{ec}; returns dGam[m][a][b][c]."""
    d = g.shape[0]
    gi = np.linalg.inv(g)
    dgi = np.zeros((d, d, d))
    for m in range(d):
        dgi[m] = -gi @ dg[m] @ gi
    dGam = np.zeros((d, d, d, d))
    for m in range(d):
        for a in range(d):
            for b in range(d):
                for c in range(d):
                    s = 0.0
                    for e in range(d):
                        s += dgi[m, a, e] * (dg[b][e][c] + dg[c][e][b] - dg[e][b][c])
                        s += gi[a, e] * (ddg[m][b][e][c] + ddg[m][c][e][b] - ddg[m][e][b][c])
                    dGam[m, a, b, c] = 0.5 * s
    return dGam


def riemann_up(Gam, dGam):
    d = Gam.shape[0]
    R = np.zeros((d, d, d, d))
    for a in range(d):
        for b in range(d):
            for c in range(d):
                for e in range(d):
                    s = dGam[c, a, e, b] - dGam[e, a, c, b]
                    for f in range(d):
                        s += Gam[a, c, f] * Gam[f, e, b] - Gam[a, e, f] * Gam[f, c, b]
                    R[a, b, c, e] = s
    return R


def curvature(g, dg, ddg):
    """Returns (riemann_lowered, ricci, scal, einstein)."""
    d = g.shape[0]
    gi = np.linalg.inv(g)
    Gam = christoffel(g, dg)
    dGam = dchristoffel(g, dg, ddg)
    Rup = riemann_up(Gam, dGam)
    Rlow = np.einsum('ae,ebcd->abcd', g, Rup)
    Ric = np.einsum('abad->bd', Rup)
    scal = np.einsum('bd,bd->', gi, Ric)
    G = Ric - 0.5 * scal * g
    return Rlow, Ric, scal, G


def cov_deriv_oneform(om, dom, Gam):
    """dom[m][a] = d_m om_a; returns nab[m][a] = nabla_m om_a."""
    d = Gam.shape[0]
    nab = np.zeros((d, d))
    for m in range(d):
        for a in range(d):
            s = dom[m][a]
            for e in range(d):
                s -= Gam[e, m, a] * om[e]
            nab[m, a] = s
    return nab


def cov_deriv_11(t, dt, Gam):
    """t[a][b] (upper a, lower b), dt[m][a][b]; returns nab[a][m][b]."""
    d = Gam.shape[0]
    nab = np.zeros((d, d, d))
    for a in range(d):
        for m in range(d):
            for b in range(d):
                s = dt[m][a][b]
                for e in range(d):
                    s += Gam[a, m, e] * t[e][b]
                    s -= Gam[e, m, b] * t[a][e]
                nab[a, m, b] = s
    return nab


def div_sym2(B, dB, g, dg):
    """(delta B)_i = -g^{ma} nabla_m B_{ai}."""
    d = g.shape[0]
    gi = np.linalg.inv(g)
    Gam = christoffel(g, dg)
    out = np.zeros(d)
    for i in range(d):
        s = 0.0
        for m in range(d):
            for a in range(d):
                nab = dB[m][a][i]
                for e in range(d):
                    nab -= Gam[e, m, a] * B[e][i] + Gam[e, m, i] * B[a][e]
                s += gi[m, a] * nab
        out[i] = -s
    return out


def div_vector(V, dV, Gam):
    """delta V = -nabla_a V^a; dV[m][a] = d_m V^a."""
    d = Gam.shape[0]
    s = 0.0
    for a in range(d):
        s += dV[a][a]
        for e in range(d):
            s += Gam[a, a, e] * V[e]
    return -s


def fmt_array(name, arr):
    flat = np.asarray(arr).reshape(-1)
    vals = ", ".join(repr(float(v)) for v in flat)
    return f"inline constexpr double {name}[{len(flat)}] = {{{vals}}};"
