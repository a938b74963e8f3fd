"""Generates tests/oracle_data/brinkmann_oracle.hpp.

Exact plane-fronted wave in Rosen-type coordinates on R^{1,1} x T^2:

    gbar = -dt^2 + ds^2 + p(w) (dx^2 + dy^2),   w = t + s,  p = 1 + eps sin w.

V = d_t - d_s is a parallel null vector field for every profile p. The slice
t = 0 carries g = ds^2 + p(s) delta, u = 1, U = N = d_s, W = -(1/2) p'(s) on
the fiber block and 0 elsewhere.

The script verifies symbolically, before freezing any numbers:
  * nabla V = 0 and gbar(V,V) = 0 for the exact metric;
  * the slice constraint nabla U + u W = 0;
  * Ric_bar|_{t=0} = Z o pr with Z assembled from the slice data (this pins
    the curvature-slot convention of the mixed-curvature term in Z);
  * the scalar identity N^i N^j Z_ij + tr Z = scal - |W|^2 + (tr W)^2.

Frozen outputs (two sample points s in {2 pi 3/24, 2 pi 11/24}, t = 0):
full spacetime Ricci, scalar curvature, slice Z, W, tr W, slice scal.

Run: python3 tools/oracles/gen_brinkmann_oracle.py > tests/oracle_data/brinkmann_oracle.hpp
"""

import sys

import sympy as sp

t, s, x, y = sp.symbols('t s x y', real=True)
eps = sp.Rational(1, 10)
w = t + s
p = 1 + eps * sp.sin(w)


def christoffel(g, X):
    d = len(X)
    gi = g.inv()
    Gam = [[[sp.S.Zero] * d for _ in range(d)] for _ in range(d)]
    for a in range(d):
        for b in range(d):
            for c in range(d):
                e_sum = sp.S.Zero
                for e in range(d):
                    e_sum += gi[a, e] * (sp.diff(g[e, b], X[c]) + sp.diff(g[e, c], X[b])
                                         - sp.diff(g[b, c], X[e]))
                Gam[a][b][c] = sp.simplify(e_sum / 2)
    return Gam


def riemann_lowered(g, Gam, X):
    d = len(X)
    R = [[[[sp.S.Zero] * d for _ in range(d)] for _ in range(d)] for _ in range(d)]
    for a in range(d):
        for b in range(d):
            for c in range(d):
                for e in range(d):
                    expr = sp.diff(Gam[a][e][b], X[c]) - sp.diff(Gam[a][c][b], X[e])
                    for f in range(d):
                        expr += Gam[a][c][f] * Gam[f][e][b] - Gam[a][e][f] * Gam[f][c][b]
                    R[a][b][c][e] = expr
    Rl = [[[[sp.S.Zero] * d for _ in range(d)] for _ in range(d)] for _ in range(d)]
    for a in range(d):
        for b in range(d):
            for c in range(d):
                for e in range(d):
                    expr = sp.S.Zero
                    for f in range(d):
                        expr += g[a, f] * R[f][b][c][e]
                    Rl[a][b][c][e] = sp.simplify(expr)
    return R, Rl


def ricci(Rup, d):
    Ric = sp.zeros(d, d)
    for b in range(d):
        for e in range(d):
            expr = sp.S.Zero
            for a in range(d):
                expr += Rup[a][b][a][e]
            Ric[b, e] = sp.simplify(expr)
    return Ric


def main():
    # ---- spacetime ----
    XT = [t, s, x, y]
    gbar = sp.diag(-1, 1, p, p)
    Gam_bar = christoffel(gbar, XT)

    # parallel null vector: V = d_t - d_s
    V = [1, -1, 0, 0]
    for nu in range(4):
        for mu in range(4):
            dv = sum(Gam_bar[nu][mu][rho] * V[rho] for rho in range(4))
            assert sp.simplify(dv) == 0, (nu, mu)
    assert sp.simplify(sum(gbar[a, b] * V[a] * V[b] for a in range(4) for b in range(4))) == 0

    Rup_bar, _ = riemann_lowered(gbar, Gam_bar, XT)
    Ric_bar = ricci(Rup_bar, 4)
    gibar = gbar.inv()
    scal_bar = sp.simplify(sum(gibar[a, b] * Ric_bar[a, b] for a in range(4) for b in range(4)))

    # ---- slice t = 0 ----
    XS = [s, x, y]
    p0 = p.subs(t, 0)
    g = sp.diag(1, p0, p0)
    gi = g.inv()
    Gam = christoffel(g, XS)
    Rup, Rlow = riemann_lowered(g, Gam, XS)
    Ric = ricci(Rup, 3)
    scal = sp.simplify(sum(gi[a, b] * Ric[a, b] for a in range(3) for b in range(3)))

    # slice data: u = 1, U = N = d_s, W = -(1/2) hdot on the fiber
    W = sp.diag(0, -sp.diff(p0, s) / 2, -sp.diff(p0, s) / 2)
    U = [1, 0, 0]
    N = [1, 0, 0]

    # constraint: nabla_i U_j + u W_ij = 0 with U^flat = ds
    Ub = [sum(g[a, b] * U[b] for b in range(3)) for a in range(3)]
    for i in range(3):
        for j in range(3):
            nab = sp.diff(Ub[j], XS[i]) - sum(Gam[e][i][j] * Ub[e] for e in range(3))
            assert sp.simplify(nab + W[i, j]) == 0, (i, j)

    trW = sp.simplify(sum(gi[a, b] * W[a, b] for a in range(3) for b in range(3)))

    # delta^g W (1-form) and d trW
    def nabW(m, a, b):
        expr = sp.diff(W[a, b], XS[m])
        for e in range(3):
            expr -= Gam[e][m][a] * W[e, b] + Gam[e][m][b] * W[a, e]
        return expr

    deltaW = [sp.simplify(-sum(gi[m, a] * nabW(m, a, i) for m in range(3) for a in range(3)))
              for i in range(3)]
    dtrW = [sp.diff(trW, XS[i]) for i in range(3)]

    # Z per the initial-data formulas, u = 1
    Z = sp.zeros(3, 3)
    for i in range(3):
        Z[0, i] = dtrW[i] + deltaW[i]
        Z[i, 0] = Z[0, i]

    W2 = W * gi * W
    WN = [sum(W[a, b] * N[b] for b in range(3)) for a in range(3)]
    WNN = sum(WN[a] * N[a] for a in range(3))
    for a in range(1, 3):
        for b in range(1, 3):
            # R(X,N,N,Y) = g(R(X,N)N, Y); in the reference array layout
            # R_low[A][B][C][D] = g(R(d_C,d_D) d_B, d_A) this is
            # R_low[b][0][a][0] (adjudicated by the Ricci == Z o pr assert).
            RXNNY = Rlow[b][0][a][0]
            Z[a, b] = Ric[a, b] - RXNNY - W2[a, b] + trW * W[a, b] \
                + WN[a] * WN[b] - WNN * W[a, b]

    # pr composition at t=0: P^k_0 = delta^k_s, P^k_i = delta^k_i
    Zpr = sp.zeros(4, 4)
    Zpr[0, 0] = Z[0, 0]
    for i in range(3):
        Zpr[0, i + 1] = Z[0, i]
        Zpr[i + 1, 0] = Z[0, i]
    for i in range(3):
        for j in range(3):
            Zpr[i + 1, j + 1] = Z[i, j]

    Ric0 = Ric_bar.subs(t, 0)
    ok = all(sp.simplify(Ric0[m, n] - Zpr[m, n]) == 0 for m in range(4) for n in range(4))
    assert ok, "Ricci == Z o pr failed: curvature slot convention mismatch in Z"

    # scalar identity on the slice
    NZN = sum(N[i] * N[j] * Z[i, j] for i in range(3) for j in range(3))
    trZ = sum(gi[a, b] * Z[a, b] for a in range(3) for b in range(3))
    W2tr = sum(gi[a, c] * gi[b, e] * W[a, b] * W[c, e]
               for a in range(3) for b in range(3) for c in range(3) for e in range(3))
    assert sp.simplify(NZN + trZ - (scal - W2tr + trW**2)) == 0

    # the full Ricci is rank one: Ric_bar = ric_fac(w) l ox l with l = dt + ds
    wsym = sp.Symbol('w', real=True)
    ric_fac = sp.simplify(Ric_bar[0, 0].subs(s, wsym - t))
    assert t not in ric_fac.free_symbols
    lvec = [1, 1, 0, 0]
    for m in range(4):
        for n in range(4):
            assert sp.simplify(Ric_bar[m, n] - ric_fac.subs(wsym, t + s) * lvec[m] * lvec[n]) == 0

    # ---- freeze ----
    pts = [2 * sp.pi * 3 / 24, 2 * sp.pi * 11 / 24]
    out = ["// Generated by tools/oracles/gen_brinkmann_oracle.py; do not edit.",
           "// gbar = -dt^2 + ds^2 + (1 + 0.1 sin(t+s)) (dx^2 + dy^2) at t = 0.",
           "#pragma once", "#include <cmath>", "",
           "namespace brinkmann {",
           "inline double profile(double w) { return " + sp.ccode(p.subs(t + s, wsym)) + "; }",
           "inline double dprofile(double w) { return " + sp.ccode(sp.diff(p, t).subs(t + s, wsym)) + "; }",
           "// Ric_bar = ricci_factor(t+s) l ox l with l = dt + ds (verified above).",
           "inline double ricci_factor(double w) { return " + sp.ccode(ric_fac) + "; }",
           "}", ""]
    for idx, sval in enumerate(pts, start=1):
        sub = {t: 0, s: sval}
        def num(e):
            v = float(sp.N(e.subs(sub) if hasattr(e, 'subs') else e, 20))
            if abs(v) < 1e-30:
                v = 0.0
            return repr(v)
        ric_vals = ", ".join(num(Ric0[m, n]) for m in range(4) for n in range(4))
        z_vals = ", ".join(num(Z[a, b]) for a in range(3) for b in range(3))
        w_vals = ", ".join(num(W[a, b]) for a in range(3) for b in range(3))
        out.append(f"namespace brinkmann_p{idx} {{")
        out.append(f"inline constexpr double s_coord = {num(sval)};")
        out.append(f"inline constexpr double ricci_bar[16] = {{{ric_vals}}};")
        out.append(f"inline constexpr double scal_bar = {num(scal_bar.subs(sub))};")
        out.append(f"inline constexpr double z_slice[9] = {{{z_vals}}};")
        out.append(f"inline constexpr double w_slice[9] = {{{w_vals}}};")
        out.append(f"inline constexpr double tr_w = {num(trW.subs(sub))};")
        out.append(f"inline constexpr double scal_slice = {num(scal.subs(sub))};")
        out.append("}")
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
