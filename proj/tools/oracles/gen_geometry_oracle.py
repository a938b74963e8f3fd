"""Generates tests/oracle_data/geometry_oracle.hpp.

Frozen curvature/derivative values for two fixed test metrics, computed from
exact symbolic coordinate derivatives (sympy) fed into the reference assembly
of ref_geometry.py. Run from the repository root:

    python3 tools/oracles/gen_geometry_oracle.py > tests/oracle_data/geometry_oracle.hpp
"""

import sys

import numpy as np
import sympy as sp

import ref_geometry as ref

x1, x2, x3 = sp.symbols('x1 x2 x3', real=True)
XS = [x1, x2, x3]

G3 = sp.Matrix([
    [1 + sp.Rational(3, 10) * sp.sin(x1) * sp.cos(x2),
     sp.Rational(1, 10) * sp.sin(x1 + x2 + x3),
     sp.Rational(5, 100) * sp.cos(x1 - x3)],
    [sp.Rational(1, 10) * sp.sin(x1 + x2 + x3),
     1 + sp.Rational(25, 100) * sp.cos(x2) * sp.sin(x3),
     sp.Rational(8, 100) * sp.sin(x2) * sp.cos(x3)],
    [sp.Rational(5, 100) * sp.cos(x1 - x3),
     sp.Rational(8, 100) * sp.sin(x2) * sp.cos(x3),
     1 + sp.Rational(2, 10) * sp.sin(x1 + x3)],
])

OMEGA = [sp.sin(x2), sp.cos(x3), sp.sin(x1)]
TMIX = [[sp.cos(x2), sp.Rational(2, 10) * sp.sin(x3), sp.Integer(0)],
        [sp.Integer(0), sp.sin(x1 + x2), sp.Rational(1, 10) * sp.cos(x1)],
        [sp.Rational(3, 10) * sp.sin(x3), sp.Integer(0), sp.cos(x1) * sp.cos(x2)]]
VVEC = [sp.sin(x2), sp.cos(x3), sp.sin(x1)]
BSYM = sp.Matrix([
    [sp.sin(x2), sp.Rational(1, 10) * sp.cos(x3), sp.Integer(0)],
    [sp.Rational(1, 10) * sp.cos(x3), sp.cos(x1), sp.Rational(2, 10) * sp.sin(x1 + x2)],
    [sp.Integer(0), sp.Rational(2, 10) * sp.sin(x1 + x2), sp.sin(x3)],
])

P1 = [2 * np.pi * 3 / 24, 2 * np.pi * 5 / 24, 2 * np.pi * 7 / 24]
P2 = [2 * np.pi * 1 / 24, 2 * np.pi * 10 / 24, 2 * np.pi * 4 / 24]


def ev(expr, pt):
    f = sp.lambdify(XS, expr, 'numpy')
    return float(f(*pt))


def metric_jets(gm, pt, d):
    g = np.array([[ev(gm[a, b], pt) for b in range(d)] for a in range(d)])
    dg = np.array([[[ev(sp.diff(gm[e, c], XS[m]), pt) for c in range(d)]
                    for e in range(d)] for m in range(d)])
    ddg = np.array([[[[ev(sp.diff(gm[e, c], XS[m], XS[b]), pt) for c in range(d)]
                      for e in range(d)] for b in range(d)] for m in range(d)])
    return g, dg, ddg


def emit_point(ns, pt, out):
    d = 3
    g, dg, ddg = metric_jets(G3, pt, d)
    Gam = ref.christoffel(g, dg)
    Rlow, Ric, scal, G = ref.curvature(g, dg, ddg)

    # consistency: pair symmetry and first Bianchi at this point
    assert np.max(np.abs(Rlow + np.transpose(Rlow, (1, 0, 2, 3)))) < 1e-10
    assert np.max(np.abs(Rlow - np.transpose(Rlow, (2, 3, 0, 1)))) < 1e-10
    b1 = Rlow + np.transpose(Rlow, (0, 2, 3, 1)) + np.transpose(Rlow, (0, 3, 1, 2))
    assert np.max(np.abs(b1)) < 1e-10

    om = np.array([ev(o, pt) for o in OMEGA])
    dom = np.array([[ev(sp.diff(OMEGA[a], XS[m]), pt) for a in range(d)] for m in range(d)])
    nab_om = ref.cov_deriv_oneform(om, dom, Gam)

    tm = np.array([[ev(TMIX[a][b], pt) for b in range(d)] for a in range(d)])
    dtm = np.array([[[ev(sp.diff(TMIX[a][b], XS[m]), pt) for b in range(d)]
                     for a in range(d)] for m in range(d)])
    nab_t = ref.cov_deriv_11(tm, dtm, Gam)

    vv = np.array([ev(v, pt) for v in VVEC])
    dvv = np.array([[ev(sp.diff(VVEC[a], XS[m]), pt) for a in range(d)] for m in range(d)])
    dv = ref.div_vector(vv, dvv, Gam)

    B = np.array([[ev(BSYM[a, b], pt) for b in range(d)] for a in range(d)])
    dB = np.array([[[ev(sp.diff(BSYM[a, b], XS[m]), pt) for b in range(d)]
                    for a in range(d)] for m in range(d)])
    dBv = ref.div_sym2(B, dB, g, dg)

    out.append(f"namespace {ns} {{")
    out.append(ref.fmt_array("pt", np.array(pt)))
    out.append(ref.fmt_array("g", g))
    out.append(ref.fmt_array("gamma", Gam))        # [a][b][c]
    out.append(ref.fmt_array("riemann", Rlow))     # [a][b][c][d]
    out.append(ref.fmt_array("ricci", Ric))
    out.append(f"inline constexpr double scal = {repr(float(scal))};")
    out.append(ref.fmt_array("einstein", G))
    out.append(ref.fmt_array("nabla_omega", nab_om))  # [m][a]
    out.append(ref.fmt_array("nabla_tmix", nab_t))    # [a][m][b]
    out.append(f"inline constexpr double div_v = {repr(float(dv))};")
    out.append(ref.fmt_array("div_B", dBv))
    out.append("}")


def emit_conformal(ns, pt, out):
    d = 2
    y1, y2 = x1, x2
    f = sp.Rational(3, 10) * sp.sin(y1) * sp.cos(y2)
    h = sp.exp(2 * f) * sp.eye(2)
    g, dg, ddg = metric_jets(h, pt + [0.0], d)
    Rlow, Ric, scal, G = ref.curvature(g, dg, ddg)

    # closed form for a 2d conformal metric: scal = -2 e^{-2f} (Laplace f)
    lap = sp.diff(f, y1, 2) + sp.diff(f, y2, 2)
    scal_cf = ev(-2 * sp.exp(-2 * f) * lap, pt + [0.0])
    assert abs(scal - scal_cf) < 1e-10

    out.append(f"namespace {ns} {{")
    out.append(ref.fmt_array("pt", np.array(pt)))
    out.append(ref.fmt_array("g", g))
    out.append(ref.fmt_array("riemann", Rlow))
    out.append(ref.fmt_array("ricci", Ric))
    out.append(f"inline constexpr double scal = {repr(float(scal))};")
    out.append("}")


def main():
    out = []
    out.append("// Generated by tools/oracles/gen_geometry_oracle.py; do not edit.")
    out.append("// Test metric (3d torus, coordinates x1,x2,x3, all periods 2*pi):")
    out.append("//   g11 = 1 + 0.3 sin(x1) cos(x2)   g12 = 0.1 sin(x1+x2+x3)")
    out.append("//   g22 = 1 + 0.25 cos(x2) sin(x3)  g13 = 0.05 cos(x1-x3)")
    out.append("//   g33 = 1 + 0.2 sin(x1+x3)        g23 = 0.08 sin(x2) cos(x3)")
    out.append("// Probe fields: omega_a = (sin x2, cos x3, sin x1);")
    out.append("//   t^a_b rows ((cos x2, 0.2 sin x3, 0), (0, sin(x1+x2), 0.1 cos x1),")
    out.append("//              (0.3 sin x3, 0, cos x1 cos x2)); v^a = omega components;")
    out.append("//   B = sym with diag (sin x2, cos x1, sin x3), B12 = 0.1 cos x3,")
    out.append("//   B23 = 0.2 sin(x1+x2), B13 = 0.")
    out.append("// 2d conformal metric: h = e^{2f} delta, f = 0.3 sin(y1) cos(y2).")
    out.append("#pragma once")
    out.append("")
    emit_point("oracle3d_p1", P1, out)
    emit_point("oracle3d_p2", P2, out)
    emit_conformal("oracle2d_q1", [2 * np.pi * 3 / 24, 2 * np.pi * 5 / 24], out)
    emit_conformal("oracle2d_q2", [2 * np.pi * 7 / 24, 2 * np.pi * 1 / 24], out)
    sys.stdout.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
