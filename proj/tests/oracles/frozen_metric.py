#!/usr/bin/env python3
"""Symbolic reference values for tests/unit/frozen_oracle.hpp.

Run from the repository root:  python3 tests/oracles/frozen_metric.py > tests/unit/frozen_oracle.hpp
"""
import sympy as sp

x1, x2 = sp.symbols("x1 x2", real=True)
X = [x1, x2]
P = {x1: sp.Rational(7, 10), x2: sp.Rational(-2, 5)}

g = sp.Matrix([
    [1 + sp.Rational(1, 10) * sp.sin(x1) * sp.cos(x2), sp.Rational(1, 20) * sp.cos(x1 + x2)],
    [sp.Rational(1, 20) * sp.cos(x1 + x2), 1 + sp.Rational(1, 5) * sp.cos(x1) ** 2],
])
G = g.inv()
n = 2

gamma = [[[sp.Rational(1, 2) * sum(G[i, h] * (sp.diff(g[h, k], X[j]) + sp.diff(g[h, j], X[k]) - sp.diff(g[j, k], X[h]))
                                    for h in range(n)) for k in range(n)] for j in range(n)] for i in range(n)]


def riemann(i, j, k, l):
    r = sp.diff(gamma[i][l][j], X[k]) - sp.diff(gamma[i][k][j], X[l])
    r += sum(gamma[i][k][m] * gamma[m][l][j] - gamma[i][l][m] * gamma[m][k][j] for m in range(n))
    return r


ricci = [[sum(riemann(i, j, i, l) for i in range(n)) for l in range(n)] for j in range(n)]
r_std = sum(G[j, l] * ricci[j][l] for j in range(n) for l in range(n))

a0 = sp.Rational(1, 2)
A = [sp.Rational(3, 10) + sp.Rational(1, 5) * sp.cos(x1), sp.Rational(1, 10)]
psi = sp.cos(x1) + sp.I * sp.sin(x2) + sp.Rational(1, 2) * x1 * x2
sq = sp.sqrt(g.det())
D = [sp.diff(psi, X[j]) - sp.I * A[j] * psi for j in range(n)]
lap = sum(sp.diff(sq * sum(G[i, j] * D[j] for j in range(n)), X[i]) - sp.I * A[i] * sq * sum(G[i, j] * D[j] for j in range(n))
          for i in range(n)) / sq
r_paper = -r_std


def cqm(k):
    return -sp.Rational(1, 2) * lap - a0 * psi - sp.Rational(1, 2) * k * r_paper * psi


def num(e):
    return sp.N(e.subs(P), 30)


def cxx(v):
    return f"{float(v):.17g}"


print("#pragma once")
print()
print("// Generated by tests/oracles/frozen_metric.py; do not edit by hand.")
print()
print("namespace frozen {")
print()
print('inline constexpr const char* kMetric[3] = {"1 + 0.1*sin(x1)*cos(x2)", "0.05*cos(x1 + x2)", "1 + 0.2*cos(x1)^2"};')
print('inline constexpr const char* kGauge[3] = {"0.5", "0.3 + 0.2*cos(x1)", "0.1"};')
print('inline constexpr const char* kSection = "cos(x1) + i*sin(x2) + 0.5*x1*x2";')
print("inline constexpr double kPoint[2] = {0.7, -0.4};")
print()
print("// Standard-sign Gamma^i_jk at (i*2 + j)*2 + k.")
vals = [cxx(num(gamma[i][j][k])) for i in range(n) for j in range(n) for k in range(n)]
print("inline constexpr double kGammaStd[8] = {" + ", ".join(vals) + "};")
print(f"inline constexpr double kScalarStd = {cxx(num(r_std))};")
for name, k in (("kCqm0", 0), ("kCqmSixth", sp.Rational(1, 6)), ("kCqm1", 1)):
    v = sp.N(cqm(k).subs(P), 30)
    re, im = sp.re(v), sp.im(v)
    print(f"inline constexpr double {name}[2] = {{{cxx(re)}, {cxx(im)}}};")
print()
print("}  // namespace frozen")
