"""Shared test utilities: chart builders, random expressions, random gauges."""

from __future__ import annotations

import numpy as np

from lcsurf.dsl import parse_chart
from lcsurf.jets import Jet, jet_variable

FUNCS = ("exp", "log", "sqrt", "sin", "cos", "sinh", "cosh")


def make_chart(name, space, n, coords, domain=(-1, 1, -1, 1), grid=(9, 9), consts=()):
    lines = [f"name = {name}", f"space = {space}", f"n = {n}"]
    lines += [f"const {k} = {v!r}" for k, v in consts]
    lines += [f"x{i} = {c}" for i, c in enumerate(coords, start=1)]
    lines.append("domain = " + " ".join(str(x) for x in domain))
    lines.append(f"grid = {grid[0]} {grid[1]}")
    return parse_chart("\n".join(lines) + "\n")


ENNEPER = [
    "0.5*(u + (u^3 - 3*u*v^2)/3)",
    "-0.5*(v - (3*u^2*v - v^3)/3)",
    "0.5*(u^2 - v^2)",
]


def padded(coords, extra):
    """Insert ``extra`` zero coordinates before the last (time-like) slot."""
    return list(coords[:-1]) + ["0"] * extra + [coords[-1]]


def random_expression(rng: np.random.Generator, depth: int = 3) -> str:
    """Random expression text in u, v built from the chart grammar.

    log and sqrt get arguments that stay positive (1 + t^2 style), and exp,
    sinh and cosh are fed damped arguments, so the result is finite near
    the origin.
    """
    if depth == 0 or rng.random() < 0.2:
        r = rng.random()
        if r < 0.35:
            return "u"
        if r < 0.7:
            return "v"
        return f"{rng.uniform(-2, 2):.3f}"
    kind = rng.integers(0, 5)
    a = random_expression(rng, depth - 1)
    if kind == 0:
        b = random_expression(rng, depth - 1)
        op = rng.choice(["+", "-", "*"])
        return f"({a} {op} {b})"
    if kind == 1:
        b = random_expression(rng, depth - 1)
        return f"({a})/(1.5 + ({b})^2)"
    if kind == 2:
        return f"({a})^{int(rng.integers(2, 4))}"
    if kind == 3:
        return f"-({a})"
    f = FUNCS[rng.integers(0, len(FUNCS))]
    if f in ("log", "sqrt"):
        return f"{f}(1 + ({a})^2)"
    if f in ("exp", "sinh", "cosh"):
        return f"{f}(0.5*sin({a}))"
    return f"{f}({a})"


def jet_gauge(signs, base, order, seed):
    """Point-dependent pseudo-orthogonal normal gauge R(u, v) as nested jets.

    Products of rotations (equal signs) and boosts (opposite signs) whose
    angles are random bilinear functions of (u - u0, v - v0).
    """
    rng = np.random.default_rng(seed)
    k = len(signs)
    du = jet_variable("u", base[0], order) - base[0]
    dv = jet_variable("v", base[1], order) - base[1]
    one = lambda x: Jet.constant(float(x), order)  # noqa: E731
    R = [[one(i == j) for j in range(k)] for i in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            c = rng.normal(size=4)
            th = c[0] + c[1] * du + c[2] * dv + c[3] * du * dv
            if signs[a] == signs[b]:
                cs, sn = th.cos(), th.sin()
                G = [[cs, -sn], [sn, cs]]
            else:
                th = 0.5 * th
                cs, sn = th.cosh(), th.sinh()
                G = [[cs, sn], [sn, cs]]
            M = [[one(i == j) for j in range(k)] for i in range(k)]
            M[a][a], M[a][b], M[b][a], M[b][b] = G[0][0], G[0][1], G[1][0], G[1][1]
            R = [
                [sum((M[i][m] * R[m][j] for m in range(k)), one(0)) for j in range(k)]
                for i in range(k)
            ]
    return R


def constant_gauge(signs, rng):
    """Constant pseudo-orthogonal matrix for the normal metric diag(signs)."""
    from lcsurf.algebra import Signature, random_pseudo_orthogonal

    order = np.argsort([-s for s in signs], kind="stable")
    p = sum(1 for s in signs if s > 0)
    M = random_pseudo_orthogonal(Signature(p, len(signs) - p), rng)
    P = np.eye(len(signs))[order]  # maps frame slots to (+ first) slots
    return P.T @ M @ P
