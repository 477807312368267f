"""Reference charts with known answers.

The product surfaces use arc-length parameters so that every chart is
isothermal with e^{2 lambda} = 1.  Each constructor returns a ChartSpec;
:data:`CATALOG` pairs the default instances with their expectations, and
:func:`write_fixture_files` emits them as chart files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .dsl import ChartSpec, format_chart, parse_chart

__all__ = [
    "Expectation",
    "hyperbolic_cylinder",
    "desitter_product",
    "antidesitter_torus",
    "graph_control",
    "plane_control",
    "padded_cylinder",
    "expectation",
    "CATALOG",
    "build",
    "write_fixture_files",
]


@dataclass(frozen=True)
class Expectation:
    """What a fixture should produce.

    ``closed_form`` maps an invariant name (psi, omega, K, rho2, Omega_abs)
    to its exact value at every grid point; ``source`` says where each
    number comes from (``closed form`` = hand/symbolic computation,
    ``oracle run`` = frozen after an independent numerical cross-check).
    """

    branch: str
    structure_bound: float = 1e-8
    fundamental_bound: float = 1e-7
    closed_form: dict = field(default_factory=dict)
    essential_rank: int | None = None
    source: str = "closed form"
    role: str = ""


def _chart(name, space, n, coords, domain=(-1.0, 1.0, -1.0, 1.0), grid=(9, 9), consts=()):
    lines = [f"name = {name}", f"space = {space}", f"n = {n}"]
    lines += [f"const {k} = {v!r}" for k, v in consts]
    lines += [f"x{i} = {c}" for i, c in enumerate(coords, start=1)]
    lines.append("domain = " + " ".join(repr(float(x)) for x in domain))
    lines.append(f"grid = {grid[0]} {grid[1]}")
    return parse_chart("\n".join(lines) + "\n")


def hyperbolic_cylinder(grid=(9, 9)) -> ChartSpec:
    """H^1 x R in R^3_1: x = (sinh u, v, cosh u), flat and isothermal."""
    return _chart("hyperbolic_cylinder", "R", 3, ["sinh(u)", "v", "cosh(u)"], grid=grid)


def desitter_product(r: float = 1.0, grid=(9, 9)) -> ChartSpec:
    """H^1 x S^1 in S^3_1, r > 0, with <x, x> = 1."""
    if not r > 0:
        raise ValueError(f"desitter_product needs r > 0, got {r}")
    coords = [
        "sqrt(1 + r)*cos(v/sqrt(1 + r))",
        "sqrt(1 + r)*sin(v/sqrt(1 + r))",
        "sqrt(r)*sinh(u/sqrt(r))",
        "sqrt(r)*cosh(u/sqrt(r))",
    ]
    return _chart(f"desitter_product_r{r:g}", "S", 3, coords, grid=grid, consts=[("r", float(r))])


def antidesitter_torus(r: float = -0.25, grid=(9, 9)) -> ChartSpec:
    """H^1 x H^1 in H^3_1, -1/2 <= r < 0, with <x, x> = -1."""
    if not -0.5 <= r < 0:
        raise ValueError(f"antidesitter_torus needs -1/2 <= r < 0, got {r}")
    coords = [
        "sqrt(-r)*sinh(u/sqrt(-r))",
        "sqrt(1 + r)*sinh(v/sqrt(1 + r))",
        "sqrt(-r)*cosh(u/sqrt(-r))",
        "sqrt(1 + r)*cosh(v/sqrt(1 + r))",
    ]
    return _chart(f"antidesitter_torus_r{r:g}", "H", 3, coords, grid=grid, consts=[("r", float(r))])


def graph_control(grid=(9, 9)) -> ChartSpec:
    """Maximal Enneper surface in R^3_1: isothermal, space-like, Phi != 0.

    The simple graph (u, v, (u^2 - v^2)/4) is not isothermal, so the
    negative control is this classical maximal surface instead.
    """
    coords = [
        "0.5*(u + (u^3 - 3*u*v^2)/3)",
        "-0.5*(v - (3*u^2*v - v^3)/3)",
        "0.5*(u^2 - v^2)",
    ]
    return _chart("graph_control", "R", 3, coords, domain=(-0.5, 0.5, -0.5, 0.5), grid=grid)


def plane_control(grid=(9, 9)) -> ChartSpec:
    """The flat plane x = (u, v, 0): totally umbilic, conformal metric vanishes."""
    return _chart("plane_control", "R", 3, ["u", "v", "0"], grid=grid)


def padded_cylinder(grid=(9, 9)) -> ChartSpec:
    """The hyperbolic cylinder inside R^4_1 with a constant zero coordinate."""
    return _chart("padded_cylinder", "R", 4, ["sinh(u)", "v", "0", "cosh(u)"], grid=grid)


def _product_values(r: float, sign: int) -> dict:
    """psi, rho2, omega, K, |Omega| of the product fixtures (sign +1: de Sitter)."""
    rho2 = 1.0 / abs(r * (1 + r))
    return {
        "psi": -sign * (1 + 2 * r) / (4 * r * (1 + r)),
        "rho2": rho2,
        "omega": 0.5 * math.log(rho2),
        "K": 0.0,
        "Omega_abs": 0.5 * rho2,
    }


def expectation(name: str, r: float | None = None) -> Expectation:
    """Expectation record for a fixture constructor name (and parameter)."""
    if name == "hyperbolic_cylinder":
        return Expectation(
            "VanishingFormNonIsotropic",
            closed_form={"psi": -0.25, "rho2": 1.0, "omega": 0.0, "K": 0.0, "Omega_abs": 0.5},
            essential_rank=5,
            role="flat product",
        )
    if name == "desitter_product":
        return Expectation(
            "VanishingFormNonIsotropic",
            closed_form=_product_values(r, +1),
            essential_rank=5,
            role="de Sitter product",
        )
    if name == "antidesitter_torus":
        # psi vanishes identically at r = -1/2: that torus is conformally isotropic
        branch = "VanishingFormIsotropic" if r == -0.5 else "VanishingFormNonIsotropic"
        return Expectation(
            branch,
            closed_form=_product_values(r, -1),
            role="anti-de Sitter product",
        )
    if name == "graph_control":
        return Expectation("NonVanishingForm", source="oracle run", role="negative control")
    if name == "plane_control":
        return Expectation("Degenerate", role="degenerate control")
    if name == "padded_cylinder":
        return Expectation(
            "VanishingFormNonIsotropic",
            closed_form={"psi": -0.25, "omega": 0.0, "K": 0.0},
            essential_rank=5,
            role="fullness control",
        )
    raise KeyError(name)


# name -> (constructor call, expectation), default instances
CATALOG = {
    "hyperbolic_cylinder": (hyperbolic_cylinder, {}),
    "desitter_product_r0.5": (desitter_product, {"r": 0.5}),
    "desitter_product_r1": (desitter_product, {"r": 1.0}),
    "desitter_product_r2": (desitter_product, {"r": 2.0}),
    "antidesitter_torus_r-0.25": (antidesitter_torus, {"r": -0.25}),
    "antidesitter_torus_r-0.5": (antidesitter_torus, {"r": -0.5}),
    "graph_control": (graph_control, {}),
    "plane_control": (plane_control, {}),
    "padded_cylinder": (padded_cylinder, {}),
}


def build(key: str) -> tuple[ChartSpec, Expectation]:
    ctor, kwargs = CATALOG[key]
    return ctor(**kwargs), expectation(ctor.__name__, **kwargs)


def write_fixture_files(directory) -> list[Path]:
    """Write every catalog chart as ``<key>.chart``; returns the paths."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for key in CATALOG:
        chart, _ = build(key)
        p = out / f"{key}.chart"
        p.write_text(format_chart(chart), encoding="utf-8")
        paths.append(p)
    return paths
