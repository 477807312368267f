"""Two ways to change the data without changing the geometry.

1. Apply a random pseudo-orthogonal map to the light-cone lift: omega, K,
   ||Phi||^2 and every residual stay put.
2. Re-mix the normal frame with a point-dependent rotation: the individual
   phi_a move, the gauge-invariant combinations do not.
"""

import numpy as np

from lcsurf.algebra import Signature, random_pseudo_orthogonal
from lcsurf.analysis import analyze_point
from lcsurf.dsl import parse_chart
from lcsurf.fixtures import graph_control
from lcsurf.invariants import compute_invariants
from lcsurf.jets import jet_variable
from lcsurf.pipeline import canonical_frame, remix_normal_frame


def lorentz(rng):
    chart = graph_control()
    p = (0.3, -0.2)
    ref = analyze_point(chart, p)
    print("random O(3,2) maps, graph_control at", p)
    for _ in range(3):
        M = random_pseudo_orthogonal(Signature(3, 2), rng)
        got = analyze_point(chart, p, transform=M)
        d_res = max(abs(got.residuals[k] - ref.residuals[k]) for k in ref.residuals)
        print(
            f"  cond(M) = {np.linalg.cond(M):8.1f}   "
            f"d omega = {abs(got.sample.omega - ref.sample.omega):.1e}   "
            f"d |Phi|^2 = {abs(got.sample.phi_sq - ref.sample.phi_sq):.1e}   "
            f"d residuals = {d_res:.1e}"
        )


def gauge():
    # Enneper with an extra zero coordinate: one space-like and one time-like normal
    chart = parse_chart(
        "name = enneper4\nspace = R\nn = 4\n"
        "x1 = 0.5*(u + (u^3 - 3*u*v^2)/3)\n"
        "x2 = -0.5*(v - (3*u^2*v - v^3)/3)\n"
        "x3 = 0\n"
        "x4 = 0.5*(u^2 - v^2)\n"
        "domain = -0.5 0.5 -0.5 0.5\ngrid = 5 5\n"
    )
    p = (0.3, -0.2)
    f0 = canonical_frame(chart, p)
    inv0 = compute_invariants(f0)
    # a boost between the two normals whose rapidity varies over the surface
    u, v = jet_variable("u", p[0], f0.Y.order), jet_variable("v", p[1], f0.Y.order)
    t = 0.8 * (u * v + u)
    f1 = remix_normal_frame(f0, [[t.cosh(), t.sinh()], [t.sinh(), t.cosh()]])
    inv1 = compute_invariants(f1)
    print("\nnormal-frame re-mix, padded Enneper at", p)
    for name, a, b in [
        ("phi_1", inv0.phi[0].value, inv1.phi[0].value),
        ("phi_2", inv0.phi[1].value, inv1.phi[1].value),
        ("||Phi||^2", inv0.phi_norm_sq, inv1.phi_norm_sq),
        ("Omega.Omega", inv0.quartic, inv1.quartic),
    ]:
        print(f"  {name:12s} {complex(a):.6f} -> {complex(b):.6f}")


if __name__ == "__main__":
    rng = np.random.default_rng(0)
    lorentz(rng)
    gauge()
