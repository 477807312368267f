"""Light-cone lift of a chart and the conformal moving frame at a point.

Everything here is jet-valued: a frame built at a base point carries all
derivatives the invariants and residual checks later consume.  The lift
lives in R^{n+2} with signature (n, 2), positive slots first.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    DegenerateSpanError,
    FrameVector,
    Signature,
    gram_schmidt_indefinite,
    inner,
)
from .dsl import ChartSpec, eval_jet
from .jets import Jet, JetOrderError

__all__ = [
    "GeometryError",
    "NotSpaceLike",
    "NotIsothermal",
    "ConformallyDegenerate",
    "DegenerateNormalBundle",
    "SpaceFormModel",
    "ChartCheck",
    "ConformalFrame",
    "lift_to_lightcone",
    "check_lift",
    "check_chart",
    "laplacian_and_curvature",
    "conformal_factor",
    "frame_from_lift",
    "canonical_frame",
    "remix_normal_frame",
    "frame_identities",
    "DEGENERACY_TOL",
    "MIN_FRAME_ORDER",
]

DEGENERACY_TOL = 1e-12
MIN_FRAME_ORDER = 6  # N_z at the base point needs six derivatives of x


class GeometryError(Exception):
    """A chart violates a geometric precondition at a point."""

    kind = "geometry"


class NotSpaceLike(GeometryError):
    kind = "not space-like"


class NotIsothermal(GeometryError):
    kind = "not isothermal"


class ConformallyDegenerate(GeometryError):
    kind = "conformally degenerate"


class DegenerateNormalBundle(GeometryError):
    kind = "degenerate normal bundle"


@dataclass(frozen=True)
class SpaceFormModel:
    """Which Lorentzian space form a chart parametrizes.

    R: x in R^n with signature (n-1, 1).
    S: x in R^{n+1} with signature (n, 1) and <x, x> = 1.
    H: x in R^{n+1} with signature (n-1, 2) and <x, x> = -1.
    """

    tag: str
    n: int

    def __post_init__(self):
        if self.tag not in ("R", "S", "H"):
            raise ValueError(f"unknown space form {self.tag!r}")
        if self.n < 3:
            raise ValueError("conformal dimension n must be >= 3")

    @classmethod
    def of(cls, chart: ChartSpec) -> "SpaceFormModel":
        return cls(chart.space, chart.n)

    @property
    def model_signature(self) -> Signature:
        return {
            "R": Signature(self.n - 1, 1),
            "S": Signature(self.n, 1),
            "H": Signature(self.n - 1, 2),
        }[self.tag]

    @property
    def lift_signature(self) -> Signature:
        return Signature(self.n, 2)


@dataclass(frozen=True)
class ChartCheck:
    """Induced metric of the lift at a point; ``e2lambda`` is h11 as a jet."""

    e2lambda: Jet
    h11: float
    h12: float
    h22: float


@dataclass(frozen=True)
class ConformalFrame:
    """Jet-valued conformal frame {Y, N, Y_z, Y_zbar, E_alpha} at a base point.

    Attributes:
        model: space form the chart came from.
        base: (u, v) of the base point.
        y: light-cone lift the frame was built from.
        lam: log of the induced conformal factor, <dy, dy> = e^{2 lam}|dz|^2.
        Y: canonical lift.
        N: conformal Gauss map.
        omega: log conformal factor of g = e^{2 omega}|dz|^2.
        rho2: the factor -(<Dy, Dy> - 4 kappa).
        K: Gauss curvature of g.
        E: conformal normal frame; each member has <E, E> = sign.
        g: constant normal metric <E_a, E_b>; g_inv its inverse.
    """

    model: SpaceFormModel
    base: tuple[float, float]
    y: Jet
    lam: Jet
    Y: Jet
    N: Jet
    omega: Jet
    rho2: Jet
    K: Jet
    E: tuple[FrameVector, ...]
    g: np.ndarray
    g_inv: np.ndarray

    @property
    def signature(self) -> Signature:
        return self.model.lift_signature

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(e.sign for e in self.E)


# ---------------------------------------------------------------------------


def lift_to_lightcone(chart: ChartSpec, base: tuple[float, float], order: int) -> Jet:
    """Null lift y of the chart into R^{n+2}_2, jet-valued at ``base``.

    R: y = ((1-q)/2, x, (1+q)/2) with q = <x, x>; S: y = (x, 1); H: y = (1, x).
    """
    model = SpaceFormModel.of(chart)
    x = Jet.stack([eval_jet(e, base, order) for e in chart.coords])
    one = Jet.constant(1.0, order)
    if model.tag == "R":
        q = inner(x, x, model.model_signature)
        parts = [(1 - q) * 0.5, *x, (1 + q) * 0.5]
    elif model.tag == "S":
        parts = [*x, one]
    else:
        parts = [one, *x]
    return Jet.stack(parts)


def check_lift(y: Jet, sig: Signature, tol: float = DEFAULT_TOL) -> ChartCheck:
    """Induced metric h of the lift; requires space-like and isothermal at base."""
    yu, yv = y.du(), y.dv()
    h11 = inner(yu, yu, sig)
    h12 = inner(yu, yv, sig).value
    h22 = inner(yv, yv, sig).value
    a = h11.value
    if a <= 0 or a * h22 - h12 * h12 <= 0:
        raise NotSpaceLike(
            f"induced metric is not positive definite (h11={a:.6g}, h12={h12:.6g}, h22={h22:.6g})"
        )
    if abs(h12) > tol * a or abs(a - h22) > tol * a:
        raise NotIsothermal(
            f"chart is not isothermal: |h12|/h11={abs(h12) / a:.3g}, "
            f"|h11-h22|/h11={abs(a - h22) / a:.3g} exceed {tol:g}"
        )
    return ChartCheck(h11, a, h12, h22)


def check_chart(chart: ChartSpec, base, order: int = 8, tol: float = DEFAULT_TOL) -> ChartCheck:
    model = SpaceFormModel.of(chart)
    return check_lift(lift_to_lightcone(chart, base, order), model.lift_signature, tol)


def laplacian_and_curvature(y: Jet, lam: Jet) -> tuple[Jet, Jet]:
    """Laplacian of y and Gauss curvature kappa for <dy, dy> = e^{2 lam}|dz|^2."""
    if y.order < 2 or lam.order < 2:
        raise JetOrderError("Laplacian needs jets of order >= 2")
    e = (-2 * lam).exp()
    dy = 4 * e * y.dz().dzb().real
    kappa = -4 * e * lam.dz().dzb().real
    return dy, kappa


def conformal_factor(
    dy: Jet, kappa: Jet, lam: Jet, sig: Signature, tol: float = DEGENERACY_TOL
) -> tuple[Jet, Jet]:
    """rho^2 = -(<Dy, Dy> - 4 kappa) and omega = lam + log(rho^2)/2.

    The degeneracy test is on e^{2 omega} = rho^2 e^{2 lam}, which does not
    change when the lift is rescaled.
    """
    rho2 = -(inner(dy, dy, sig) - 4 * kappa)
    e2w = rho2.value * np.exp(2 * lam.value)
    if not e2w > tol:
        raise ConformallyDegenerate(
            f"conformally degenerate: conformal metric factor {e2w:.3g} <= {tol:g}"
        )
    omega = lam + 0.5 * rho2.log()
    return rho2, omega


def _project_normal(w: Jet, Y: Jet, N: Jet, Yu: Jet, Yv: Jet, sig: Signature) -> Jet:
    """Component of w orthogonal to span{Y, N, Y_u, Y_v}."""
    a, b, c = inner(Yu, Yu, sig), inner(Yv, Yv, sig), inner(Yu, Yv, sig)
    det = a * b - c * c
    wu, wv = inner(w, Yu, sig), inner(w, Yv, sig)
    alpha = (b * wu - c * wv) / det
    beta = (a * wv - c * wu) / det
    return w - inner(w, N, sig) * Y - inner(w, Y, sig) * N - alpha * Yu - beta * Yv


def frame_from_lift(
    y: Jet,
    model: SpaceFormModel,
    base=(0.0, 0.0),
    tol: float = DEFAULT_TOL,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> ConformalFrame:
    """Conformal frame from a jet-valued light-cone lift.

    Raises NotSpaceLike, NotIsothermal, ConformallyDegenerate or
    DegenerateNormalBundle when the corresponding precondition fails.
    """
    if y.order < MIN_FRAME_ORDER:
        raise JetOrderError(f"the conformal frame needs jet order >= {MIN_FRAME_ORDER}")
    sig = model.lift_signature
    chk = check_lift(y, sig, tol)
    lam = 0.5 * chk.e2lambda.log()
    dy, kappa = laplacian_and_curvature(y, lam)
    rho2, omega = conformal_factor(dy, kappa, lam, sig, degeneracy_tol)

    Y = rho2.sqrt() * y
    e_m2w = (-2 * omega).exp()
    lapY = 4 * e_m2w * Y.dz().dzb().real
    N = -0.5 * lapY - 0.125 * inner(lapY, lapY, sig) * Y
    K = -4 * e_m2w * omega.dz().dzb().real

    Yu, Yv = Y.du(), Y.dv()
    dim = sig.dim
    candidates = [
        _project_normal(Jet.constant(np.eye(dim)[i], N.order), Y, N, Yu, Yv, sig)
        for i in range(dim)
    ]
    try:
        E = gram_schmidt_indefinite(candidates, sig, tol, expected=model.n - 2)
    except DegenerateSpanError as err:
        raise DegenerateNormalBundle(str(err)) from None
    g = np.diag([float(e.sign) for e in E])
    return ConformalFrame(
        model=model,
        base=(float(base[0]), float(base[1])),
        y=y,
        lam=lam,
        Y=Y,
        N=N,
        omega=omega,
        rho2=rho2,
        K=K,
        E=tuple(E),
        g=g,
        g_inv=g.copy(),
    )


def canonical_frame(
    chart: ChartSpec,
    base,
    order: int = 8,
    tol: float = DEFAULT_TOL,
    transform: np.ndarray | None = None,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> ConformalFrame:
    """Build the conformal frame of ``chart`` at ``base``.

    ``transform`` is an optional (n+2)x(n+2) matrix applied to the lift
    before anything else; pass an O(n, 2) element to move the surface by a
    conformal transformation.
    """
    model = SpaceFormModel.of(chart)
    y = lift_to_lightcone(chart, base, order)
    if transform is not None:
        y = Jet(y.order, np.asarray(transform) @ y.d)
    return frame_from_lift(y, model, base, tol, degeneracy_tol)


def remix_normal_frame(frame: ConformalFrame, R) -> ConformalFrame:
    """Re-gauge the normal frame: E'_a = sum_b R[a][b] E_b.

    ``R`` may be a constant matrix or a nested sequence of jets (a
    point-dependent gauge).  It must preserve the normal metric, i.e.
    R g R^T = g; this is checked on constant terms.
    """
    k = len(frame.E)
    R_const = np.array([[_const(R[a][b]) for b in range(k)] for a in range(k)], dtype=float)
    if not np.allclose(R_const @ frame.g @ R_const.T, frame.g, atol=1e-10):
        raise ValueError("gauge matrix does not preserve the normal metric")
    new_E = []
    for a in range(k):
        vec = None
        for b in range(k):
            term = R[a][b] * frame.E[b].vector
            vec = term if vec is None else vec + term
        new_E.append(FrameVector(vec, frame.E[a].sign))
    return replace(frame, E=tuple(new_E))


def _const(x) -> float:
    return float(x.value) if isinstance(x, Jet) else float(x)


def frame_identities(frame: ConformalFrame) -> dict[str, float]:
    """Constant-term defects of the identities every conformal frame satisfies."""
    sig = frame.signature
    Y, N = frame.Y, frame.N
    Yz = Y.dz()
    e2w = np.exp(2 * frame.omega.value)
    out = {
        "<Y,Y>": abs(inner(Y, Y, sig).value),
        "<N,N>": abs(inner(N, N, sig).value),
        "<Y,N>-1": abs(inner(Y, N, sig).value - 1),
        "<Yz,Yz>": abs(inner(Yz, Yz, sig).value),
        "2<Yz,Yzb>-e2w": abs(2 * inner(Yz, Yz.conj(), sig).value - e2w),
    }
    lapY = 4 * (-2 * frame.omega).exp() * Y.dz().dzb().real
    out["<lapY,Y>+2"] = abs(inner(lapY, Y, sig).value + 2)
    worst_e = 0.0
    worst_g = 0.0
    for a, ea in enumerate(frame.E):
        for other in (Y, N, Yz):
            worst_e = max(worst_e, abs(inner(ea.vector, other, sig).value))
        for b, eb in enumerate(frame.E):
            target = ea.sign if a == b else 0.0
            worst_g = max(worst_g, abs(inner(ea.vector, eb.vector, sig).value - target))
    out["<E,{Y,N,Yz}>"] = worst_e
    out["<Ea,Eb>-g"] = worst_g
    return out
