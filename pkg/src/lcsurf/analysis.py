"""Run the pipeline over a chart's sampling grid.

Each grid point is independent, so points can be farmed out to a process
pool; results are always gathered back in grid order, which keeps every
reduction (and therefore every reported number) independent of the worker
count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .algebra import DEFAULT_TOL
from .classifier import (
    ISOTROPY_TOL,
    PHI_TOL,
    PSI_TOL,
    RANK_TOL,
    ClassificationReport,
    PointFailure,
    PointSample,
    classify,
)
from .dsl import ChartSpec
from .invariants import MIN_RESIDUAL_ORDER, ResidualReport, compute_invariants, point_residuals
from .pipeline import (
    DEGENERACY_TOL,
    ConformallyDegenerate,
    DegenerateNormalBundle,
    GeometryError,
    canonical_frame,
)

__all__ = [
    "Tolerances",
    "PointResult",
    "ChartAnalysis",
    "analyze_point",
    "analyze_chart",
    "DEFAULT_ORDER",
]

DEFAULT_ORDER = 8
_REGULARITY = (ConformallyDegenerate, DegenerateNormalBundle)


@dataclass(frozen=True)
class Tolerances:
    """Every threshold the analysis uses, in one place."""

    phi: float = PHI_TOL
    isotropy: float = ISOTROPY_TOL
    rank: float = RANK_TOL
    isothermal: float = DEFAULT_TOL
    psi: float = PSI_TOL
    degeneracy: float = DEGENERACY_TOL

    def __post_init__(self):
        for name, val in asdict(self).items():
            if not val > 0:
                raise ValueError(f"tolerance {name} must be > 0, got {val}")


@dataclass(frozen=True)
class PointResult:
    sample: PointSample
    residuals: dict


@dataclass
class ChartAnalysis:
    chart: ChartSpec
    order: int
    tolerances: Tolerances
    points: list
    failures: list
    residuals: ResidualReport | None = None
    classification: ClassificationReport | None = field(default=None)


def _sample(frame, inv) -> PointSample:
    return PointSample(
        u=frame.base[0],
        v=frame.base[1],
        psi=complex(inv.psi.value),
        psi_zbar=complex(inv.psi.dzb().value),
        phi=tuple(complex(p.value) for p in inv.phi),
        phi_norm=inv.phi_euclid,
        phi_sq=inv.phi_norm_sq,
        quartic=inv.quartic,
        omega=float(frame.omega.value),
        K=float(frame.K.value),
        Y=np.real(frame.Y.value).astype(float),
        N=np.real(frame.N.value).astype(float),
    )


def analyze_point(
    chart: ChartSpec,
    base,
    order: int = DEFAULT_ORDER,
    tols: Tolerances = Tolerances(),
    transform=None,
) -> PointResult:
    """Frame, invariants and every residual at one point.

    Raises the pipeline's GeometryError subclasses unchanged.
    """
    frame = canonical_frame(
        chart,
        base,
        order,
        tol=tols.isothermal,
        transform=transform,
        degeneracy_tol=tols.degeneracy,
    )
    inv = compute_invariants(frame)
    return PointResult(_sample(frame, inv), point_residuals(frame, inv))


def _work(args):
    chart, base, order, tols, transform = args
    try:
        return analyze_point(chart, base, order, tols, transform)
    except _REGULARITY as err:
        return PointFailure(base[0], base[1], err.kind, str(err))
    except GeometryError as err:
        return err


def analyze_chart(
    chart: ChartSpec,
    order: int = DEFAULT_ORDER,
    tols: Tolerances = Tolerances(),
    workers: int = 1,
    transform=None,
    points=None,
) -> ChartAnalysis:
    """Analyze every grid point and classify the chart.

    Points where the conformal metric or the normal bundle degenerates are
    collected as failures (the chart is then classified Degenerate).  A
    point that is not space-like or not isothermal is a broken input: the
    first such error in grid order is raised.

    Args:
        chart: parsed chart.
        order: jet order, at least 7.
        tols: thresholds.
        workers: process count; 1 runs in-process.
        transform: optional (n+2)x(n+2) matrix applied to the lift.
        points: override for the sample points (defaults to the chart grid).
    """
    if order < MIN_RESIDUAL_ORDER:
        raise ValueError(f"order ≥ {MIN_RESIDUAL_ORDER} required")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    pts = chart.grid_points() if points is None else [tuple(map(float, p)) for p in points]
    jobs = [(chart, p, order, tols, transform) for p in pts]
    if workers == 1 or len(jobs) < 2:
        outcomes = [_work(j) for j in jobs]
    else:
        chunk = max(1, len(jobs) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_work, jobs, chunksize=chunk))

    results, failures = [], []
    for out in outcomes:
        if isinstance(out, GeometryError):
            raise out
        if isinstance(out, PointFailure):
            failures.append(out)
        else:
            results.append(out)

    analysis = ChartAnalysis(chart, order, tols, results, failures)
    if results:
        analysis.residuals = ResidualReport.from_points(
            (r.sample.point, r.residuals) for r in results
        )
    analysis.classification = classify(
        [r.sample for r in results],
        chart.n,
        failures,
        phi_tol=tols.phi,
        isotropy_tol=tols.isotropy,
        rank_tol=tols.rank,
        psi_tol=tols.psi,
        grid_shape=chart.grid if points is None else None,
    )
    return analysis
