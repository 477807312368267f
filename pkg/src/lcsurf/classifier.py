"""Branch decision from grid samples of the conformal invariants.

The branches:

* ``Degenerate`` -- the conformal metric or normal bundle degenerates
  somewhere on the grid, nothing else is decided;
* ``NonVanishingForm`` -- the conformal form Phi is visibly nonzero;
* ``VanishingFormIsotropic`` -- Phi = 0, K is constant and
  N - (4K - 1) Y / 8 is a constant vector;
* ``VanishingFormNonIsotropic`` -- Phi = 0 otherwise.

Everything works on plain numbers sampled at grid points; the jets stay in
the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import rank_of_span

__all__ = [
    "PointSample",
    "PointFailure",
    "ClassificationReport",
    "IsotropicResult",
    "BRANCHES",
    "PHI_TOL",
    "ISOTROPY_TOL",
    "RANK_TOL",
    "detect_vanishing_form",
    "isotropic_test",
    "psi_zero_test",
    "fullness_test",
    "classify",
]

BRANCHES = (
    "VanishingFormIsotropic",
    "VanishingFormNonIsotropic",
    "NonVanishingForm",
    "Degenerate",
)
PHI_TOL = 1e-7
ISOTROPY_TOL = 1e-6
RANK_TOL = 1e-8
PSI_TOL = 1e-7


@dataclass(frozen=True)
class PointSample:
    """Invariants at one grid point, as plain numbers.

    ``phi_norm`` is the Euclidean size of (phi_a) in the orthonormal normal
    frame -- zero exactly when Phi vanishes; ``phi_sq`` is the indefinite,
    gauge-invariant sum eps_a |phi_a|^2.
    """

    u: float
    v: float
    psi: complex
    psi_zbar: complex
    phi: tuple[complex, ...]
    phi_norm: float
    phi_sq: float
    quartic: complex
    omega: float
    K: float
    Y: np.ndarray = field(repr=False)
    N: np.ndarray = field(repr=False)

    @property
    def point(self) -> tuple[float, float]:
        return (self.u, self.v)


@dataclass(frozen=True)
class PointFailure:
    """A grid point where the pipeline refused to build a frame."""

    u: float
    v: float
    kind: str
    message: str


@dataclass(frozen=True)
class IsotropicResult:
    is_isotropic: bool
    c: np.ndarray
    dispersion: float
    K_dispersion: float


def _sorted(samples):
    return sorted(samples, key=lambda s: (s.u, s.v))


def detect_vanishing_form(samples, tol: float = PHI_TOL) -> bool:
    """True iff max |Phi| over the samples is at most ``tol``."""
    if len(samples) < 4:
        raise ValueError(f"need at least 4 samples, got {len(samples)}")
    return max(s.phi_norm for s in samples) <= tol


def isotropic_test(samples, tol: float = ISOTROPY_TOL) -> IsotropicResult:
    """Is N - (4K - 1) Y / 8 the same vector at every sample (and K constant)?"""
    samples = _sorted(samples)
    cs = np.array([s.N - 0.125 * (4 * s.K - 1) * s.Y for s in samples])
    c = cs.mean(axis=0)
    dispersion = float(np.max(np.linalg.norm(cs - c, axis=1)))
    Ks = np.array([s.K for s in samples])
    k_disp = float(np.max(np.abs(Ks - Ks.mean())))
    return IsotropicResult(dispersion <= tol and k_disp <= tol, c, dispersion, k_disp)


def psi_zero_test(samples, tol: float = PSI_TOL) -> str:
    """Grid-level trichotomy for psi: identically_zero, isolated_zeros or nonvanishing."""
    mags = [abs(s.psi) for s in samples]
    if max(mags) <= tol:
        return "identically_zero"
    if min(mags) > tol:
        return "nonvanishing"
    return "isolated_zeros"


def fullness_test(samples, n: int, tol: float = RANK_TOL) -> int:
    """Numerical rank of the sampled canonical lifts in R^{n+2}."""
    if len(samples) < n + 2:
        raise ValueError(f"fullness needs at least {n + 2} samples, got {len(samples)}")
    return rank_of_span([s.Y for s in _sorted(samples)], tol)


@dataclass
class ClassificationReport:
    """Outcome of :func:`classify`; None marks a sub-test that was not reached."""

    branch: str
    n: int
    n_samples: int
    phi_max: float | None = None
    phi_sq_max: float | None = None
    psi_max: float | None = None
    psi_min: float | None = None
    psi_holo_max: float | None = None
    psi_status: str | None = None
    K_values: list | None = None
    isotropic_c: list | None = None
    dispersion: float | None = None
    K_dispersion: float | None = None
    is_isotropic: bool | None = None
    essential_rank: int | None = None
    full: bool | None = None
    n3_consistent: bool | None = None
    failures: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "branch": self.branch,
            "n": self.n,
            "n_samples": self.n_samples,
            "phi_max": self.phi_max,
            "phi_sq_max": self.phi_sq_max,
            "psi_max": self.psi_max,
            "psi_min": self.psi_min,
            "psi_holo_max": self.psi_holo_max,
            "psi_status": self.psi_status,
            "K_values": self.K_values,
            "isotropic_c": self.isotropic_c,
            "dispersion": self.dispersion,
            "K_dispersion": self.K_dispersion,
            "is_isotropic": self.is_isotropic,
            "essential_rank": self.essential_rank,
            "full": self.full,
            "n3_consistent": self.n3_consistent,
            "failures": list(self.failures),
            "warnings": list(self.warnings),
        }


def classify(
    samples,
    n: int,
    failures=(),
    phi_tol: float = PHI_TOL,
    isotropy_tol: float = ISOTROPY_TOL,
    rank_tol: float = RANK_TOL,
    psi_tol: float = PSI_TOL,
    grid_shape: tuple[int, int] | None = None,
) -> ClassificationReport:
    """Decide the branch from per-point samples.

    Args:
        samples: PointSample values; their order does not matter.
        n: conformal dimension of the ambient space.
        failures: PointFailure values for points where no frame exists.
        grid_shape: if given, ``K_values`` is returned as a nested list of
            that shape (u outer, v inner); otherwise as a flat list.
    """
    samples = _sorted(samples)
    failures = sorted(failures, key=lambda f: (f.u, f.v))
    rep = ClassificationReport(branch="Degenerate", n=n, n_samples=len(samples))
    rep.failures = [
        {"u": f.u, "v": f.v, "kind": f.kind, "message": f.message} for f in failures
    ]
    if failures or not samples:
        if failures:
            rep.warnings.append(
                f"{len(failures)} grid point(s) failed regularity ({failures[0].kind})"
            )
        return rep

    rep.phi_max = max(s.phi_norm for s in samples)
    rep.phi_sq_max = max(abs(s.phi_sq) for s in samples)
    rep.psi_max = max(abs(s.psi) for s in samples)
    rep.psi_min = min(abs(s.psi) for s in samples)
    rep.psi_holo_max = max(abs(s.psi_zbar) for s in samples)
    Ks = [s.K for s in samples]
    if grid_shape is not None and grid_shape[0] * grid_shape[1] == len(Ks):
        rep.K_values = np.array(Ks).reshape(grid_shape).tolist()
    else:
        rep.K_values = Ks

    try:
        rep.essential_rank = fullness_test(samples, n, rank_tol)
        rep.full = rep.essential_rank == n + 2
        if not rep.full:
            rep.warnings.append(
                f"non-full: essential_rank {rep.essential_rank} < {n + 2}"
            )
    except ValueError as err:
        rep.warnings.append(str(err))

    if not detect_vanishing_form(samples, phi_tol):
        rep.branch = "NonVanishingForm"
        return rep

    rep.psi_status = psi_zero_test(samples, psi_tol)
    iso = isotropic_test(samples, isotropy_tol)
    rep.isotropic_c = [float(x) for x in iso.c]
    rep.dispersion = iso.dispersion
    rep.K_dispersion = iso.K_dispersion
    rep.is_isotropic = iso.is_isotropic
    if iso.is_isotropic:
        rep.branch = "VanishingFormIsotropic"
        return rep

    rep.branch = "VanishingFormNonIsotropic"
    if rep.full and rep.psi_status == "nonvanishing":
        # vanishing form, nonvanishing psi and full forces n = 3
        rep.n3_consistent = n == 3
        if n != 3:
            rep.warnings.append(
                f"inconsistent: full surface with vanishing form and nonvanishing psi in n = {n}"
            )
    return rep
