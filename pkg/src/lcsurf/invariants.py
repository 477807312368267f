"""Pointwise conformal invariants and the structure/fundamental equation residuals.

Definitions (z = u + iv, complex-bilinear inner product):

    psi       = 2 <N_z, Y_z>
    phi_a     = <N_z, E_a>
    Omega_a   = 2 <Y_zz, E_a>
    A_ab      = <(E_a)_z, E_b>

Indices are raised with the inverse normal metric g^{ab}.  Each residual is
one equation moved to one side and evaluated at the base point; vector
equations report their largest ambient component.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import inner
from .jets import Jet, JetOrderError
from .pipeline import ConformalFrame

__all__ = [
    "InvariantSet",
    "ResidualReport",
    "RESIDUAL_KEYS",
    "STRUCTURE_KEYS",
    "FUNDAMENTAL_KEYS",
    "compute_invariants",
    "residual_structure",
    "residual_fundamental",
    "willmore_residual",
    "section3_residuals",
    "point_residuals",
    "MIN_RESIDUAL_ORDER",
]

STRUCTURE_KEYS = ("S2.2", "S2.3a", "S2.3b", "S2.4")
FUNDAMENTAL_KEYS = ("F2.5a", "F2.5b", "F2.5c", "F2.6", "F2.7")
SECTION3_KEYS = ("R3.1a", "R3.1b", "R3.1c", "R3.3", "R3.4")
RESIDUAL_KEYS = STRUCTURE_KEYS + FUNDAMENTAL_KEYS + ("W2.8",) + SECTION3_KEYS

MIN_RESIDUAL_ORDER = 7


@dataclass(frozen=True)
class InvariantSet:
    """Jet-valued invariants at one point, plus the frame derivatives they use.

    ``phi``, ``Omega`` are indexed by normal slot; ``A[a][b]`` is A_ab.
    """

    psi: Jet
    phi: tuple[Jet, ...]
    Omega: tuple[Jet, ...]
    A: tuple[tuple[Jet, ...], ...]
    omega: Jet
    K: Jet
    g: np.ndarray
    g_inv: np.ndarray
    Yz: Jet = field(repr=False)
    Yzz: Jet = field(repr=False)
    Nz: Jet = field(repr=False)
    Ez: tuple[Jet, ...] = field(repr=False)

    @property
    def n_normal(self) -> int:
        return len(self.phi)

    def raise_index(self, lower) -> list:
        """X^a = sum_b g^{ab} X_b for a sequence of jets."""
        k = self.n_normal
        out = []
        for a in range(k):
            acc = None
            for b in range(k):
                if self.g_inv[a, b] != 0:
                    term = self.g_inv[a, b] * lower[b]
                    acc = term if acc is None else acc + term
            out.append(acc if acc is not None else 0 * lower[a])
        return out

    def A_up(self, a: int, b: int) -> Jet:
        """A^b_a = sum_c g^{bc} A_ac."""
        acc = None
        for c in range(self.n_normal):
            if self.g_inv[b, c] != 0:
                term = self.g_inv[b, c] * self.A[a][c]
                acc = term if acc is None else acc + term
        return acc if acc is not None else 0 * self.A[a][b]

    # gauge-invariant scalars at the base point

    @property
    def phi_norm_sq(self) -> float:
        """sum_a eps_a phi_a conj(phi_a); indefinite, but frame-independent."""
        return float(np.real(sum(self.g_inv[a, a] * abs(p.value) ** 2 for a, p in enumerate(self.phi))))

    @property
    def phi_euclid(self) -> float:
        """sqrt(sum_a |phi_a|^2) in the orthonormal frame; zero iff Phi = 0."""
        return float(np.sqrt(sum(abs(p.value) ** 2 for p in self.phi)))

    @property
    def quartic(self) -> complex:
        """sum_a Omega^a Omega_a (complex-bilinear)."""
        up = self.raise_index(self.Omega)
        return complex(sum(up[a].value * self.Omega[a].value for a in range(self.n_normal)))

    @property
    def quartic_hermitian(self) -> float:
        """sum_a Omega^a conj(Omega_a)."""
        up = self.raise_index(self.Omega)
        return float(np.real(sum(up[a].value * np.conj(self.Omega[a].value) for a in range(self.n_normal))))


@dataclass
class ResidualReport:
    """Per-equation maximum absolute residual over a set of points."""

    values: dict[str, float]
    argmax: dict[str, tuple[float, float]]

    @classmethod
    def from_points(cls, rows) -> "ResidualReport":
        """``rows`` is an iterable of ((u, v), {key: residual}) in grid order."""
        values = {k: 0.0 for k in RESIDUAL_KEYS}
        argmax: dict[str, tuple[float, float]] = {}
        for point, res in rows:
            for k in RESIDUAL_KEYS:
                if k not in argmax or res[k] > values[k]:
                    values[k] = float(res[k])
                    argmax[k] = (float(point[0]), float(point[1]))
        return cls(values, argmax)

    def max_of(self, keys) -> float:
        return max(self.values[k] for k in keys)


def _vmax(x) -> float:
    v = x.value if isinstance(x, Jet) else x
    return float(np.max(np.abs(v)))


def compute_invariants(frame: ConformalFrame) -> InvariantSet:
    """Evaluate psi, phi_a, Omega_a, A_ab with jets retained to the available order."""
    if frame.N.order < 1:
        raise JetOrderError("invariants need a frame built with jet order >= 6")
    sig = frame.signature
    Yz = frame.Y.dz()
    Yzz = Yz.dz()
    Nz = frame.N.dz()
    E = [e.vector for e in frame.E]
    Ez = tuple(e.dz() for e in E)
    psi = 2 * inner(Nz, Yz, sig)
    phi = tuple(inner(Nz, e, sig) for e in E)
    Omega = tuple(2 * inner(Yzz, e, sig) for e in E)
    A = tuple(tuple(inner(ez, eb, sig) for eb in E) for ez in Ez)
    return InvariantSet(
        psi=psi,
        phi=phi,
        Omega=Omega,
        A=A,
        omega=frame.omega,
        K=frame.K,
        g=frame.g,
        g_inv=frame.g_inv,
        Yz=Yz,
        Yzz=Yzz,
        Nz=Nz,
        Ez=Ez,
    )


def _sum(terms, like: Jet) -> Jet:
    acc = 0 * like
    for t in terms:
        acc = acc + t
    return acc


def residual_structure(frame: ConformalFrame, inv: InvariantSet) -> dict[str, float]:
    """Defects of the structure equations for N_z, Y_zz, Y_zzbar, (E_a)_z."""
    Y, N = frame.Y, frame.N
    E = [e.vector for e in frame.E]
    Yz, Yzb, Yzz = inv.Yz, inv.Yz.conj(), inv.Yzz
    e2w = (2 * inv.omega).exp()
    em2w = (-2 * inv.omega).exp()
    K = inv.K
    psi = inv.psi
    phi_up = inv.raise_index(inv.phi)
    Om_up = inv.raise_index(inv.Omega)
    k = inv.n_normal

    rhs = (0.125 * (4 * K - 1)) * Yz + (em2w * psi) * Yzb
    rhs = rhs + _sum((phi_up[a] * E[a] for a in range(k)), rhs)
    s22 = _vmax(inv.Nz - rhs)

    rhs = (-0.5 * psi) * Y + (2 * inv.omega.dz()) * Yz
    rhs = rhs + _sum((0.5 * Om_up[a] * E[a] for a in range(k)), rhs)
    s23a = _vmax(Yzz - rhs)

    Yzzb = Yz.dzb()
    rhs = (-(1 / 16) * e2w * (4 * K - 1)) * Y - (0.5 * e2w) * N
    s23b = _vmax(Yzzb - rhs)

    s24 = 0.0
    for a in range(k):
        rhs = -inv.phi[a] * Y - (em2w * inv.Omega[a]) * Yzb
        rhs = rhs + _sum((inv.A_up(a, b) * E[b] for b in range(k)), rhs)
        s24 = max(s24, _vmax(inv.Ez[a] - rhs))
    return {"S2.2": s22, "S2.3a": s23a, "S2.3b": s23b, "S2.4": s24}


def _willmore_lhs(inv: InvariantSet) -> list[Jet]:
    """(phi_a)_zbar - e^{-2w} conj(psi) Omega_a / 2 + sum_b phi^b conj(A_ba)."""
    em2w = (-2 * inv.omega).exp()
    phi_up = inv.raise_index(inv.phi)
    out = []
    for a in range(inv.n_normal):
        term = inv.phi[a].dzb() - 0.5 * em2w * inv.psi.conj() * inv.Omega[a]
        term = term + _sum((phi_up[b] * inv.A[b][a].conj() for b in range(inv.n_normal)), term)
        out.append(term)
    return out


def residual_fundamental(frame: ConformalFrame, inv: InvariantSet) -> dict[str, float]:
    """Defects of the integrability conditions; derivatives come from the jets.

    The normalization member is evaluated with the Hermitian sum
    sum_a Omega^a conj(Omega_a), which is the form the Gauss equation gives
    for arbitrary coordinates; the bilinear sum is reported as R3.1c.
    """
    if inv.psi.order < 1:
        raise JetOrderError(f"fundamental residuals need jet order >= {MIN_RESIDUAL_ORDER}")
    k = inv.n_normal
    e2w = (2 * inv.omega).exp()
    em2w = (-2 * inv.omega).exp()
    psi = inv.psi
    phi_up = inv.raise_index(inv.phi)
    Om_up = inv.raise_index(inv.Omega)

    cross = _sum((Om_up[a] * inv.phi[a].conj() for a in range(k)), psi)
    f25a = _vmax(psi.dzb() - 0.5 * e2w * inv.K.dz() + cross)

    herm = sum(Om_up[a].value * np.conj(inv.Omega[a].value) for a in range(k))
    f25b = abs(herm + 0.25 * np.exp(4 * inv.omega.value))

    f25c = 0.0
    for a in range(k):
        rhs = _sum((Om_up[b] * inv.A[b][a].conj() for b in range(k)), psi) + e2w * inv.phi[a]
        f25c = max(f25c, _vmax(inv.Omega[a].dzb() + rhs))

    lhs = _willmore_lhs(inv)
    f26 = 0.0
    for a in range(k):
        rhs = inv.phi[a].conj().dz() - 0.5 * em2w * psi * inv.Omega[a].conj()
        rhs = rhs + _sum((phi_up[b].conj() * inv.A[b][a] for b in range(k)), rhs)
        f26 = max(f26, _vmax(lhs[a] - rhs))

    f27 = 0.0
    for a in range(k):
        for b in range(k):
            left = inv.A[a][b].dzb() - inv.A[a][b].conj().dz()
            rhs = 0.5 * em2w * (inv.Omega[a] * inv.Omega[b].conj() - inv.Omega[a].conj() * inv.Omega[b])
            for c in range(k):
                rhs = rhs + (inv.A[a][c] * inv.A_up(b, c).conj() - inv.A[a][c].conj() * inv.A_up(b, c))
            f27 = max(f27, _vmax(left - rhs))
    return {"F2.5a": f25a, "F2.5b": float(f25b), "F2.5c": f25c, "F2.6": f26, "F2.7": f27}


def willmore_residual(frame: ConformalFrame, inv: InvariantSet) -> list[float]:
    """|Willmore expression| per normal slot (zero for Willmore surfaces)."""
    return [_vmax(t) for t in _willmore_lhs(inv)]


def section3_residuals(frame: ConformalFrame, inv: InvariantSet) -> dict[str, float]:
    """Consequences of Phi = 0, evaluated unconditionally.

    Also returns R3.4a (conj(psi) sum Omega^a Omega_a vs sum Omega^a conj(Omega_a))
    and R3.4b (sum Omega^a conj(Omega_a) vs -e^{4w} psi / 4); R3.4 is the larger.
    """
    k = inv.n_normal
    psi = inv.psi
    e2w = (2 * inv.omega).exp()
    Om_up = inv.raise_index(inv.Omega)

    r31a = _vmax(psi.dzb() - 0.5 * e2w * inv.K.dz())
    r31b = max(
        (_vmax(psi.conj() * inv.Omega[a] - psi * inv.Omega[a].conj()) for a in range(k)),
        default=0.0,
    )
    quartic = _sum((Om_up[a] * inv.Omega[a] for a in range(k)), psi)
    e4w = np.exp(4 * inv.omega.value)
    r31c = abs(quartic.value / e4w + 0.25)
    r33 = _vmax(quartic.dzb())
    herm = sum(Om_up[a].value * np.conj(inv.Omega[a].value) for a in range(k))
    r34a = abs(np.conj(psi.value) * quartic.value - herm)
    r34b = abs(herm + 0.25 * e4w * psi.value)
    return {
        "R3.1a": r31a,
        "R3.1b": r31b,
        "R3.1c": float(r31c),
        "R3.3": r33,
        "R3.4": float(max(r34a, r34b)),
        "R3.4a": float(r34a),
        "R3.4b": float(r34b),
    }


def point_residuals(frame: ConformalFrame, inv: InvariantSet) -> dict[str, float]:
    """Every residual key at one point (plus the R3.4 members)."""
    out = {}
    out.update(residual_structure(frame, inv))
    out.update(residual_fundamental(frame, inv))
    out["W2.8"] = max(willmore_residual(frame, inv), default=0.0)
    out.update(section3_residuals(frame, inv))
    return out
