"""Pseudo-Euclidean linear algebra over plain, complex and jet scalars.

Vectors are either 1-d numpy arrays or jets with a single batch axis (one
entry per ambient coordinate).  Inner products are bilinear, never
Hermitian: conjugation is the caller's business.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .jets import Jet, sqrt, value

__all__ = [
    "Signature",
    "FrameVector",
    "DegenerateSpanError",
    "inner",
    "gram_matrix",
    "gram_schmidt_indefinite",
    "rank_of_span",
    "subspace_signature",
    "random_pseudo_orthogonal",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-9


class DegenerateSpanError(ArithmeticError):
    """The candidates do not span a non-degenerate subspace."""


@dataclass(frozen=True)
class Signature:
    """``plus`` positive directions followed by ``minus`` negative ones."""

    plus: int
    minus: int

    def __post_init__(self):
        if self.plus < 0 or self.minus < 0:
            raise ValueError(f"invalid signature ({self.plus}, {self.minus})")

    @property
    def dim(self) -> int:
        return self.plus + self.minus

    @property
    def diag(self) -> np.ndarray:
        return np.concatenate([np.ones(self.plus), -np.ones(self.minus)])

    @property
    def metric(self) -> np.ndarray:
        return np.diag(self.diag)

    def __str__(self) -> str:
        return f"({self.plus},{self.minus})"


@dataclass(frozen=True)
class FrameVector:
    """A unit frame member: ``<vector, vector> = sign``."""

    vector: object
    sign: int


def _length(u) -> int:
    return len(u) if isinstance(u, Jet) else np.shape(u)[0]


def inner(u, v, s: Signature):
    """sum_{i<=p} u_i v_i - sum_{i>p} u_i v_i, bilinear in both slots."""
    if _length(u) != s.dim or _length(v) != s.dim:
        raise ValueError(
            f"dimension mismatch: vectors of length {_length(u)}, {_length(v)} "
            f"for signature {s}"
        )
    if isinstance(u, Jet) or isinstance(v, Jet):
        if not isinstance(u, Jet):
            u, v = v, u
        return (u * v * s.diag).sum(axis=0)
    u = np.asarray(u)
    v = np.asarray(v)
    if u.dtype == object or v.dtype == object:
        return sum(si * a * b for si, a, b in zip(s.diag, u, v))
    return np.sum(s.diag * u * v)


def gram_matrix(vectors: Sequence, s: Signature) -> np.ndarray:
    """Constant-term Gram matrix of a family of vectors."""
    k = len(vectors)
    g = np.empty((k, k), dtype=complex if any(_is_complex(x) for x in vectors) else float)
    for i in range(k):
        for j in range(i, k):
            g[i, j] = g[j, i] = value(inner(vectors[i], vectors[j], s))
    return g


def _is_complex(x) -> bool:
    if isinstance(x, Jet):
        return x.is_complex
    return np.iscomplexobj(x)


def _euclid(x) -> float:
    return float(np.linalg.norm(value(x) if isinstance(x, Jet) else np.asarray(x)))


def gram_schmidt_indefinite(
    candidates: Sequence,
    s: Signature,
    tol: float = DEFAULT_TOL,
    expected: int | None = None,
) -> list[FrameVector]:
    """Orthonormalize ``candidates`` under the indefinite form of ``s``.

    At every step the remaining candidate whose projected self-product has
    the largest absolute constant term is taken as the pivot, which steps
    around null vectors.  If every remaining candidate is (numerically) null
    but two of them pair non-trivially, their sum or difference is used
    instead.  ``tol`` is relative to the largest initial |<c, c>| (or the
    squared Euclidean size of the candidates if that is larger).

    Args:
        candidates: vectors (arrays or jet vectors) of a common length.
        s: ambient signature.
        tol: relative degeneracy threshold.
        expected: if given, the number of frame vectors the caller needs;
            fewer raises DegenerateSpanError.

    Returns:
        list of FrameVector, normalized so that ``<E, E> = sign``.
    """
    work = list(candidates)
    if not work:
        raise DegenerateSpanError("no candidates")
    norms = [abs(value(inner(w, w, s))) for w in work]
    scale = max(max(norms), max(_euclid(w) for w in work) ** 2)
    if scale == 0:
        raise DegenerateSpanError("all candidates vanish")
    thresh = tol * scale

    frame: list[FrameVector] = []
    while work:
        sq = [value(inner(w, w, s)) for w in work]
        k = int(np.argmax(np.abs(sq)))
        if abs(sq[k]) <= thresh:
            k = _rescue_null_pair(work, s, thresh)
            if k is None:
                if any(_euclid(w) ** 2 > thresh for w in work):
                    raise DegenerateSpanError(
                        "remaining candidates are null and mutually orthogonal: "
                        "the span is degenerate"
                    )
                break
            sq_k = value(inner(work[k], work[k], s))
        else:
            sq_k = sq[k]
        pivot = work.pop(k)
        sign = 1 if np.real(sq_k) > 0 else -1
        e = pivot / sqrt(sign * inner(pivot, pivot, s))
        frame.append(FrameVector(e, sign))
        work = [w - (sign * inner(w, e, s)) * e for w in work]

    if expected is not None and len(frame) < expected:
        raise DegenerateSpanError(
            f"expected {expected} frame vectors, the span only supports {len(frame)}"
        )
    return frame


def _rescue_null_pair(work: list, s: Signature, thresh: float) -> int | None:
    """Replace a null candidate by w_i +/- w_j when <w_i, w_j> != 0."""
    best, pair = thresh, None
    for i in range(len(work)):
        for j in range(i + 1, len(work)):
            c = abs(value(inner(work[i], work[j], s)))
            if c > best:
                best, pair = c, (i, j)
    if pair is None:
        return None
    i, j = pair
    plus = work[i] + work[j]
    minus = work[i] - work[j]
    work[i] = plus if abs(value(inner(plus, plus, s))) >= abs(value(inner(minus, minus, s))) else minus
    return i


def subspace_signature(vectors: Sequence, s: Signature, tol: float = DEFAULT_TOL) -> Signature:
    """Signature of the form restricted to span(vectors), from Gram eigenvalues."""
    g = np.real(gram_matrix(vectors, s))
    w = np.linalg.eigvalsh(g)
    cut = tol * max(1.0, np.max(np.abs(w)))
    return Signature(int(np.sum(w > cut)), int(np.sum(w < -cut)))


def rank_of_span(vectors: Sequence, tol: float = 1e-8) -> int:
    """Numerical rank of the matrix whose rows are ``vectors``.

    Singular values at or below ``tol`` times the largest one count as zero.
    """
    rows = [np.asarray(value(v) if isinstance(v, Jet) else v, dtype=float) for v in vectors]
    if not rows:
        raise ValueError("rank_of_span needs at least one vector")
    m = np.vstack(rows)
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or sv[0] == 0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def random_pseudo_orthogonal(
    s: Signature, rng: np.random.Generator, max_rapidity: float = 1.0, reflect: bool = True
) -> np.ndarray:
    """A random element of O(p, q): M^T G M = G for G = diag(s).

    Built as a product of plane rotations (within the positive or the
    negative block) and boosts (mixing the two) over every coordinate pair,
    optionally followed by a random diagonal reflection.  ``max_rapidity``
    bounds each boost so the result stays well conditioned.
    """
    diag = s.diag
    m = np.eye(s.dim)
    for i in range(s.dim):
        for j in range(i + 1, s.dim):
            g = np.eye(s.dim)
            if diag[i] == diag[j]:
                t = rng.uniform(-np.pi, np.pi)
                c, sn = np.cos(t), np.sin(t)
                g[i, i], g[i, j], g[j, i], g[j, j] = c, -sn, sn, c
            else:
                t = rng.uniform(-max_rapidity, max_rapidity)
                c, sn = np.cosh(t), np.sinh(t)
                g[i, i], g[i, j], g[j, i], g[j, j] = c, sn, sn, c
            m = g @ m
    if reflect:
        m = np.diag(rng.choice([-1.0, 1.0], size=s.dim)) @ m
    return m
