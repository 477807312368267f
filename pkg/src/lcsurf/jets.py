"""Bivariate truncated Taylor arithmetic ("jets") in the coordinates (u, v).

Storage convention
------------------
A jet of order K at a base point keeps, for every pair (i, j) with
i + j <= K, the raw partial derivative

    d[idx(i, j)] = d^{i+j} f / du^i dv^j   (evaluated at the base point)

in a flat trailing axis of length (K+1)(K+2)/2.  Entries are graded by total
degree, so truncating to a lower order is a prefix slice.  Coefficients are
*not* divided by i! j!; the product rule carries the binomial weights.

A jet may carry leading batch axes.  A vector of jets (one per ambient
coordinate) is simply a jet whose coefficient array has shape (m, M); all
arithmetic broadcasts over the batch axes like numpy does.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "Jet",
    "JetDomainError",
    "JetOrderError",
    "jet_variable",
    "jet_constant",
    "jet_func",
    "jet_arith",
    "wirtinger",
    "extract",
    "n_coeffs",
    "value",
    "sqrt",
]


class JetDomainError(ValueError):
    """A jet function was applied outside its domain (log/sqrt/division)."""


class JetOrderError(ValueError):
    """A derivative was requested beyond the order a jet carries."""


def n_coeffs(order: int) -> int:
    return (order + 1) * (order + 2) // 2


@lru_cache(maxsize=None)
def _pairs(order: int) -> tuple[tuple[int, int], ...]:
    return tuple((t - k, k) for t in range(order + 1) for k in range(t + 1))


@lru_cache(maxsize=None)
def _index(order: int) -> dict[tuple[int, int], int]:
    return {p: n for n, p in enumerate(_pairs(order))}


@lru_cache(maxsize=None)
def _product_plan(order: int):
    """Gather indices and a weighted scatter matrix for the Leibniz rule."""
    index = _index(order)
    ia, ib, rows, cols, weights = [], [], [], [], []
    t = 0
    for (i, j), c in index.items():
        for p in range(i + 1):
            for q in range(j + 1):
                ia.append(index[(p, q)])
                ib.append(index[(i - p, j - q)])
                rows.append(t)
                cols.append(c)
                weights.append(math.comb(i, p) * math.comb(j, q))
                t += 1
    scatter = np.zeros((t, len(index)))
    scatter[rows, cols] = weights
    return np.array(ia), np.array(ib), scatter


@lru_cache(maxsize=None)
def _shift_plan(order: int, axis: int) -> np.ndarray:
    index = _index(order)
    if axis == 0:
        return np.array([index[(i + 1, j)] for i, j in _pairs(order - 1)])
    return np.array([index[(i, j + 1)] for i, j in _pairs(order - 1)])


def _as_coeffs(x, like: "Jet") -> np.ndarray:
    """Promote a plain scalar/array to a constant jet coefficient array."""
    x = np.asarray(x)
    out = np.zeros(x.shape + (n_coeffs(like.order),), dtype=np.result_type(x, like.d))
    out[..., 0] = x
    return out


class Jet:
    """Truncated bivariate Taylor expansion, possibly batched.

    Attributes:
        order: truncation order K.
        d: coefficient array of shape ``batch + (n_coeffs(K),)``; see the
            module docstring for the storage convention.
    """

    __slots__ = ("order", "d")
    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def __init__(self, order: int, d):
        d = np.asarray(d)
        if order < 0:
            raise ValueError("jet order must be >= 0")
        if d.shape[-1:] != (n_coeffs(order),):
            raise ValueError(
                f"order {order} needs {n_coeffs(order)} coefficients, got shape {d.shape}"
            )
        self.order = order
        self.d = d

    # -- construction -----------------------------------------------------

    @classmethod
    def constant(cls, c, order: int) -> "Jet":
        c = np.asarray(c)
        d = np.zeros(c.shape + (n_coeffs(order),), dtype=np.result_type(c, float))
        d[..., 0] = c
        return cls(order, d)

    @classmethod
    def stack(cls, jets, axis: int = 0) -> "Jet":
        jets = list(jets)
        order = min(j.order for j in jets)
        m = n_coeffs(order)
        if axis < 0:
            raise ValueError("stack axis must be non-negative")
        return cls(order, np.stack([j.d[..., :m] for j in jets], axis=axis))

    # -- array-like behaviour ---------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return self.d.shape[:-1]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.d)

    def __len__(self) -> int:
        return self.d.shape[0]

    def __getitem__(self, key) -> "Jet":
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.order, self.d[key + (Ellipsis, slice(None))])

    def __iter__(self):
        for k in range(len(self)):
            yield self[k]

    def sum(self, axis: int = 0) -> "Jet":
        if axis < 0:
            axis -= 1
        return Jet(self.order, self.d.sum(axis=axis))

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise JetOrderError(f"cannot raise jet order {self.order} to {order}")
        return Jet(order, self.d[..., : n_coeffs(order)])

    def copy(self) -> "Jet":
        return Jet(self.order, self.d.copy())

    def __repr__(self) -> str:
        return f"Jet(order={self.order}, shape={self.shape}, value={self.value!r})"

    # -- coefficient access -----------------------------------------------

    @property
    def value(self):
        """Constant term (the function value at the base point)."""
        v = self.d[..., 0]
        return v.item() if v.ndim == 0 else v

    def derivative(self, i: int, k: int):
        """Stored partial derivative d^{i+k}/du^i dv^k at the base point."""
        if i < 0 or k < 0 or i + k > self.order:
            raise JetOrderError(
                f"derivative ({i}, {k}) is beyond jet order {self.order}"
            )
        v = self.d[..., _index(self.order)[(i, k)]]
        return v.item() if v.ndim == 0 else v

    def coefficients(self) -> dict[tuple[int, int], complex | float]:
        if self.shape:
            raise ValueError("coefficients() is only defined for scalar jets")
        return {p: self.d[n].item() for n, p in enumerate(_pairs(self.order))}

    # -- complex helpers ----------------------------------------------------

    @property
    def real(self) -> "Jet":
        return Jet(self.order, self.d.real.copy())

    @property
    def imag(self) -> "Jet":
        return Jet(self.order, self.d.imag.copy())

    def conj(self) -> "Jet":
        return Jet(self.order, np.conj(self.d))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Jet):
            order = min(self.order, other.order)
            return order, self.d[..., : n_coeffs(order)], other.d[..., : n_coeffs(order)]
        return self.order, self.d, _as_coeffs(other, self)

    def __add__(self, other):
        if isinstance(other, Jet):
            order, a, b = self._coerce(other)
            return Jet(order, a + b)
        other = np.asarray(other)
        shape = np.broadcast_shapes(self.shape, other.shape) + self.d.shape[-1:]
        out = np.broadcast_to(self.d, shape).astype(np.result_type(self.d, other))
        out[..., 0] += other
        return Jet(self.order, out)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.order, -self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.order, self.d * np.asarray(other)[..., None])
        order, a, b = self._coerce(other)
        ia, ib, scatter = _product_plan(order)
        return Jet(order, (a[..., ia] * b[..., ib]) @ scatter)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other)
            if np.any(other == 0):
                raise JetDomainError("division by zero")
            return Jet(self.order, self.d / other[..., None])
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if isinstance(n, (bool, np.bool_)) or not isinstance(n, (int, np.integer)):
            raise TypeError("jets only support integer powers; use jet_func for real exponents")
        return jet_func(self, "pow", int(n))

    # -- differentiation ----------------------------------------------------

    def du(self) -> "Jet":
        if self.order < 1:
            raise JetOrderError("cannot differentiate an order-0 jet")
        return Jet(self.order - 1, self.d[..., _shift_plan(self.order, 0)])

    def dv(self) -> "Jet":
        if self.order < 1:
            raise JetOrderError("cannot differentiate an order-0 jet")
        return Jet(self.order - 1, self.d[..., _shift_plan(self.order, 1)])

    def dz(self) -> "Jet":
        """Wirtinger derivative d/dz = (d/du - i d/dv) / 2."""
        return Jet(self.order - 1, 0.5 * (self.du().d - 1j * self.dv().d))

    def dzb(self) -> "Jet":
        """Wirtinger derivative d/dzbar = (d/du + i d/dv) / 2."""
        return Jet(self.order - 1, 0.5 * (self.du().d + 1j * self.dv().d))

    # -- elementary functions -------------------------------------------------

    def reciprocal(self) -> "Jet":
        return jet_func(self, "pow", -1)

    def exp(self) -> "Jet":
        return jet_func(self, "exp")

    def log(self) -> "Jet":
        return jet_func(self, "log")

    def sqrt(self) -> "Jet":
        return jet_func(self, "sqrt")

    def sin(self) -> "Jet":
        return jet_func(self, "sin")

    def cos(self) -> "Jet":
        return jet_func(self, "cos")

    def sinh(self) -> "Jet":
        return jet_func(self, "sinh")

    def cosh(self) -> "Jet":
        return jet_func(self, "cosh")


# ---------------------------------------------------------------------------
# constructors


def jet_variable(which: str, base: float, order: int) -> Jet:
    """Jet of the coordinate function ``u`` or ``v`` at ``base``.

    Order 0 is accepted and yields the bare constant (no derivative slot).
    """
    if which not in ("u", "v"):
        raise ValueError(f"unknown coordinate {which!r}; expected 'u' or 'v'")
    d = np.zeros(n_coeffs(order))
    d[0] = base
    if order >= 1:
        d[_index(order)[(1, 0) if which == "u" else (0, 1)]] = 1.0
    return Jet(order, d)


def jet_constant(c, order: int) -> Jet:
    return Jet.constant(c, order)


# ---------------------------------------------------------------------------
# composition with elementary functions


def _derivative_table(name: str, a0: np.ndarray, order: int, p=None) -> list:
    """f^(k)(a0) for k = 0..order."""
    if name == "exp":
        e = np.exp(a0)
        return [e] * (order + 1)
    if name == "sin":
        s, c = np.sin(a0), np.cos(a0)
        cyc = [s, c, -s, -c]
        return [cyc[k % 4] for k in range(order + 1)]
    if name == "cos":
        s, c = np.sin(a0), np.cos(a0)
        cyc = [c, -s, -c, s]
        return [cyc[k % 4] for k in range(order + 1)]
    if name == "sinh":
        s, c = np.sinh(a0), np.cosh(a0)
        return [s if k % 2 == 0 else c for k in range(order + 1)]
    if name == "cosh":
        s, c = np.sinh(a0), np.cosh(a0)
        return [c if k % 2 == 0 else s for k in range(order + 1)]
    if name == "log":
        out = [np.log(a0)]
        for k in range(1, order + 1):
            out.append((-1) ** (k - 1) * math.factorial(k - 1) / a0**k)
        return out
    if name == "power":
        # real exponent p: d^k/dx^k x^p = p (p-1) ... (p-k+1) x^(p-k)
        out, falling = [], 1.0
        for k in range(order + 1):
            out.append(falling * a0 ** (p - k))
            falling *= p - k
        return out
    raise ValueError(f"unknown jet function {name!r}")


def _compose(a: Jet, table: list) -> Jet:
    """Sum_k table[k]/k! * h^k with h = a - a(base); exact through order K."""
    h = Jet(a.order, a.d.copy())
    h.d[..., 0] = 0
    # Horner in h; h^(K+1) vanishes identically
    k_max = a.order
    result = Jet(a.order, _as_coeffs(np.asarray(table[k_max]) / math.factorial(k_max), a))
    for k in range(k_max - 1, -1, -1):
        result = result * h + np.asarray(table[k]) / math.factorial(k)
    return result


def jet_func(a: Jet, f: str, p=None) -> Jet:
    """Apply an elementary function to a jet.

    Supported names: exp, log, sqrt, sin, cos, sinh, cosh, pow.  ``pow``
    takes an exponent ``p``; integer exponents are exact ring powers (valid
    at a zero base value when p >= 0), other real exponents need a positive
    base value.
    """
    a0 = a.d[..., 0]
    if f == "pow":
        if p is None:
            raise ValueError("pow needs an exponent")
        if float(p).is_integer():
            n = int(p)
            if n < 0:
                if np.any(a0 == 0):
                    raise JetDomainError("division by a jet with zero constant term")
                return _compose(a, _derivative_table("power", a0, a.order, n))
            result = Jet.constant(np.ones(a.shape, dtype=a.d.dtype), a.order)
            base = a
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        if not a.is_complex and np.any(a0 <= 0):
            raise JetDomainError("non-integer power of a jet needs a positive constant term")
        return _compose(a, _derivative_table("power", a0, a.order, float(p)))
    if f == "sqrt":
        if a.is_complex:
            if np.any(a0 == 0):
                raise JetDomainError("sqrt of a jet with zero constant term")
        elif np.any(a0 <= 0):
            raise JetDomainError("sqrt of a jet with non-positive constant term")
        return _compose(a, _derivative_table("power", a0, a.order, 0.5))
    if f == "log":
        if a.is_complex:
            if np.any(a0 == 0):
                raise JetDomainError("log of a jet with zero constant term")
        elif np.any(a0 <= 0):
            raise JetDomainError("log of a jet with non-positive constant term")
    return _compose(a, _derivative_table(f, a0, a.order))


def jet_arith(a: Jet, b, op: str) -> Jet:
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown operator {op!r}")


def wirtinger(j: Jet, which: str) -> Jet:
    if j.order < 1:
        raise JetOrderError("Wirtinger derivative needs a jet of order >= 1")
    if which == "z":
        return j.dz()
    if which in ("zbar", "zb", "z̄"):
        return j.dzb()
    raise ValueError(f"unknown Wirtinger direction {which!r}")


def extract(j: Jet, i: int, k: int):
    return j.derivative(i, k)


# ---------------------------------------------------------------------------
# ring-generic helpers shared by the linear algebra code


def value(x):
    """Constant term of a jet, or the value itself for plain scalars."""
    return x.value if isinstance(x, Jet) else x


def sqrt(x):
    return x.sqrt() if isinstance(x, Jet) else np.sqrt(x)
