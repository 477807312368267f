"""Surface chart language: arithmetic expressions in (u, v) and chart files.

Expression grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

so ``^`` binds tighter than unary minus (``-u^2 == -(u^2)``) and is right
associative.  Exponents must fold to an integer from literals alone.

Chart files are flat ``key = value`` text with ``#`` comments; see
:func:`parse_chart` and :func:`format_chart`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .jets import Jet, jet_func, jet_variable

__all__ = [
    "Expr", "Num", "Var", "Neg", "Add", "Sub", "Mul", "Div", "Pow", "Call",
    "FUNCTIONS", "ExprSyntaxError", "ChartError", "ChartSpec",
    "parse_expression", "to_text", "eval_jet", "evaluate",
    "parse_chart", "format_chart", "load_chart",
]

FUNCTIONS = ("exp", "log", "sqrt", "sin", "cos", "sinh", "cosh")
BUILTIN_CONSTANTS = {"pi": math.pi, "e": math.e}
SPACES = ("R", "S", "H")


class ExprSyntaxError(ValueError):
    """Expression error carrying a 1-based character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ChartError(ValueError):
    """Chart file error; ``line`` is 1-based, or None for whole-file problems."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


# ---------------------------------------------------------------------------
# AST


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


_BINARY = {Add: "+", Sub: "-", Mul: "*", Div: "/"}
_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad + 1)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text: str, constants: Mapping[str, float]):
        self.toks = _tokenize(text)
        self.i = 0
        self.constants = constants

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, sym: str):
        kind, val, pos = self.take()
        if val != sym or kind != "op":
            found = "end of input" if kind == "end" else repr(val)
            raise ExprSyntaxError(f"expected {sym!r}, found {found}", pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {val!r}", pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def unary(self) -> Expr:
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            pos = self.take()[2]
            exponent = self.unary()
            if _fold_int(exponent) is None:
                raise ExprSyntaxError("exponent must be an integer literal", pos + 1)
            return Pow(base, exponent)
        return base

    def atom(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "name":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                if val not in FUNCTIONS:
                    raise ExprSyntaxError(f"unknown identifier {val}", pos)
                self.take()
                args = [self.expr()]
                while self.peek()[1] == "," and self.peek()[0] == "op":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != 1:
                    raise ExprSyntaxError(
                        f"{val} takes 1 argument, got {len(args)}", pos
                    )
                return Call(val, args[0])
            if val in ("u", "v"):
                return Var(val)
            if val in FUNCTIONS:
                raise ExprSyntaxError(f"function {val} needs an argument", pos)
            if val in self.constants:
                return _literal(self.constants[val])
            if val in BUILTIN_CONSTANTS:
                return _literal(BUILTIN_CONSTANTS[val])
            raise ExprSyntaxError(f"unknown identifier {val}", pos)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(val)
        raise ExprSyntaxError(f"unexpected {found}", pos)


def _literal(x: float) -> Expr:
    x = float(x)
    return Neg(Num(-x)) if x < 0 or (x == 0 and math.copysign(1, x) < 0) else Num(x)


def _fold_int(e: Expr) -> int | None:
    """Integer value of a literal-only exponent, else None."""
    if isinstance(e, Num):
        return int(e.value) if float(e.value).is_integer() else None
    if isinstance(e, Neg):
        k = _fold_int(e.operand)
        return None if k is None else -k
    if isinstance(e, Pow):
        b, k = _fold_int(e.base), _fold_int(e.exponent)
        if b is None or k is None or k < 0 or abs(k) > 64:
            return None
        return b**k
    return None


def parse_expression(text: str, constants: Mapping[str, float] | None = None) -> Expr:
    """Parse ``text`` into an :class:`Expr`, inlining named constants."""
    return _Parser(text, dict(constants or {})).parse()


# ---------------------------------------------------------------------------
# printer


def _fmt_num(x: float) -> str:
    x = float(x)
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def to_text(e: Expr) -> str:
    """Render with the minimal parentheses that reparse to the same tree."""
    if isinstance(e, Num):
        return _fmt_num(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({to_text(e.arg)})"
    if isinstance(e, Neg):
        inner = to_text(e.operand)
        if _prec(e.operand) < _PREC[Neg]:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Pow):
        base = to_text(e.base)
        if _prec(e.base) <= _PREC[Pow]:
            base = f"({base})"
        exponent = to_text(e.exponent)
        if _prec(e.exponent) < _PREC[Neg]:
            exponent = f"({exponent})"
        return f"{base}^{exponent}"
    p = _PREC[type(e)]
    left = to_text(e.left)
    if _prec(e.left) < p:
        left = f"({left})"
    right = to_text(e.right)
    if _prec(e.right) <= p:
        right = f"({right})"
    return f"{left}{_BINARY[type(e)]}{right}"


def _prec(e: Expr) -> int:
    return _PREC.get(type(e), 5)


# ---------------------------------------------------------------------------
# evaluation


def eval_jet(
    e: Expr,
    base: tuple[float, float],
    order: int,
    constants: Mapping[str, float] | None = None,
) -> Jet:
    """Jet of ``e`` at ``base``: exact partial derivatives through ``order``."""
    leaves = {
        "u": jet_variable("u", base[0], order),
        "v": jet_variable("v", base[1], order),
    }
    return _eval_jet(e, leaves, order, dict(constants or {}))


def _eval_jet(e: Expr, leaves, order, constants):
    if isinstance(e, Num):
        return Jet.constant(e.value, order)
    if isinstance(e, Var):
        if e.name in leaves:
            return leaves[e.name]
        return Jet.constant(constants[e.name], order)
    if isinstance(e, Neg):
        return -_eval_jet(e.operand, leaves, order, constants)
    if isinstance(e, Call):
        return jet_func(_eval_jet(e.arg, leaves, order, constants), e.func)
    if isinstance(e, Pow):
        return jet_func(_eval_jet(e.base, leaves, order, constants), "pow", _fold_int(e.exponent))
    a = _eval_jet(e.left, leaves, order, constants)
    b = _eval_jet(e.right, leaves, order, constants)
    if isinstance(e, Add):
        return a + b
    if isinstance(e, Sub):
        return a - b
    if isinstance(e, Mul):
        return a * b
    return a / b


def evaluate(e: Expr, u, v, lib=math, constants: Mapping[str, float] | None = None):
    """Plain-number evaluation; ``lib`` supplies the functions (math, mpmath, ...)."""
    env = {"u": u, "v": v, **dict(constants or {})}

    def rec(x):
        if isinstance(x, Num):
            return x.value
        if isinstance(x, Var):
            return env[x.name]
        if isinstance(x, Neg):
            return -rec(x.operand)
        if isinstance(x, Call):
            return getattr(lib, x.func)(rec(x.arg))
        if isinstance(x, Pow):
            return rec(x.base) ** _fold_int(x.exponent)
        a, b = rec(x.left), rec(x.right)
        if isinstance(x, Add):
            return a + b
        if isinstance(x, Sub):
            return a - b
        if isinstance(x, Mul):
            return a * b
        return a / b

    return rec(e)


# ---------------------------------------------------------------------------
# chart files


@dataclass(frozen=True)
class ChartSpec:
    """A parsed surface chart.

    ``sources`` keeps the coordinate expressions as written so that charts
    round-trip through :func:`format_chart` unchanged; ``coords`` holds the
    parsed trees with constants inlined.
    """

    name: str
    space: str
    n: int
    constants: tuple[tuple[str, float], ...]
    sources: tuple[str, ...]
    coords: tuple[Expr, ...] = field(compare=False)
    domain: tuple[float, float, float, float]
    grid: tuple[int, int]

    @property
    def n_coords(self) -> int:
        return self.n if self.space == "R" else self.n + 1

    def contains(self, u: float, v: float) -> bool:
        u0, u1, v0, v1 = self.domain
        return u0 <= u <= u1 and v0 <= v <= v1

    def grid_points(self) -> list[tuple[float, float]]:
        """Sample points in row-major (u outer, v inner) order."""
        u0, u1, v0, v1 = self.domain
        us = np.linspace(u0, u1, self.grid[0])
        vs = np.linspace(v0, v1, self.grid[1])
        return [(float(a), float(b)) for a in us for b in vs]


def _number(text: str, line: int) -> float:
    try:
        x = float(text)
    except ValueError:
        raise ChartError(f"malformed number {text!r}", line) from None
    if not math.isfinite(x):
        raise ChartError(f"malformed number {text!r}", line)
    return x


def _integer(text: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ChartError(f"malformed integer {text!r}", line) from None


def _fields(text: str) -> list[str]:
    return [t for t in re.split(r"[\s,]+", text.strip().strip("[]").strip()) if t]


_CONST = re.compile(r"const\s+([A-Za-z_][A-Za-z_0-9]*)$")
_COORD = re.compile(r"x([1-9][0-9]*)$")


def parse_chart(text: str) -> ChartSpec:
    """Parse a chart file.

    Example::

        name = hyperbolic_cylinder
        space = R            # R | S | H
        n = 3
        const r = 1.0        # zero or more
        x1 = sinh(u)
        x2 = v
        x3 = cosh(u)
        domain = -1 1 -1 1   # u0 u1 v0 v1
        grid = 9 9

    Coordinates must be numbered x1..xk without gaps, with k = n for space
    R and k = n + 1 for S and H.
    """
    seen: dict[str, int] = {}
    values: dict[str, str] = {}
    constants: dict[str, float] = {}
    coords: dict[int, tuple[str, int]] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ChartError(f"expected 'key = value', got {line!r}", lineno)
        key, val = (t.strip() for t in line.split("=", 1))
        if key in seen:
            raise ChartError(f"duplicate key {key!r} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        if not val:
            raise ChartError(f"empty value for {key!r}", lineno)
        m = _CONST.match(key)
        if m:
            name = m.group(1)
            if name in ("u", "v") or name in FUNCTIONS:
                raise ChartError(f"constant name {name!r} is reserved", lineno)
            constants[name] = _number(val, lineno)
            continue
        m = _COORD.match(key)
        if m:
            coords[int(m.group(1))] = (val, lineno)
            continue
        if key not in ("name", "space", "n", "domain", "grid"):
            raise ChartError(f"unknown key {key!r}", lineno)
        values[key] = val

    for key in ("name", "space", "n", "domain", "grid"):
        if key not in values:
            raise ChartError(f"missing key {key!r}")

    space = values["space"]
    if space not in SPACES:
        raise ChartError(f"space must be one of R, S, H; got {space!r}", seen["space"])
    n = _integer(values["n"], seen["n"])
    if n < 3:
        raise ChartError(f"n must be >= 3, got {n}", seen["n"])

    dom = _fields(values["domain"])
    if len(dom) != 4:
        raise ChartError("domain needs four numbers: u0 u1 v0 v1", seen["domain"])
    domain = tuple(_number(t, seen["domain"]) for t in dom)
    if not (domain[0] < domain[1] and domain[2] < domain[3]):
        raise ChartError("domain must satisfy u0 < u1 and v0 < v1", seen["domain"])

    g = _fields(values["grid"])
    if len(g) != 2:
        raise ChartError("grid needs two counts", seen["grid"])
    grid = tuple(_integer(t, seen["grid"]) for t in g)
    if min(grid) < 2:
        raise ChartError("grid counts must be ≥ 2", seen["grid"])

    k = len(coords)
    if sorted(coords) != list(range(1, k + 1)):
        raise ChartError(f"coordinate keys must run x1..x{k} without gaps")
    want = n if space == "R" else n + 1
    if k != want:
        raise ChartError(f"expected {want} coordinates for space {space} with n = {n}, got {k}")

    sources, exprs = [], []
    for idx in range(1, k + 1):
        src, lineno = coords[idx]
        try:
            exprs.append(parse_expression(src, constants))
        except ExprSyntaxError as err:
            raise ChartError(f"x{idx}: {err}", lineno) from None
        sources.append(src)

    return ChartSpec(
        name=values["name"],
        space=space,
        n=n,
        constants=tuple(constants.items()),
        sources=tuple(sources),
        coords=tuple(exprs),
        domain=domain,
        grid=grid,
    )


def format_chart(chart: ChartSpec) -> str:
    lines = [f"name = {chart.name}", f"space = {chart.space}", f"n = {chart.n}"]
    lines += [f"const {k} = {_fmt_num(v)}" for k, v in chart.constants]
    lines += [f"x{i} = {src}" for i, src in enumerate(chart.sources, start=1)]
    lines.append("domain = " + " ".join(_fmt_num(x) for x in chart.domain))
    lines.append(f"grid = {chart.grid[0]} {chart.grid[1]}")
    return "\n".join(lines) + "\n"


def load_chart(path) -> ChartSpec:
    return parse_chart(Path(path).read_text(encoding="utf-8"))
