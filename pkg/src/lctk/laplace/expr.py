"""Time-domain signal expressions.

Leaves are constants, powers of t, exponentials, sines and cosines; the
combinators mirror the transform rules (scaling, sums, exponential
modulation, delay, time scaling, cosine/sine modulation, derivatives and
running integrals).  Expressions are immutable and hashable.

Text form is an s-expression, e.g. ``(add (scale 3 (exp -1)) (modcos 2 (pow 1)))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..algebra.poly import as_rational
from ..algebra.text import format_rational
from ..errors import ParseError


class TimeExpr:
    __slots__ = ()

    def __post_init__(self):
        # rational fields accept ints, floats and strings
        for name, ftype in self.__annotations__.items():
            if ftype == "Fraction":
                object.__setattr__(self, name, as_rational(getattr(self, name)))

    def __add__(self, other):
        return Add(self, other)

    def __rmul__(self, c):
        return Scale(as_rational(c), self)

    def __str__(self):
        return format_sexpr(self)


@dataclass(frozen=True)
class Const(TimeExpr):
    c: Fraction


@dataclass(frozen=True)
class Power(TimeExpr):
    n: int


@dataclass(frozen=True)
class Exp(TimeExpr):
    a: Fraction


@dataclass(frozen=True)
class Sin(TimeExpr):
    w: Fraction


@dataclass(frozen=True)
class Cos(TimeExpr):
    w: Fraction


@dataclass(frozen=True)
class Scale(TimeExpr):
    c: Fraction
    f: TimeExpr


@dataclass(frozen=True)
class Add(TimeExpr):
    f: TimeExpr
    g: TimeExpr


@dataclass(frozen=True)
class ExpMul(TimeExpr):
    """``e^{a t} f(t)``."""

    a: Fraction
    f: TimeExpr


@dataclass(frozen=True)
class ShiftRight(TimeExpr):
    """``f(t - a) u(t - a)`` for a > 0."""

    a: Fraction
    f: TimeExpr

    def __post_init__(self):
        super().__post_init__()
        if not self.a > 0:
            raise ValueError("shift must be positive")


@dataclass(frozen=True)
class TimeScale(TimeExpr):
    """``f(c t)`` for c > 0."""

    c: Fraction
    f: TimeExpr

    def __post_init__(self):
        super().__post_init__()
        if not self.c > 0:
            raise ValueError("time scale must be positive")


@dataclass(frozen=True)
class ModCos(TimeExpr):
    b: Fraction
    f: TimeExpr


@dataclass(frozen=True)
class ModSin(TimeExpr):
    b: Fraction
    f: TimeExpr


@dataclass(frozen=True)
class Deriv(TimeExpr):
    k: int
    f: TimeExpr

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("derivative order must be >= 1")


@dataclass(frozen=True)
class Integ(TimeExpr):
    """Running integral from 0 to t."""

    f: TimeExpr


LEAVES = (Const, Power, Exp, Sin, Cos)


# -- s-expression text -------------------------------------------------------

# name -> (class, number of rational args, number of subexpressions)
_FORMS = {
    "const": (Const, 1, 0),
    "pow": (Power, 1, 0),
    "exp": (Exp, 1, 0),
    "sin": (Sin, 1, 0),
    "cos": (Cos, 1, 0),
    "scale": (Scale, 1, 1),
    "add": (Add, 0, 2),
    "expmul": (ExpMul, 1, 1),
    "shift": (ShiftRight, 1, 1),
    "timescale": (TimeScale, 1, 1),
    "modcos": (ModCos, 1, 1),
    "modsin": (ModSin, 1, 1),
    "deriv": (Deriv, 1, 1),
    "integ": (Integ, 0, 1),
}
_NAMES = {cls: name for name, (cls, _, _) in _FORMS.items()}
_INT_FIELDS = (Power, Deriv)

_SEXPR_TOKEN = re.compile(r"\s*([()]|[^\s()]+)")


def parse_sexpr(text):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _SEXPR_TOKEN.match(text, pos)
        if not m:
            raise ParseError("bad s-expression", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    if not tokens:
        raise ParseError("empty expression", 0)
    expr, i = _parse_form(tokens, 0)
    if i != len(tokens):
        raise ParseError(f"trailing input {tokens[i][0]!r}", tokens[i][1])
    return expr


def _parse_form(tokens, i):
    tok, pos = tokens[i]
    if tok != "(":
        raise ParseError(f"expected '(', found {tok!r}", pos)
    if i + 1 >= len(tokens):
        raise ParseError("unexpected end of input", pos)
    head, hpos = tokens[i + 1]
    if head not in _FORMS:
        raise ParseError(f"unknown form {head!r}", hpos)
    cls, nargs, nsub = _FORMS[head]
    i += 2
    args = []
    for _ in range(nargs):
        if i >= len(tokens) or tokens[i][0] in "()":
            raise ParseError(f"{head} expects a numeric argument", tokens[min(i, len(tokens) - 1)][1])
        try:
            value = Fraction(tokens[i][0])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad number {tokens[i][0]!r}", tokens[i][1]) from None
        if cls in _INT_FIELDS:
            if value.denominator != 1 or value < 0:
                raise ParseError(f"{head} expects a non-negative integer", tokens[i][1])
            value = int(value)
        args.append(value)
        i += 1
    subs = []
    # add is n-ary in text, nested left to right
    while i < len(tokens) and tokens[i][0] == "(":
        sub, i = _parse_form(tokens, i)
        subs.append(sub)
    if i >= len(tokens) or tokens[i][0] != ")":
        where = tokens[i][1] if i < len(tokens) else tokens[-1][1]
        raise ParseError(f"expected ')' to close {head}", where)
    if cls is Add:
        if len(subs) < 2:
            raise ParseError("add needs at least two terms", hpos)
        expr = subs[0]
        for sub in subs[1:]:
            expr = Add(expr, sub)
        return expr, i + 1
    if len(subs) != nsub:
        raise ParseError(f"{head} expects {nsub} subexpression(s)", hpos)
    try:
        return cls(*args, *subs), i + 1
    except ValueError as exc:
        raise ParseError(str(exc), hpos) from None


def format_sexpr(e):
    name = _NAMES[type(e)]
    if isinstance(e, Add):
        return f"(add {format_sexpr(e.f)} {format_sexpr(e.g)})"
    parts = [name]
    for field in e.__dataclass_fields__:
        v = getattr(e, field)
        if isinstance(v, TimeExpr):
            parts.append(format_sexpr(v))
        elif isinstance(v, int):
            parts.append(str(v))
        else:
            parts.append(format_rational(v))
    return "(" + " ".join(parts) + ")"


# -- calculus on the AST ------------------------------------------------------

def diff(e):
    """Classical derivative, as a derivative-free expression.

    Jumps introduced by :class:`ShiftRight` contribute no impulse here.
    """
    if isinstance(e, (Const,)):
        return Const(Fraction(0))
    if isinstance(e, Power):
        return Const(Fraction(0)) if e.n == 0 else Scale(Fraction(e.n), Power(e.n - 1))
    if isinstance(e, Exp):
        return Scale(e.a, e)
    if isinstance(e, Sin):
        return Scale(e.w, Cos(e.w))
    if isinstance(e, Cos):
        return Scale(-e.w, Sin(e.w))
    if isinstance(e, Scale):
        return Scale(e.c, diff(e.f))
    if isinstance(e, Add):
        return Add(diff(e.f), diff(e.g))
    if isinstance(e, ExpMul):
        return Add(Scale(e.a, e), ExpMul(e.a, diff(e.f)))
    if isinstance(e, ShiftRight):
        return ShiftRight(e.a, diff(e.f))
    if isinstance(e, TimeScale):
        return Scale(e.c, TimeScale(e.c, diff(e.f)))
    if isinstance(e, ModCos):
        return Add(ModCos(e.b, diff(e.f)), Scale(-e.b, ModSin(e.b, e.f)))
    if isinstance(e, ModSin):
        return Add(ModSin(e.b, diff(e.f)), Scale(e.b, ModCos(e.b, e.f)))
    if isinstance(e, Deriv):
        return nth_derivative(e.f, e.k + 1)
    if isinstance(e, Integ):
        return e.f
    raise TypeError(f"not a time expression: {e!r}")


def nth_derivative(e, k):
    for _ in range(k):
        e = diff(e)
    return e


def value_at_zero(e):
    """Exact right-limit f(0+) as a Fraction."""
    if isinstance(e, Const):
        return e.c
    if isinstance(e, Power):
        return Fraction(1 if e.n == 0 else 0)
    if isinstance(e, (Exp, Cos)):
        return Fraction(1)
    if isinstance(e, Sin):
        return Fraction(0)
    if isinstance(e, Scale):
        return e.c * value_at_zero(e.f)
    if isinstance(e, Add):
        return value_at_zero(e.f) + value_at_zero(e.g)
    if isinstance(e, (ExpMul, TimeScale, ModCos)):
        return value_at_zero(e.f)
    if isinstance(e, (ShiftRight, ModSin, Integ)):
        return Fraction(0)
    if isinstance(e, Deriv):
        return value_at_zero(nth_derivative(e.f, e.k))
    raise TypeError(f"not a time expression: {e!r}")


def initial_values(f, k):
    """``[f(0), f'(0), ..., f^(k-1)(0)]`` computed exactly from the AST."""
    out = []
    for _ in range(k):
        out.append(value_at_zero(f))
        f = diff(f)
    return out


def breakpoints(e):
    """Sorted times where the expression (or a derivative) may jump."""
    pts = set()
    _collect_breaks(e, 0, Fraction(1), pts)
    return sorted(pts)


def _collect_breaks(e, offset, scale, out):
    # e is evaluated at scale*(t) - offset in outer time; a break at inner time
    # tau sits at outer time (tau + offset) / scale
    if isinstance(e, ShiftRight):
        out.add((e.a + offset) / scale)
        _collect_breaks(e.f, offset + e.a, scale, out)
    elif isinstance(e, TimeScale):
        _collect_breaks(e.f, offset * e.c, scale * e.c, out)
    elif isinstance(e, Add):
        _collect_breaks(e.f, offset, scale, out)
        _collect_breaks(e.g, offset, scale, out)
    elif isinstance(e, (Scale, ExpMul, ModCos, ModSin, Deriv, Integ)):
        _collect_breaks(e.f, offset, scale, out)


# -- numeric evaluation ----------------------------------------------------------

# composite Gauss-Legendre rule for running integrals
_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)
_GL_PANEL = 0.5


def evaluate(e, t):
    """Evaluate at t >= 0 (scalar or array); returns float ndarray."""
    t = np.asarray(t, dtype=float)
    return _eval(e, t)


def _eval(e, t):
    if isinstance(e, Const):
        return np.full_like(t, float(e.c))
    if isinstance(e, Power):
        return t ** e.n if e.n else np.ones_like(t)
    if isinstance(e, Exp):
        return np.exp(float(e.a) * t)
    if isinstance(e, Sin):
        return np.sin(float(e.w) * t)
    if isinstance(e, Cos):
        return np.cos(float(e.w) * t)
    if isinstance(e, Scale):
        return float(e.c) * _eval(e.f, t)
    if isinstance(e, Add):
        return _eval(e.f, t) + _eval(e.g, t)
    if isinstance(e, ExpMul):
        return np.exp(float(e.a) * t) * _eval(e.f, t)
    if isinstance(e, ShiftRight):
        a = float(e.a)
        inner = _eval(e.f, np.maximum(t - a, 0.0))
        return np.where(t >= a, inner, 0.0)
    if isinstance(e, TimeScale):
        return _eval(e.f, float(e.c) * t)
    if isinstance(e, ModCos):
        return np.cos(float(e.b) * t) * _eval(e.f, t)
    if isinstance(e, ModSin):
        return np.sin(float(e.b) * t) * _eval(e.f, t)
    if isinstance(e, Deriv):
        return _eval(nth_derivative(e.f, e.k), t)
    if isinstance(e, Integ):
        return _running_integral(e.f, t)
    raise TypeError(f"not a time expression: {e!r}")


def _gl_nodes(lo, hi):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return mid[..., None] + half[..., None] * _GL_X, half


def _running_integral(f, t):
    flat = np.atleast_1d(t).ravel()
    if flat.size == 0:
        return np.zeros_like(t)
    tmax = float(flat.max())
    grid = set(np.arange(0.0, tmax, _GL_PANEL).tolist())
    grid.update(float(b) for b in breakpoints(f) if b < tmax)
    grid.add(0.0)
    edges = np.array(sorted(grid))
    # integral over every full panel, then cumulative sums
    if len(edges) > 1:
        nodes, half = _gl_nodes(edges[:-1], edges[1:])
        panel = (_eval(f, nodes) @ _GL_W) * half
        cum = np.concatenate([[0.0], np.cumsum(panel)])
    else:
        cum = np.zeros(1)
    idx = np.searchsorted(edges, flat, side="right") - 1
    idx = np.clip(idx, 0, len(edges) - 1)
    start = edges[idx]
    nodes, half = _gl_nodes(start, flat)
    partial = (_eval(f, nodes) @ _GL_W) * half
    out = cum[idx] + partial
    return out.reshape(np.shape(t))
