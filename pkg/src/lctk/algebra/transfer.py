"""Rational transfer functions with an optional pure delay."""

import cmath
import math
import sys
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from ..errors import (
    DegenerateLoop,
    DelayMismatch,
    DelayNotSupported,
    DivisionByZeroTF,
    NegativeDelay,
    PoleEvaluation,
)
from .poly import Binding, SPoly, as_rational


def _as_delay(d):
    if isinstance(d, float):
        if d != d or d < 0 or math.isinf(d):
            raise NegativeDelay(f"invalid delay {d!r}")
        return d
    d = as_rational(d)
    if d < 0:
        raise NegativeDelay(f"delay must be non-negative, got {d}")
    return d


class TransferFunction:
    """``exp(-delay*s) * num(s) / den(s)``.

    No common factors are ever cancelled automatically; use :func:`tf_equal`
    (cross-multiplication) to compare.
    """

    __slots__ = ("num", "den", "delay")

    def __init__(self, num, den=1, delay=0):
        self.num = SPoly.coerce(num) if not isinstance(num, (list, tuple)) else SPoly(num)
        self.den = SPoly.coerce(den) if not isinstance(den, (list, tuple)) else SPoly(den)
        if self.den.is_zero():
            raise DivisionByZeroTF("transfer function denominator is the zero polynomial")
        self.delay = _as_delay(delay)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, TransferFunction):
            return x
        if isinstance(x, str):
            from .text import parse_tf

            return parse_tf(x)
        return cls(x)

    def symbols(self):
        return self.num.symbols() | self.den.symbols()

    def is_numeric(self):
        return self.num.is_numeric() and self.den.is_numeric()

    # arithmetic delegates to tf_arith so the rules live in one place
    def __add__(self, other):
        return tf_arith("add", self, other)

    def __radd__(self, other):
        return tf_arith("add", TransferFunction.coerce(other), self)

    def __sub__(self, other):
        return tf_arith("sub", self, other)

    def __rsub__(self, other):
        return tf_arith("sub", TransferFunction.coerce(other), self)

    def __mul__(self, other):
        return tf_arith("mul", self, other)

    def __rmul__(self, other):
        return tf_arith("mul", TransferFunction.coerce(other), self)

    def __truediv__(self, other):
        return tf_arith("div", self, other)

    def __rtruediv__(self, other):
        return tf_arith("div", TransferFunction.coerce(other), self)

    def __neg__(self):
        return tf_arith("neg", self)

    def __eq__(self, other):
        if isinstance(other, TransferFunction):
            return tf_equal(self, other)
        return NotImplemented

    __hash__ = None

    def identical(self, other):
        """Structural equality (same stored num, den and delay)."""
        return self.num == other.num and self.den == other.den and self.delay == other.delay

    def substitute(self, mapping):
        return TransferFunction(self.num.substitute(mapping), self.den.substitute(mapping), self.delay)

    def bind_exact(self, binding):
        """Substitute an exact binding, keeping the result symbolic-typed."""
        binding = Binding.coerce(binding)
        return self.substitute(binding.as_exact_mapping())

    def content_normalized(self):
        """Clear denominators and common integer content (numeric TFs only).

        The denominator's leading coefficient is made positive.  The result
        is tf_equal to ``self``.
        """
        if not self.is_numeric():
            raise ValueError("content removal needs numeric coefficients")
        values = [c.constant_value() for c in self.num.coeffs + self.den.coeffs]
        mult = 1
        for v in values:
            mult = lcm(mult, v.denominator)
        g = 0
        for v in values:
            g = gcd(g, int(v * mult))
        factor = Fraction(mult, g or 1)
        if self.den.leading.constant_value() < 0:
            factor = -factor
        return TransferFunction(
            self.num.map_coeffs(lambda c: c.scale(factor)),
            self.den.map_coeffs(lambda c: c.scale(factor)),
            self.delay,
        )

    def numeric_coeffs(self, binding=None):
        """(num, den) as float/complex numpy arrays, highest power first."""
        binding = Binding.coerce(binding)
        num = [complex(x) for x in self.num.numeric_coeffs(binding)][::-1] or [0j]
        den = [complex(x) for x in self.den.numeric_coeffs(binding)][::-1]
        num = np.array(num)
        den = np.array(den)
        if not num.imag.any() and not den.imag.any():
            num, den = num.real, den.real
        return num, den

    def __call__(self, s, binding=None):
        return tf_eval(self, binding, s)

    def __str__(self):
        from .text import format_tf

        return format_tf(self)

    def __repr__(self):
        return f"TransferFunction({str(self)!r})"


def tf_arith(kind, a, b=None):
    """Block-diagram arithmetic: ``add``, ``sub``, ``mul``, ``div``, ``neg``."""
    a = TransferFunction.coerce(a)
    if kind == "neg":
        return TransferFunction(-a.num, a.den, a.delay)
    b = TransferFunction.coerce(b)
    if kind in ("add", "sub"):
        bn = b.num if kind == "add" else -b.num
        # a zero operand carries no delay information
        if a.num.is_zero():
            return TransferFunction(bn * a.den, a.den * b.den, b.delay)
        if b.num.is_zero():
            return TransferFunction(a.num * b.den, a.den * b.den, a.delay)
        if a.delay != b.delay:
            raise DelayMismatch(f"cannot add delays {a.delay} and {b.delay}")
        return TransferFunction(a.num * b.den + bn * a.den, a.den * b.den, a.delay)
    if kind == "mul":
        return TransferFunction(a.num * b.num, a.den * b.den, a.delay + b.delay)
    if kind == "div":
        if b.num.is_zero():
            raise DivisionByZeroTF("division by a zero transfer function")
        delay = a.delay - b.delay
        if delay < 0:
            raise NegativeDelay(f"division would give delay {delay}")
        return TransferFunction(a.num * b.den, a.den * b.num, delay)
    raise ValueError(f"unknown operation {kind!r}")


def tf_equal(a, b):
    a = TransferFunction.coerce(a)
    b = TransferFunction.coerce(b)
    return a.delay == b.delay and a.num * b.den == b.num * a.den


def _horner(coeffs, s):
    acc = 0j
    scale = 0.0
    mag = abs(s)
    for c in reversed(coeffs):
        acc = acc * s + c
        scale = scale * mag + abs(c)
    return acc, scale


def tf_eval(tf, binding, s):
    """Evaluate ``tf`` at complex ``s`` in double precision."""
    tf = TransferFunction.coerce(tf)
    binding = Binding.coerce(binding)
    s = complex(s)
    num = [complex(x) for x in tf.num.numeric_coeffs(binding)]
    den = [complex(x) for x in tf.den.numeric_coeffs(binding)]
    d, dscale = _horner(den, s)
    if abs(d) <= 4 * sys.float_info.epsilon * max(dscale, sys.float_info.min) * max(len(den), 1):
        raise PoleEvaluation(f"denominator vanishes at s = {s}")
    n, _ = _horner(num, s)
    value = n / d
    if tf.delay:
        value *= cmath.exp(-float(tf.delay) * s)
    return value


def tf_feedback(g, h=1):
    """Closed loop ``G / (1 + G H)`` for delay-free operands."""
    g = TransferFunction.coerce(g)
    h = TransferFunction.coerce(h)
    if g.delay or h.delay:
        raise DelayNotSupported("feedback of delayed transfer functions is not rational")
    den = g.den * h.den + g.num * h.num
    if den.is_zero():
        raise DegenerateLoop("1 + G*H is identically zero")
    return TransferFunction(g.num * h.den, den)
