"""Rule-based Laplace transforms of :mod:`lctk.laplace.expr` expressions."""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ..algebra.poly import ParamPoly, SPoly
from ..algebra.transfer import TransferFunction, tf_arith
from ..errors import DelayMismatch, NonRationalResult, UnsupportedComposition
from .expr import (
    Add,
    Const,
    Cos,
    Deriv,
    Exp,
    ExpMul,
    Integ,
    ModCos,
    ModSin,
    Power,
    Scale,
    ShiftRight,
    Sin,
    TimeScale,
    initial_values,
)

NEG_INF = float("-inf")

#: initial-value policies for derivative nodes
ZERO_INIT = "zero"
ACTUAL_INIT = "actual"


@dataclass(frozen=True)
class LaplaceResult:
    """Transform ``tf`` claimed valid for ``Re s > roc``.

    ``roc`` is an upper bound propagated through the rules; the true
    abscissa can be lower when terms cancel.
    """

    tf: TransferFunction
    roc: object  # Fraction, or -inf for the zero signal


def _poly(*coeffs):
    return SPoly(coeffs)


def laplace_symbolic(f, iv=ZERO_INIT):
    """Transform ``f`` by structural recursion over the rule set.

    ``iv`` selects initial values for :class:`Deriv` nodes: ``ZERO_INIT``
    (all zero), ``ACTUAL_INIT`` (computed exactly from the operand), or a
    mapping from each Deriv node to its list ``[f(0), ..., f^(k-1)(0)]``.
    """
    return _transform(f, iv)


def _transform(e, iv):
    if isinstance(e, Const):
        if e.c == 0:
            return LaplaceResult(TransferFunction(0), NEG_INF)
        return LaplaceResult(TransferFunction(_poly(e.c), _poly(0, 1)), Fraction(0))
    if isinstance(e, Power):
        return LaplaceResult(
            TransferFunction(_poly(factorial(e.n)), SPoly.monomial(e.n + 1)), Fraction(0)
        )
    if isinstance(e, Exp):
        return LaplaceResult(TransferFunction(1, _poly(-e.a, 1)), e.a)
    if isinstance(e, Sin):
        if e.w == 0:
            return LaplaceResult(TransferFunction(0), NEG_INF)
        return LaplaceResult(TransferFunction(_poly(e.w), _poly(e.w * e.w, 0, 1)), Fraction(0))
    if isinstance(e, Cos):
        return LaplaceResult(TransferFunction(_poly(0, 1), _poly(e.w * e.w, 0, 1)), Fraction(0))

    if isinstance(e, Scale):
        r = _transform(e.f, iv)
        tf = r.tf
        return LaplaceResult(
            TransferFunction(tf.num.map_coeffs(lambda c: c.scale(e.c)), tf.den, tf.delay), r.roc
        )
    if isinstance(e, Add):
        a, b = _transform(e.f, iv), _transform(e.g, iv)
        try:
            tf = tf_arith("add", a.tf, b.tf)
        except DelayMismatch as exc:
            raise NonRationalResult(f"sum of differently delayed terms: {exc}") from None
        return LaplaceResult(tf, max(a.roc, b.roc))
    if isinstance(e, ExpMul):
        r = _transform(e.f, iv)
        if r.tf.delay and e.a:
            raise NonRationalResult("exponential modulation of a delayed term")
        tf = TransferFunction(
            r.tf.num.compose_linear(1, -e.a), r.tf.den.compose_linear(1, -e.a), r.tf.delay
        )
        return LaplaceResult(tf, r.roc + e.a)
    if isinstance(e, ShiftRight):
        r = _transform(e.f, iv)
        tf = TransferFunction(r.tf.num, r.tf.den, r.tf.delay + e.a)
        return LaplaceResult(tf, r.roc)
    if isinstance(e, TimeScale):
        r = _transform(e.f, iv)
        inv = 1 / e.c
        num = r.tf.num.compose_linear(inv, 0).map_coeffs(lambda c: c.scale(inv))
        den = r.tf.den.compose_linear(inv, 0)
        return LaplaceResult(TransferFunction(num, den, r.tf.delay * inv), r.roc * e.c)
    if isinstance(e, (ModCos, ModSin)):
        r = _transform(e.f, iv)
        if r.tf.delay:
            raise NonRationalResult("modulation of a delayed term")
        return LaplaceResult(_modulate(r.tf, e.b, isinstance(e, ModCos)), r.roc)
    if isinstance(e, Deriv):
        r = _transform(e.f, iv)
        values = _initial_values(e, iv)
        tf = r.tf
        num = tf.num.shift_up(e.k)
        correction = SPoly()
        for i, v in enumerate(values):
            correction = correction + SPoly.monomial(e.k - 1 - i, v)
        if not correction.is_zero():
            if tf.delay:
                raise NonRationalResult("initial-value correction on a delayed term")
            num = num - correction * tf.den
        return LaplaceResult(TransferFunction(num, tf.den, tf.delay), r.roc)
    if isinstance(e, Integ):
        r = _transform(e.f, iv)
        tf = TransferFunction(r.tf.num, r.tf.den.shift_up(1), r.tf.delay)
        return LaplaceResult(tf, max(r.roc, Fraction(0)))
    raise TypeError(f"not a time expression: {e!r}")


def _initial_values(node, iv):
    if iv == ZERO_INIT:
        return [Fraction(0)] * node.k
    if iv == ACTUAL_INIT:
        return initial_values(node.f, node.k)
    try:
        values = iv[node]
    except (KeyError, TypeError):
        raise ValueError(f"no initial values supplied for {node}") from None
    if len(values) != node.k:
        raise ValueError(f"{node} needs {node.k} initial values, got {len(values)}")
    out = []
    for v in values:
        if isinstance(v, complex):
            if v.imag:
                raise ValueError("complex initial values are not representable exactly")
            v = v.real
        out.append(ParamPoly.coerce(v).constant_value())
    return out


# -- cosine / sine modulation --------------------------------------------------
# Complex polynomials are lists of (re, im) Fraction pairs, lowest power first.

def _to_gauss(p):
    return [(c.constant_value(), Fraction(0)) for c in p.coeffs]


def _gmul(p, q):
    if not p or not q:
        return []
    out = [(Fraction(0), Fraction(0))] * (len(p) + len(q) - 1)
    for i, (a, b) in enumerate(p):
        for j, (c, d) in enumerate(q):
            re, im = out[i + j]
            out[i + j] = (re + a * c - b * d, im + a * d + b * c)
    return out


def _gshift(p, shift):
    """p(s + shift) for a Gaussian-rational shift."""
    lin = [shift, (Fraction(1), Fraction(0))]
    out = []
    for c in reversed(p):
        out = _gmul(out, lin) if out else []
        if out:
            out[0] = (out[0][0] + c[0], out[0][1] + c[1])
        else:
            out = [c]
    return out


def _modulate(tf, b, cosine):
    # F(s -+ jb) = N(s -+ jb)/D(s -+ jb).  With real coefficients,
    # F(s-jb) = P/Q where P = N(s-jb)D(s+jb), Q = |D|^2 is real, and
    # F(s+jb) = conj-coefficients(P)/Q.  Cosine takes Re P, sine takes Im P.
    if not (tf.num.is_numeric() and tf.den.is_numeric()):
        raise UnsupportedComposition("modulation needs numeric coefficients")
    b = Fraction(b)
    minus = (Fraction(0), -b)
    plus = (Fraction(0), b)
    n_minus = _gshift(_to_gauss(tf.num), minus)
    d_minus = _gshift(_to_gauss(tf.den), minus)
    d_plus = _gshift(_to_gauss(tf.den), plus)
    p = _gmul(n_minus, d_plus)
    q = _gmul(d_minus, d_plus)
    if any(im for _, im in q):
        raise UnsupportedComposition("modulated denominator is not real")
    num = SPoly([re if cosine else im for re, im in p])
    den = SPoly([re for re, _ in q])
    return TransferFunction(num, den)
