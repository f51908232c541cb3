"""Exponential-order witnesses and direct quadrature of the Laplace integral."""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceMargin, ToleranceNotMet
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
    breakpoints,
    evaluate,
    nth_derivative,
)

#: default growth slack for polynomial factors: t^n <= (n/(e*eps))^n e^{eps t}
DEFAULT_SLACK = 0.25


@dataclass(frozen=True)
class ExpOrderWitness:
    """``|f(t)| <= M * exp(a*t)`` for all t >= 0."""

    M: float
    a: float

    def __post_init__(self):
        if not self.M > 0:
            raise ValueError("witness constant M must be positive")

    def bound(self, t):
        return self.M * np.exp(self.a * np.asarray(t, dtype=float))


def exp_order_witness(f, slack=DEFAULT_SLACK):
    """Structural witness of exponential order.

    ``slack`` is the exponent spent to dominate polynomial growth; smaller
    values give a smaller ``a`` at the price of a larger ``M``.
    """
    M, a = _witness(f, float(slack))
    return ExpOrderWitness(M, a)


def _witness(e, eps):
    if isinstance(e, Const):
        return (abs(float(e.c)) or 1.0), 0.0
    if isinstance(e, Power):
        if e.n == 0:
            return 1.0, 0.0
        # max of t^n e^{-eps t} is at t = n/eps
        return (e.n / (math.e * eps)) ** e.n, eps
    if isinstance(e, Exp):
        return 1.0, float(e.a)
    if isinstance(e, (Sin, Cos)):
        return 1.0, 0.0
    if isinstance(e, Scale):
        M, a = _witness(e.f, eps)
        return (abs(float(e.c)) * M or M), a
    if isinstance(e, Add):
        M1, a1 = _witness(e.f, eps)
        M2, a2 = _witness(e.g, eps)
        return M1 + M2, max(a1, a2)
    if isinstance(e, ExpMul):
        M, a = _witness(e.f, eps)
        return M, a + float(e.a)
    if isinstance(e, ShiftRight):
        # |f(t-a)| <= M e^{b(t-a)} = (M e^{-ba}) e^{bt}
        M, b = _witness(e.f, eps)
        return M * math.exp(-b * float(e.a)), b
    if isinstance(e, TimeScale):
        c = float(e.c)
        M, a = _witness(e.f, eps / c)
        return M, a * c
    if isinstance(e, (ModCos, ModSin)):
        return _witness(e.f, eps)
    if isinstance(e, Deriv):
        return _witness(nth_derivative(e.f, e.k), eps)
    if isinstance(e, Integ):
        M, a = _witness(e.f, eps)
        if a > 0:
            return M / a, a
        if a < 0:
            return M / -a, 0.0
        # |int_0^t f| <= M t <= M/(e*eps) e^{eps t}
        return M / (math.e * eps), eps
    raise TypeError(f"not a time expression: {e!r}")


def laplace_exists_check(f, s):
    """Whether the transform integral is guaranteed to converge at ``s``.

    Returns ``(exists, witness)``.  Piecewise smoothness holds for every
    expression of the language by construction, so only exponential order
    is checked, shrinking the polynomial slack until a witness fits.
    """
    sigma = complex(s).real
    witness = exp_order_witness(f)
    eps = DEFAULT_SLACK
    while eps > 1e-12:
        w = exp_order_witness(f, eps)
        if sigma > w.a:
            return True, w
        eps /= 4
    return False, witness


def truncation_time(witness, sigma, tol):
    """T such that the tail beyond T is below ``tol``."""
    gap = sigma - witness.a
    T = math.log(max(witness.M / (tol * gap), 1.0)) / gap
    return max(T, 1.0)


def laplace_numeric(f, s, tol=1e-8, margin=0.1, slack=DEFAULT_SLACK, max_panels=2**20):
    """Evaluate ``int_0^inf f(t) e^{-st} dt`` by adaptive Simpson quadrature.

    The infinite range is truncated where the witness bound on the tail
    drops below ``tol/2``; the finite part is integrated to ``tol/2``.
    """
    s = complex(s)
    witness = exp_order_witness(f, slack)
    if not s.real > witness.a + margin:
        raise ConvergenceMargin(
            f"Re s = {s.real:g} must exceed the exponential order {witness.a:g} by {margin:g}"
        )
    T = truncation_time(witness, s.real, tol / 2)
    cuts = [0.0] + [float(b) for b in breakpoints(f) if 0 < b < T] + [T]

    def integrand(t):
        return evaluate(f, t) * np.exp(-s * t)

    total = 0j
    budget = tol / 2
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        # pull the ends inside so jumps at cut points are seen one-sided
        delta = 1e-13 * max(1.0, hi)
        if hi - lo > 2 * delta:
            total += adaptive_simpson(
                integrand, lo + delta, hi - delta, budget * (hi - lo) / T, max_panels
            )
    return total


def adaptive_simpson(g, a, b, tol, max_panels=2**20):
    """Vectorised adaptive Simpson rule on [a, b] to absolute ``tol``.

    Every unresolved panel is bisected per pass; a panel is accepted when
    its Richardson error estimate is within its share of ``tol``.
    """
    width = b - a
    n0 = max(16, int(math.ceil(width / 0.25)))
    edges = np.linspace(a, b, n0 + 1)
    lo, hi = edges[:-1], edges[1:]
    f_lo, f_hi = g(lo), g(hi)
    mid = 0.5 * (lo + hi)
    f_mid = g(mid)
    total = 0j
    panels = n0
    while lo.size:
        h = hi - lo
        q1 = 0.5 * (lo + mid)
        q3 = 0.5 * (mid + hi)
        f_q1, f_q3 = g(q1), g(q3)
        coarse = h / 6 * (f_lo + 4 * f_mid + f_hi)
        fine = h / 12 * (f_lo + 4 * f_q1 + 2 * f_mid + 4 * f_q3 + f_hi)
        err = np.abs(fine - coarse) / 15
        ok = err <= tol * h / width
        total += np.sum(fine[ok] + (fine[ok] - coarse[ok]) / 15)
        bad = ~ok
        if not bad.any():
            break
        panels += int(bad.sum())
        if panels > max_panels or np.min(h[bad]) < width * 1e-15:
            raise ToleranceNotMet(f"adaptive quadrature exceeded {max_panels} panels")
        lo = np.concatenate([lo[bad], mid[bad]])
        hi = np.concatenate([mid[bad], hi[bad]])
        f_lo2 = np.concatenate([f_lo[bad], f_mid[bad]])
        f_hi2 = np.concatenate([f_mid[bad], f_hi[bad]])
        f_mid = np.concatenate([f_q1[bad], f_q3[bad]])
        f_lo, f_hi = f_lo2, f_hi2
        mid = 0.5 * (lo + hi)
    return total
