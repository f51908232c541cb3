"""Routh-Hurwitz stability test in exact arithmetic.

A zero pivot is replaced by a symbolic ``eps``; entries then become rational
functions of eps and their signs are read off as eps -> 0+.  An all-zero row
is replaced by the derivative of the auxiliary polynomial above it.
"""

import enum
from dataclasses import dataclass
from fractions import Fraction

from ..algebra.poly import Binding, SPoly
from ..errors import ZeroLeadingCoefficient


class Stability(enum.Enum):
    STABLE = "Stable"
    MARGINAL = "Marginal"
    UNSTABLE = "Unstable"

    def __str__(self):
        return self.value


# -- rational functions of eps -------------------------------------------------
# An _EpsRat is (num, den): coefficient lists in eps, lowest power first.

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _psub(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)])


def _low(p):
    # lowest-order nonzero coefficient
    return next(c for c in p if c)


class _EpsRat:
    __slots__ = ("num", "den")

    def __init__(self, num, den=(Fraction(1),)):
        num, den = _trim(num), _trim(den)
        # drop common powers of eps and normalise the low coefficient of den
        if num:
            k = min(next(i for i, c in enumerate(num) if c), next(i for i, c in enumerate(den) if c))
            num, den = num[k:], den[k:]
        lead = _low(den)
        self.num = [c / lead for c in num]
        self.den = [c / lead for c in den]

    @classmethod
    def const(cls, c):
        return cls([Fraction(c)])

    def is_zero(self):
        return not self.num

    def sign(self):
        """Sign as eps -> 0+ (den's low coefficient is normalised to 1)."""
        if not self.num:
            return 0
        k_num = next(i for i, c in enumerate(self.num) if c)
        k_den = next(i for i, c in enumerate(self.den) if c)
        s = 1 if self.num[k_num] > 0 else -1
        return s if self.den[k_den] > 0 else -s

    def __mul__(self, other):
        return _EpsRat(_pmul(self.num, other.num), _pmul(self.den, other.den))

    def __sub__(self, other):
        return _EpsRat(
            _psub(_pmul(self.num, other.den), _pmul(other.num, self.den)),
            _pmul(self.den, other.den),
        )

    def __truediv__(self, other):
        return _EpsRat(_pmul(self.num, other.den), _pmul(self.den, other.num))

    def __str__(self):
        def fmt(p):
            parts = []
            for i, c in enumerate(p):
                if c:
                    parts.append(str(c) + ("" if i == 0 else "*eps" if i == 1 else f"*eps^{i}"))
            return " + ".join(parts) or "0"

        if self.den == [1]:
            return fmt(self.num)
        return f"({fmt(self.num)})/({fmt(self.den)})"


EPS = _EpsRat([Fraction(0), Fraction(1)])


@dataclass(frozen=True)
class RouthResult:
    verdict: Stability
    sign_changes: int
    rows: tuple                 # first-column-first rows, as text
    zero_pivot: bool = False    # eps substitution happened
    zero_row: bool = False      # auxiliary-polynomial rule applied
    origin_roots: int = 0       # roots at s = 0 factored out first

    @property
    def degenerate(self):
        return self.zero_pivot or self.zero_row or self.origin_roots > 0


def _exact(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, complex):
        if x.imag:
            raise ValueError("Routh test needs real coefficients")
        return Fraction(x.real)
    return Fraction(x)


def routh_stability(den, binding=None):
    """Stability verdict for the roots of ``den`` (a polynomial in s).

    ``den`` may be an SPoly (bound with ``binding``) or a sequence of numeric
    coefficients, lowest power first.
    """
    if isinstance(den, SPoly):
        binding = Binding.coerce(binding)
        coeffs = [_exact(binding.evaluate(c)) for c in den.coeffs]
    else:
        coeffs = [_exact(c) for c in den]
    if not coeffs or not any(coeffs):
        raise ZeroLeadingCoefficient("zero polynomial")
    if coeffs[-1] == 0:
        raise ZeroLeadingCoefficient("leading coefficient is zero")
    origin = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        origin += 1
    high = coeffs[::-1]  # highest power first
    n = len(high) - 1
    if n == 0:
        verdict = Stability.MARGINAL if origin else Stability.STABLE
        return RouthResult(verdict, 0, (str(high[0]),), origin_roots=origin)

    width = n // 2 + 1

    def pad(row):
        return row + [_EpsRat.const(0)] * (width - len(row))

    rows = [
        pad([_EpsRat.const(c) for c in high[0::2]]),
        pad([_EpsRat.const(c) for c in high[1::2]]),
    ]
    zero_pivot = zero_row = False
    for i in range(1, n + 1):
        row = rows[i]
        if all(x.is_zero() for x in row):
            # auxiliary polynomial of order n-i+1 from the row above
            order = n - i + 1
            above = rows[i - 1]
            new = []
            for j, x in enumerate(above):
                power = order - 2 * j
                if power > 0:
                    new.append(x * _EpsRat.const(power))
            rows[i] = row = pad(new)
            zero_row = True
        if row[0].is_zero():
            row[0] = EPS
            zero_pivot = True
        if i == n:
            break
        prev = rows[i - 1]
        nxt = []
        for j in range(width - 1):
            nxt.append((row[0] * prev[j + 1] - prev[0] * row[j + 1]) / row[0])
        rows.append(pad(nxt))

    signs = [r[0].sign() for r in rows]
    changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    if changes:
        verdict = Stability.UNSTABLE
    elif zero_pivot or zero_row or origin:
        verdict = Stability.MARGINAL
    else:
        verdict = Stability.STABLE
    text = tuple("  ".join(str(x) for x in r) for r in rows)
    return RouthResult(verdict, changes, text, zero_pivot, zero_row, origin)
