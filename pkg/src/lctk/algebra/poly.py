"""Exact polynomial arithmetic.

``ParamPoly`` is a multivariate polynomial over named parameters with
:class:`fractions.Fraction` coefficients.  ``SPoly`` is a univariate
polynomial in the Laplace variable ``s`` whose coefficients are
``ParamPoly`` values, stored lowest power first.
"""

from fractions import Fraction
from numbers import Rational as _RationalABC

from ..errors import NotDivisible, UnboundParameter

Rational = Fraction

#: Name reserved for the Laplace variable; parameters may not use it.
S_VAR = "s"


def as_rational(x):
    """Convert ``x`` to an exact Fraction.

    Strings accept decimal (``"0.1088"``, ``"1e-6"``) and ``"p/q"`` forms.
    Floats go through their shortest repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational value")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, _RationalABC):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for name, e in b:
        d[name] = d.get(name, 0) + e
    return tuple(sorted(d.items()))


def _mono_degree(m):
    return sum(e for _, e in m)


def grlex_key(variables):
    """Sort key for graded-lex order over ``variables`` (sorted names).

    The first name in sorted order is the most significant variable.
    """
    index = {v: i for i, v in enumerate(variables)}
    n = len(variables)

    def key(mono):
        vec = [0] * n
        for name, e in mono:
            vec[index[name]] = e
        return (_mono_degree(mono), tuple(vec))

    return key


class ParamPoly:
    """Immutable multivariate polynomial with exact rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, c in dict(terms).items():
                c = as_rational(c)
                if c:
                    mono = tuple(sorted((n, int(e)) for n, e in mono if e))
                    clean[mono] = clean.get(mono, 0) + c
                    if not clean[mono]:
                        del clean[mono]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        # trusted constructor: canonical monos, nonzero Fraction coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c):
        c = as_rational(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def symbol(cls, name):
        if name == S_VAR:
            raise ValueError(f"'{S_VAR}' is reserved for the Laplace variable")
        return cls._raw({((name, 1),): Fraction(1)})

    @classmethod
    def coerce(cls, x):
        if isinstance(x, ParamPoly):
            return x
        if isinstance(x, str):
            if x.strip().isidentifier():
                return cls.symbol(x.strip())
            try:
                return cls.const(x)
            except (ValueError, ZeroDivisionError):
                from .text import parse_parampoly

                return parse_parampoly(x)
        return cls.const(x)

    # -- inspection -------------------------------------------------------
    @property
    def terms(self):
        return dict(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(not m for m in self._terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not a numeric constant")
        return self._terms.get((), Fraction(0))

    def symbols(self):
        return frozenset(n for m in self._terms for n, _ in m)

    def total_degree(self):
        return max((_mono_degree(m) for m in self._terms), default=-1)

    def degree_in(self, name):
        return max((e for m in self._terms for n, e in m if n == name), default=0)

    def sorted_terms(self):
        """Terms in canonical (descending graded-lex) order."""
        key = grlex_key(sorted(self.symbols()))
        return sorted(self._terms.items(), key=lambda kv: key(kv[0]), reverse=True)

    def __len__(self):
        return len(self._terms)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return ParamPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_or_none(other)
        if other is None:
            return NotImplemented
        if not self._terms or not other._terms:
            return ParamPoly._raw({})
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return ParamPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result = ParamPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c):
        c = as_rational(c)
        if not c:
            return ParamPoly._raw({})
        return ParamPoly._raw({m: v * c for m, v in self._terms.items()})

    def exact_div(self, other):
        """Return q with ``q * other == self``; raise NotDivisible otherwise."""
        other = ParamPoly.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        if other.is_constant():
            return self.scale(1 / other.constant_value())
        variables = sorted(self.symbols() | other.symbols())
        index = {v: i for i, v in enumerate(variables)}
        n = len(variables)

        def vec(m):
            v = [0] * n
            for name, e in m:
                v[index[name]] = e
            return (sum(v),) + tuple(v)

        rem = {vec(m): c for m, c in self._terms.items()}
        div = {vec(m): c for m, c in other._terms.items()}
        lead = max(div)
        lead_c = div[lead]
        quot = {}
        while rem:
            top = max(rem)
            shift = tuple(a - b for a, b in zip(top, lead))
            if any(x < 0 for x in shift[1:]):
                raise NotDivisible(f"{other} does not divide {self}")
            q = rem[top] / lead_c
            quot[shift] = q
            for dv, dc in div.items():
                k = tuple(a + b for a, b in zip(dv, shift))
                v = rem.get(k, 0) - q * dc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        out = {}
        for v, c in quot.items():
            out[tuple((variables[i], e) for i, e in enumerate(v[1:]) if e)] = c
        return ParamPoly._raw(out)

    # -- evaluation -------------------------------------------------------
    def evaluate(self, values):
        """Evaluate with ``values`` mapping every symbol to a number."""
        missing = self.symbols() - set(values)
        if missing:
            raise UnboundParameter(missing)
        total = 0
        for m, c in self._terms.items():
            t = c
            for name, e in m:
                t = t * values[name] ** e
            total = total + t
        return total

    def substitute(self, mapping):
        """Replace symbols by ParamPoly (or numbers); others are kept."""
        out = ParamPoly._raw({})
        for m, c in self._terms.items():
            t = ParamPoly.const(c)
            for name, e in m:
                if name in mapping:
                    t = t * ParamPoly.coerce(mapping[name]) ** e
                else:
                    t = t * ParamPoly._raw({((name, e),): Fraction(1)})
            out = out + t
        return out

    # -- protocol ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self._terms == other._terms
        try:
            return self._terms == ParamPoly.const(other)._terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        from .text import format_parampoly

        return format_parampoly(self)

    def __repr__(self):
        return f"ParamPoly({str(self)!r})"


def _coerce_or_none(x):
    try:
        return ParamPoly.coerce(x) if not isinstance(x, str) else None
    except TypeError:
        return None


ZERO = ParamPoly.const(0)
ONE = ParamPoly.const(1)


class SPoly:
    """Polynomial in ``s``; ``coeffs[k]`` is the coefficient of ``s**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [ParamPoly.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def s(cls):
        return cls([0, 1])

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def monomial(cls, k, c=1):
        return cls([0] * k + [c])

    @classmethod
    def coerce(cls, x):
        if isinstance(x, SPoly):
            return x
        return cls([x])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else ZERO

    def is_zero(self):
        return not self.coeffs

    def is_numeric(self):
        return all(c.is_constant() for c in self.coeffs)

    def symbols(self):
        out = frozenset()
        for c in self.coeffs:
            out |= c.symbols()
        return out

    def __add__(self, other):
        other = _spoly_or_none(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return SPoly([self.coeff(k) + other.coeff(k) for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return SPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = _spoly_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _spoly_or_none(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _spoly_or_none(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return SPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return SPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = SPoly([1])
        for _ in range(n):
            result = result * self
        return result

    def shift_up(self, k):
        """Multiply by ``s**k``."""
        if self.is_zero():
            return self
        return SPoly([ZERO] * k + list(self.coeffs))

    def compose_linear(self, a, b):
        """Return ``p(a*s + b)`` for ParamPoly-coercible ``a`` and ``b``."""
        lin = SPoly([b, a])
        out = SPoly()
        for c in reversed(self.coeffs):
            out = out * lin + SPoly([c])
        return out

    def map_coeffs(self, fn):
        return SPoly([fn(c) for c in self.coeffs])

    def substitute(self, mapping):
        return self.map_coeffs(lambda c: c.substitute(mapping))

    def to_parampoly(self):
        """Flatten into a ParamPoly in which ``s`` is an ordinary variable."""
        terms = {}
        for k, c in enumerate(self.coeffs):
            for m, v in c._terms.items():
                mono = m if k == 0 else tuple(sorted(m + ((S_VAR, k),)))
                terms[mono] = v
        return ParamPoly._raw(terms)

    @classmethod
    def from_parampoly(cls, p):
        buckets = {}
        for m, v in p._terms.items():
            k = 0
            rest = []
            for name, e in m:
                if name == S_VAR:
                    k = e
                else:
                    rest.append((name, e))
            buckets.setdefault(k, {})[tuple(rest)] = v
        if not buckets:
            return cls()
        return cls([ParamPoly._raw(buckets.get(k, {})) for k in range(max(buckets) + 1)])

    def numeric_coeffs(self, binding):
        """Coefficients bound to numbers (Fraction in exact mode, else float)."""
        return [binding.evaluate(c) for c in self.coeffs]

    def __call__(self, x, binding=None):
        coeffs = self.numeric_coeffs(binding) if binding is not None else [
            c.constant_value() for c in self.coeffs
        ]
        acc = 0
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, SPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __str__(self):
        from .text import format_spoly

        return format_spoly(self)

    def __repr__(self):
        return f"SPoly({str(self)!r})"


def _spoly_or_none(x):
    if isinstance(x, SPoly):
        return x
    if isinstance(x, str):
        return None
    try:
        return SPoly([ParamPoly.coerce(x)])
    except TypeError:
        return None


class Binding:
    """Numeric values for parameters.

    In exact mode every value is a Fraction and evaluation stays exact; in
    approximate mode values are floats and evaluation returns floats.
    """

    def __init__(self, values=None, exact=None):
        values = dict(values or {})
        for name in values:
            if name == S_VAR:
                raise ValueError(f"cannot bind the Laplace variable '{S_VAR}'")
        if exact is None:
            exact = all(not isinstance(v, float) for v in values.values())
        if exact:
            bad = [k for k, v in values.items() if isinstance(v, float)]
            if bad:
                raise ValueError(f"exact binding cannot hold floats: {', '.join(sorted(bad))}")
            self.values = {k: as_rational(v) for k, v in values.items()}
        else:
            self.values = {k: float(v) for k, v in values.items()}
        self.exact = exact

    @classmethod
    def coerce(cls, b):
        if b is None:
            return cls({})
        if isinstance(b, Binding):
            return b
        return cls(b)

    def evaluate(self, p):
        p = ParamPoly.coerce(p)
        value = p.evaluate(self.values)
        return value if self.exact else float(value)

    def require(self, symbols):
        missing = set(symbols) - set(self.values)
        if missing:
            raise UnboundParameter(missing)

    def as_exact_mapping(self):
        """Values as ParamPoly constants (floats go through their repr)."""
        return {k: ParamPoly.const(v) for k, v in self.values.items()}

    def __repr__(self):
        mode = "exact" if self.exact else "approx"
        return f"Binding({self.values!r}, {mode})"
