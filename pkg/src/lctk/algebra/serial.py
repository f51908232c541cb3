"""JSON encoding of polynomials and transfer functions.

A coefficient is a list of ``{"coef": "p/q", "mono": {"K1": 1}}`` terms;
an SPoly is a list of coefficients indexed by power of ``s``.
"""

from fractions import Fraction

from .poly import ParamPoly, SPoly, as_rational
from .transfer import TransferFunction


def parampoly_to_json(p):
    return [{"coef": str(c), "mono": dict(m)} for m, c in p.sorted_terms()]


def parampoly_from_json(data):
    """Accepts the term-list form, a bare number, or an algebra-text string."""
    if isinstance(data, list):
        terms = {}
        for term in data:
            mono = tuple(sorted((str(k), int(v)) for k, v in term.get("mono", {}).items()))
            c = as_rational(term["coef"])
            terms[mono] = terms.get(mono, 0) + c
        return ParamPoly(terms)
    if isinstance(data, str):
        from .text import parse_parampoly

        return parse_parampoly(data)
    return ParamPoly.const(data)


def spoly_to_json(p):
    return [parampoly_to_json(c) for c in p.coeffs]


def spoly_from_json(data):
    return SPoly([parampoly_from_json(c) for c in data])


def _delay_out(d):
    return float(d)


def _delay_in(d):
    if isinstance(d, str):
        return as_rational(d)
    if isinstance(d, float):
        # keep exact decimal meaning for values written as e.g. 0.5
        return as_rational(d)
    return Fraction(d)


def tf_to_json(tf):
    return {
        "num": spoly_to_json(tf.num),
        "den": spoly_to_json(tf.den),
        "delay": _delay_out(tf.delay),
    }


def tf_from_json(data):
    return TransferFunction(
        spoly_from_json(data["num"]),
        spoly_from_json(data["den"]),
        _delay_in(data.get("delay", 0)),
    )
