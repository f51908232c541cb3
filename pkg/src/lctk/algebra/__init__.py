from .poly import ONE, S_VAR, ZERO, Binding, ParamPoly, Rational, SPoly, as_rational
from .serial import (
    parampoly_from_json,
    parampoly_to_json,
    spoly_from_json,
    spoly_to_json,
    tf_from_json,
    tf_to_json,
)
from .text import format_parampoly, format_spoly, format_tf, parse_parampoly, parse_spoly, parse_tf
from .transfer import TransferFunction, tf_arith, tf_equal, tf_eval, tf_feedback


def spoly_arith(kind, a, b):
    """``add``, ``sub`` or ``mul`` of two SPoly values."""
    a, b = SPoly.coerce(a), SPoly.coerce(b)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


__all__ = [
    "Binding",
    "ONE",
    "ParamPoly",
    "Rational",
    "S_VAR",
    "SPoly",
    "TransferFunction",
    "ZERO",
    "as_rational",
    "format_parampoly",
    "format_spoly",
    "format_tf",
    "parampoly_from_json",
    "parampoly_to_json",
    "parse_parampoly",
    "parse_spoly",
    "parse_tf",
    "spoly_arith",
    "spoly_from_json",
    "spoly_to_json",
    "tf_arith",
    "tf_equal",
    "tf_eval",
    "tf_feedback",
    "tf_from_json",
    "tf_to_json",
]
