"""Pitch control of an unmanned free-swimming submersible (UFSS).

The closed pitch loop is a fourth-order ODE in the pitch angle driven by the
commanded pitch, with pitch gain K1 and pitch-rate sensor gain K2::

    theta'''' + 3.456 theta''' + (0.25 K2 + 3.207) theta''
      + (0.25 K1 + 0.1088 K2 + 0.6106) theta' + (0.1088 K1 + 0.0416) theta
      = 0.25 K1 cmd' + 0.1088 K1 cmd

All coefficients are exact decimals.
"""

from dataclasses import dataclass

from .algebra import ParamPoly, SPoly, TransferFunction, as_rational
from .lti import OdeSystem

K1_NAME = "K1"
K2_NAME = "K2"


def _dec(text):
    return ParamPoly.const(as_rational(text))


@dataclass(frozen=True)
class UfssParams:
    """Gains; each is a number (kept exact) or the symbol of the same name."""

    K1: object = K1_NAME
    K2: object = K2_NAME

    def __post_init__(self):
        for name in (K1_NAME, K2_NAME):
            v = getattr(self, name)
            if isinstance(v, str) and v.strip().isidentifier():
                if v.strip() != name:
                    raise ValueError(f"symbolic {name} must be named {name!r}")
                p = ParamPoly.symbol(name)
            else:
                if isinstance(v, float) and not (v == v and abs(v) != float("inf")):
                    raise ValueError(f"{name} must be finite")
                p = ParamPoly.const(as_rational(v))
            object.__setattr__(self, name, p)


def _gains(p):
    if p is None:
        p = UfssParams()
    return p.K1, p.K2


def ufss_pitch_ode(p=None):
    K1, K2 = _gains(p)
    alpha = [
        K1.scale(as_rational("0.1088")) + _dec("0.0416"),
        K1.scale(as_rational("0.25")) + K2.scale(as_rational("0.1088")) + _dec("0.6106"),
        K2.scale(as_rational("0.25")) + _dec("3.207"),
        _dec("3.456"),
        _dec("1"),
    ]
    beta = [K1.scale(as_rational("0.1088")), K1.scale(as_rational("0.25"))]
    return OdeSystem(alpha, beta)


def ufss_pitch_tf(p=None):
    """The pitch transfer function written out directly (not via the ODE)."""
    K1, K2 = _gains(p)
    num = SPoly([K1 * _dec("0.1088"), K1 * _dec("0.25")])
    den = SPoly(
        [
            K1 * _dec("0.1088") + _dec("0.0416"),
            K1 * _dec("0.25") + K2 * _dec("0.1088") + _dec("0.6106"),
            K2 * _dec("0.25") + _dec("3.207"),
            _dec("3.456"),
            _dec("1"),
        ]
    )
    return TransferFunction(num, den)
