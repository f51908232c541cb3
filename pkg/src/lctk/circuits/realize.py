"""Built-in controller and compensator realizations.

Active circuits are one inverting op-amp stage: impedance Z_A from the input
to the virtual-ground node ``a`` and Z_B from ``a`` to the output, giving
``-Z_B/Z_A``.  Passive compensators are a divider with Z_A in series and Z_B
shunting the output to ground, giving ``Z_B/(Z_A + Z_B)``.

=========  ====================  ====================
kind       Z_A                   Z_B
=========  ====================  ====================
P          R1                    R2
I          R1                    C2
D          C1                    R2
PI         R1                    R2 + C2 (series)
PD         R1 || C1              R2
PID        R1 || C1              R2 + C2 (series)
lag/lead   R1 || C1              R2 || C2   (active)
lag        R1                    R2 + C2    (passive)
lead       R1 || C1              R2         (passive)
laglead    R1 || C1              R2 + C2    (passive)
=========  ====================  ====================
"""

import enum
from fractions import Fraction

from ..algebra.poly import ParamPoly, as_rational
from ..errors import NonPositiveComponent, UnsupportedCombination
from .netlist import GND, Netlist, capacitor, opamp, resistor

CONTROLLERS = ("P", "I", "D", "PI", "PD", "PID")
COMPENSATORS = ("lag", "lead", "laglead")
REALIZATIONS = ("active", "passive")


class CompensatorType(enum.Enum):
    LAG = "Lag"
    LEAD = "Lead"
    UNITY = "Unity"

    def __str__(self):
        return self.value


def _values(params, names):
    params = dict(params or {})
    unknown = set(params) - set(names)
    if unknown:
        raise ValueError(f"unexpected component(s): {', '.join(sorted(unknown))}")
    out = {}
    for name in names:
        v = ParamPoly.coerce(params.get(name, name))
        if v.is_constant() and not v.constant_value() > 0:
            raise NonPositiveComponent(f"{name} = {v} must be positive")
        out[name] = v
    return out


def realize_controller(kind, params=None):
    """Active op-amp netlist for a P/I/D/PI/PD/PID controller.

    Omitted parameters stay symbolic under their own names (R1, C2, ...).
    """
    kind = kind.upper()
    need = {
        "P": ("R1", "R2"),
        "I": ("R1", "C2"),
        "D": ("C1", "R2"),
        "PI": ("R1", "R2", "C2"),
        "PD": ("R1", "C1", "R2"),
        "PID": ("R1", "C1", "R2", "C2"),
    }
    if kind not in need:
        raise ValueError(f"unknown controller kind {kind!r}")
    v = _values(params, need[kind])
    parts = []
    if "R1" in v:
        parts.append(resistor("R1", "in", "a", v["R1"]))
    if "C1" in v:
        parts.append(capacitor("C1", "in", "a", v["C1"]))
    if kind in ("PI", "PID"):
        parts += [resistor("R2", "a", "b", v["R2"]), capacitor("C2", "b", "out", v["C2"])]
    else:
        if "R2" in v:
            parts.append(resistor("R2", "a", "out", v["R2"]))
        if "C2" in v:
            parts.append(capacitor("C2", "a", "out", v["C2"]))
    parts.append(opamp("U1", GND, "a", "out"))
    return Netlist(tuple(parts), "in", "out", title=f"{kind} controller").validate()


def realize_compensator(kind, realization="active", params=None):
    kind = kind.lower()
    realization = realization.lower()
    if kind not in COMPENSATORS:
        raise ValueError(f"unknown compensator kind {kind!r}")
    if realization not in REALIZATIONS:
        raise ValueError(f"unknown realization {realization!r}")
    if realization == "active":
        if kind == "laglead":
            raise UnsupportedCombination("lag-lead compensators have only a passive realization")
        v = _values(params, ("R1", "C1", "R2", "C2"))
        parts = (
            resistor("R1", "in", "a", v["R1"]),
            capacitor("C1", "in", "a", v["C1"]),
            resistor("R2", "a", "out", v["R2"]),
            capacitor("C2", "a", "out", v["C2"]),
            opamp("U1", GND, "a", "out"),
        )
    elif kind == "lag":
        v = _values(params, ("R1", "R2", "C2"))
        parts = (
            resistor("R1", "in", "out", v["R1"]),
            resistor("R2", "out", "b", v["R2"]),
            capacitor("C2", "b", GND, v["C2"]),
        )
    elif kind == "lead":
        v = _values(params, ("R1", "C1", "R2"))
        parts = (
            resistor("R1", "in", "out", v["R1"]),
            capacitor("C1", "in", "out", v["C1"]),
            resistor("R2", "out", GND, v["R2"]),
        )
    else:
        v = _values(params, ("R1", "C1", "R2", "C2"))
        parts = (
            resistor("R1", "in", "out", v["R1"]),
            capacitor("C1", "in", "out", v["C1"]),
            resistor("R2", "out", "b", v["R2"]),
            capacitor("C2", "b", GND, v["C2"]),
        )
    return Netlist(parts, "in", "out", title=f"{realization} {kind} compensator").validate()


def classify_active_compensator(R1, C1, R2, C2):
    """Lag when R2*C2 > R1*C1, Lead when R1*C1 > R2*C2, Unity otherwise."""
    vals = {}
    for name, x in (("R1", R1), ("C1", C1), ("R2", R2), ("C2", C2)):
        x = as_rational(x)
        if not x > 0:
            raise NonPositiveComponent(f"{name} = {x} must be positive")
        vals[name] = Fraction(x)
    t1 = vals["R1"] * vals["C1"]
    t2 = vals["R2"] * vals["C2"]
    if t2 > t1:
        return CompensatorType.LAG
    if t1 > t2:
        return CompensatorType.LEAD
    return CompensatorType.UNITY
