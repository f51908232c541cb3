from .netlist import (
    CAPACITOR,
    GND,
    OPAMP,
    RESISTOR,
    Component,
    Netlist,
    capacitor,
    format_netlist,
    opamp,
    parse_netlist,
    parse_value,
    resistor,
)
from .nodal import DerivationTrace, assemble, netlist_tf
from .realize import (
    COMPENSATORS,
    CONTROLLERS,
    CompensatorType,
    classify_active_compensator,
    realize_compensator,
    realize_controller,
)

__all__ = [
    "CAPACITOR",
    "COMPENSATORS",
    "CONTROLLERS",
    "CompensatorType",
    "Component",
    "DerivationTrace",
    "GND",
    "Netlist",
    "OPAMP",
    "RESISTOR",
    "assemble",
    "capacitor",
    "classify_active_compensator",
    "format_netlist",
    "netlist_tf",
    "opamp",
    "parse_netlist",
    "parse_value",
    "realize_compensator",
    "realize_controller",
    "resistor",
]
