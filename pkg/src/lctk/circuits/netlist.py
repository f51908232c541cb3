"""R/C/ideal op-amp netlists and their line-oriented text format.

One element per line, ``#`` starts a comment::

    R <name> <n1> <n2> <value>
    C <name> <n1> <n2> <value>
    OPAMP <name> <n+> <n-> <nout>
    VIN <node>
    VOUT <node>
    GND <node>        # declare an extra name for the ground node

Values are decimal literals (optionally with a SPICE scale suffix such as
``1k`` or ``10u``), ``p/q`` fractions, parameter names, or any polynomial in
parameters written in the algebra text grammar.  The node ``gnd`` is ground.
"""

import re
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra.poly import ParamPoly
from ..algebra.text import format_parampoly, parse_parampoly
from ..errors import (
    DisconnectedGraph,
    DuplicateName,
    LctkError,
    MissingGround,
    NetlistSyntaxError,
    UnsupportedComponent,
)

GND = "gnd"

RESISTOR = "R"
CAPACITOR = "C"
OPAMP = "OPAMP"

_SUFFIX = {
    "f": Fraction(1, 10**15),
    "p": Fraction(1, 10**12),
    "n": Fraction(1, 10**9),
    "u": Fraction(1, 10**6),
    "m": Fraction(1, 10**3),
    "k": Fraction(10**3),
    "meg": Fraction(10**6),
    "g": Fraction(10**9),
    "t": Fraction(10**12),
}
_NUMBER = re.compile(
    r"^(?P<num>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)(?P<suffix>meg|[fpnumkgt])?$", re.I
)


@dataclass(frozen=True)
class Component:
    kind: str
    name: str
    nodes: tuple
    value: ParamPoly = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if self.kind in (RESISTOR, CAPACITOR):
            if len(self.nodes) != 2:
                raise ValueError(f"{self.name}: two-terminal element needs 2 nodes")
            if self.value is None:
                raise ValueError(f"{self.name}: missing value")
            value = ParamPoly.coerce(self.value)
            if value.is_zero():
                raise ValueError(f"{self.name}: value is zero")
            object.__setattr__(self, "value", value)
        elif self.kind == OPAMP:
            if len(self.nodes) != 3:
                raise ValueError(f"{self.name}: op-amp needs nodes (in+, in-, out)")
            if self.value is not None:
                raise ValueError(f"{self.name}: op-amp takes no value")
        else:
            raise UnsupportedComponent(f"component kind {self.kind!r}")

    @property
    def plus(self):
        return self.nodes[0]

    @property
    def minus(self):
        return self.nodes[1]

    @property
    def out(self):
        return self.nodes[2]


def resistor(name, n1, n2, value):
    return Component(RESISTOR, name, (n1, n2), value)


def capacitor(name, n1, n2, value):
    return Component(CAPACITOR, name, (n1, n2), value)


def opamp(name, plus, minus, out):
    return Component(OPAMP, name, (plus, minus, out))


@dataclass(frozen=True)
class Netlist:
    components: tuple
    input_node: str
    output_node: str
    title: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def nodes(self):
        out = set()
        for c in self.components:
            out.update(c.nodes)
        out.update((self.input_node, self.output_node))
        return out

    @property
    def opamps(self):
        return [c for c in self.components if c.kind == OPAMP]

    @property
    def passives(self):
        return [c for c in self.components if c.kind != OPAMP]

    def symbols(self):
        out = frozenset()
        for c in self.passives:
            out |= c.value.symbols()
        return out

    def validate(self):
        """Check structural invariants; raises on the first violation."""
        seen = set()
        for c in self.components:
            if c.name in seen:
                raise DuplicateName(f"component name {c.name!r} used twice")
            seen.add(c.name)
        if self.input_node == self.output_node:
            raise NetlistSyntaxError("SameInputOutput", "VIN and VOUT name the same node")
        if GND in (self.input_node, self.output_node):
            raise NetlistSyntaxError("GroundTerminal", "VIN/VOUT cannot be the ground node")
        touched = set()
        for c in self.components:
            touched.update(c.nodes)
        if GND not in touched:
            raise MissingGround("no component connects to ground")
        outs = [o.out for o in self.opamps]
        for o in self.opamps:
            if o.out in (GND, self.input_node):
                raise NetlistSyntaxError(
                    "DrivenNode", f"op-amp {o.name} output is tied to a driven node"
                )
            if outs.count(o.out) > 1:
                raise NetlistSyntaxError("DrivenNode", f"two op-amps drive node {o.out!r}")
            loads = [c for c in self.passives if o.out in c.nodes]
            if not loads and o.out != self.output_node:
                raise NetlistSyntaxError(
                    "DanglingOutput", f"op-amp {o.name} output {o.out!r} drives nothing"
                )
        _check_connected(self)
        return self


def _check_connected(net):
    adj = defaultdict(set)
    for c in net.components:
        for a in c.nodes:
            adj[a].update(c.nodes)
    nodes = net.nodes
    start = GND
    seen = {start}
    stack = [start]
    while stack:
        n = stack.pop()
        for m in adj[n]:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    missing = nodes - seen
    if missing:
        raise DisconnectedGraph(f"nodes not connected to ground: {', '.join(sorted(missing))}")


def parse_value(text):
    text = text.strip()
    m = _NUMBER.match(text)
    if m:
        value = Fraction(m.group("num"))
        suffix = m.group("suffix")
        if suffix:
            value *= _SUFFIX[suffix.lower()]
        return ParamPoly.const(value)
    return parse_parampoly(text)


def parse_netlist(text):
    components = []
    vin = vout = None
    aliases = set()
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        column = len(line) - len(line.lstrip()) + 1
        head = line.split(None, 1)[0]
        key = head.upper()
        try:
            if key in ("R", "C"):
                parts = line.split(None, 4)
                if len(parts) != 5:
                    raise NetlistSyntaxError(
                        "WrongArity", f"{key} needs <name> <n1> <n2> <value>", lineno, column
                    )
                _, name, n1, n2, value_text = parts
                try:
                    value = parse_value(value_text)
                except LctkError as exc:
                    vcol = raw.find(value_text) + 1
                    raise NetlistSyntaxError("BadValue", str(exc), lineno, vcol) from None
                if value.is_zero():
                    raise NetlistSyntaxError("BadValue", f"{name} has zero value", lineno, column)
                components.append(Component(key, name, (n1, n2), value))
            elif key == "OPAMP":
                parts = line.split()
                if len(parts) != 5:
                    raise NetlistSyntaxError(
                        "WrongArity", "OPAMP needs <name> <n+> <n-> <nout>", lineno, column
                    )
                components.append(opamp(*parts[1:]))
            elif key in ("VIN", "VOUT", "GND"):
                parts = line.split()
                if len(parts) != 2:
                    raise NetlistSyntaxError("WrongArity", f"{key} needs one node", lineno, column)
                if key == "GND":
                    aliases.add(parts[1])
                elif key == "VIN":
                    if vin is not None:
                        raise NetlistSyntaxError("DuplicateDirective", "second VIN", lineno, column)
                    vin = parts[1]
                else:
                    if vout is not None:
                        raise NetlistSyntaxError("DuplicateDirective", "second VOUT", lineno, column)
                    vout = parts[1]
            elif key == "L":
                raise UnsupportedComponent(f"inductors are not supported (line {lineno})")
            else:
                raise NetlistSyntaxError("UnknownElement", f"unknown element {head!r}", lineno, column)
        except ValueError as exc:
            raise NetlistSyntaxError("BadElement", str(exc), lineno, column) from None
    if vin is None:
        raise NetlistSyntaxError("MissingInput", "no VIN line")
    if vout is None:
        raise NetlistSyntaxError("MissingOutput", "no VOUT line")

    def canon(n):
        return GND if n in aliases else n

    components = [
        Component(c.kind, c.name, tuple(canon(n) for n in c.nodes), c.value) for c in components
    ]
    net = Netlist(tuple(components), canon(vin), canon(vout))
    return net.validate()


def format_value(p):
    return format_parampoly(p)


def format_netlist(net):
    lines = []
    for c in net.components:
        if c.kind == OPAMP:
            lines.append(f"OPAMP {c.name} {c.plus} {c.minus} {c.out}")
        else:
            lines.append(f"{c.kind} {c.name} {c.nodes[0]} {c.nodes[1]} {format_value(c.value)}")
    lines.append(f"VIN {net.input_node}")
    lines.append(f"VOUT {net.output_node}")
    return "\n".join(lines) + "\n"
