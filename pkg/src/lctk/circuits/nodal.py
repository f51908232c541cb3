"""Symbolic nodal analysis with ideal op-amps (nullor model).

Unknowns are the voltages of every node other than ground and the input,
which is driven at 1.  Each remaining node contributes a KCL row, except
op-amp outputs, whose current is unconstrained; each op-amp contributes the
virtual-short row ``V(in+) - V(in-) = 0`` instead.

Rows are scaled by the product of the symbolic resistances they touch so
that every entry is a polynomial in ``s`` and the parameters.  Elimination
is fraction-free (Bareiss) on the augmented matrix with the output voltage
ordered last, so the final pivot row reads ``det(A) * V(out) = det(A_b)``.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from ..algebra.poly import S_VAR, ParamPoly, SPoly
from ..algebra.text import format_parampoly
from ..algebra.transfer import TransferFunction
from ..errors import SingularCircuit, UnsupportedTopology
from .netlist import GND, RESISTOR

_S = ParamPoly._raw({((S_VAR, 1),): Fraction(1)})


@dataclass(frozen=True)
class DerivationTrace:
    unknowns: tuple       # node names, column order
    equations: tuple      # textual KCL sums and op-amp constraints
    matrix: tuple         # augmented rows of ParamPoly (s as a variable)
    steps: tuple          # human-readable elimination log
    swaps: tuple          # (step, row_a, row_b)

    def replay(self):
        """Re-run the recorded elimination; returns the resulting TF."""
        tf, _, swaps = _solve(self.matrix)
        if tuple(swaps) != self.swaps:
            raise AssertionError("replayed elimination took different pivots")
        return tf

    def format(self):
        lines = ["unknowns: " + ", ".join(f"V({n})" for n in self.unknowns), "equations:"]
        lines += ["  " + e for e in self.equations]
        lines.append("elimination:")
        lines += ["  " + st for st in self.steps]
        return "\n".join(lines)

    def __str__(self):
        return self.format()


def _ordered_nodes(net):
    rest = sorted(n for n in net.nodes if n not in (GND, net.input_node, net.output_node))
    return rest + [net.output_node]


def _check_path(net):
    # output must be reachable from the input without going through ground
    adj = {}
    for c in net.components:
        for a in c.nodes:
            adj.setdefault(a, set()).update(n for n in c.nodes if n != GND)
    seen = {net.input_node}
    stack = [net.input_node]
    while stack:
        for m in adj.get(stack.pop(), ()):
            if m not in seen:
                seen.add(m)
                stack.append(m)
    if net.output_node not in seen:
        raise UnsupportedTopology("no path from the input node to the output node")


def _admittance_text(c):
    v = format_parampoly(c.value)
    if len(c.value) > 1:
        v = f"({v})"
    return f"/{v}" if c.kind == RESISTOR else f"{v}*s*"


def assemble(net):
    """Build the augmented polynomial system; returns (unknowns, rows, text)."""
    net.validate()
    _check_path(net)
    unknowns = _ordered_nodes(net)
    col = {n: i for i, n in enumerate(unknowns)}
    ncols = len(unknowns) + 1
    driven = {o.out for o in net.opamps}
    rows, text = [], []

    def stamp(row, node, coef):
        # V(node) * coef on the left; the input voltage (1) moves to the rhs
        if node == GND:
            return
        if node == net.input_node:
            row[-1] = row[-1] - coef
        else:
            row[col[node]] = row[col[node]] + coef

    for node in unknowns:
        if node in driven:
            continue
        attached = [c for c in net.passives if node in c.nodes]
        scale = ParamPoly.const(1)
        seen = []
        for c in attached:
            if c.kind == RESISTOR and not c.value.is_constant() and c.value not in seen:
                seen.append(c.value)
                scale = scale * c.value
        row = [ParamPoly.const(0)] * ncols
        parts = []
        for c in attached:
            other = c.nodes[1] if c.nodes[0] == node else c.nodes[0]
            if other == node:
                continue
            if c.kind == RESISTOR:
                y = scale.exact_div(c.value)
                parts.append(f"(V({node}) - V({other})){_admittance_text(c)}")
            else:
                y = scale * c.value * _S
                parts.append(f"{_admittance_text(c)}(V({node}) - V({other}))")
            stamp(row, node, y)
            stamp(row, other, -y)
        rows.append(row)
        text.append(f"KCL {node}: " + (" + ".join(parts) or "0") + " = 0")
    for o in net.opamps:
        row = [ParamPoly.const(0)] * ncols
        stamp(row, o.plus, ParamPoly.const(1))
        stamp(row, o.minus, ParamPoly.const(-1))
        rows.append(row)
        text.append(f"{o.name}: V({o.plus}) - V({o.minus}) = 0")
    if len(rows) != len(unknowns):
        raise SingularCircuit(f"{len(rows)} equations for {len(unknowns)} unknowns")
    return unknowns, rows, text


def _solve(matrix):
    m = [list(r) for r in matrix]
    n = len(m)
    steps, swaps = [], []
    prev = ParamPoly.const(1)
    for k in range(n):
        if m[k][k].is_zero():
            r = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if r is None:
                raise SingularCircuit(f"nodal system is singular (column {k})")
            m[k], m[r] = m[r], m[k]
            swaps.append((k, k, r))
            steps.append(f"swap rows {k} and {r}")
        pivot = m[k][k]
        steps.append(f"pivot {k}: {format_parampoly(pivot)}")
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]).exact_div(prev)
            m[i][k] = ParamPoly.const(0)
        prev = pivot
    num = SPoly.from_parampoly(m[n - 1][n])
    den = SPoly.from_parampoly(m[n - 1][n - 1])
    steps.append(f"V(out) = ({format_parampoly(m[n - 1][n])}) / ({format_parampoly(m[n - 1][n - 1])})")
    return _tidy(num, den), steps, swaps


def _tidy(num, den):
    """Strip monomial and numeric content shared by num and den; den leads positive."""
    terms = []
    polys = [num.to_parampoly(), den.to_parampoly()]
    for p in polys:
        terms.extend(p.terms.items())
    common = None
    for mono, _ in terms:
        d = dict(mono)
        common = d if common is None else {v: min(e, d[v]) for v, e in common.items() if v in d}
    mult = 1
    for _, c in terms:
        mult = lcm(mult, c.denominator)
    g = 0
    for _, c in terms:
        g = gcd(g, int(c * mult))
    factor = Fraction(mult, g or 1)
    lead = den.leading.sorted_terms()[0][1]
    if lead < 0:
        factor = -factor
    divisor = ParamPoly._raw({tuple(sorted((v, e) for v, e in (common or {}).items() if e)): Fraction(1)})
    out = [SPoly.from_parampoly(p.exact_div(divisor).scale(factor)) for p in polys]
    return TransferFunction(out[0], out[1])


def netlist_tf(net):
    """``V(out)/V(in)`` of the netlist and the derivation trace."""
    unknowns, rows, text = assemble(net)
    tf, steps, swaps = _solve(rows)
    trace = DerivationTrace(
        tuple(unknowns),
        tuple(text),
        tuple(tuple(r) for r in rows),
        tuple(steps),
        tuple(swaps),
    )
    return tf, trace
