import random
from fractions import Fraction

import numpy as np
import pytest

from lctk.algebra import ParamPoly, parse_tf, tf_equal, tf_eval
from lctk.circuits import (
    CompensatorType,
    Component,
    Netlist,
    classify_active_compensator,
    format_netlist,
    netlist_tf,
    opamp,
    parse_netlist,
    realize_compensator,
    realize_controller,
    resistor,
)
from lctk.errors import (
    DisconnectedGraph,
    DuplicateName,
    MissingGround,
    NetlistSyntaxError,
    NonPositiveComponent,
    SingularCircuit,
    UnsupportedCombination,
    UnsupportedComponent,
    UnsupportedTopology,
)
from lctk.lti import OdeSystem, transfer_function

T = parse_tf

RC_TEXT = """\
R r1 in a 1000
C c1 a gnd 1e-6
VIN in
VOUT a
"""


def tf_of(net):
    return netlist_tf(net)[0]


# -- parsing ------------------------------------------------------------------------

def test_parse_rc():
    net = parse_netlist(RC_TEXT)
    assert len(net.components) == 2
    assert net.input_node == "in" and net.output_node == "a"
    assert net.components[1].value == ParamPoly.const(Fraction(1, 10**6))


def test_round_trip():
    net = parse_netlist(RC_TEXT)
    assert parse_netlist(format_netlist(net)) == net
    pid = realize_controller("PID")
    assert parse_netlist(format_netlist(pid)) == pid


def test_comments_suffixes_and_aliases():
    net = parse_netlist("""\
# lowpass with an aliased ground
R r1 in out 4.7k   # series
C c1 out 0 10n
GND 0
VIN in
VOUT out
""")
    assert net.components[0].value == ParamPoly.const(4700)
    assert net.components[1].nodes == ("out", "gnd")
    assert net.components[1].value == ParamPoly.const(Fraction(1, 10**8))


@pytest.mark.parametrize(
    "text,kind",
    [
        ("R r1 in a 1000\nC c1 a gnd 1e-6\nVIN in\n", "MissingOutput"),
        ("R r1 in a 1000\nC c1 a gnd 1e-6\nVOUT a\n", "MissingInput"),
        ("R r1 in a\nVIN in\nVOUT a\n", "WrongArity"),
        ("R r1 in a 1k$\nC c1 a gnd 1\nVIN in\nVOUT a\n", "BadValue"),
        ("Q q1 in a\nVIN in\nVOUT a\n", "UnknownElement"),
        ("R r1 in a 1\nC c1 a gnd 1\nVIN in\nVIN a\nVOUT a\n", "DuplicateDirective"),
        ("R r1 in a 0\nC c1 a gnd 1\nVIN in\nVOUT a\n", "BadValue"),
    ],
)
def test_syntax_errors(text, kind):
    with pytest.raises(NetlistSyntaxError) as e:
        parse_netlist(text)
    assert e.value.kind == kind


def test_bad_value_reports_column():
    with pytest.raises(NetlistSyntaxError) as e:
        parse_netlist("R r1 in a 1k$\nC c1 a gnd 1\nVIN in\nVOUT a\n")
    assert (e.value.line, e.value.column) == (1, 11)


def test_inductor_reserved():
    with pytest.raises(UnsupportedComponent):
        parse_netlist("L l1 in a 1\nVIN in\nVOUT a\n")


def test_structural_errors():
    with pytest.raises(DuplicateName):
        parse_netlist("R r1 in a 1\nC r1 a gnd 1\nVIN in\nVOUT a\n")
    with pytest.raises(MissingGround):
        parse_netlist("R r1 in a 1\nC c1 a b 1\nVIN in\nVOUT a\n")
    with pytest.raises(DisconnectedGraph):
        parse_netlist("R r1 in a 1\nC c1 a gnd 1\nR r2 x y 1\nVIN in\nVOUT a\n")


def test_component_invariants():
    with pytest.raises(ValueError):
        resistor("R1", "a", "b", 0)
    with pytest.raises(ValueError):
        Component("OPAMP", "U1", ("a", "b"))


# -- netlist_tf -----------------------------------------------------------------------

def test_rc_lowpass_numeric():
    assert tf_equal(tf_of(parse_netlist(RC_TEXT)), T("1000/(s + 1000)"))


def test_rc_lowpass_symbolic():
    net = parse_netlist("R R in out R\nC C out gnd C\nVIN in\nVOUT out\n")
    assert tf_equal(tf_of(net), T("1/(R*C*s + 1)"))


def test_inverting_amplifier():
    net = Netlist(
        (resistor("R1", "in", "a", "R1"), resistor("R2", "a", "out", "R2"),
         opamp("U1", "gnd", "a", "out")),
        "in", "out",
    ).validate()
    assert tf_equal(tf_of(net), T("-R2/R1"))


def test_pid_formula():
    tf = tf_of(realize_controller("PID"))
    assert tf_equal(tf, T("-(R1*C1*R2*C2*s^2 + (R2*C2 + R1*C1)*s + 1)/(R1*C2*s)"))


HAND = {
    "P": "-R2/R1",
    "I": "-1/(R1*C2*s)",
    "D": "-R2*C1*s",
    "PI": "-(R2*C2*s + 1)/(R1*C2*s)",
    "PD": "-R2*(R1*C1*s + 1)/R1",
}


@pytest.mark.parametrize("kind", sorted(HAND))
def test_controller_hand_oracles(kind):
    assert tf_equal(tf_of(realize_controller(kind)), T(HAND[kind]))


def test_controller_numeric_params():
    net = realize_controller("PI", {"R1": 1000, "R2": 2000, "C2": "1/1000"})
    assert tf_equal(tf_of(net), T("-(2*s + 1)/s"))


def test_active_compensator():
    tf = tf_of(realize_compensator("lag", "active"))
    assert tf_equal(tf, T("-R2*(R1*C1*s + 1)/(R1*(R2*C2*s + 1))"))
    # lead shares the topology
    assert tf_equal(tf, tf_of(realize_compensator("lead", "active")))


def test_passive_compensators():
    lag = tf_of(realize_compensator("lag", "passive"))
    assert tf_equal(lag, T("(R2*C2*s + 1)/((R1 + R2)*C2*s + 1)"))
    lead = tf_of(realize_compensator("lead", "passive"))
    assert tf_equal(lead, T("R2*(R1*C1*s + 1)/(R1*R2*C1*s + R1 + R2)"))
    laglead = tf_of(realize_compensator("laglead", "passive"))
    ref = T("(R1*C1*s + 1)*(R2*C2*s + 1)/((R1*C1*s + 1)*(R2*C2*s + 1) + R1*C2*s)")
    assert tf_equal(laglead, ref)


def test_passive_lag_pole_below_zero():
    rng = random.Random(3)
    lag = tf_of(realize_compensator("lag", "passive"))
    for _ in range(10):
        b = {k: rng.uniform(0.1, 10) for k in ("R1", "R2", "C2")}
        num = [c.evaluate(b) for c in lag.num.coeffs][::-1]
        den = [c.evaluate(b) for c in lag.den.coeffs][::-1]
        (z,), (p,) = np.roots(num), np.roots(den)
        assert abs(p) < abs(z)


def test_compensator_errors():
    with pytest.raises(UnsupportedCombination):
        realize_compensator("laglead", "active")
    with pytest.raises(NonPositiveComponent):
        realize_compensator("lag", "active", {"R1": -1})
    with pytest.raises(NonPositiveComponent):
        realize_controller("P", {"R1": 0})
    with pytest.raises(ValueError):
        realize_controller("P", {"C9": 1})


# -- classification -------------------------------------------------------------------

def test_classify_examples():
    assert classify_active_compensator(1, 1, 1, 2) is CompensatorType.LAG
    assert classify_active_compensator(2, 1, 1, 1) is CompensatorType.LEAD
    assert classify_active_compensator(1, 1, 1, 1) is CompensatorType.UNITY
    with pytest.raises(NonPositiveComponent):
        classify_active_compensator(1, 0, 1, 1)


def test_classify_random_tuples():
    rng = random.Random(42)
    for _ in range(50):
        R1, C1, R2, C2 = (Fraction(rng.randint(1, 40), rng.randint(1, 8)) for _ in range(4))
        want = (CompensatorType.LAG if R2 * C2 > R1 * C1
                else CompensatorType.LEAD if R1 * C1 > R2 * C2 else CompensatorType.UNITY)
        assert classify_active_compensator(R1, C1, R2, C2) is want


# -- trace ------------------------------------------------------------------------------

@pytest.mark.parametrize("kind", ["P", "PI", "PID"])
def test_trace_replay(kind):
    tf, trace = netlist_tf(realize_controller(kind))
    assert tf_equal(trace.replay(), tf)
    assert trace.unknowns[-1] == "out"
    assert "V(a)" in trace.format()


def test_trace_order_deterministic():
    a = netlist_tf(realize_controller("PID"))[1]
    b = netlist_tf(realize_controller("PID"))[1]
    assert a.format() == b.format()
    assert a.unknowns == ("a", "b", "out")


# -- degenerate circuits ----------------------------------------------------------

def test_unsupported_topology():
    # the output only touches ground, never the input
    net = Netlist(
        (resistor("R1", "in", "gnd", 1), resistor("R2", "out", "gnd", 1)), "in", "out"
    ).validate()
    with pytest.raises(UnsupportedTopology):
        netlist_tf(net)


def test_singular_circuit():
    # an op-amp whose inputs are both ground leaves V(out) undetermined
    net = Netlist(
        (resistor("R1", "in", "gnd", 1), resistor("R2", "in", "out", 1),
         opamp("U1", "gnd", "gnd", "out")),
        "in", "out",
    ).validate()
    with pytest.raises(SingularCircuit):
        netlist_tf(net)


# -- invariants ---------------------------------------------------------------------

def test_pid_consistency_chain():
    behav = OdeSystem(
        [0, "R1*C2"],
        [-1, "-(R2*C2 + R1*C1)", "-R1*R2*C1*C2"],
        allow_improper=True,
    )
    assert tf_equal(tf_of(realize_controller("PID")), transfer_function(behav))


def test_ladders_match_frozen_nodal_solve(frozen):
    for entry in frozen["rc_ladders"]:
        tf = tf_of(parse_netlist(entry["netlist"]))
        ref = complex(*entry["value_at_1p1j"])
        got = tf_eval(tf, entry["binding"], 1 + 1j)
        assert abs(got - ref) <= 1e-9 * abs(ref), entry["netlist"]


def _scaled(net, k):
    parts = []
    for c in net.components:
        factor = k if c.kind == "R" else 1 / k
        parts.append(type(c)(c.kind, c.name, c.nodes, c.value * ParamPoly.const(factor)))
    return Netlist(parts, net.input_node, net.output_node).validate()


def test_scaling_covariance(frozen):
    for entry in frozen["rc_ladders"][:8]:
        text = entry["netlist"]
        for name, val in entry["binding"].items():
            text = text.replace(f" {name}\n", f" {val!r}\n")
        net = parse_netlist(text)
        base = tf_of(net)
        for k in (Fraction(7, 3), Fraction(1000)):
            assert tf_equal(tf_of(_scaled(net, k)), base)
