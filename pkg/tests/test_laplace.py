import math
from fractions import Fraction

import numpy as np
import pytest

from lctk.algebra import TransferFunction, parse_tf, tf_arith, tf_equal, tf_eval
from lctk.errors import ConvergenceMargin, NonRationalResult
from lctk.laplace import (
    ACTUAL_INIT,
    Add,
    Const,
    Cos,
    Deriv,
    Exp,
    Integ,
    ModSin,
    Power,
    Scale,
    ShiftRight,
    Sin,
    TimeScale,
    ZERO_INIT,
    diff,
    evaluate,
    exp_order_witness,
    format_sexpr,
    laplace_exists_check,
    laplace_numeric,
    laplace_symbolic,
    parse_sexpr,
)
from lctk.laplace.symbolic import NEG_INF
from oracles import CORPUS

T = parse_tf


# -- laplace_symbolic examples --------------------------------------------------

def test_const():
    r = laplace_symbolic(Const(1))
    assert tf_equal(r.tf, T("1/s")) and r.roc == 0
    assert laplace_numeric(Const(1), 2) == pytest.approx(0.5, abs=1e-6)


def test_exp():
    r = laplace_symbolic(Exp(3))
    assert tf_equal(r.tf, T("1/(s-3)")) and r.roc == 3
    assert laplace_numeric(Exp(3), 5) == pytest.approx(0.5, abs=1e-6)


def test_zero_signal():
    r = laplace_symbolic(Const(0))
    assert r.tf.num.is_zero() and r.tf.den == T("1").den
    assert r.roc == NEG_INF


def test_deriv_zero_init():
    f = Add(Sin(2), Exp(-1))
    F = laplace_symbolic(f).tf
    got = laplace_symbolic(Deriv(2, f), ZERO_INIT).tf
    assert tf_equal(got, tf_arith("mul", T("s^2"), F))


def test_shift_right():
    r = laplace_symbolic(ShiftRight(1, Const(1)))
    assert r.tf.delay == 1
    assert tf_equal(TransferFunction(r.tf.num, r.tf.den), T("1/s"))
    assert tf_eval(r.tf, None, 1) == pytest.approx(math.exp(-1), rel=1e-12)
    assert laplace_numeric(ShiftRight(1, Const(1)), 1) == pytest.approx(0.36788, abs=1e-5)


def test_base_table():
    assert tf_equal(laplace_symbolic(Power(3)).tf, T("6/s^4"))
    assert tf_equal(laplace_symbolic(Sin(2)).tf, T("2/(s^2+4)"))
    assert tf_equal(laplace_symbolic(Cos(2)).tf, T("s/(s^2+4)"))


def test_rules():
    assert tf_equal(laplace_symbolic(parse_sexpr("(expmul -1 (sin 2))")).tf, T("2/((s+1)^2+4)"))
    assert tf_equal(laplace_symbolic(parse_sexpr("(timescale 2 (sin 1))")).tf, T("2/(s^2+4)"))
    assert tf_equal(laplace_symbolic(parse_sexpr("(modcos 3 (exp -1))")).tf,
                    T("(s+1)/((s+1)^2+9)"))
    assert tf_equal(laplace_symbolic(parse_sexpr("(modsin 2 (pow 1))")).tf,
                    T("4*s/(s^2+4)^2"))
    r = laplace_symbolic(parse_sexpr("(integ (exp 1))"))
    assert tf_equal(r.tf, T("1/(s*(s-1))")) and r.roc == 1
    assert laplace_symbolic(parse_sexpr("(integ (exp -3))")).roc == 0


def test_timescale_of_delay():
    r = laplace_symbolic(TimeScale(2, ShiftRight(1, Const(1))))
    assert r.tf.delay == Fraction(1, 2)


def test_actual_initial_values():
    # d/dt e^{-t} = -e^{-t}; transform -1/(s+1) needs the f(0) = 1 correction
    r = laplace_symbolic(Deriv(1, Exp(-1)), ACTUAL_INIT)
    assert tf_equal(r.tf, T("-1/(s+1)"))
    # second derivative of cos 2t is -4 cos 2t; f(0) = 1, f'(0) = 0
    r = laplace_symbolic(Deriv(2, Cos(2)), ACTUAL_INIT)
    assert tf_equal(r.tf, T("-4*s/(s^2+4)"))


def test_explicit_initial_values():
    node = Deriv(1, Exp(-1))
    r = laplace_symbolic(node, {node: [1]})
    assert tf_equal(r.tf, T("-1/(s+1)"))
    with pytest.raises(ValueError):
        laplace_symbolic(node, {node: [1, 2]})


def test_non_rational_results():
    with pytest.raises(NonRationalResult):
        laplace_symbolic(parse_sexpr("(modcos 1 (shift 1 (const 1)))"))
    with pytest.raises(NonRationalResult):
        laplace_symbolic(parse_sexpr("(add (shift 1 (const 1)) (const 1))"))
    with pytest.raises(NonRationalResult):
        laplace_symbolic(parse_sexpr("(expmul 1 (shift 1 (const 1)))"))


def test_node_invariants():
    with pytest.raises(ValueError):
        ShiftRight(0, Const(1))
    with pytest.raises(ValueError):
        TimeScale(-1, Const(1))
    with pytest.raises(ValueError):
        Deriv(0, Const(1))


@pytest.mark.parametrize("text", [c[0] for c in CORPUS])
def test_sexpr_round_trip(text):
    e = parse_sexpr(text)
    assert parse_sexpr(format_sexpr(e)) == e


def test_sexpr_nary_add():
    e = parse_sexpr("(add (const 1) (const 2) (const 3))")
    assert tf_equal(laplace_symbolic(e).tf, T("6/s"))


# -- laplace_numeric examples ---------------------------------------------------

def test_numeric_decaying_exponential():
    assert laplace_numeric(Exp(-1), 1, tol=1e-8) == pytest.approx(0.5, abs=1e-8)


def test_numeric_sine():
    assert laplace_numeric(Sin(2), 2) == pytest.approx(0.25, abs=1e-6)


def test_numeric_margin_error():
    with pytest.raises(ConvergenceMargin):
        laplace_numeric(Exp(2), 1)


# -- witnesses --------------------------------------------------------------------

def test_witness_examples():
    w = exp_order_witness(Exp(3))
    assert (w.M, w.a) == (1.0, 3.0)
    w = exp_order_witness(Cos(5))
    assert (w.M, w.a) == (1.0, 0.0)
    w = exp_order_witness(Add(Exp(1), Exp(2)))
    assert (w.M, w.a) == (2.0, 2.0)


def test_exists_check():
    ok, w = laplace_exists_check(Exp(2), 3 + 1j)
    assert ok and (w.M, w.a) == (1.0, 2.0)
    ok, _ = laplace_exists_check(Exp(2), 2)
    assert not ok
    ok, _ = laplace_exists_check(Const(1), 0.5)
    assert ok
    # polynomial growth: the slack shrinks until the witness fits
    ok, w = laplace_exists_check(Power(4), 0.01)
    assert ok and w.a < 0.01


@pytest.mark.parametrize("text,f,roc,jumps", CORPUS, ids=[c[0] for c in CORPUS])
def test_witness_soundness(text, f, roc, jumps):
    e = parse_sexpr(text)
    w = exp_order_witness(e)
    ts = np.linspace(0, 50, 5001)
    vals = np.abs(evaluate(e, ts))
    assert np.max(vals / w.bound(ts)) <= 1 + 1e-9
    # and the witness never asks for more than roc + slack
    assert w.a <= roc + 0.25 + 1e-12


@pytest.mark.parametrize("text,f,roc,jumps", CORPUS, ids=[c[0] for c in CORPUS])
def test_evaluator_matches_closed_form(text, f, roc, jumps):
    e = parse_sexpr(text)
    ts = np.linspace(0, 6, 301)
    ts = ts[~np.isin(ts, jumps)]
    got = evaluate(e, ts)
    ref = np.array([f(t) for t in ts])
    assert np.allclose(got, ref, rtol=1e-10, atol=1e-10)


# -- corpus against frozen quadrature oracle ------------------------------------

def test_corpus_matches_frozen_oracle(frozen):
    for entry in frozen["laplace_corpus"]:
        r = laplace_symbolic(parse_sexpr(entry["expr"]))
        assert float(r.roc) == entry["roc"], entry["expr"]
        for row in entry["samples"]:
            s = complex(*row["s"])
            ref = complex(*row["value"])
            got = tf_eval(r.tf, None, s)
            assert abs(got - ref) <= 1e-8 * (1 + abs(ref)), (entry["expr"], s)


@pytest.mark.parametrize("text,f,roc,jumps", CORPUS[:10], ids=[c[0] for c in CORPUS[:10]])
def test_numeric_matches_frozen_oracle(frozen, text, f, roc, jumps):
    entry = next(e for e in frozen["laplace_corpus"] if e["expr"] == text)
    e = parse_sexpr(text)
    for row in entry["samples"][:2]:
        s = complex(*row["s"])
        ref = complex(*row["value"])
        assert abs(laplace_numeric(e, s, tol=1e-8) - ref) <= 1e-7 * (1 + abs(ref))


# -- identities ---------------------------------------------------------------------

PAIRS = [(Sin(2), Exp(-1)), (Power(2), Cos(3)), (Exp(1), Const(4))]


@pytest.mark.parametrize("f,g", PAIRS)
def test_linearity(f, g):
    a, b = Fraction(3, 2), Fraction(-2)
    lhs = laplace_symbolic(Add(Scale(a, f), Scale(b, g))).tf
    F, G = laplace_symbolic(f).tf, laplace_symbolic(g).tf
    rhs = tf_arith("add", tf_arith("mul", TransferFunction(a), F), tf_arith("mul", TransferFunction(b), G))
    assert tf_equal(lhs, rhs)


@pytest.mark.parametrize("text", [c[0] for c in CORPUS if "shift" not in c[0]])
def test_integ_deriv_inverse(text):
    f = parse_sexpr(text)
    assert tf_equal(laplace_symbolic(Deriv(1, Integ(f))).tf, laplace_symbolic(f).tf)


@pytest.mark.parametrize("text,f,roc,jumps", CORPUS, ids=[c[0] for c in CORPUS])
def test_time_scaling(text, f, roc, jumps):
    e = parse_sexpr(text)
    for c in (Fraction(2), Fraction(1, 3)):
        scaled = laplace_symbolic(TimeScale(c, e))
        base = laplace_symbolic(e)
        s = complex(float(scaled.roc) + 1, 0.5)
        lhs = tf_eval(scaled.tf, None, s)
        rhs = tf_eval(base.tf, None, s / float(c)) / float(c)
        assert abs(lhs - rhs) <= 1e-12 * max(abs(rhs), 1e-300)


def test_modulation_matches_definition():
    # ModCos(b, f) -> (F(s - jb) + F(s + jb)) / 2 ; ModSin -> (F(s - jb) - F(s + jb)) / (2j)
    f = Power(1)
    F = laplace_symbolic(f).tf
    for b in (Fraction(1), Fraction(5, 2)):
        for s in (1 + 0.5j, 2 - 1j):
            fm = tf_eval(F, None, s - 1j * float(b))
            fp = tf_eval(F, None, s + 1j * float(b))
            c = tf_eval(laplace_symbolic(parse_sexpr(f"(modcos {b} (pow 1))")).tf, None, s)
            si = tf_eval(laplace_symbolic(ModSin(b, f)).tf, None, s)
            assert c == pytest.approx((fm + fp) / 2, rel=1e-12)
            assert si == pytest.approx((fm - fp) / 2j, rel=1e-12)


def test_diff_classical():
    e = parse_sexpr("(expmul -1 (sin 2))")
    ts = np.linspace(0.1, 3, 7)
    d = evaluate(diff(e), ts)
    ref = np.exp(-ts) * (2 * np.cos(2 * ts) - np.sin(2 * ts))
    assert np.allclose(d, ref, rtol=1e-12)
