import math
from fractions import Fraction

import numpy as np
import pytest

from lctk.algebra import parse_tf, tf_eval
from lctk.errors import NoGainCrossover, NoPhaseCrossover, UnboundParameter, ZeroLeadingCoefficient
from lctk.margins import (
    Stability,
    bode_sweep,
    default_ppd,
    find_crossovers,
    gain_margin_db,
    margin_report,
    phase_margin,
    routh_stability,
)

T = parse_tf
NARROW = (0.01, 100)


# -- sweeps ------------------------------------------------------------------------

def test_first_order_magnitude(frozen):
    sw = bode_sweep(T("1/(s+1)"), None, 0.01, 100)
    p = sw.at(1.0)
    assert p.w == pytest.approx(1.0, rel=1e-12)
    assert p.mag_db == pytest.approx(frozen["margins"]["first_order_mag_db_at_1"], abs=1e-9)
    assert p.mag_db == pytest.approx(-3.0103, abs=1e-3)


def test_integrator_phase_constant():
    sw = bode_sweep(T("1/s"), None, 0.01, 100, ppd=50)
    assert all(abs(p.phase_deg + 90) <= 1e-9 for p in sw)


def test_third_order_phase_at_root2():
    tf = T("1/(s*(s+1)*(s+2))")
    sw = bode_sweep(tf, None, math.sqrt(2) / 10, math.sqrt(2) * 10, ppd=50)
    assert sw.at(math.sqrt(2)).phase_deg == pytest.approx(-180.0, abs=0.01)


def test_phase_unwrapped_past_minus_180():
    sw = bode_sweep(T("1/(s+1)^4"), None, 0.01, 100)
    assert sw[-1].phase_deg == pytest.approx(-360 + 4 * math.degrees(math.atan(1 / 100)), abs=1e-6)
    steps = np.diff([p.phase_deg for p in sw])
    assert np.max(np.abs(steps)) < 5


def test_points_on_poles_dropped():
    sw = bode_sweep(T("1/(s^2+1)"), None, 0.1, 10, ppd=10)
    assert sw.dropped == (1.0,)
    assert all(p.w != 1.0 for p in sw)


def test_sweep_requires_binding():
    with pytest.raises(UnboundParameter):
        bode_sweep(T("K/(s+1)"))
    sw = bode_sweep(T("K/(s+1)"), {"K": 10}, 0.01, 100, ppd=10)
    assert sw[0].mag_db == pytest.approx(20, abs=1e-3)


def test_csv_header():
    text = bode_sweep(T("1/(s+1)"), None, 1, 10, ppd=10).to_csv()
    lines = text.splitlines()
    assert lines[0] == "w,re,im,mag_db,phase_deg"
    assert len(lines) == 12
    assert float(lines[1].split(",")[0]) == 1.0


def test_ppd_from_environment(monkeypatch):
    monkeypatch.setenv("LCTK_SWEEP_PPD", "20")
    assert default_ppd() == 20
    assert len(bode_sweep(T("1/(s+1)"), None, 1, 100)) == 41
    monkeypatch.setenv("LCTK_SWEEP_PPD", "3")
    with pytest.raises(ValueError):
        default_ppd()
    monkeypatch.delenv("LCTK_SWEEP_PPD")
    assert default_ppd() == 200


@pytest.mark.parametrize("w", [0.05, 0.7, 3.0, 40.0])
def test_sweep_conjugate_symmetry(w):
    tf = T("(s + 3)/(s^3 + 2*s^2 + 5*s + 1)")
    a, b = tf_eval(tf, None, 1j * w), tf_eval(tf, None, -1j * w)
    assert 20 * math.log10(abs(a)) == pytest.approx(20 * math.log10(abs(b)), abs=1e-12)


# -- crossovers and margins -------------------------------------------------------

def test_gain_crossover(frozen):
    gains, phases = find_crossovers(bode_sweep(T("1/(s*(s+1))"), None, *NARROW))
    assert len(gains) == 1 and phases == []
    assert gains[0] == pytest.approx(frozen["margins"]["integrator_lag_wgc"], rel=1e-9)


def test_phase_crossover(frozen):
    _, phases = find_crossovers(bode_sweep(T("1/(s*(s+1)*(s+2))"), None, *NARROW))
    assert phases == [pytest.approx(frozen["margins"]["third_order_wpc"], rel=1e-9)]


def test_no_phase_crossover():
    assert find_crossovers(bode_sweep(T("1/(s+1)"), None, *NARROW))[1] == []


def test_phase_margin_examples(frozen):
    pm, w = phase_margin(T("1/(s*(s+1))"))
    assert pm == pytest.approx(frozen["margins"]["integrator_lag_pm_deg"], abs=1e-6)
    assert pm == pytest.approx(51.83, abs=0.1) and w == pytest.approx(0.78615, abs=1e-3)
    pm, w = phase_margin(T("1/s"))
    assert pm == pytest.approx(90.0, abs=0.01) and w == pytest.approx(1.0, rel=1e-9)
    with pytest.raises(NoGainCrossover):
        phase_margin(T("1/(s+1)"), wrange=NARROW)


def test_gain_margin_examples(frozen):
    gm, w = gain_margin_db(T("1/(s*(s+1)*(s+2))"))
    assert gm == pytest.approx(frozen["margins"]["third_order_gm_db"], abs=1e-6)
    assert w == pytest.approx(1.41421, abs=1e-3)
    gm, _ = gain_margin_db(T("6/(s*(s+1)*(s+2))"))
    assert gm == pytest.approx(0.0, abs=0.01)
    with pytest.raises(NoPhaseCrossover):
        gain_margin_db(T("1/(s+1)"))


def test_feedback_path_used():
    # G*H with H = 2 doubles the loop gain
    gm1, _ = gain_margin_db(T("1/(s*(s+1)*(s+2))"), T("2"))
    assert gm1 == pytest.approx(20 * math.log10(2 / 6), abs=1e-6)


def test_report_json():
    rep = margin_report(T("1/(s*(s+1)*(s+2))"))
    d = rep.to_json()
    assert d["gm_db_conventional"] == -d["gm_db"]
    assert d["gm_db_conventional"] == pytest.approx(15.563, abs=0.01)
    assert d["stable_closed_loop"] == "Stable"
    assert d["routh_sign_changes"] == 0
    assert d["range"] == [1e-3, 1e3] and d["ppd"] == 200


def test_report_unstable_loop():
    rep = margin_report(T("10/(s*(s+1)*(s+2))"))
    assert rep.gain_margin_db > 0
    assert rep.stable_closed_loop is Stability.UNSTABLE
    assert rep.routh_sign_changes == 2


def test_multiple_crossovers_worst_case():
    # a lightly damped resonance pushes |G| back above 0 dB
    g = T("0.2/(s*(s^2 + 0.1*s + 1))")
    rep = margin_report(g)
    assert len(rep.gain_crossovers) == 3
    pms = [180 + math.degrees(np.angle(tf_eval(g, None, 1j * w))) for w in rep.gain_crossovers]
    assert rep.phase_margin_deg == pytest.approx(min(pms), abs=1e-9)


def test_crossover_invariants():
    cases = [
        "1/(s*(s+1))",
        "1/(s*(s+1)*(s+2))",
        "5*(s+3)/(s*(s+1)*(s^2+s+4))",
        "40/((s+1)*(s+2)*(s+5))",
    ]
    for text in cases:
        tf = T(text)
        gains, phases = find_crossovers(bode_sweep(tf))
        for w in gains:
            assert abs(abs(tf_eval(tf, None, 1j * w)) - 1) <= 1e-6
        for w in phases:
            ph = math.degrees(np.angle(tf_eval(tf, None, 1j * w)))
            assert abs(abs(ph) - 180) <= 1e-4


# -- Routh --------------------------------------------------------------------------

def test_routh_examples():
    assert routh_stability([1, 1, 1]).verdict is Stability.STABLE
    r = routh_stability([-1, 0, 0, 1])
    assert r.verdict is Stability.UNSTABLE and r.sign_changes == 1
    r = routh_stability([1, 0, 1])
    assert r.verdict is Stability.MARGINAL and r.zero_row


def test_routh_degenerate_cases():
    # s^3 + s^2 + s + 1 = (s+1)(s^2+1)
    assert routh_stability([1, 1, 1, 1]).verdict is Stability.MARGINAL
    # zero pivot: s^4 + s^3 + 2s^2 + 2s + 3 has two RHP roots
    r = routh_stability([3, 2, 2, 1, 1])
    assert r.zero_pivot and r.sign_changes == 2 and r.verdict is Stability.UNSTABLE
    # root at the origin
    r = routh_stability([0, 1, 1])
    assert r.verdict is Stability.MARGINAL and r.origin_roots == 1
    # repeated imaginary roots (s^2+1)^2
    assert routh_stability([1, 0, 2, 0, 1]).verdict is not Stability.STABLE


def test_routh_spoly_and_binding():
    tf = T("1/(s^2 + K*s + 1)")
    assert routh_stability(tf.den, {"K": 2}).verdict is Stability.STABLE
    assert routh_stability(tf.den, {"K": -2}).verdict is Stability.UNSTABLE
    with pytest.raises(UnboundParameter):
        routh_stability(tf.den)


def test_routh_zero_leading():
    with pytest.raises(ZeroLeadingCoefficient):
        routh_stability([1, 2, 0])


@pytest.mark.parametrize("k", [Fraction(1, 7), 3, 1000.5])
def test_routh_scale_invariance(frozen, k):
    for case in frozen["routh_cases"][:30]:
        a = routh_stability(case["coeffs"])
        b = routh_stability([k * c for c in case["coeffs"]])
        assert (a.verdict, a.sign_changes) == (b.verdict, b.sign_changes)


def test_routh_matches_root_oracle(frozen):
    for case in frozen["routh_cases"]:
        r = routh_stability(case["coeffs"])
        assert r.sign_changes == case["rhp"], case
        want = Stability.STABLE if case["rhp"] == 0 else Stability.UNSTABLE
        assert r.verdict is want, case
