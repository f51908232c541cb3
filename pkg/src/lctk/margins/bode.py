"""Frequency sweeps, crossover detection and gain/phase margins."""

import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

from ..algebra.poly import Binding
from ..algebra.transfer import TransferFunction, tf_arith, tf_eval, tf_feedback
from ..errors import NoGainCrossover, NoPhaseCrossover, PoleEvaluation
from .routh import routh_stability

DEFAULT_RANGE = (1e-3, 1e3)
DEFAULT_PPD = 200
#: bisection stops when hi/lo - 1 drops below this
REFINE_RTOL = 1e-12


def default_ppd():
    env = os.environ.get("LCTK_SWEEP_PPD")
    if env:
        value = int(env)
        if value < 10:
            raise ValueError("LCTK_SWEEP_PPD must be at least 10")
        return value
    return DEFAULT_PPD


@dataclass(frozen=True)
class FreqPoint:
    w: float
    value: complex
    mag_db: float
    phase_deg: float  # unwrapped


@dataclass(frozen=True)
class Sweep:
    points: tuple
    dropped: tuple = ()          # frequencies that landed on a pole
    tf: TransferFunction = field(default=None, repr=False)
    binding: Binding = field(default=None, repr=False)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def at(self, w):
        """The point nearest to ``w`` on a log scale."""
        return min(self.points, key=lambda p: abs(math.log(p.w / w)))

    def to_csv(self):
        buf = io.StringIO()
        buf.write("w,re,im,mag_db,phase_deg\n")
        for p in self.points:
            buf.write(f"{p.w!r},{p.value.real!r},{p.value.imag!r},{p.mag_db!r},{p.phase_deg!r}\n")
        return buf.getvalue()


def _mag_db(v):
    a = abs(v)
    return 20 * math.log10(a) if a > 0 else -math.inf


def _principal_deg(v):
    # (-180, 180]
    d = math.degrees(math.atan2(v.imag, v.real))
    return 180.0 if d <= -180.0 else d


def _near(phase, ref):
    """``phase`` shifted by a multiple of 360 to lie closest to ``ref``."""
    return phase + 360.0 * round((ref - phase) / 360.0)


def frequency_grid(wmin, wmax, ppd):
    decades = math.log10(wmax) - math.log10(wmin)
    n = max(2, int(math.ceil(decades * ppd - 1e-9)) + 1)
    return np.logspace(math.log10(wmin), math.log10(wmax), n)


def bode_sweep(tf, binding=None, wmin=DEFAULT_RANGE[0], wmax=DEFAULT_RANGE[1], ppd=None):
    """Evaluate ``tf`` at ``s = jw`` on a log grid with ``ppd`` points per decade.

    Phase is unwrapped by continuation from the principal value at ``wmin``.
    Grid points on a pole are skipped and listed in ``dropped``.
    """
    tf = TransferFunction.coerce(tf)
    binding = Binding.coerce(binding)
    binding.require(tf.symbols())
    if ppd is None:
        ppd = default_ppd()
    if not 0 < wmin < wmax:
        raise ValueError("need 0 < wmin < wmax")
    if ppd < 10:
        raise ValueError("ppd must be at least 10")
    points, dropped = [], []
    ref = None
    for w in frequency_grid(wmin, wmax, ppd):
        w = float(w)
        try:
            v = tf_eval(tf, binding, 1j * w)
        except PoleEvaluation:
            dropped.append(w)
            continue
        if v == 0:
            phase = ref if ref is not None else 0.0
        else:
            phase = _principal_deg(v)
            if ref is not None:
                phase = _near(phase, ref)
        ref = phase
        points.append(FreqPoint(w, v, _mag_db(v), phase))
    return Sweep(tuple(points), tuple(dropped), tf, binding)


def _crossings(ws, values):
    """Index pairs bracketing sign changes of ``values``.

    An exact zero counts once, and only when the signs on either side of
    the zero run differ.
    """
    out = []
    n = len(values)
    i = 0
    while i < n - 1:
        a, b = values[i], values[i + 1]
        if a != 0 and b != 0:
            if (a > 0) != (b > 0):
                out.append((i, i + 1))
            i += 1
        elif a != 0 and b == 0:
            j = i + 1
            while j < n and values[j] == 0:
                j += 1
            if j < n and (a > 0) != (values[j] > 0):
                out.append((i + 1, i + 1))  # exact hit
            elif j == n:
                out.append((i + 1, i + 1))  # ends on the crossing
            i = j
        else:
            if i == 0 and a == 0:
                out.append((0, 0))
                while i < n and values[i] == 0:
                    i += 1
            else:
                i += 1
    return out


def _bisect(fn, lo, hi, flo):
    for _ in range(200):
        if hi / lo - 1 <= REFINE_RTOL:
            break
        mid = math.sqrt(lo * hi)
        fm = fn(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return math.sqrt(lo * hi)


def find_crossovers(sweep):
    """Gain crossovers (|GH| = 0 dB) and phase crossovers (phase = -180 mod 360).

    With a :class:`Sweep` carrying its transfer function each bracket is
    refined by bisection in log w; a bare point list gets log-linear
    interpolation inside the bracket.
    """
    pts = list(sweep)
    tf = getattr(sweep, "tf", None)
    binding = getattr(sweep, "binding", None)
    ws = [p.w for p in pts]

    gains = []
    mags = [p.mag_db for p in pts]
    for i, j in _crossings(ws, mags):
        if i == j:
            gains.append(ws[i])
            continue
        if tf is None:
            gains.append(_interp(ws[i], ws[j], mags[i], mags[j]))
        else:
            fn = lambda w: _mag_db(tf_eval(tf, binding, 1j * w))
            gains.append(_bisect(fn, ws[i], ws[j], mags[i]))

    phases = []
    ph = [p.phase_deg for p in pts]
    if ph and _is_odd180(ph[0]):
        phases.append(ws[0])
    for i in range(len(pts) - 1):
        a, b = ph[i], ph[i + 1]
        if a == b:
            continue
        lo, hi = min(a, b), max(a, b)
        # odd multiples of 180 strictly inside (lo, hi), then an exact hit at b
        k = math.floor((lo + 180.0) / 360.0) + 1
        while -180.0 + 360.0 * k < hi:
            t = -180.0 + 360.0 * k
            if t > lo:
                phases.append(_refine_phase(tf, binding, ws[i], ws[i + 1], a, b, t))
            k += 1
        if _is_odd180(b):
            phases.append(ws[i + 1])
    return gains, phases


def _is_odd180(x):
    return (x + 180.0) % 360.0 == 0.0


def _refine_phase(tf, binding, w0, w1, a, b, t):
    if tf is None:
        return _interp(w0, w1, a - t, b - t)

    def fn(w):
        v = tf_eval(tf, binding, 1j * w)
        return _near(_principal_deg(v), a) - t

    return _bisect(fn, w0, w1, a - t)


def _interp(w0, w1, f0, f1):
    x0, x1 = math.log(w0), math.log(w1)
    return math.exp(x0 + (x1 - x0) * f0 / (f0 - f1))


def _open_loop(g, h):
    g = TransferFunction.coerce(g)
    h = TransferFunction.coerce(h if h is not None else 1)
    return tf_arith("mul", g, h)


def _range(wrange):
    return DEFAULT_RANGE if wrange is None else (float(wrange[0]), float(wrange[1]))


def phase_margin(g, h=1, binding=None, wrange=None, ppd=None):
    """``(PM in degrees, w_gc)`` at the gain crossover with the smallest PM."""
    loop = _open_loop(g, h)
    binding = Binding.coerce(binding)
    wmin, wmax = _range(wrange)
    sweep = bode_sweep(loop, binding, wmin, wmax, ppd)
    gains, _ = find_crossovers(sweep)
    if not gains:
        raise NoGainCrossover(f"|GH| does not cross 0 dB in [{wmin:g}, {wmax:g}] rad/s")
    return min((_pm_at(loop, binding, w), w) for w in gains)


def _pm_at(loop, binding, w):
    return 180.0 + _principal_deg(tf_eval(loop, binding, 1j * w))


def gain_margin_db(g, h=1, binding=None, wrange=None, ppd=None):
    """``(20*log10|GH(j w_pc)|, w_pc)`` at the phase crossover with the largest |GH|.

    This is the magnitude at the phase crossover, negative for a stable
    loop; the conventional gain margin is its negation.
    """
    loop = _open_loop(g, h)
    binding = Binding.coerce(binding)
    wmin, wmax = _range(wrange)
    sweep = bode_sweep(loop, binding, wmin, wmax, ppd)
    _, phases = find_crossovers(sweep)
    if not phases:
        raise NoPhaseCrossover(f"phase does not reach -180 deg in [{wmin:g}, {wmax:g}] rad/s")
    return max((_mag_db(tf_eval(loop, binding, 1j * w)), w) for w in phases)


@dataclass(frozen=True)
class MarginReport:
    gain_crossovers: tuple
    phase_crossovers: tuple
    phase_margin_deg: float = None
    w_gc: float = None
    gain_margin_db: float = None
    w_pc: float = None
    stable_closed_loop: object = None   # Stability, or None when not decidable
    routh_sign_changes: int = None
    wrange: tuple = DEFAULT_RANGE
    ppd: int = DEFAULT_PPD

    @property
    def gain_margin_db_conventional(self):
        if self.gain_margin_db is None:
            return None
        return -self.gain_margin_db

    def to_json(self):
        return {
            "gain_crossovers": list(self.gain_crossovers),
            "phase_crossovers": list(self.phase_crossovers),
            "pm_deg": self.phase_margin_deg,
            "w_gc": self.w_gc,
            "gm_db": self.gain_margin_db,
            "gm_db_conventional": self.gain_margin_db_conventional,
            "w_pc": self.w_pc,
            "stable_closed_loop": None if self.stable_closed_loop is None else str(self.stable_closed_loop),
            "routh_sign_changes": self.routh_sign_changes,
            "range": list(self.wrange),
            "ppd": self.ppd,
            "selection": {"phase_margin": "min over gain crossovers", "gain_margin": "max |GH| over phase crossovers"},
        }


def margin_report(g, h=1, binding=None, wrange=None, ppd=None):
    """All crossovers of G*H, both margins where defined, and a Routh verdict
    on the closed-loop characteristic polynomial ``Dg*Dh + Ng*Nh``."""
    g = TransferFunction.coerce(g)
    h = TransferFunction.coerce(h if h is not None else 1)
    loop = _open_loop(g, h)
    binding = Binding.coerce(binding)
    wmin, wmax = _range(wrange)
    ppd = default_ppd() if ppd is None else ppd
    sweep = bode_sweep(loop, binding, wmin, wmax, ppd)
    gains, phases = find_crossovers(sweep)
    pm = wgc = gm = wpc = None
    if gains:
        pm, wgc = min((_pm_at(loop, binding, w), w) for w in gains)
    if phases:
        gm, wpc = max((_mag_db(tf_eval(loop, binding, 1j * w)), w) for w in phases)
    verdict = changes = None
    if not (g.delay or h.delay):
        closed = tf_feedback(g, h)
        r = routh_stability(closed.den, binding)
        verdict, changes = r.verdict, r.sign_changes
    return MarginReport(
        tuple(gains), tuple(phases), pm, wgc, gm, wpc, verdict, changes, (wmin, wmax), ppd
    )
