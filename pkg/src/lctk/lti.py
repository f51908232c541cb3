"""Linear time-invariant systems given by an n-order differential equation.

``sum_k alpha_k y^(k)(t) = sum_k beta_k x^(k)(t)`` with ``m <= n``.  The
transfer function assumes zero initial conditions; simulation always starts
from the zero state for the same reason.
"""

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .algebra import (
    Binding,
    ParamPoly,
    SPoly,
    TransferFunction,
    parampoly_from_json,
    parampoly_to_json,
    tf_eval,
)
from .errors import InvalidOdeSystem, SingularLeadingCoefficient, ZeroDenominatorPoly


class OdeSystem:
    """Coefficient lists of the ODE, index k multiplying the k-th derivative.

    ``alpha`` is the output side (denominator), ``beta`` the input side
    (numerator).  ``allow_improper`` admits m > n, which transfer_function
    accepts but simulation does not.
    """

    def __init__(self, alpha, beta, allow_improper=False):
        self.alpha = tuple(ParamPoly.coerce(a) for a in alpha)
        self.beta = tuple(ParamPoly.coerce(b) for b in beta)
        if not self.alpha or all(a.is_zero() for a in self.alpha):
            raise ZeroDenominatorPoly("all output-side coefficients are zero")
        if self.alpha[-1].is_zero():
            raise InvalidOdeSystem("leading output coefficient alpha_n must be nonzero")
        self.proper = len(self.beta) <= len(self.alpha)
        if not self.proper and not allow_improper:
            raise InvalidOdeSystem(
                f"input order m = {len(self.beta) - 1} exceeds output order n = {len(self.alpha) - 1}"
            )

    @property
    def order(self):
        return len(self.alpha) - 1

    def symbols(self):
        out = frozenset()
        for c in self.alpha + self.beta:
            out |= c.symbols()
        return out

    def to_json(self):
        return {
            "alpha": [parampoly_to_json(a) for a in self.alpha],
            "beta": [parampoly_to_json(b) for b in self.beta],
        }

    @classmethod
    def from_json(cls, data, allow_improper=False):
        return cls(
            [parampoly_from_json(a) for a in data["alpha"]],
            [parampoly_from_json(b) for b in data["beta"]],
            allow_improper,
        )

    def __eq__(self, other):
        if not isinstance(other, OdeSystem):
            return NotImplemented
        return self.alpha == other.alpha and self.beta == other.beta

    def __repr__(self):
        return f"OdeSystem(alpha={[str(a) for a in self.alpha]}, beta={[str(b) for b in self.beta]})"


def transfer_function(sys):
    """``(sum beta_k s^k) / (sum alpha_k s^k)``, built exactly."""
    den = SPoly(sys.alpha)
    if den.is_zero():
        raise ZeroDenominatorPoly("all output-side coefficients are zero")
    return TransferFunction(SPoly(sys.beta), den)


def frequency_response_sys(sys, binding, w):
    return tf_eval(transfer_function(sys), binding, 1j * w)


@dataclass(frozen=True)
class StateSpace:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: float

    def transfer_at(self, s):
        n = self.A.shape[0]
        if n == 0:
            return complex(self.D)
        x = np.linalg.solve(s * np.eye(n) - self.A, self.B)
        return complex((self.C @ x).item() + self.D)


def to_state_space(sys, binding):
    """Controllable canonical realisation under a numeric binding."""
    if not sys.proper:
        raise InvalidOdeSystem("an improper system (m > n) has no state-space realisation")
    binding = Binding.coerce(binding)
    alpha = [float(binding.evaluate(a)) for a in sys.alpha]
    beta = [float(binding.evaluate(b)) for b in sys.beta]
    n = len(alpha) - 1
    lead = alpha[-1]
    if lead == 0:
        raise SingularLeadingCoefficient("alpha_n evaluates to zero")
    a = [x / lead for x in alpha]
    b = [x / lead for x in beta] + [0.0] * (n + 1 - len(beta))
    D = b[n]
    A = np.zeros((n, n))
    if n:
        A[:-1, 1:] = np.eye(n - 1)
        A[-1, :] = [-a[k] for k in range(n)]
    B = np.zeros((n, 1))
    if n:
        B[-1, 0] = 1.0
    C = np.array([[b[k] - D * a[k] for k in range(n)]])
    return StateSpace(A, B, C, D)


@dataclass(frozen=True)
class TimeSeries:
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if len(self.samples) == 0:
            raise ValueError("a time series needs at least one sample")

    @property
    def t(self):
        return self.dt * np.arange(len(self.samples))

    def to_csv(self):
        buf = io.StringIO()
        buf.write("t,y\n")
        for t, y in zip(self.t, self.samples):
            buf.write(f"{float(t)!r},{float(y)!r}\n")
        return buf.getvalue()


def input_signal(signal, dt):
    """Build ``u(t)`` from a named input.

    ``signal`` is ``"step"``, ``"impulse"`` (a pulse of width dt and height
    1/dt), ``("sine", w)``, ``"zero"``, or a sequence of samples spaced dt
    apart (linearly interpolated, held after the last one).
    """
    if callable(signal):
        return signal
    if isinstance(signal, str):
        if signal == "step":
            return lambda t: 1.0
        if signal == "impulse":
            return lambda t: 1.0 / dt if t < dt else 0.0
        if signal == "zero":
            return lambda t: 0.0
        raise ValueError(f"unknown input {signal!r}")
    if isinstance(signal, tuple) and len(signal) == 2 and signal[0] == "sine":
        w = float(signal[1])
        return lambda t: math.sin(w * t)
    samples = np.asarray(signal, dtype=float)
    grid = dt * np.arange(len(samples))
    return lambda t: float(np.interp(t, grid, samples))


def simulate(sys, binding, input="step", dt=1e-3, T=10.0):
    """Output of the system from rest, by fixed-step classical RK4."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if T < dt:
        raise ValueError("T must be at least dt")
    ss = to_state_space(sys, binding)
    u = input_signal(input, dt)
    steps = int(round(T / dt))
    A, B, C, D = ss.A, ss.B[:, 0], ss.C[0], ss.D
    x = np.zeros(A.shape[0])
    out = np.empty(steps + 1)
    for i in range(steps + 1):
        t = i * dt
        u0 = u(t)
        out[i] = C @ x + D * u0
        if i == steps:
            break
        um = u(t + dt / 2)
        # left limit at the step end, so a one-step pulse keeps its full area
        u1 = u(math.nextafter(t + dt, t))
        k1 = A @ x + B * u0
        k2 = A @ (x + dt / 2 * k1) + B * um
        k3 = A @ (x + dt / 2 * k2) + B * um
        k4 = A @ (x + dt * k3) + B * u1
        x = x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return TimeSeries(dt, out)


def sampled_laplace(series, s, tail_window=1.0):
    """Laplace transform of a sampled signal.

    Simpson's rule on the uniform grid, plus the tail beyond the last sample
    modelled as ``y(T) e^{a (t-T)}`` with decay rate ``a <= 0`` estimated
    from the final ``tail_window`` seconds.
    """
    s = complex(s)
    y = np.asarray(series.samples, dtype=float)
    t = series.t
    body = simpson(y * np.exp(-s * t), x=t)
    T = t[-1]
    yT = y[-1]
    lag = min(len(y) - 1, max(1, int(round(tail_window / series.dt))))
    a = 0.0
    y_prev = y[-1 - lag]
    if yT != 0 and y_prev != 0 and np.sign(yT) == np.sign(y_prev):
        a = min(0.0, math.log(yT / y_prev) / (lag * series.dt))
    tail = yT * np.exp(-s * T) / (s - a)
    return complex(body + tail)


@dataclass(frozen=True)
class OracleSample:
    s: complex
    measured: complex
    expected: complex
    rel_error: float


@dataclass(frozen=True)
class OracleReport:
    samples: tuple
    threshold: float

    @property
    def max_error(self):
        return max(x.rel_error for x in self.samples)

    @property
    def passed(self):
        return all(x.rel_error <= self.threshold for x in self.samples)

    def to_json(self):
        return {
            "threshold": self.threshold,
            "passed": self.passed,
            "max_rel_error": self.max_error,
            "samples": [
                {
                    "s": [x.s.real, x.s.imag],
                    "measured": [x.measured.real, x.measured.imag],
                    "expected": [x.expected.real, x.expected.imag],
                    "rel_error": x.rel_error,
                }
                for x in self.samples
            ],
        }


def oracle_check_tf(sys, tf, binding, s_samples=(1, 2, 1 + 1j), dt=2e-3, T=None, threshold=1e-2):
    """Compare ``tf`` with the ratio of numeric Laplace transforms of a
    simulated step response and the step input.

    The relative error at each sample is taken against the measured ratio.
    """
    binding = Binding.coerce(binding)
    s_samples = [complex(s) for s in s_samples]
    if any(s.real <= 0 for s in s_samples):
        raise ValueError("oracle samples need Re s > 0")
    if T is None:
        T = max(20.0, 30.0 / min(s.real for s in s_samples))
    y = simulate(sys, binding, "step", dt, T)
    x = TimeSeries(dt, np.ones_like(y.samples))
    rows = []
    for s in s_samples:
        measured = sampled_laplace(y, s) / sampled_laplace(x, s)
        expected = tf_eval(tf, binding, s)
        rel = abs(measured - expected) / abs(measured) if measured else math.inf
        rows.append(OracleSample(s, measured, expected, rel))
    return OracleReport(tuple(rows), threshold)
