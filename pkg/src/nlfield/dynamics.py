"""Non-autonomous evolution of the nonlocal field equation.

The state obeys

    du/dt = -u + g(beta (J * u) + beta h(t, u)),

integrated in mild form: the linear decay is applied exactly through
exp(-delta) while the nonlinear term G(s) = g(beta (J*u)(s) + beta h(s, u(s)))
is integrated by the exponential trapezoidal rule

    u(t+delta) = exp(-delta) u(t) + w1 G(t) + w2 G~(t+delta),

with weights w1 = delta (phi1 - phi2), w2 = delta phi2 evaluated at
-delta, and G~ evaluated at the exponential-Euler predictor
exp(-delta) u + delta phi1 G(t).  The weights sum to 1 - exp(-delta), so
a constant G is integrated exactly and the scheme is second order in
delta.  Pure decay (g = 0) is exact to rounding.

evolve_split integrates the same recursion with the state divided into
v(t) = exp(-(t-tau)) u_tau (pure decay of the initial data) and the
remainder w with w(tau) = 0, which is the decomposition the compactness
diagnostics measure.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import BlowUpError, GridMismatchError, TimeOrderError
from .kernel import Kernel
from .weighted_space import Grid1D, WeightedField, WeightFunction

# max |d^2/ds^2 tanh(s)| = max |d/ds tanh(s)^2| = 4 / (3 sqrt(3)), at tanh = 1/sqrt(3)
K1_TANH = 4.0 / (3.0 * math.sqrt(3.0))

NONLINEARITY_FAMILIES = ("tanh", "zero", "constant")
FIELD_FAMILIES = ("zero", "pulsed")


@dataclass(frozen=True)
class Nonlinearity:
    """Saturating response g with its certified constants.

    sup_abs       a  = sup |g|
    lipschitz     l_g, global Lipschitz constant
    curvature_max k1 = max |g''|
    deriv_at_zero k2 = |g'(0)|
    """

    name: str
    sup_abs: float
    lipschitz: float
    curvature_max: float
    deriv_at_zero: float
    value: float = 0.0  # constant stub only

    def __post_init__(self):
        if self.name not in NONLINEARITY_FAMILIES:
            raise ValueError(f"unknown nonlinearity {self.name!r}")

    @classmethod
    def tanh(cls) -> "Nonlinearity":
        return cls("tanh", sup_abs=1.0, lipschitz=1.0, curvature_max=K1_TANH, deriv_at_zero=1.0)

    @classmethod
    def zero(cls) -> "Nonlinearity":
        return cls("zero", sup_abs=0.0, lipschitz=0.0, curvature_max=0.0, deriv_at_zero=0.0)

    @classmethod
    def constant(cls, value: float) -> "Nonlinearity":
        """Integrator test stub g == value.  Violates g(0) = 0 on purpose;
        check_axioms rejects it and the config surface never builds it."""
        return cls("constant", sup_abs=abs(value), lipschitz=0.0, curvature_max=0.0,
                   deriv_at_zero=0.0, value=value)

    def __call__(self, s):
        if self.name == "tanh":
            return np.tanh(s)
        if self.name == "zero":
            return np.zeros_like(np.asarray(s, dtype=float))
        return np.full_like(np.asarray(s, dtype=float), self.value)

    def deriv(self, s):
        if self.name == "tanh":
            c = np.cosh(s)
            return 1.0 / (c * c)
        return np.zeros_like(np.asarray(s, dtype=float))

    def check_axioms(self, rng: np.random.Generator, n_samples: int = 512,
                     span: float = 6.0) -> None:
        """Sampled verification of the certified constants; raises on failure."""
        if abs(float(self(0.0))) > 0.0:
            raise ValueError(f"{self.name}: g(0) must vanish")
        s = rng.uniform(-span, span, n_samples)
        if np.max(np.abs(self(s))) > self.sup_abs + 1e-12:
            raise ValueError(f"{self.name}: |g| exceeds sup_abs")
        t = rng.uniform(-span, span, n_samples)
        gap = np.abs(self(s) - self(t))
        if np.any(gap > self.lipschitz * np.abs(s - t) + 1e-12):
            raise ValueError(f"{self.name}: Lipschitz constant violated on samples")
        if abs(float(self.deriv(0.0))) > self.deriv_at_zero + 1e-12:
            raise ValueError(f"{self.name}: |g'(0)| exceeds deriv_at_zero")
        # centered second difference against the curvature cap
        eps = 1e-4
        g2 = (self(s + eps) - 2.0 * self(s) + self(s - eps)) / eps**2
        if np.max(np.abs(g2)) > self.curvature_max + 1e-6:
            raise ValueError(f"{self.name}: |g''| exceeds curvature_max on samples")


@dataclass(frozen=True)
class ExternalField:
    """Time-dependent forcing h(t, s) applied inside the nonlinearity.

    zero     h = 0
    pulsed   h(t, s) = amplitude * (1 + sin(omega t))/2 * tanh(s)^2

    The pulsed family has h(t, 0) = 0, sup h = amplitude (approached, not
    attained) and s-Lipschitz constant amplitude * 4/(3 sqrt(3)).
    """

    family: str = "zero"
    amplitude: float = 0.0
    omega: float = 1.0

    def __post_init__(self):
        if self.family not in FIELD_FAMILIES:
            raise ValueError(f"unknown field family {self.family!r}")
        if self.amplitude < 0.0:
            raise ValueError("field amplitude must be nonnegative")
        if self.family == "zero" and self.amplitude != 0.0:
            raise ValueError("zero field must have zero amplitude")

    def __call__(self, t: float, s):
        if self.family == "zero":
            return 0.0
        th = np.tanh(s)
        return self.amplitude * 0.5 * (1.0 + math.sin(self.omega * t)) * th * th

    @property
    def sup(self) -> float:
        return self.amplitude

    @property
    def lipschitz(self) -> float:
        if self.family == "zero":
            return 0.0
        return self.amplitude * K1_TANH

    def scaled(self, factor: float) -> "ExternalField":
        """Amplitude-scaled copy, used by the semicontinuity sweeps."""
        if self.family == "zero":
            return self
        return ExternalField(self.family, self.amplitude * factor, self.omega)


@dataclass(frozen=True, eq=False)
class ProcessConfig:
    """Everything that defines the evolution process."""

    beta: float
    p: float
    grid: Grid1D
    weight: WeightFunction
    kernel: Kernel
    nonlinearity: Nonlinearity
    field: ExternalField
    dt: float

    def __post_init__(self):
        if not (self.beta > 0.0):
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not (self.dt > 0.0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not (1.0 < self.p < math.inf):
            raise ValueError(f"p must lie in (1, inf), got {self.p}")
        if self.kernel.grid != self.grid:
            raise GridMismatchError("kernel was sampled on a different grid")

    def digest(self) -> str:
        """Short stable hash of the semantic content, for report context."""
        text = "|".join([
            f"beta={self.beta!r}", f"p={self.p!r}", f"dt={self.dt!r}",
            f"L={self.grid.half_length!r}", f"n={self.grid.n_points!r}",
            f"weight={self.weight.kind}", f"g={self.nonlinearity.name}",
            f"gval={self.nonlinearity.value!r}",
            f"h={self.field.family}", f"amp={self.field.amplitude!r}",
            f"omega={self.field.omega!r}",
        ])
        return hashlib.sha256(text.encode()).hexdigest()[:12]


@dataclass(frozen=True, eq=False)
class TrajectoryState:
    """Snapshot at time t, optionally carrying the v/w splitting."""

    t: float
    u: WeightedField
    v: WeightedField | None = None
    w: WeightedField | None = None

    def __post_init__(self):
        if (self.v is None) != (self.w is None):
            raise ValueError("v and w must be supplied together")
        if self.v is not None:
            self.u.same_space(self.v)
            self.u.same_space(self.w)
            gap = np.max(np.abs(self.u.values - (self.v.values + self.w.values)))
            scale = max(1.0, float(np.max(np.abs(self.u.values))))
            if gap > 1e-12 * scale:
                raise ValueError("splitting violated: u != v + w")


# ---------------------------------------------------------------------------
# right-hand side and stepping
# ---------------------------------------------------------------------------

def _nonlinear_term(cfg: ProcessConfig, t: float, u_vals: np.ndarray) -> np.ndarray:
    """G(t) = g(beta (J*u) + beta h(t, u)) on raw samples."""
    k = cfg.kernel
    conv = np.fft.irfft(np.fft.rfft(u_vals, k._fft_len) * k._spectrum, k._fft_len)
    conv = conv[k.half_width : k.half_width + cfg.grid.n_points] * cfg.grid.spacing
    arg = cfg.beta * conv + cfg.beta * cfg.field(t, u_vals)
    return cfg.nonlinearity(arg)


def rhs_f(t: float, u: WeightedField, cfg: ProcessConfig) -> WeightedField:
    """Instantaneous right-hand side -u + G(t)."""
    if u.grid != cfg.grid:
        raise GridMismatchError("field does not live on the configured grid")
    out = -u.values + _nonlinear_term(cfg, t, u.values)
    if not np.all(np.isfinite(out)):
        raise BlowUpError("right-hand side produced non-finite values")
    return u.with_values(out)


def _phi_weights(delta: float) -> tuple[float, float, float]:
    # exp(-delta) and the two quadrature weights; their sum is 1 - exp(-delta)
    em = math.exp(-delta)
    total = -math.expm1(-delta)
    phi1 = total / delta
    w2 = 1.0 - phi1
    w1 = total - w2
    return em, w1, w2


def _step_raw(cfg: ProcessConfig, t: float, u: np.ndarray, delta: float) -> np.ndarray:
    em, w1, w2 = _phi_weights(delta)
    g0 = _nonlinear_term(cfg, t, u)
    pred = em * u + (w1 + w2) * g0
    g1 = _nonlinear_term(cfg, t + delta, pred)
    return em * u + w1 * g0 + w2 * g1


def _step_split_raw(cfg: ProcessConfig, t: float, v: np.ndarray, w: np.ndarray,
                    delta: float) -> tuple[np.ndarray, np.ndarray]:
    em, w1, w2 = _phi_weights(delta)
    g0 = _nonlinear_term(cfg, t, v + w)
    v_new = em * v
    pred_w = em * w + (w1 + w2) * g0
    g1 = _nonlinear_term(cfg, t + delta, v_new + pred_w)
    return v_new, em * w + w1 * g0 + w2 * g1


def step_exponential(state: TrajectoryState, cfg: ProcessConfig,
                     delta: float | None = None) -> TrajectoryState:
    """One exponential-trapezoid step of size delta (default cfg.dt)."""
    delta = cfg.dt if delta is None else float(delta)
    if not (delta > 0.0):
        raise ValueError(f"step size must be positive, got {delta}")
    if state.u.grid != cfg.grid:
        raise GridMismatchError("state does not live on the configured grid")
    if state.v is not None:
        v, w = _step_split_raw(cfg, state.t, state.v.values, state.w.values, delta)
        _guard_finite(v + w)
        return TrajectoryState(
            t=state.t + delta,
            u=state.u.with_values(v + w),
            v=state.u.with_values(v),
            w=state.u.with_values(w),
        )
    u = _step_raw(cfg, state.t, state.u.values, delta)
    _guard_finite(u)
    return TrajectoryState(t=state.t + delta, u=state.u.with_values(u))


def _guard_finite(vals: np.ndarray) -> None:
    if not np.all(np.isfinite(vals)):
        raise BlowUpError("integration produced non-finite values")


def _delta_schedule(tau: float, t: float, dt: float) -> list[float]:
    span = t - tau
    if span < -1e-12:
        raise TimeOrderError(f"cannot evolve backwards: tau={tau}, t={t}")
    if span <= 1e-12:
        return []
    n_full = int(math.floor(span / dt + 1e-9))
    deltas = [dt] * n_full
    rem = span - n_full * dt
    if rem > 1e-9 * max(1.0, dt):
        deltas.append(rem)
    return deltas


def evolve(u_tau: WeightedField, tau: float, t: float, cfg: ProcessConfig,
           observer=None) -> WeightedField:
    """Integrate from time tau to t; full dt steps plus one shortened tail.

    The observer, when given, is called as observer(time, values_copy)
    at tau and after every accepted step.
    """
    if u_tau.grid != cfg.grid:
        raise GridMismatchError("initial field does not live on the configured grid")
    u = u_tau.values.copy()
    now = tau
    if observer is not None:
        observer(now, u.copy())
    for delta in _delta_schedule(tau, t, cfg.dt):
        u = _step_raw(cfg, now, u, delta)
        now += delta
        _guard_finite(u)
        if observer is not None:
            observer(now, u.copy())
    return u_tau.with_values(u)


def evolve_split(u_tau: WeightedField, tau: float, t: float, cfg: ProcessConfig,
                 observer=None) -> TrajectoryState:
    """Integrate with the v/w splitting: v decays exactly, w(tau) = 0."""
    if u_tau.grid != cfg.grid:
        raise GridMismatchError("initial field does not live on the configured grid")
    v = u_tau.values.copy()
    w = np.zeros_like(v)
    now = tau
    if observer is not None:
        observer(now, v + w)
    for delta in _delta_schedule(tau, t, cfg.dt):
        v, w = _step_split_raw(cfg, now, v, w, delta)
        now += delta
        _guard_finite(v + w)
        if observer is not None:
            observer(now, v + w)
    return TrajectoryState(
        t=now,
        u=u_tau.with_values(v + w),
        v=u_tau.with_values(v),
        w=u_tau.with_values(w),
    )
