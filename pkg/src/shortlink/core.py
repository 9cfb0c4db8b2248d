"""Shared domain types: link parameters, coupling pulses, time grids, trajectories.

All quantities are dimensionless groups built on the traversal time tau
(gamma*tau, Delta*tau, T/tau, ...). No unit system is attached.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


def _check_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class LinkParams:
    """Physical configuration of a finite-length link.

    gamma0: decay-rate scale (1/time), >= 0
    tau:    single-traversal time (> 0)
    delta:  emitter frequency in the lab frame (1/time)

    The single-traversal phase phi = delta*tau is kept at full floating
    precision; factors exp(i*n*phi) are computed from (n*phi mod 2*pi)
    at use-site to limit rounding growth.
    """

    gamma0: float
    tau: float
    delta: float

    @property
    def phi(self) -> float:
        return self.delta * self.tau

    @property
    def fsr(self) -> float:
        """Free spectral range pi/tau of the link's mode ladder."""
        return math.pi / self.tau


def make_link(gamma0: float, tau: float, delta: float) -> LinkParams:
    """Validate and build a LinkParams."""
    _check_finite("gamma0", gamma0)
    _check_finite("tau", tau)
    _check_finite("delta", delta)
    if tau <= 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    if gamma0 < 0:
        raise ValueError(f"gamma0 must be >= 0, got {gamma0}")
    return LinkParams(gamma0=float(gamma0), tau=float(tau), delta=float(delta))


def phase_factor(phi: float, n: int = 1) -> complex:
    """exp(i*n*phi) computed from the argument reduced mod 2*pi."""
    return complex(np.exp(1j * math.fmod(n * phi, TWO_PI)))


# ---------------------------------------------------------------------------
# Coupling pulses
# ---------------------------------------------------------------------------

_SHAPES = ("constant", "sin2", "tanh", "sampled")


@dataclass(frozen=True)
class PulseProfile:
    """Time-dependent coupling gamma(t) as a tagged shape.

    shape is one of:
      constant: params {gamma0}
      sin2:     params {gamma0, duration}; gamma0*sin^2(pi*(t-t_start)/(2*duration))
      tanh:     params {gamma0, center};   gamma0/2*(1+tanh(gamma0*(t-center)/2))
      sampled:  linear interpolation of (times, values), clamped at >= 0

    The profile vanishes outside the closed support interval.  If
    mirror_about is set, the base shape is evaluated at (2*mirror_about - t)
    which realizes the time-mirrored receiver pulses exactly.
    """

    shape: str
    params: dict
    support: tuple
    mirror_about: float | None = None
    times: np.ndarray | None = field(default=None, repr=False)
    values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.shape not in _SHAPES:
            raise ValueError(f"unknown pulse shape {self.shape!r}")
        a, b = self.support
        if not (math.isfinite(a) and math.isfinite(b) and a <= b):
            raise ValueError(f"invalid support {self.support!r}")
        if self.shape == "sampled":
            t = np.asarray(self.times, dtype=float)
            v = np.asarray(self.values, dtype=float)
            if t.ndim != 1 or t.shape != v.shape or t.size < 2:
                raise ValueError("sampled pulse needs matching 1-d times/values")
            if np.any(np.diff(t) <= 0):
                raise ValueError("sampled pulse time axis must be strictly increasing")
            object.__setattr__(self, "times", t)
            object.__setattr__(self, "values", v)

    @property
    def gamma_max(self) -> float:
        if self.shape == "sampled":
            return float(max(np.max(self.values), 0.0))
        return float(self.params["gamma0"])

    def __call__(self, t):
        return eval_pulse(self, t)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        obj = {
            "shape": self.shape,
            "params": dict(self.params),
            "support": list(self.support),
        }
        if self.mirror_about is not None:
            obj["mirror_about"] = self.mirror_about
        if self.shape == "sampled":
            obj["params"]["times"] = list(map(float, self.times))
            obj["params"]["values"] = list(map(float, self.values))
        return json.dumps(obj)

    @staticmethod
    def from_json(text: str) -> "PulseProfile":
        obj = json.loads(text)
        params = dict(obj["params"])
        times = params.pop("times", None)
        values = params.pop("values", None)
        return PulseProfile(
            shape=obj["shape"],
            params=params,
            support=tuple(obj["support"]),
            mirror_about=obj.get("mirror_about"),
            times=None if times is None else np.asarray(times, dtype=float),
            values=None if values is None else np.asarray(values, dtype=float),
        )


def eval_pulse(p: PulseProfile, t):
    """Evaluate a pulse at time(s) t.  Pure; 0 outside the support."""
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    a, b = p.support
    inside = (t_arr >= a) & (t_arr <= b)
    te = t_arr if p.mirror_about is None else 2.0 * p.mirror_about - t_arr
    if p.shape == "constant":
        g = np.full_like(t_arr, p.params["gamma0"])
    elif p.shape == "sin2":
        g0 = p.params["gamma0"]
        T = p.params["duration"]
        g = g0 * np.sin(0.5 * math.pi * (te - a) / T) ** 2
    elif p.shape == "tanh":
        g0 = p.params["gamma0"]
        tc = p.params["center"]
        g = 0.5 * g0 * (1.0 + np.tanh(0.5 * g0 * (te - tc)))
    else:  # sampled
        g = np.interp(te, p.times, p.values, left=0.0, right=0.0)
    out = np.where(inside, np.clip(g, 0.0, p.gamma_max), 0.0)
    return float(out[0]) if scalar else out


def constant_pulse(gamma0: float, support) -> PulseProfile:
    return PulseProfile("constant", {"gamma0": float(gamma0)}, tuple(support))


def sin2_pulse(gamma0: float, duration: float, support=None, mirror=False) -> PulseProfile:
    """gamma0*sin^2(pi*t/(2*T)) on [0, T]; mirror gives gamma(T - t)."""
    if support is None:
        support = (0.0, duration)
    return PulseProfile(
        "sin2",
        {"gamma0": float(gamma0), "duration": float(duration)},
        tuple(support),
        mirror_about=0.5 * duration if mirror else None,
    )


def tanh_pulse(gamma0: float, center: float, support, mirror_about=None) -> PulseProfile:
    """gamma0/2*(1+tanh(gamma0*(t-center)/2)); optionally time-mirrored."""
    return PulseProfile(
        "tanh",
        {"gamma0": float(gamma0), "center": float(center)},
        tuple(support),
        mirror_about=mirror_about,
    )


def sampled_pulse(times, values, support=None) -> PulseProfile:
    times = np.asarray(times, dtype=float)
    if support is None:
        support = (float(times[0]), float(times[-1]))
    return PulseProfile("sampled", {}, tuple(support), times=times, values=np.asarray(values, dtype=float))


# ---------------------------------------------------------------------------
# Time grids and trajectories
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid with step h = tau/steps_per_tau.

    The delay alignment (tau an exact multiple of h) keeps every echo
    arrival on a grid node, which confines the integrator's order loss at
    the derivative kinks to the nodes themselves.
    """

    h: float
    steps_per_tau: int
    t_end: float
    n_steps: int

    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.h

    def index_of(self, t: float) -> int:
        i = int(round(t / self.h))
        if not (0 <= i <= self.n_steps) or abs(i * self.h - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"t={t} is not a grid point of this trajectory")
        return i


def make_grid(tau: float, t_end: float, steps_per_tau: int = 200) -> TimeGrid:
    """Build a grid aligned with the delay tau, rounding t_end up to a node."""
    if steps_per_tau < 4:
        raise ValueError("steps_per_tau must be >= 4")
    if t_end <= 0:
        raise ValueError("t_end must be > 0")
    h = tau / steps_per_tau
    n = int(math.ceil(t_end / h - 1e-9))
    return TimeGrid(h=h, steps_per_tau=int(steps_per_tau), t_end=n * h, n_steps=n)


@dataclass
class Trajectory:
    """Complex emitter amplitudes on a grid plus sampled couplings.

    c has shape (n_emitters, n_steps+1).  b_out holds the echo-field
    history maintained by the integrator recursion (same shape), with
    echo_delay_steps/echo_phase recording the self-echo convention used.
    """

    grid: TimeGrid
    link: LinkParams
    c: np.ndarray
    gamma_samples: np.ndarray
    b_out: np.ndarray
    echo_delay_steps: int
    echo_phase: float

    @property
    def t(self) -> np.ndarray:
        return self.grid.times()

    def populations(self) -> np.ndarray:
        return np.abs(self.c) ** 2

    def photon_number(self) -> np.ndarray:
        """Photons in the link via single-excitation unitarity."""
        return np.clip(1.0 - np.sum(np.abs(self.c) ** 2, axis=0), 0.0, None)

    def amplitude_at(self, l: int, t: float) -> complex:
        """Cubic interpolation of c_l at an off-grid time (grid nodes exact)."""
        x = t / self.grid.h
        n = self.grid.n_steps
        if not (-1e-9 <= x <= n + 1e-9):
            raise ValueError(f"t={t} outside trajectory range")
        j = int(math.floor(x))
        if abs(x - round(x)) < 1e-9:
            return complex(self.c[l, int(round(x))])
        s = min(max(j - 1, 0), n - 3)
        w = _lagrange_weights(x - s)
        return complex(np.dot(w, self.c[l, s:s + 4]))

    def to_csv(self, path) -> None:
        from .io import write_csv

        pops = self.populations()
        n_em = self.c.shape[0]
        c2 = self.c[1] if n_em > 1 else np.zeros_like(self.c[0])
        p2 = pops[1] if n_em > 1 else np.zeros_like(pops[0])
        rows = np.column_stack([
            self.t,
            self.c[0].real, self.c[0].imag,
            c2.real, c2.imag,
            pops[0], p2,
            self.photon_number(),
        ])
        meta = {
            "gamma0": self.link.gamma0,
            "tau": self.link.tau,
            "delta": self.link.delta,
            "steps_per_tau": self.grid.steps_per_tau,
        }
        write_csv(path, ["t", "re_c1", "im_c1", "re_c2", "im_c2", "pop1", "pop2", "n_photon"], rows, meta)


def _lagrange_weights(x: float) -> np.ndarray:
    """Cubic Lagrange weights for nodes {0,1,2,3} evaluated at x."""
    w = np.empty(4)
    for k in range(4):
        num = 1.0
        den = 1.0
        for m in range(4):
            if m != k:
                num *= x - m
                den *= k - m
        w[k] = num / den
    return w
