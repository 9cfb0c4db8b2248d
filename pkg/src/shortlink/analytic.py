"""Closed-form single-emitter solution, derivative-jump formula, eigenfrequency
solver, and the output power spectrum.

The series solution and jump formula follow the single-delay convention
(echo delay = the `delay` field, per-echo phase = `phi`); the spectroscopy
functions work in the lab frame of the two-ended link, where the emitter's
self-echo returns after 2*tau with phase 2*phi.

Eigenvalue convention: the lab-frame equation implemented here is

    lambda = Delta + (gamma/2) * cot(lambda * tau)

This is the form consistent with the physical mode ladder: it is exactly
periodic under (lambda, Delta) -> (lambda + pi/tau, Delta + pi/tau), it
gives the vacuum Rabi splitting 2*sqrt(gamma/(2 tau)) at the resonances
Delta*tau = k*pi, and the splitting saturates at pi/tau for strong
coupling.  The half-angle variant cot(lambda*tau/2) reproduces none of
these and is not used (its branch spacing would be 2*pi/tau).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .core import LinkParams, TWO_PI

_N_MAX_HARD = 500


@dataclass(frozen=True)
class SeriesParams:
    """Inputs of the echo-series solution.

    gamma: decay rate; delay: echo period; phi: per-echo phase.
    alpha = i*omega_e + gamma/2 with omega_e = phi/delay is derived, never
    stored.  n_max caps the number of echo generations.
    """

    gamma: float
    delay: float
    phi: float
    n_max: int = _N_MAX_HARD

    def __post_init__(self):
        if self.delay <= 0 or self.gamma < 0:
            raise ValueError("need delay > 0 and gamma >= 0")
        if not (1 <= self.n_max <= _N_MAX_HARD):
            raise ValueError(f"n_max must be in [1, {_N_MAX_HARD}]")

    @property
    def omega_e(self) -> float:
        return self.phi / self.delay

    @property
    def alpha(self) -> complex:
        return 1j * self.omega_e + 0.5 * self.gamma


def series_solution(p: SeriesParams, t: float) -> complex:
    """Exact c(t) for a single emitter with constant coupling.

    c(t) = e^{-gamma t/2} [1 + sum_n e^{n alpha delay} sum_m P_{n,m}(t)]
    with P_{n,m}(t) = C(n-1, m-1) [-gamma (t - n delay)]^m / m!.

    Each echo generation n carries the combined factor
    e^{i n phi} e^{-gamma (t - n delay)/2}; the two exponentials are merged
    before evaluation so the partial factors never overflow on their own.

    The inner sums alternate in sign with terms growing like binomials of
    the echo order times e^{gamma t / 2}, so double precision limits the
    useful domain to roughly gamma*t < 40 and one to two hundred echo
    generations; beyond that the cancellation noise dominates.
    """
    if t < 0:
        raise ValueError("series solution is defined for t >= 0")
    g, d = p.gamma, p.delay
    n_t = int(math.floor(t / d + 1e-12))
    if n_t > p.n_max:
        raise ValueError(
            f"t/delay = {t / d:.1f} exceeds the echo truncation order n_max={p.n_max}"
        )
    total = complex(math.exp(-0.5 * g * t))
    for n in range(1, n_t + 1):
        dt = t - n * d
        if dt < 0:
            break
        x = -g * dt
        scale = math.exp(-0.5 * g * dt)
        phase = complex(np.exp(1j * math.fmod(n * p.phi, TWO_PI)))
        # inner sum over m via the stable term recurrence, pre-scaled
        term = x * scale
        inner = term
        for m in range(1, n):
            term *= x * (n - m) / (m * (m + 1))
            inner += term
        total += phase * inner
    return total


def jump_formula(N: int, gamma: float, phi: float, c0: complex) -> complex:
    """Exact derivative jump of c at the N-th echo arrival: -gamma e^{i N phi} c(0)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return -gamma * complex(np.exp(1j * math.fmod(N * phi, TWO_PI))) * complex(c0)


# ---------------------------------------------------------------------------
# Spectroscopy
# ---------------------------------------------------------------------------


@dataclass
class SpectralResult:
    """Eigenfrequency ladder plus sampled output power spectrum."""

    eigenfrequencies: np.ndarray
    omegas: np.ndarray = field(default_factory=lambda: np.empty(0))
    spectrum: np.ndarray = field(default_factory=lambda: np.empty(0))


def _eigen_residual(lam: float, link: LinkParams) -> float:
    x = math.fmod(lam * link.tau, math.pi)
    return lam - link.delta - 0.5 * link.gamma0 / math.tan(x)


def eigenfrequencies(link: LinkParams, window) -> np.ndarray:
    """All real eigenfrequencies whose cot branch intersects the window.

    One root per open branch between consecutive singularities of
    cot(lambda*tau) at lambda = k*pi/tau; the function is monotone there,
    so a bracketed solve is globally convergent.  Roots are polished until
    the residual is below 1e-10 * max(|lambda|, gamma).
    """
    lo, hi = window
    if not (hi > lo):
        raise ValueError("empty eigenfrequency window")
    tau, gam, delta = link.tau, link.gamma0, link.delta
    fsr = math.pi / tau
    if gam == 0.0:
        bare = [k * fsr for k in range(int(math.floor(lo / fsr)), int(math.ceil(hi / fsr)) + 1)
                if lo <= k * fsr <= hi]
        if lo <= delta <= hi:
            bare.append(delta)
        return np.array(sorted(set(bare)))

    k_lo = int(math.floor(lo / fsr))
    k_hi = int(math.ceil(hi / fsr))
    roots = []
    for k in range(k_lo, k_hi):
        a, b = k * fsr, (k + 1) * fsr
        if b <= lo or a >= hi:
            continue
        eps = 1e-9 * fsr
        f = lambda lam: _eigen_residual(lam, link)
        lam = brentq(f, a + eps, b - eps, xtol=1e-15, rtol=8.9e-16, maxiter=200)
        # derivative-free secant polish to push the residual down
        tol = 1e-10 * max(abs(lam), gam)
        x0, x1 = lam, lam * (1.0 + 1e-12) + 1e-300
        f0, f1 = f(x0), f(x1)
        for _ in range(8):
            if abs(f1) < tol or f1 == f0:
                break
            x0, x1, f0, f1 = x1, x1 - f1 * (x1 - x0) / (f1 - f0), f1, None
            f1 = f(x1)
        lam = x1 if abs(f(x1)) < abs(f(lam)) else lam
        roots.append(lam)
    return np.array(sorted(roots))


def resonant_splitting(link: LinkParams) -> float:
    """Spacing of the two eigenfrequencies straddling the emitter line.

    Meaningful when Delta sits on a link mode (Delta*tau = k*pi): this is
    the vacuum Rabi splitting, ~ 2*sqrt(gamma/(2 tau)) for weak coupling
    and saturating at pi/tau.
    """
    fsr = link.fsr
    lams = eigenfrequencies(link, (link.delta - 1.5 * fsr, link.delta + 1.5 * fsr))
    above = lams[lams > link.delta]
    below = lams[lams < link.delta]
    if len(above) == 0 or len(below) == 0:
        raise ValueError("window contains no straddling pair")
    return float(above.min() - below.max())


def output_amplitude(link: LinkParams, omega, broadening: float = 0.0):
    """Lab-frame output field amplitude A(omega) of an initially excited emitter.

    A(s) = sqrt(gamma) / [(s + gamma/2)(1 - E) + gamma E],  E = e^{i 2 phi - 2 s tau},
    evaluated at s = broadening - i (omega - Delta).  The optional broadening
    moves the evaluation off the real axis (the undamped poles are real), which
    turns each line into a finite Lorentzian of common width.
    """
    w = np.asarray(omega, dtype=float)
    s = broadening - 1j * (w - link.delta)
    E = np.exp(1j * math.fmod(2.0 * link.phi, TWO_PI) - 2.0 * s * link.tau)
    den = (s + 0.5 * link.gamma0) * (1.0 - E) + link.gamma0 * E
    with np.errstate(divide="ignore", invalid="ignore"):
        amp = math.sqrt(link.gamma0) / den
    return amp


def output_spectrum(link: LinkParams, omega_grid, broadening: float = 0.0) -> SpectralResult:
    """|A(omega)|^2 on the grid, normalized so the finite maximum is 1.

    Samples landing exactly on a pole are flagged +inf.  Local maxima of
    the sampled spectrum line up with the eigenfrequency ladder.
    """
    w = np.asarray(omega_grid, dtype=float)
    if w.size == 0 or not np.all(np.isfinite(w)):
        raise ValueError("omega_grid must be finite and nonempty")
    if np.any(np.diff(w) < 0):
        raise ValueError("omega_grid must be sorted")
    amp = output_amplitude(link, w, broadening)
    power = np.abs(amp) ** 2
    power[~np.isfinite(power)] = np.inf
    finite = power[np.isfinite(power)]
    if finite.size and finite.max() > 0:
        power = power / finite.max()
    lams = eigenfrequencies(link, (float(w[0]), float(w[-1]))) if link.gamma0 >= 0 else np.empty(0)
    return SpectralResult(eigenfrequencies=lams, omegas=w, spectrum=power)


def spectrum_scan(gamma0: float, tau: float, delta_values, omega_grid, broadening: float = 0.0):
    """Heat-map rows (Delta, omega, power) over a sweep of emitter frequencies."""
    from .core import make_link

    rows = []
    for delta in delta_values:
        link = make_link(gamma0, tau, delta)
        res = output_spectrum(link, omega_grid, broadening)
        for w, p in zip(res.omegas, res.spectrum):
            rows.append((delta, w, p))
    return rows
