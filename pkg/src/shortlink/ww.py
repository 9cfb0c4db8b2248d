"""Multimode Wigner-Weisskopf simulator: the independent ground truth.

Integrates the full single-excitation Schroedinger equation for two
emitters coupled to a discrete mode ladder, in the frame rotating at the
emitter frequency Delta:

    dc_l/dt    = -i sum_k g_{k,l}(t) e^{-i (w_k - Delta) t} alpha_k
    dalpha_k/dt = -i sum_l g_{k,l}(t) e^{+i (w_k - Delta) t} c_l

with g_{k,1} = sqrt(gamma_1(t)/(2 tau)) and g_{k,2} = s_k * g_{k,1}-like,
where the standing-wave parity s_k = (-1)^k fixes the sign of mode k at
the far end of the link.  The coupling normalization sqrt(gamma/(2 tau))
makes the Markovian decay rate of a single emitter equal gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import LinkParams, PulseProfile, TimeGrid, Trajectory, eval_pulse

_MAX_PHASE_STEP = 0.5


@dataclass(frozen=True)
class ModeSet:
    """Mode ladder of the link: frequencies, end parities, integer indices."""

    omegas: np.ndarray
    parity: np.ndarray
    indices: np.ndarray

    @property
    def n_modes(self) -> int:
        return int(self.omegas.size)


def build_modes(link: LinkParams, n_modes: int) -> ModeSet:
    """Ladder of n_modes (odd) centered on the mode nearest Delta.

    A ladder that would reach below the lowest mode omega = fsr is shifted
    up so it always starts at the first physical mode.
    """
    if n_modes < 1 or n_modes % 2 == 0:
        raise ValueError("n_modes must be odd and >= 1")
    fsr = link.fsr
    j_center = max(1, int(round(link.delta / fsr)))
    j0 = j_center - (n_modes - 1) // 2
    if j0 < 1:
        j0 = 1
    idx = np.arange(j0, j0 + n_modes)
    return ModeSet(
        omegas=idx * fsr,
        parity=np.where(idx % 2 == 0, 1.0, -1.0),
        indices=idx,
    )


@dataclass
class WWTrajectory(Trajectory):
    """Trajectory plus the link-photon record of the mode-resolved run."""

    photon: np.ndarray = field(default_factory=lambda: np.empty(0))
    modes: ModeSet | None = None
    alpha_final: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=complex))
    alpha_snapshots: dict = field(default_factory=dict)

    def photon_number(self) -> np.ndarray:
        return self.photon


def evolve_ww(link: LinkParams, modes: ModeSet, pulses, c0, grid: TimeGrid,
              snapshot_times=(), lamb_shift: float = 0.0) -> WWTrajectory:
    """Fixed-step RK4 integration of the emitter + mode amplitudes.

    pulses: (pulse1, pulse2); c0: initial (c1, c2).  The mode loop is
    vectorized with a fixed summation order, so results are reproducible
    bit-for-bit.  lamb_shift adds a scalar offset to the emitter frequency
    used for the rotating frame (calibration knob, default off).
    """
    c01, c02 = complex(c0[0]), complex(c0[1])
    if abs(c01) ** 2 + abs(c02) ** 2 > 1.0 + 1e-9:
        raise ValueError("initial amplitudes exceed the single-excitation sector")
    delta_eff = link.delta + lamb_shift
    nu = modes.omegas - delta_eff
    h = grid.h
    if h * float(np.max(np.abs(nu))) > _MAX_PHASE_STEP:
        raise ValueError(
            "grid too coarse for this mode ladder: need h * max|omega_k - Delta| <= 0.5"
        )
    N = grid.n_steps
    t_nodes = grid.times()
    pulse1, pulse2 = pulses
    g1_n = np.asarray(eval_pulse(pulse1, t_nodes), dtype=float)
    g2_n = np.asarray(eval_pulse(pulse2, t_nodes), dtype=float)
    g1_h = np.asarray(eval_pulse(pulse1, t_nodes[:-1] + 0.5 * h), dtype=float)
    g2_h = np.asarray(eval_pulse(pulse2, t_nodes[:-1] + 0.5 * h), dtype=float)
    scale = 1.0 / math.sqrt(2.0 * link.tau)
    s = modes.parity

    snap_idx = {grid.index_of(ts): ts for ts in snapshot_times}

    c1 = np.empty(N + 1, dtype=complex)
    c2 = np.empty(N + 1, dtype=complex)
    photon = np.empty(N + 1)
    c1[0], c2[0] = c01, c02
    alpha = np.zeros(modes.n_modes, dtype=complex)
    photon[0] = float(np.sum(np.abs(alpha) ** 2))
    snapshots = {}

    def rhs(phase, a, x1, x2, g1, g2):
        # phase = e^{-i nu t}; returns (dc1, dc2, dalpha)
        pa = phase * a
        dc1 = -1j * g1 * np.sum(pa)
        dc2 = -1j * g2 * np.sum(s * pa)
        da = -1j * np.conj(phase) * (g1 * x1 + g2 * x2 * s)
        return dc1, dc2, da

    for i in range(N):
        t0 = t_nodes[i]
        ph0 = np.exp(-1j * nu * t0)
        phh = np.exp(-1j * nu * (t0 + 0.5 * h))
        ph1 = np.exp(-1j * nu * (t0 + h))
        ga = (scale * math.sqrt(g1_n[i]), scale * math.sqrt(g2_n[i]))
        gh = (scale * math.sqrt(g1_h[i]), scale * math.sqrt(g2_h[i]))
        gb = (scale * math.sqrt(g1_n[i + 1]), scale * math.sqrt(g2_n[i + 1]))

        x1, x2, a = c1[i], c2[i], alpha
        k1 = rhs(ph0, a, x1, x2, *ga)
        k2 = rhs(phh, a + 0.5 * h * k1[2], x1 + 0.5 * h * k1[0], x2 + 0.5 * h * k1[1], *gh)
        k3 = rhs(phh, a + 0.5 * h * k2[2], x1 + 0.5 * h * k2[0], x2 + 0.5 * h * k2[1], *gh)
        k4 = rhs(ph1, a + h * k3[2], x1 + h * k3[0], x2 + h * k3[1], *gb)
        c1[i + 1] = x1 + (h / 6.0) * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0])
        c2[i + 1] = x2 + (h / 6.0) * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1])
        alpha = a + (h / 6.0) * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])
        photon[i + 1] = float(np.sum(np.abs(alpha) ** 2))
        if i + 1 in snap_idx:
            snapshots[snap_idx[i + 1]] = alpha.copy()

    c = np.array([c1, c2])
    return WWTrajectory(
        grid=grid, link=link, c=c,
        gamma_samples=np.array([g1_n, g2_n]),
        b_out=np.zeros_like(c), echo_delay_steps=2 * grid.steps_per_tau,
        echo_phase=2.0 * link.phi,
        photon=photon, modes=modes, alpha_final=alpha, alpha_snapshots=snapshots,
    )


def photon_number(traj: WWTrajectory, t: float) -> float:
    """Total photons in the link, sum_k |alpha_k(t)|^2, at a grid point."""
    return float(traj.photon[traj.grid.index_of(t)])


def unitarity_defect(traj: WWTrajectory) -> float:
    """max_t |sum_l |c_l|^2 + sum_k |alpha_k|^2 - 1| over the run."""
    total = np.sum(np.abs(traj.c) ** 2, axis=0) + traj.photon
    return float(np.max(np.abs(total - 1.0)))


def snapshot_rows(traj: WWTrajectory, t: float):
    """(k, omega_k, Re alpha_k, Im alpha_k) rows of a stored snapshot."""
    if t not in traj.alpha_snapshots:
        raise KeyError(f"no snapshot stored at t={t}")
    a = traj.alpha_snapshots[t]
    m = traj.modes
    return [(int(k), float(w), float(x.real), float(x.imag))
            for k, w, x in zip(m.indices, m.omegas, a)]
