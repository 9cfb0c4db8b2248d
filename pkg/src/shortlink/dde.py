"""Method-of-steps RK4 integrator for the one- and two-emitter delay equations.

The two-emitter equation of motion is

    dc_l/dt = -(gamma_l(t)/2) c_l
              - sqrt(gamma_l(t)) [e^{i 2 phi} b_l(t - 2 tau)
                                  + e^{i phi} b_{3-l}(t - tau)],

with the echo field maintained by the exact on-grid recursion

    b_l(t) = sqrt(gamma_l(t)) c_l(t) + e^{i 2 phi} b_l(t - 2 tau),
    b_l(t < 0) = 0.

The grid step divides tau, so every echo arrival (and hence every
derivative kink) sits on a grid node and no RK4 step straddles one.
Delayed values at RK half-stages are obtained by cubic interpolation of
the echo history, with stencils chosen inside the smooth pieces between
consecutive kink nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import LinkParams, PulseProfile, TimeGrid, Trajectory, TWO_PI, eval_pulse

# cubic Lagrange weights for a value midway between stencil nodes
# rows: delayed point between nodes (S, S+1), (S+1, S+2), (S+2, S+3)
_HALF_W = (
    (0.3125, 0.9375, -0.3125, 0.0625),
    (-0.0625, 0.5625, 0.5625, -0.0625),
    (0.0625, -0.3125, 0.9375, 0.3125),
)

_NORM_SLACK = 1e-9


@dataclass
class EchoBuffer:
    """Full echo-field history for one emitter.

    The integrator keeps the complete b_out record (diagnostics need random
    access); `horizon` reports how many delayed steps the hot loop actually
    reaches back.
    """

    ring: np.ndarray
    horizon: int

    def value(self, j: int) -> complex:
        return 0j if j < 0 else complex(self.ring[j])


def _half_value(b: list, j: int, period: int, b_left: list, jump_stride: int) -> complex:
    """Interpolate the echo history midway between nodes j and j+1.

    The 4-point stencil is kept inside [p, p + period] where p is the kink
    node at or below j, so it never bridges a derivative discontinuity.
    The echo field carries a value jump at every node n * jump_stride (the
    turn-on jump replayed by the recursion); stored node values are
    right-limits, so a stencil touching its piece's upper end substitutes
    the left-limit b_left[n] there.
    """
    if j < 0:
        return 0j
    p_lo = (j // period) * period
    s = j - 1
    if s < p_lo:
        s = p_lo
    elif s > p_lo + period - 3:
        s = p_lo + period - 3
    w = _HALF_W[j - s]
    v3 = b[s + 3]
    top = s + 3
    if top == p_lo + period and top % jump_stride == 0:
        v3 = b_left[top // jump_stride]
    return w[0] * b[s] + w[1] * b[s + 1] + w[2] * b[s + 2] + w[3] * v3


def _sample_pulse(pulse: PulseProfile, grid: TimeGrid):
    """Pulse values at grid nodes and half-nodes, plus their square roots."""
    t = grid.times()
    g = np.asarray(eval_pulse(pulse, t), dtype=float)
    gh = np.asarray(eval_pulse(pulse, t[:-1] + 0.5 * grid.h), dtype=float)
    return g, gh, np.sqrt(g), np.sqrt(gh)


def _check_norm(c: np.ndarray) -> None:
    n = np.sum(np.abs(c) ** 2, axis=0)
    worst = float(np.max(n))
    if worst > 1.0 + _NORM_SLACK:
        raise RuntimeError(
            f"single-excitation norm exceeded 1 by {worst - 1.0:.3e}; grid too coarse"
        )


def evolve_pair(link: LinkParams, pulse1: PulseProfile, pulse2: PulseProfile,
                c0, grid: TimeGrid) -> Trajectory:
    """Integrate the two-emitter DDE from initial amplitudes c0 = (c1, c2)."""
    c01, c02 = complex(c0[0]), complex(c0[1])
    if abs(c01) ** 2 + abs(c02) ** 2 > 1.0 + _NORM_SLACK:
        raise ValueError("initial amplitudes exceed the single-excitation sector")
    M = grid.steps_per_tau
    if abs(M * grid.h - link.tau) > 1e-12 * link.tau:
        raise ValueError("grid is not aligned with the link delay tau")
    h = grid.h
    N = grid.n_steps
    phi = link.phi
    e1 = complex(np.exp(1j * math.fmod(phi, TWO_PI)))
    e2 = complex(np.exp(1j * math.fmod(2.0 * phi, TWO_PI)))

    g_all, sg_all, sgh_all = [], [], []
    for pulse in (pulse1, pulse2):
        g, gh, sg, sgh = _sample_pulse(pulse, grid)
        g_all.append((g.tolist(), gh.tolist()))
        sg_all.append(sg.tolist())
        sgh_all.append(sgh.tolist())

    c = [[0j] * (N + 1), [0j] * (N + 1)]
    b = [[0j] * (N + 1), [0j] * (N + 1)]
    c[0][0], c[1][0] = c01, c02
    b[0][0] = sg_all[0][0] * c01
    b[1][0] = sg_all[1][0] * c02

    M2 = 2 * M
    # left limits of b at its jump lattice (nodes n * 2M); index n
    bL = [[0j] * (N // M2 + 1), [0j] * (N // M2 + 1)]
    half = 0.5 * h
    sixth = h / 6.0
    for i in range(N):
        for l in (0, 1):
            o = 1 - l
            g_n, g_h = g_all[l]
            sg, sgh = sg_all[l], sgh_all[l]
            bl, bo = b[l], b[o]

            js, jc = i - M2, i - M
            d_self0 = bl[js] if js >= 0 else 0j
            d_cross0 = bo[jc] if jc >= 0 else 0j
            F0 = -sg[i] * (e2 * d_self0 + e1 * d_cross0)

            Fh = -sgh[i] * (e2 * _half_value(bl, js, M, bL[l], M2)
                            + e1 * _half_value(bo, jc, M, bL[o], M2))

            js1, jc1 = js + 1, jc + 1
            # step endpoint: values on the jump lattice take the left limit
            # (the refreshed echo belongs to the next step)
            if js1 < 0:
                d_self1 = 0j
            elif js1 % M2 == 0:
                d_self1 = bL[l][js1 // M2]
            else:
                d_self1 = bl[js1]
            if jc1 < 0:
                d_cross1 = 0j
            elif jc1 % M2 == 0:
                d_cross1 = bL[o][jc1 // M2]
            else:
                d_cross1 = bo[jc1]
            F1 = -sg[i + 1] * (e2 * d_self1 + e1 * d_cross1)

            a0 = -0.5 * g_n[i]
            ah = -0.5 * g_h[i]
            a1 = -0.5 * g_n[i + 1]
            y = c[l][i]
            k1 = a0 * y + F0
            k2 = ah * (y + half * k1) + Fh
            k3 = ah * (y + half * k2) + Fh
            k4 = a1 * (y + h * k3) + F1
            c[l][i + 1] = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        for l in (0, 1):
            js1 = i + 1 - M2
            tail = b[l][js1] if js1 >= 0 else 0j
            b[l][i + 1] = sg_all[l][i + 1] * c[l][i + 1] + e2 * tail
            if (i + 1) % M2 == 0:
                n = (i + 1) // M2
                bL[l][n] = sg_all[l][i + 1] * c[l][i + 1] + e2 * bL[l][n - 1]

    c_arr = np.array(c)
    _check_norm(c_arr)
    gam = np.array([np.asarray(g_all[0][0]), np.asarray(g_all[1][0])])
    return Trajectory(grid=grid, link=link, c=c_arr, gamma_samples=gam,
                      b_out=np.array(b), echo_delay_steps=M2, echo_phase=2.0 * phi)


def evolve_single(link: LinkParams, pulse: PulseProfile, c0: complex,
                  grid: TimeGrid, round_trip=None) -> Trajectory:
    """Integrate the single-emitter DDE.

    round_trip = (T_rt, Phi) selects the echo convention: the two-ended
    geometry uses (2*tau, 2*phi) (the default); the series-solution
    convention uses (tau, phi).  T_rt must be a whole number of grid steps.
    """
    c0 = complex(c0)
    if abs(c0) > 1.0 + _NORM_SLACK:
        raise ValueError("initial amplitude exceeds the single-excitation sector")
    if round_trip is None:
        t_rt, big_phi = 2.0 * link.tau, 2.0 * link.phi
    else:
        t_rt, big_phi = round_trip
    h = grid.h
    R = int(round(t_rt / h))
    if R < 4 or abs(R * h - t_rt) > 1e-9 * t_rt:
        raise ValueError("round-trip time must be a whole number (>= 4) of grid steps")
    N = grid.n_steps
    ep = complex(np.exp(1j * math.fmod(big_phi, TWO_PI)))

    g, gh, sg_a, sgh_a = _sample_pulse(pulse, grid)
    g_n, g_h = g.tolist(), gh.tolist()
    sg, sgh = sg_a.tolist(), sgh_a.tolist()

    c = [0j] * (N + 1)
    b = [0j] * (N + 1)
    c[0] = c0
    b[0] = sg[0] * c0
    bL = [0j] * (N // R + 1)

    half = 0.5 * h
    sixth = h / 6.0
    for i in range(N):
        j = i - R
        F0 = -sg[i] * ep * (b[j] if j >= 0 else 0j)
        Fh = -sgh[i] * ep * _half_value(b, j, R, bL, R)
        if j + 1 < 0:
            d1 = 0j
        elif (j + 1) % R == 0:
            d1 = bL[(j + 1) // R]
        else:
            d1 = b[j + 1]
        F1 = -sg[i + 1] * ep * d1
        a0 = -0.5 * g_n[i]
        ah = -0.5 * g_h[i]
        a1 = -0.5 * g_n[i + 1]
        y = c[i]
        k1 = a0 * y + F0
        k2 = ah * (y + half * k1) + Fh
        k3 = ah * (y + half * k2) + Fh
        k4 = a1 * (y + h * k3) + F1
        c[i + 1] = y + sixth * (k1 + 2.0 * (k2 + k3) + k4)
        tail = b[i + 1 - R] if i + 1 - R >= 0 else 0j
        b[i + 1] = sg[i + 1] * c[i + 1] + ep * tail
        if (i + 1) % R == 0:
            n = (i + 1) // R
            bL[n] = sg[i + 1] * c[i + 1] + ep * bL[n - 1]

    c_arr = np.array([c])
    _check_norm(c_arr)
    return Trajectory(grid=grid, link=link, c=c_arr, gamma_samples=np.array([g]),
                      b_out=np.array([b]), echo_delay_steps=R, echo_phase=big_phi)


def output_field(traj: Trajectory, l: int, t: float) -> complex:
    """Echo field b_l^out(t) at a grid point, from the stored recursion."""
    if t < 0:
        return 0j
    i = traj.grid.index_of(t)
    return complex(traj.b_out[l, i])


def output_field_sum(traj: Trajectory, l: int, t: float) -> complex:
    """Echo field via the explicit truncated sum over past emissions.

    Independent of the recursion; used to cross-check it.
    """
    if t < 0:
        return 0j
    i = traj.grid.index_of(t)
    R = traj.echo_delay_steps
    phi_e = traj.echo_phase
    total = 0j
    n = 0
    while i - n * R >= 0:
        j = i - n * R
        amp = math.sqrt(traj.gamma_samples[l, j]) * traj.c[l, j]
        total += complex(np.exp(1j * math.fmod(n * phi_e, TWO_PI))) * amp
        n += 1
    return total


def derivative_kinks(traj: Trajectory, link: LinkParams):
    """Measured one-sided derivative jumps of c at the echo arrival nodes.

    Uses third-order one-sided finite differences on the grid; valid for
    constant-coupling single-emitter trajectories.
    """
    R = traj.echo_delay_steps
    h = traj.grid.h
    N = traj.grid.n_steps
    c = traj.c[0]
    out = []
    k = R
    while k + 3 <= N:
        left = (-2.0 * c[k - 3] + 9.0 * c[k - 2] - 18.0 * c[k - 1] + 11.0 * c[k]) / (6.0 * h)
        right = (-11.0 * c[k] + 18.0 * c[k + 1] - 9.0 * c[k + 2] + 2.0 * c[k + 3]) / (6.0 * h)
        out.append((k * h, complex(right - left)))
        k += R
    return out


def population_kinks(traj: Trajectory, link: LinkParams):
    """One-sided derivative jumps of the excited-state population |c|^2."""
    R = traj.echo_delay_steps
    h = traj.grid.h
    N = traj.grid.n_steps
    p = np.abs(traj.c[0]) ** 2
    out = []
    k = R
    while k + 3 <= N:
        left = (-2.0 * p[k - 3] + 9.0 * p[k - 2] - 18.0 * p[k - 1] + 11.0 * p[k]) / (6.0 * h)
        right = (-11.0 * p[k] + 18.0 * p[k + 1] - 9.0 * p[k + 2] + 2.0 * p[k + 3]) / (6.0 * h)
        out.append((k * h, float(right - left)))
        k += R
    return out
