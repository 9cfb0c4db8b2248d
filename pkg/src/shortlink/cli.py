"""Command-line entry point: simulate / spectrum / protocol / scan.

All flags take dimensionless groups (gamma0*tau, Delta/FSR, kappa*tau,
T/tau); the traversal time is fixed to tau = 1 internally.  Outputs are
deterministic CSV (with `#` metadata) or JSON; relative output paths
resolve against $SHORTLINK_OUTDIR.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .analytic import eigenfrequencies, output_spectrum
from .core import constant_pulse, make_grid, make_link
from .dde import evolve_pair, evolve_single
from .io import write_csv, write_json
from .protocols import (ProtocolSpec, dark_bright, make_pulses, run_protocol)
from .sweep import (crossover, error_vs_duration, loss_scan, optimal_stirap,
                    optimal_swap, scan_protocols)
from .ww import build_modes, evolve_ww


def _meta(args, **extra):
    m = {"tool": f"shortlink {__version__}"}
    m.update(extra)
    return m


def _steps_for_modes(delta, n_modes, requested):
    """Step density fine enough for the widest detuned mode in the ladder."""
    link = make_link(1.0, 1.0, delta)
    modes = build_modes(link, n_modes)
    nu_max = float(np.max(np.abs(modes.omegas - delta)))
    needed = int(math.ceil(nu_max / 0.5)) + 1
    # keep the refined grid an integer multiple of the requested density so
    # overlay columns can be decimated onto the base grid exactly
    factor = max(1, int(math.ceil(needed / requested)))
    return requested * factor


def cmd_simulate(args) -> int:
    link = make_link(args.gamma_tau, 1.0, args.delta_fsr * math.pi)
    grid = make_grid(1.0, args.t_end, args.steps_per_tau)
    pulse = constant_pulse(args.gamma_tau, (0.0, grid.t_end))
    if args.emitters == 1:
        traj = evolve_single(link, pulse, 1.0, grid)
    else:
        traj = evolve_pair(link, pulse, pulse, (1.0, 0.0), grid)
    pops = traj.populations()
    p2 = pops[1] if args.emitters == 2 else np.zeros_like(pops[0])
    c2 = traj.c[1] if args.emitters == 2 else np.zeros_like(traj.c[0])
    cols = ["t", "re_c1", "im_c1", "re_c2", "im_c2", "pop1", "pop2",
            "n_photon", "dpop1_dt"]
    data = [traj.t, traj.c[0].real, traj.c[0].imag, c2.real, c2.imag,
            pops[0], p2, traj.photon_number(), np.gradient(pops[0], grid.h)]
    if args.ww:
        M = _steps_for_modes(link.delta, args.n_modes, args.steps_per_tau)
        wgrid = make_grid(1.0, args.t_end, M)
        wpulse = constant_pulse(args.gamma_tau, (0.0, wgrid.t_end))
        modes = build_modes(link, args.n_modes)
        c0 = (1.0, 0.0)
        ww = evolve_ww(link, modes, (wpulse, wpulse) if args.emitters == 2
                       else (wpulse, constant_pulse(0.0, (0.0, wgrid.t_end))),
                       c0, wgrid)
        stride = M // args.steps_per_tau if M % args.steps_per_tau == 0 else None
        if stride is None:
            raise SystemExit("--ww step refinement incompatible with --steps-per-tau")
        wp = ww.populations()[:, ::stride][:, : len(traj.t)]
        cols += ["ww_pop1", "ww_pop2", "ww_n_photon"]
        data += [wp[0], wp[1], ww.photon[::stride][: len(traj.t)]]
    rows = np.column_stack(data)
    meta = _meta(args, gamma_tau=args.gamma_tau, delta_fsr=args.delta_fsr,
                 steps_per_tau=args.steps_per_tau, emitters=args.emitters)
    if args.format == "json":
        write_json(args.out, {"meta": meta, "columns": cols,
                              "rows": rows.tolist()})
    else:
        write_csv(args.out, cols, rows, meta)
    return 0


def cmd_spectrum(args) -> int:
    gamma = args.gamma_tau
    d0 = args.delta_fsr * math.pi
    if args.delta_steps <= 1:
        deltas = [d0]
    else:
        deltas = list(np.linspace(d0, d0 + math.pi, args.delta_steps))
    omegas = np.linspace(d0 - 0.5 * math.pi, d0 + 1.5 * math.pi, args.omega_steps)
    rows = []
    eigen_rows = []
    for d in deltas:
        link = make_link(gamma, 1.0, d)
        res = output_spectrum(link, omegas, broadening=args.broadening)
        rows.extend((d / math.pi, w / math.pi, p)
                    for w, p in zip(res.omegas, res.spectrum))
        eigen_rows.extend((d / math.pi, lam / math.pi)
                          for lam in eigenfrequencies(link, (omegas[0], omegas[-1])))
    meta = _meta(args, gamma_tau=gamma, broadening=args.broadening)
    if args.format == "json":
        write_json(args.out, {"meta": meta,
                              "heatmap": {"columns": ["delta_fsr", "omega_fsr", "power"],
                                          "rows": rows},
                              "eigenfrequencies": {"columns": ["delta_fsr", "lambda_fsr"],
                                                   "rows": eigen_rows}})
    else:
        write_csv(args.out, ["delta_fsr", "omega_fsr", "power"], rows, meta)
        write_csv(str(args.out) + ".eigen.csv",
                  ["delta_fsr", "lambda_fsr"], eigen_rows, meta)
    return 0


def cmd_protocol(args) -> int:
    g = args.gamma_tau
    link = make_link(g, 1.0, 0.0)
    if args.scan_t:
        t_lo = args.t_min if args.t_min is not None else 2.0
        t_hi = args.t_max if args.t_max is not None else 2.0 * math.pi / math.sqrt(g)
        Ts = np.arange(t_lo, t_hi + 1e-9, args.t_step)
        errs = error_vs_duration(args.kind, g, Ts, args.steps_per_tau)
        write_csv(args.out, ["T_over_tau", "infidelity"],
                  np.column_stack([Ts, errs]),
                  _meta(args, protocol=args.kind, gamma_tau=g))
        return 0
    if args.optimize:
        if args.kind == "swap":
            rec = optimal_swap(g, args.steps_per_tau)
        elif args.kind == "stirap":
            rec = optimal_stirap(g, args.steps_per_tau)
        else:
            raise SystemExit("--optimize supports swap and stirap")
        T = rec.t_opt
    else:
        if args.t is None:
            raise SystemExit("need --t (or --optimize / --scan-t)")
        T = args.t
    spec = ProtocolSpec(args.kind, g, T)
    traj, record = run_protocol(spec, link, args.steps_per_tau,
                                kappa=args.kappa_tau)
    record["meta"] = _meta(args)
    if args.kind == "czkm":
        pulses = make_pulses(spec, link)
        db = dark_bright(traj, pulses, link)
        record["dark_bright"] = {
            "t": db.t.tolist(),
            "re_d": db.d.real.tolist(), "im_d": db.d.imag.tolist(),
            "re_b": db.b.real.tolist(), "im_b": db.b.imag.tolist(),
            "u": db.u, "t_eff": db.t_eff,
        }
    write_json(args.out, record)
    return 0


def cmd_scan(args) -> int:
    grid = [float(g) for g in args.grid.split(",")]
    protocols = tuple(args.protocols.split(","))
    status = 0
    if args.loss:
        out = loss_scan(grid, kappa_tau=args.kappa_tau, protocols=protocols,
                        steps_per_tau=args.steps_per_tau)
        rows = [(kind, T, eps) for kind in out for T, eps in out[kind]["rows"]]
        write_csv(args.out, ["protocol", "T_over_tau", "loss_error"], rows,
                  _meta(args, kappa_tau=args.kappa_tau))
        write_json(str(args.out) + ".fits.json",
                   {k: out[k]["fit"] for k in out})
        return 0
    records = []
    for kind in protocols:
        for g in grid:
            try:
                recs = scan_protocols([g], (kind,), args.steps_per_tau)
                records.append(recs[0])
            except Exception as exc:  # keep scanning, flag the row
                status = 1
                from .sweep import ScanRecord
                records.append(ScanRecord(kind, g, float("nan"), float("nan"),
                                          note=f"error: {exc}"))
    rows = [(r.protocol, r.gamma0_tau, r.t_opt, r.infidelity,
             1.0 - math.exp(-args.kappa_tau * r.loss_integral), r.note)
            for r in records]
    write_csv(args.out, ["protocol", "gamma0_tau", "T_opt_over_tau",
                         "infidelity", "loss_error", "note"], rows, _meta(args))
    summary = {"crossover_gamma0_tau": crossover(records)}
    if args.ww:
        summary["ww"] = _ww_overlay(records, args)
    write_json(str(args.out) + ".summary.json", summary)
    return status


def _ww_overlay(records, args):
    """Re-run each optimized protocol point in the mode-resolved model."""
    out = []
    delta = args.delta_fsr * math.pi
    for r in records:
        if not math.isfinite(r.t_opt):
            continue
        link = make_link(r.gamma0_tau, 1.0, delta)
        M = _steps_for_modes(delta, args.n_modes, args.steps_per_tau)
        grid = make_grid(1.0, r.t_opt, M)
        spec = ProtocolSpec(r.protocol, r.gamma0_tau, r.t_opt)
        pulses = make_pulses(spec, link)
        modes = build_modes(link, args.n_modes)
        traj = evolve_ww(link, modes, pulses, (1.0, 0.0), grid)
        F = abs(traj.amplitude_at(1, r.t_opt)) ** 2
        out.append({"protocol": r.protocol, "gamma0_tau": r.gamma0_tau,
                    "T_over_tau": r.t_opt, "ww_infidelity": 1.0 - F})
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="shortlink",
        description="Emitters coupled through a short waveguide link: "
                    "delay-equation simulation, spectroscopy, and "
                    "state-transfer benchmarking.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, out_default):
        p.add_argument("--steps-per-tau", type=int, default=200)
        p.add_argument("--out", default=out_default)
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("simulate", help="time evolution of one or two emitters")
    p.add_argument("--gamma-tau", type=float, required=True)
    p.add_argument("--delta-fsr", type=float, default=50.0,
                   help="emitter frequency in free-spectral-range units")
    p.add_argument("--t-end", type=float, default=12.0)
    p.add_argument("--emitters", type=int, choices=(1, 2), default=1)
    p.add_argument("--ww", action="store_true",
                   help="add mode-resolved overlay columns")
    p.add_argument("--n-modes", type=int, default=401)
    common(p, "simulate.csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", help="output power spectrum vs detuning")
    p.add_argument("--gamma-tau", type=float, required=True)
    p.add_argument("--delta-fsr", type=float, default=50.0)
    p.add_argument("--delta-steps", type=int, default=81,
                   help="points sweeping Delta over one FSR (1 = single spectrum)")
    p.add_argument("--omega-steps", type=int, default=801)
    p.add_argument("--broadening", type=float, default=0.02)
    common(p, "spectrum.csv")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("protocol", help="run or optimize one transfer protocol")
    p.add_argument("kind", choices=("swap", "stirap", "czkm"))
    p.add_argument("--gamma-tau", type=float, required=True)
    p.add_argument("--t", type=float, help="duration in units of tau")
    p.add_argument("--optimize", action="store_true")
    p.add_argument("--scan-t", action="store_true",
                   help="emit infidelity vs duration instead of one run")
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--t-step", type=float, default=0.25)
    p.add_argument("--kappa-tau", type=float, default=0.0)
    common(p, "protocol.json")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("scan", help="protocol benchmark over a coupling grid")
    p.add_argument("--grid", default="0.05,0.1,0.2,0.5,1.0,1.44,2.0")
    p.add_argument("--protocols", default="swap,stirap,czkm")
    p.add_argument("--loss", action="store_true",
                   help="loss-error scan instead of infidelity scan")
    p.add_argument("--kappa-tau", type=float, default=0.01)
    p.add_argument("--ww", action="store_true",
                   help="append mode-resolved cross-check records")
    p.add_argument("--delta-fsr", type=float, default=50.0)
    p.add_argument("--n-modes", type=int, default=401)
    common(p, "scan.csv")
    p.set_defaults(func=cmd_scan)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
