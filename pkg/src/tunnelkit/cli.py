"""Command-line front end.

Exit status is 0 on success, 2 on invalid input and 3 when a solver fails.
"""
import argparse
import dataclasses
import math
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .closed import closed_report
from .constants import get_constants
from .errors import SolverError, TunnelkitError
from .josephson import (JunctionParams, derive, experimental_rate, invert_critical_current, junction_potential,
                        predict_escape_temperature)
from .output import fmt, write_csv, write_json
from .potential import CubicPotential
from .saddle import SMALL_D_CUT, default_D_grid, figure2_table, suppression
from .spectral import (EnvironmentParams, diagnostics, evolve_phase_shift, fit_decay_rate, init_false_vacuum,
                       persistence, write_snapshot, write_timeseries)
from .wkb import resonance

EXIT_OK, EXIT_INVALID, EXIT_SOLVER = 0, 2, 3


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output directory (overrides output.dir)")
    common.add_argument("--paper", action="store_true",
                        help="use the measured junction with reference conventions and constants")

    p = argparse.ArgumentParser(prog="tunnelkit", description="Tunneling rates with and without decoherence.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("closed", parents=[common], help="rates and escape temperatures of the isolated well")

    s = sub.add_parser("suppression", parents=[common], help="rate ratio R(D) on a log grid")
    s.add_argument("--dmin", type=float)
    s.add_argument("--dmax", type=float)
    s.add_argument("--points", type=int)
    s.add_argument("--workers", type=int)

    e = sub.add_parser("evolve", parents=[common], help="phase-shift evolution and persistence")
    e.add_argument("--D", type=float, help="decoherence strength (sets gamma)")
    e.add_argument("--t-max", type=float, help="final time in units of hbar/eps")
    e.add_argument("--samples", type=int)
    e.add_argument("--snapshot-every", type=int)

    j = sub.add_parser("junction", help="Josephson junction pipelines")
    jsub = j.add_subparsers(dest="action", required=True)
    jp = jsub.add_parser("predict", parents=[common], help="predict the escape temperature")
    jp.add_argument("--U-inf-over-E0", type=float, dest="U_inf_over_E0")
    ji = jsub.add_parser("invert", parents=[common], help="infer the critical current from a measured rate")
    g = ji.add_mutually_exclusive_group()
    g.add_argument("--T-esc-exp", type=float, dest="T_esc_exp", help="measured escape temperature [K]")
    g.add_argument("--gamma-exp", type=float, dest="Gamma_exp", help="measured rate [1/s]")
    return p


def _mode(args):
    return f"junction-{args.action}" if args.command == "junction" else args.command


def _set(section, name, value):
    if value is not None:
        setattr(section, name, value)


def resolve_config(args):
    """Merge the config file, the preset and command-line overrides."""
    cfg = cfgmod.load(args.config) if args.config else cfgmod.RunConfig()
    if args.paper:
        preset = cfgmod.paper_preset()
        cfg.units, cfg.junction, cfg.conventions = preset.units, preset.junction, preset.conventions
    mode = _mode(args)
    if cfg.mode is not None and cfg.mode != mode:
        raise cfgmod.ConfigError(f"config mode {cfg.mode!r} does not match subcommand {mode!r}")
    cfg.mode = mode
    if args.out:
        cfg.output.dir = args.out
    _set(cfg.suppression, "D_min", getattr(args, "dmin", None))
    _set(cfg.suppression, "D_max", getattr(args, "dmax", None))
    _set(cfg.suppression, "points", getattr(args, "points", None))
    _set(cfg.solver, "workers", getattr(args, "workers", None))
    _set(cfg.environment, "D", getattr(args, "D", None))
    _set(cfg.evolve, "t_max", getattr(args, "t_max", None))
    _set(cfg.evolve, "samples", getattr(args, "samples", None))
    _set(cfg.evolve, "snapshot_every", getattr(args, "snapshot_every", None))
    _set(cfg.conventions, "U_inf_over_E0", getattr(args, "U_inf_over_E0", None))
    _set(cfg.inversion, "T_esc_exp", getattr(args, "T_esc_exp", None))
    _set(cfg.inversion, "Gamma_exp", getattr(args, "Gamma_exp", None))
    if cfg.mode.startswith("junction") and cfg.junction is None:
        cfg.junction = cfgmod.JunctionSection()
    return cfgmod.validate(cfg)


def _junction_params(cfg):
    j = cfg.junction
    return JunctionParams(I=j.I, C_cap=j.C_cap, R_shunt=j.R_shunt, I_c=j.I_c, s=j.s)


def _potential(cfg):
    """Potential and Boltzmann constant (1 in natural units)."""
    if cfg.junction is not None:
        const = get_constants(cfg.conventions.constants)
        return junction_potential(derive(_junction_params(cfg), const)), const.k_B
    p = cfg.potential or cfgmod.PotentialSection()
    return CubicPotential(M=p.M, Omega0=p.Omega0, lam=p.lam, U_inf=p.U_inf, hbar=p.hbar), 1.0


def _units(cfg):
    return ("s", "J", "K") if cfg.junction is not None else ("1/Omega0", "hbar*Omega0", "hbar*Omega0/k_B")


def _table(rows):
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v if isinstance(v, str) else fmt(v)}" for k, v in rows)


def _outdir(cfg):
    out = Path(cfg.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def run_closed(cfg):
    pot, k_B = _potential(cfg)
    c = cfg.conventions
    rep = closed_report(pot, k_B=k_B, energy_convention=c.energy, tau_convention=c.tau)
    res = resonance(pot, energy_convention=c.energy, tau_convention=c.tau)
    _, _, T = _units(cfg)
    payload = {"units": {"temperature": T}, "report": dataclasses.asdict(rep),
               "resonance": {"E0": res.E0, "eps": res.eps, "k_GS": res.k_GS, "k_ref": res.k_ref,
                             "f_GS": res.f_GS, "Lambda0_minus_ln_a_q": rep.Lambda0 - math.log(rep.a_q)}}
    write_json(_outdir(cfg) / "closed.json", payload)
    print(_table(list(payload["report"].items()) + list(payload["resonance"].items())))


def run_suppression(cfg):
    sup = cfg.suppression
    grid = default_D_grid(sup.D_min, sup.D_max, sup.points)
    rows = figure2_table(grid, workers=cfg.solver.workers)
    path = write_csv(_outdir(cfg) / "suppression.csv", ["D", "R", "eta", "xi", "residual"],
                     [(r.D, r.R, r.eta, r.xi, r.residual) for r in rows], ["1"] * 5)
    print(f"wrote {len(rows)} rows to {path}")


def run_evolve(cfg):
    pot, _ = _potential(cfg)
    c = cfg.conventions
    res = resonance(pot, energy_convention=c.energy, tau_convention=c.tau)
    env_cfg = cfg.environment
    sigma2 = pot.eps0 if env_cfg.sigma2 is None else env_cfg.sigma2
    if env_cfg.D is not None:
        env = EnvironmentParams.for_D(env_cfg.D, res, sigma2, pot.U_inf) if env_cfg.D > 0 else EnvironmentParams(0.0, sigma2)
    else:
        env = EnvironmentParams(env_cfg.gamma, sigma2)
    D = env.D(res, pot.U_inf)
    f0 = init_false_vacuum(res, env, cfg.grid.half_width, cfg.grid.spacing, U_inf=pot.U_inf, M=pot.M)
    out = _outdir(cfg)
    unit = res.hbar / res.eps
    s = np.linspace(0.0, cfg.evolve.t_max, cfg.evolve.samples)
    rows = []
    for i, si in enumerate(s):
        ft = evolve_phase_shift(f0, si * unit)
        N, meanE = diagnostics(ft)
        rows.append((ft.t, persistence(f0, ft), N, meanE))
        if cfg.evolve.snapshot_every and i % cfg.evolve.snapshot_every == 0:
            write_snapshot(out / f"snapshot_{i:04d}.csv", ft)
    t_unit, e_unit, _ = _units(cfg)
    write_timeseries(out / "timeseries.csv", rows, time_unit=t_unit, energy_unit=e_unit)
    summary = {"D": D, "gamma": env.gamma, "sigma2": env.sigma2, "eps": res.eps, "E0": res.E0,
               "closed_rate": 2.0 * res.eps / res.hbar}
    lo, hi = cfg.solver.fit_window
    if D > 0:
        summary["R_saddle"] = suppression(D).R if D > SMALL_D_CUT else 1.0
    if s[-1] >= hi:
        fit = fit_decay_rate(s, [r[1] for r in rows], window=(lo, hi))
        summary["fitted_rate_over_closed"] = fit.rate / 2.0
    write_json(out / "evolve.json", summary)
    print(_table(list(summary.items())))


def _derived_payload(dj):
    k = dj.k_B
    return {"E_J_over_kB_K": dj.E_J / k, "eps_s_over_kB_mK": dj.eps_s / k * 1e3, "eps0_over_kB_mK": dj.eps0 / k * 1e3,
            "Omega0": dj.Omega0, "omega_p0": dj.omega_p0, "gamma": dj.gamma, "s": dj.s, "M": dj.M}


def run_predict(cfg):
    const = get_constants(cfg.conventions.constants)
    dj = derive(_junction_params(cfg), const)
    c = cfg.conventions
    rep = predict_escape_temperature(dj, U_inf_over_E0=c.U_inf_over_E0, energy_convention=c.energy,
                                     tau_convention=c.tau)
    payload = {"inputs": dataclasses.asdict(cfg.junction), "conventions": dataclasses.asdict(c),
               "derived": _derived_payload(dj),
               "prediction": dict(dataclasses.asdict(rep), T_esc_mK=rep.T_esc * 1e3)}
    write_json(_outdir(cfg) / "junction_predict.json", payload)
    print(_table(list(payload["derived"].items()) + list(payload["prediction"].items())))


def run_invert(cfg):
    const = get_constants(cfg.conventions.constants)
    j, inv = cfg.junction, cfg.inversion
    if inv.Gamma_exp is not None:
        G = inv.Gamma_exp
    else:
        ref = derive(JunctionParams(I=j.I, C_cap=j.C_cap, R_shunt=j.R_shunt, I_c=inv.reference_I_c,
                                    s=inv.reference_s), const)
        G = experimental_rate(inv.T_esc_exp, ref)
    r = invert_critical_current(j.I, j.C_cap, j.R_shunt, G, constants=const)
    payload = {"inputs": {"I": j.I, "C_cap": j.C_cap, "R_shunt": j.R_shunt, "Gamma_exp": G},
               "inversion": dict(dataclasses.asdict(r), I_c_uA=r.I_c * 1e6, residuals=list(r.residuals)),
               "note": "I_c is a lower bound: thermal activation is neglected"}
    write_json(_outdir(cfg) / "junction_invert.json", payload)
    print(_table([(k, v) for k, v in payload["inversion"].items() if k != "residuals"]))


RUNNERS = {"closed": run_closed, "suppression": run_suppression, "evolve": run_evolve,
           "junction-predict": run_predict, "junction-invert": run_invert}


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        RUNNERS[cfg.mode](cfg)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (TunnelkitError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
