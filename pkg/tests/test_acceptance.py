"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run ``python3 tests/test_acceptance.py`` for the lines alone, or pytest for the
full report (the lines are repeated in the terminal summary).
"""
import math

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from oracles import saddle_by_scan
from tunnelkit import config, josephson as jj, spectral as sp, wkb
from tunnelkit.closed import closed_report
from tunnelkit.constants import PAPER, T_ESC_EXPERIMENT
from tunnelkit.potential import CubicPotential
from tunnelkit.saddle import default_D_grid, figure2_table, saddle_equations, solve_saddle, suppression
from tunnelkit.wkb import ResonanceData


class Checks:
    def __init__(self, number, title):
        self.number, self.title, self.items = number, title, []

    def near(self, name, value, target, tol, rel=False):
        err = abs(value - target) / abs(target) if rel else abs(value - target)
        self.items.append((name, err <= tol, f"{name}={value:.6g} (target {target:g} {'±' if not rel else 'rel '}{tol:g})"))

    def true(self, name, ok, detail=""):
        self.items.append((name, bool(ok), f"{name}{': ' + detail if detail else ''}"))

    def report(self):
        ok = all(i[1] for i in self.items)
        failed = [i[2] for i in self.items if not i[1]]
        shown = failed if failed else [i[2] for i in self.items]
        line = f"criterion {self.number} [{self.title}]: {'PASS' if ok else 'FAIL'} | " + "; ".join(shown)
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok


def paper_junction():
    j = config.paper_preset().junction
    return jj.derive(jj.JunctionParams(I=j.I, C_cap=j.C_cap, R_shunt=j.R_shunt, I_c=j.I_c, s=j.s), PAPER)


def criterion_1():
    c = Checks(1, "closed-system reference numbers")
    rep = closed_report(jj.junction_potential(paper_junction()), k_B=PAPER.k_B)
    c.near("Lambda0", rep.Lambda0, 12.376, 0.005)
    c.near("a_q", rep.a_q, 68.306, 0.05)
    c.near("T_inst_mK", rep.T_esc_instanton * 1e3, 72.345, 0.1)
    c.near("T_WKB_mK", rep.T_esc_wkb * 1e3, 70.869, 0.2)
    return c.report()


def criterion_2():
    c = Checks(2, "WKB ground-state parametrization")
    pot = jj.junction_potential(paper_junction())
    res = wkb.resonance(pot)
    rep = closed_report(pot)
    c.near("k_GS", res.k_GS, 0.1152, 0.0005)
    c.near("zeta(k_GS)", wkb.zeta(res.k_GS), 0.1423, 0.0005)
    c.near("f(k_GS)", res.f_GS, 0.9550, 0.0005)
    c.near("k_ref", res.k_ref, 0.2433, 0.001)
    c.near("F(k_ref)", wkb.action_factor(res.k_ref), 2.4073, 0.002)
    c.near("Lambda", res.Lambda, 8.459, 0.01)
    c.near("Lambda0-ln(a_q)", rep.Lambda0 - math.log(rep.a_q), 8.152, 0.01)
    return c.report()


def criterion_3():
    c = Checks(3, "junction derivation")
    dj = paper_junction()
    k = PAPER.k_B
    c.near("eps_s/k_B [mK]", dj.eps_s / k * 1e3, 589.74, 1e-3, rel=True)
    c.near("Omega0", dj.Omega0, 44.918e9, 1e-3, rel=True)
    c.near("eps0/k_B [mK]", dj.eps0 / k * 1e3, 171.55, 1e-3, rel=True)
    c.near("gamma", dj.gamma, 25.123e9, 1e-3, rel=True)
    c.near("omega_p0", dj.omega_p0, 132.88e9, 1e-3, rel=True)
    c.near("E_J/k_B [K]", dj.E_J / k, 592.9, 1e-3, rel=True)
    return c.report()


def criterion_4():
    c = Checks(4, "open-system prediction")
    rep = jj.predict_escape_temperature(paper_junction())
    c.near("T_esc [mK]", rep.T_esc * 1e3, 14.255, 0.01, rel=True)
    return c.report()


def criterion_5():
    c = Checks(5, "critical-current inversion")
    G = jj.experimental_rate(T_ESC_EXPERIMENT, paper_junction())
    j = config.paper_preset().junction
    inv = jj.invert_critical_current(j.I, j.C_cap, j.R_shunt, G)
    c.near("I_c [uA]", inv.I_c * 1e6, 24.789, 1e-3, rel=True)
    c.near("s", inv.s, 0.9968, 0.0005)
    c.near("k_ref", inv.k_ref, 0.1162, 0.001)
    c.near("rho_bar", inv.rho_bar, 1.288e-3, 1e-3, rel=True)
    return c.report()


def criterion_6():
    c = Checks(6, "suppression curve")
    rows = figure2_table(default_D_grid(1e-4, 1e4, 81))
    R = np.array([r.R for r in rows])
    D = np.array([r.D for r in rows])
    c.true("81 points", len(rows) == 81)
    c.true("R strictly decreasing", np.all(np.diff(R) < 0))
    c.true("R < 1", np.all(R < 1))
    small = D <= 1e-4 * (1 + 1e-12)
    dev_small = np.max(np.abs(R[small] - (1 - 1.5 * (D[small] / 2) ** (1 / 3))))
    c.true("small-D asymptote", dev_small < 0.01, f"max dev {dev_small:.3g}")
    large = D >= 1e3 * (1 - 1e-12)
    dev_large = np.max(np.abs(R[large] * 27 * D[large] / 4 - 1))
    c.true("large-D asymptote", dev_large < 0.01, f"max dev {dev_large:.3g}")
    f1 = max(abs(saddle_equations(r.D, complex(r.xi, -r.eta), complex(r.xi, r.eta))[0]) for r in rows)
    c.true("|f1| < 1e-9", f1 < 1e-9, f"max {f1:.3g}")
    return c.report()


def criterion_7():
    c = Checks(7, "saddle at D = 1")
    eta_o, _, R_o = saddle_by_scan(1.0)
    res = solve_saddle(1.0)
    c.near("eta", res.eta, 0.246, 0.005)
    c.near("R", res.R, 0.134, 0.005)
    c.true("oracle agreement", abs(res.eta - eta_o) < 1e-9 and abs(res.R - R_o) < 1e-9,
           f"oracle eta={eta_o:.9f} R={R_o:.9f}")
    return c.report()


def criterion_8():
    c = Checks(8, "persistence oracle vs saddle")
    s = np.linspace(2, 6, 21)
    for D in (0.1, 1.0):
        rho2 = sp.persistence_quadrature(D, s)
        fit = sp.fit_decay_rate(s, rho2, window=(2, 6))
        target = 2 * suppression(D).R
        c.near(f"log-slope/(2R) at D={D}", fit.rate / target, 1.0, 0.25)
    t = np.linspace(1, 4, 31)
    rel = np.max(np.abs(sp.persistence_quadrature(0.0, t) / np.exp(-2 * t) - 1))
    c.true("gamma=0 within 5%", rel < 0.05, f"max rel dev {rel:.3g}")
    return c.report()


def _kramers_packet(n, env):
    res = ResonanceData.from_pole(E0=4.0, eps=0.2)
    p = np.linspace(0.5, 5.5, n)
    g = np.exp(-((p - 3.0) ** 2) / 0.6**2) * np.exp(0.7j * p)
    return sp.SpectralField(axis=p, values=np.outer(g, g.conj()), t=0.0, res=res, env=env, basis=sp.MOMENTUM)


def criterion_9():
    c = Checks(9, "structural invariants")
    pot = CubicPotential.natural(lam=0.6)
    errs = []
    for k in (0.1, 0.3, 0.5, 0.7, 0.9):
        E = 2 * pot.eps_s * wkb.zeta(k)
        xl, xr, _ = pot.turning_points(E)
        S = wkb.action(pot, E, xl, xr)
        errs.append(abs(S / (wkb.action_factor(k) * pot.eps_s / pot.Omega0) - 1))
    c.true("elliptic vs quadrature", max(errs) < 1e-6, f"max rel {max(errs):.2g}")
    errs = []
    for frac in (0.1, 0.27, 0.45):
        E = frac * pot.eps_s
        _, xr, xo = pot.turning_points(E)
        xl2, xr2, _ = pot.turning_points(pot.eps_s - E)
        errs.append(abs(wkb.action(pot, E, xr, xo) / wkb.action(pot, pot.eps_s - E, xl2, xr2) - 1))
    c.true("reflection", max(errs) < 1e-6, f"max rel {max(errs):.2g}")

    res = ResonanceData.from_pole(E0=1.0, eps=1e-2)
    f0 = sp.init_false_vacuum(res, sp.EnvironmentParams.for_D(1.0, res, 0.5), half_width=20)
    a = sp.evolve_phase_shift(sp.evolve_phase_shift(f0, 70.0), 130.0)
    b = sp.evolve_phase_shift(f0, 200.0)
    semi = np.max(np.abs(a.values - b.values))
    kr = sp.evolve_kramers_local(_kramers_packet(81, sp.EnvironmentParams(0.5, 0.05)), 1e-3, 200)
    herm = max(b.hermiticity_residual(), kr.hermiticity_residual())
    c.true("semigroup", semi < 1e-12, f"{semi:.2g}")
    c.true("Hermiticity", herm < 1e-12, f"{herm:.2g}")

    f = _kramers_packet(101, sp.EnvironmentParams(0.5, 0.0))
    g = sp.evolve_kramers_local(f, 0.2 * sp.kramers_time_limit(f, phase=False), 400, phase=False, decoherence=False)
    leak = abs(sp.total_weight(g) + g.outflow - sp.total_weight(f))
    c.true("drift conservation", leak < 1e-6, f"residual {leak:.2g}")

    sols = []
    env = sp.EnvironmentParams(0.5, 0.02)
    for k in range(3):
        fk = _kramers_packet(100 * 2**k + 1, env)
        sols.append(sp.evolve_kramers_local(fk, 0.004 / 2**k, 200 * 2**k, phase=False, decoherence=False).values)
    e0 = np.sqrt(np.mean(np.abs(sols[0] - sols[2][::4, ::4]) ** 2))
    e1 = np.sqrt(np.mean(np.abs(sols[1][::2, ::2] - sols[2][::4, ::4]) ** 2))
    c.true("refinement factor >= 3", e0 / e1 >= 3, f"{e0 / e1:.3g}")
    return c.report()


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [crit() for crit in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
