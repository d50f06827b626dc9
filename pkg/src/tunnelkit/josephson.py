"""Current-biased Josephson junction mapped onto the cubic well.

Near ``s = I / I_c -> 1`` each well of the tilted washboard is locally cubic
with barrier ``(2/3) E_J (1 - s**2)**1.5`` and small-oscillation frequency
``omega_p0 (1 - s**2)**0.25``.  The phase plays the role of the coordinate
and ``hbar**2 C / (2e)**2`` that of the mass.
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import optimize

from .closed import rate_from_escape_temperature
from .constants import PAPER, T_ESC_EXPERIMENT
from .errors import DomainError, InversionError
from .potential import CubicPotential
from .saddle import suppression
from .wkb import ANHARMONIC, action_factor, resonance, zeta, zeta_inverse

S_BRACKET = (0.9, 1.0)


@dataclass(frozen=True)
class JunctionParams:
    """Measured junction data in SI units.

    ``s`` optionally overrides ``I / I_c``; tabulated values are sometimes
    derived from a rounded bias ratio and reproduce only with it.
    """

    I: float
    C_cap: float
    R_shunt: float
    I_c: Optional[float] = None
    s: Optional[float] = None

    def __post_init__(self):
        for name in ("I", "C_cap", "R_shunt"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.I_c is not None and not self.I_c > 0:
            raise DomainError(f"I_c must be positive, got {self.I_c!r}")
        if self.s is not None and not self.s > 0:
            raise DomainError(f"s must be positive, got {self.s!r}")

    @property
    def bias_ratio(self):
        if self.s is not None:
            return self.s
        if self.I_c is None:
            raise DomainError("bias ratio needs I_c or an explicit s")
        return self.I / self.I_c


@dataclass(frozen=True)
class DerivedJunction:
    E_J: float
    M: float
    gamma: float
    s: float
    kappa: float
    eps_s: float
    omega_p0: float
    Omega0: float
    eps0: float
    hbar: float
    e: float
    k_B: float
    I: float
    C_cap: float

    @property
    def Omega0_bias_form(self):
        """``(2eI / hbar C)**0.5 s**-0.5 (1 - s**2)**0.25``, written with the bias current."""
        w_I = math.sqrt(2.0 * self.e * self.I / (self.hbar * self.C_cap))
        return w_I / math.sqrt(self.s) * self.kappa**0.5

    @property
    def Omega0_from_barrier(self):
        """``sqrt(3 eps_s / (2 (1 - s**2) M))``, finite for every ``s`` in (0, 1)."""
        return math.sqrt(1.5 * self.eps_s / (self.kappa**2 * self.M))


@dataclass(frozen=True)
class PredictionReport:
    T_esc: float
    Lambda: float
    D: float
    R: float
    regime: str
    Gamma_open: float
    Gamma_closed: float
    tau: float
    T_esc_closed: float
    T_esc_experiment: float = T_ESC_EXPERIMENT


@dataclass(frozen=True)
class InversionResult:
    """Critical current inferred from a measured rate; a lower bound on the true value."""

    I_c: float
    s: float
    k_ref: float
    rho_bar: float
    Lambda: float
    matching_constant: float
    residuals: tuple
    method: str


def derive(params, constants=PAPER):
    """Model parameters of a junction.

    Raises
    ------
    DomainError
        If ``s >= 1`` (no metastable well) or ``I_c`` is missing.
    """
    if params.I_c is None:
        raise DomainError("derive needs the critical current I_c")
    hbar, e = constants.hbar, constants.e
    s = params.bias_ratio
    if s >= 1.0:
        raise DomainError(f"no metastable well: bias ratio s={s!r} >= 1")
    kappa = math.sqrt((1.0 - s) * (1.0 + s))
    E_J = hbar * params.I_c / (2.0 * e)
    M = hbar**2 * params.C_cap / (2.0 * e) ** 2
    omega_p0 = math.sqrt(2.0 * e * params.I_c / (hbar * params.C_cap))
    Omega0 = omega_p0 * math.sqrt(kappa)
    return DerivedJunction(
        E_J=E_J, M=M, gamma=1.0 / (params.R_shunt * params.C_cap), s=s, kappa=kappa,
        eps_s=2.0 / 3.0 * E_J * kappa**3, omega_p0=omega_p0, Omega0=Omega0, eps0=0.5 * hbar * Omega0,
        hbar=hbar, e=e, k_B=constants.k_B, I=params.I, C_cap=params.C_cap,
    )


def junction_potential(dj, U_inf=0.0):
    """Cubic well in SI units with the junction's barrier and frequency."""
    return CubicPotential.from_barrier(dj.M, dj.Omega0, dj.eps_s, dj.hbar, U_inf=U_inf)


def junction_D(gamma, Omega0, Lambda, U_inf_over_E0=0.0):
    """``16 pi**3 (gamma / Omega0) (1 + U_inf/E0) exp(3 Lambda)``.

    Decoherence strength at zero temperature, with ``sigma2 ~ E0 ~ eps0``
    and ``tau = pi / Omega0``.
    """
    return 16.0 * math.pi**3 * gamma / Omega0 * (1.0 + U_inf_over_E0) * math.exp(3.0 * Lambda)


def predict_escape_temperature(dj, U_inf_over_E0=0.0, energy_convention=ANHARMONIC,
                               tau_convention=ANHARMONIC, method="auto"):
    """Escape temperature of the junction with environment-induced suppression.

    ``eps_s / (k_B T_esc) = Lambda - ln R`` with ``R = R(D)`` from the saddle
    solution; for large ``D`` this is ``Lambda + ln(27 D / 4)``.
    """
    if U_inf_over_E0 < 0:
        raise DomainError("U_inf / E0 must be >= 0")
    pot = junction_potential(dj)
    res = resonance(pot, energy_convention=energy_convention, tau_convention=tau_convention)
    D = junction_D(dj.gamma, dj.Omega0, res.Lambda, U_inf_over_E0)
    sup = suppression(D, method=method)
    g_closed = math.exp(-res.Lambda) / (2.0 * res.tau)
    return PredictionReport(
        T_esc=dj.eps_s / (dj.k_B * (res.Lambda - math.log(sup.R))),
        Lambda=res.Lambda, D=D, R=sup.R, regime=sup.regime,
        Gamma_open=sup.R * g_closed, Gamma_closed=g_closed, tau=res.tau,
        T_esc_closed=dj.eps_s / (dj.k_B * res.Lambda),
    )


def experimental_rate(T_esc, reference, k_B=None):
    """Rate for an escape temperature, with ``eps_s`` and ``tau = pi/Omega0`` of ``reference``."""
    k_B = reference.k_B if k_B is None else k_B
    return rate_from_escape_temperature(T_esc, reference.eps_s, math.pi / reference.Omega0, k_B=k_B)


def rho_bar(I, C_cap, constants=PAPER):
    """``(9 e**3 / (2 hbar C I))**0.5``."""
    e = constants.e
    return math.sqrt(9.0 * e**3 / (2.0 * constants.hbar * C_cap * I))


class _System:
    # the two matching conditions in the unknowns (s, k_ref)

    def __init__(self, I, C_cap, R_shunt, Gamma_exp, constants):
        self.rho = rho_bar(I, C_cap, constants)
        self.w2 = 2.0 * constants.e * I / (constants.hbar * C_cap)
        self.gamma = 1.0 / (R_shunt * C_cap)
        self.log_G = math.log(Gamma_exp)

    def lhs(self, s):
        return self.rho * math.sqrt(s) / ((1.0 - s) * (1.0 + s)) ** 1.25

    def Lambda(self, k):
        return action_factor(k) / (1.0 - 2.0 * zeta(k))

    def log_rate(self, s, k):
        Omega2 = self.w2 / s * math.sqrt((1.0 - s) * (1.0 + s))
        return (math.log(Omega2 / (2.0 * math.pi * self.gamma) * 4.0 / (27.0 * 16.0 * math.pi**3))
                - 4.0 * self.Lambda(k))

    def residuals(self, s, k):
        return np.array([self.lhs(s) - (1.0 - 2.0 * zeta(k)), self.log_rate(s, k) - self.log_G])

    def k_of_s(self, s):
        z = 0.5 * (1.0 - self.lhs(s))
        if not 0.0 < z < 0.5:
            raise DomainError(f"s={s!r} leaves no admissible k_ref")
        return zeta_inverse(z)


def _newton(sys, s, k, tol=1e-12, maxiter=60):
    for _ in range(maxiter):
        r = sys.residuals(s, k)
        if np.max(np.abs(r)) < tol:
            return s, k
        J = np.empty((2, 2))
        hs, hk = 1e-7 * (1.0 - s), 1e-7 * max(k, 1e-3)
        J[:, 0] = (sys.residuals(s + hs, k) - r) / hs
        J[:, 1] = (sys.residuals(s, k + hk) - r) / hk
        step = np.linalg.solve(J, -r)
        lam = 1.0
        while lam > 1e-6:
            sn, kn = s + lam * step[0], k + lam * step[1]
            if S_BRACKET[0] < sn < 1.0 and 0.0 < kn < 1.0 and 1.0 - 2.0 * zeta(kn) > 0:
                rn = sys.residuals(sn, kn)
                if np.max(np.abs(rn)) < np.max(np.abs(r)):
                    break
            lam *= 0.5
        else:
            return None
        s, k = sn, kn
    return None


def _bracketed(sys):
    # eliminate k_ref through the first condition, then root-find in s
    lo = S_BRACKET[0]
    hi = optimize.brentq(lambda s: sys.lhs(s) - 1.0, lo, 1.0 - 1e-15)
    hi = hi - 1e-12 * (1.0 - hi)

    def f(s):
        return sys.log_rate(s, sys.k_of_s(s)) - sys.log_G

    grid = np.linspace(lo, hi, 400)
    vals = [f(s) for s in grid]
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa * fb <= 0:
            s = optimize.brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
            return s, sys.k_of_s(s)
    return None


def invert_critical_current(I, C_cap, R_shunt, Gamma_exp, constants=PAPER, s0=0.997):
    """Critical current that reproduces a measured open-system rate.

    Solves for ``(s, k_ref)``:

    * ``rho_bar s**0.5 / (1 - s**2)**1.25 = 1 - 2 zeta(k_ref)`` (ground state
      at the zero-point energy, reflected level at ``eps_s - E0``);
    * ``Gamma_open(s, k_ref) = Gamma_exp`` with penetrability
      ``F(k_ref) / (1 - 2 zeta(k_ref))`` and the large-``D`` suppression.

    A damped Newton iteration runs first; a bracketed search along the first
    condition is the fallback.  The result is a lower bound on ``I_c``
    because thermal activation is neglected.

    Raises
    ------
    InversionError
        If no solution with ``s`` in (0.9, 1) exists.
    """
    if not (I > 0 and C_cap > 0 and R_shunt > 0 and Gamma_exp > 0):
        raise DomainError("I, C_cap, R_shunt and Gamma_exp must be positive")
    sys = _System(I, C_cap, R_shunt, Gamma_exp, constants)
    sol, method = None, "newton"
    try:
        sol = _newton(sys, s0, sys.k_of_s(s0))
    except (DomainError, np.linalg.LinAlgError, ValueError):
        sol = None
    if sol is None:
        method = "bracketed"
        sol = _bracketed(sys)
    if sol is None:
        r = sys.residuals(s0, sys.k_of_s(s0)) if sys.lhs(s0) < 1 else None
        raise InversionError(f"no solution with s in {S_BRACKET}", residuals=None if r is None else tuple(r))
    s, k = sol
    r = sys.residuals(s, k)
    z = zeta(k)
    F = action_factor(k)
    const = 4.0 * F / (1.0 - 2.0 * z) - 0.4 * math.log(1.0 / (1.0 - 2.0 * z)) - 0.8 * math.log(1.0 / s)
    return InversionResult(I_c=I / s, s=s, k_ref=k, rho_bar=sys.rho, Lambda=sys.Lambda(k), matching_constant=const,
                           residuals=tuple(float(x) for x in r), method=method)


# measured junction; s is the rounded bias ratio behind the tabulated values
PAPER_JUNCTION = JunctionParams(I=24.710e-6, I_c=24.873e-6, C_cap=4.28e-12, R_shunt=9.3, s=0.99345)
