"""Tunneling rates of the isolated well and escape-temperature conversions."""
import math
from dataclasses import dataclass

from .constants import PAPER
from .errors import DomainError
from .wkb import action_factor, freq_factor, resonance


@dataclass(frozen=True)
class ClosedRateReport:
    Gamma_instanton: float
    Gamma_wkb: float
    Lambda0: float
    a_q: float
    Lambda: float
    tau: float
    T_esc_instanton: float
    T_esc_wkb: float


def instanton_exponent(pot):
    """Bounce action over hbar, ``18 eps_s / (5 eps0)``."""
    return 18.0 * pot.eps_s / (5.0 * pot.eps0)


def instanton_rate(pot):
    """Instanton rate ``(Omega0 / 2 pi) a_q exp(-Lambda0)``.

    Returns
    -------
    (Gamma, Lambda0, a_q)

    Raises
    ------
    DomainError
        If the zero-point energy reaches the barrier top.
    """
    if pot.eps0 >= pot.eps_s:
        raise DomainError(
            f"barrier too shallow: zero-point energy {pot.eps0!r} >= barrier height {pot.eps_s!r}"
        )
    lam0 = instanton_exponent(pot)
    a_q = math.sqrt(120.0 * math.pi * lam0)
    return pot.Omega0 / (2.0 * math.pi) * a_q * math.exp(-lam0), lam0, a_q


def wkb_rate(res):
    """Closed decay rate ``exp(-Lambda) / (2 tau)``, identically ``2 eps / hbar``."""
    return math.exp(-res.Lambda) / (2.0 * res.tau)


def escape_temperature(Gamma, eps_s, tau, k_B=PAPER.k_B):
    """Temperature defined by ``Gamma = exp(-eps_s / (k_B T)) / (2 tau)``.

    Raises
    ------
    DomainError
        If ``Gamma <= 0`` or ``2 tau Gamma >= 1``; the defining relation has
        no positive solution there.
    """
    if not Gamma > 0:
        raise DomainError(f"escape temperature needs a positive rate, got {Gamma!r}")
    x = 2.0 * tau * Gamma
    if x >= 1.0:
        raise DomainError(f"rate above prefactor: 2 tau Gamma = {x!r} >= 1")
    return eps_s / (k_B * math.log(1.0 / x))


def rate_from_escape_temperature(T, eps_s, tau, k_B=PAPER.k_B):
    """Inverse of :func:`escape_temperature`."""
    return math.exp(-eps_s / (k_B * T)) / (2.0 * tau)


def wkb_escape_temperature_mixed(pot, k_B=PAPER.k_B):
    """WKB escape temperature in the mixed convention of the reference tables.

    The penetrability uses the harmonic zero-point energy,
    ``(eps_s / eps0) F(k_ref)``, while the prefactor carries the anharmonic
    frequency ratio through ``ln(Omega_GS / Omega0)``.  With ``tau = pi/Omega0``:

        T = (eps0 / k_B) / (F(k_ref) - (eps0 / eps_s) ln f(k_GS))
    """
    res = resonance(pot)
    ratio = pot.eps0 / pot.eps_s
    return pot.eps0 / k_B / (action_factor(res.k_ref) - ratio * math.log(freq_factor(res.k_GS)))


def persistence_closed(res, t):
    """Persistence probability ``exp(-2 eps t / hbar)`` of the isolated well.

    Valid while the exponential decay dominates; at very late times the
    exact survival probability crosses over to a power law, not modelled here.
    """
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t!r}")
    return math.exp(-2.0 * res.eps * t / res.hbar)


def closed_report(pot, k_B=PAPER.k_B, **conventions):
    """Collect instanton and WKB rates and their escape temperatures."""
    g_inst, lam0, a_q = instanton_rate(pot)
    res = resonance(pot, **conventions)
    tau_h = math.pi / pot.Omega0
    return ClosedRateReport(
        Gamma_instanton=g_inst,
        Gamma_wkb=wkb_rate(res),
        Lambda0=lam0,
        a_q=a_q,
        Lambda=res.Lambda,
        tau=res.tau,
        T_esc_instanton=escape_temperature(g_inst, pot.eps_s, tau_h, k_B=k_B),
        T_esc_wkb=wkb_escape_temperature_mixed(pot, k_B=k_B),
    )
