"""Stationary-phase solution for the decay of the open system.

In units ``E_i = E0 + eps * r_i`` the persistence integrand decays as
``exp(-(eps t / hbar) * L(r1, r2))`` with

    L(r1, r2) = i (r1 - r2) + 2 D (1/(1 + r1**2) - 1/(1 + r2**2))**2

The dominant saddle sits at ``r1 = xi - i eta``, ``r2 = conj(r1)``.  The real
part of the saddle condition fixes ``xi**2`` as a function of ``eta``; the
imaginary part is a scalar equation in ``eta`` whose smallest positive root
gives the slowest decay.  The rate ratio to the isolated well is ``L / 2``.
"""
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DomainError, SolverError

EXACT = "exact"
SMALL_D = "small_D_asymptotic"
LARGE_D = "large_D_asymptotic"

# auto regime selection; both asymptotes are accurate to < 1e-10 past these
SMALL_D_CUT = 1e-15
LARGE_D_CUT = 1e6


@dataclass(frozen=True)
class SuppressionResult:
    """Saddle point and rate ratio for one value of ``D``.

    ``t_reliable`` is ``D**(-1/3)`` in units of ``hbar / eps``: the saddle
    estimate holds once ``eps t / hbar`` greatly exceeds it.
    """

    D: float
    eta: float
    xi: float
    R: float
    residual: float
    regime: str

    @property
    def t_reliable(self):
        return self.D ** (-1.0 / 3.0)


@dataclass(frozen=True)
class DecayKernel:
    E0: float
    eps: float
    D: float


def decoherence_D(gamma, sigma2, E0, U_inf, eps, hbar):
    """Dimensionless decoherence strength ``gamma hbar sigma2 (E0 + U_inf) / eps**3``."""
    if not eps > 0:
        raise DomainError(f"resonance half-width must be positive, got {eps!r}")
    if gamma < 0 or sigma2 < 0 or U_inf < 0 or E0 + U_inf <= 0:
        raise DomainError("gamma, sigma2 and U_inf must be >= 0 with E0 + U_inf > 0")
    return gamma * hbar * sigma2 * (E0 + U_inf) / eps**3


def kernel(D, r1, r2):
    """Decay exponent per unit ``eps t / hbar`` at scaled energies ``r1, r2``."""
    if isinstance(D, DecayKernel):
        D = D.D
    r1 = np.asarray(r1)
    r2 = np.asarray(r2)
    d = 1.0 / (1.0 + r1 * r1) - 1.0 / (1.0 + r2 * r2)
    return 1j * (r1 - r2) + 2.0 * D * d * d


def kernel_energy(k, E1, E2):
    """Kernel in energy variables, ``L * hbar / eps``."""
    return kernel(k.D, (np.asarray(E1) - k.E0) / k.eps, (np.asarray(E2) - k.E0) / k.eps)


def saddle_equations(D, r1, r2):
    """The two stationary-phase conditions ``(f1, f2)``; both vanish at a saddle."""
    h1 = 1.0 / (1.0 + r1 * r1)
    h2 = 1.0 / (1.0 + r2 * r2)
    d = h1 - h2
    f1 = 1j - 8.0 * D * d * r1 * h1 * h1
    f2 = 1j - 8.0 * D * d * r2 * h2 * h2
    return f1, f2


def _one_minus_eta2(eta):
    return (1.0 - eta) * (1.0 + eta)


def xi_squared(eta):
    """Real-part condition solved for ``xi**2``.

    ``3 xi**2 = sqrt((2 - eta**2)**2 + 3 eta**4) - 1 - eta**2``, evaluated in
    the cancellation-free form ``(1 - eta**2)**2 / (sqrt(...) + 1 + eta**2)``.

    Raises
    ------
    DomainError
        Outside ``0 < eta <= 1`` (the root sits at the closed-system value 1).
    """
    eta = np.asarray(eta, dtype=float)
    if np.any(eta <= 0) or np.any(eta > 1):
        raise DomainError("xi_squared is defined for 0 < eta <= 1")
    e2 = eta * eta
    out = _one_minus_eta2(eta) ** 2 / (np.sqrt((2.0 - e2) ** 2 + 3.0 * e2 * e2) + 1.0 + e2)
    return out if out.ndim else float(out)


def _g(eta, D):
    # imaginary-part condition divided by eta (removes the spurious eta = 0 root)
    x2 = xi_squared(eta)
    e2 = eta * eta
    one = _one_minus_eta2(eta)
    a = (one + x2) ** 2
    return 32.0 * D * x2 * (a + 4.0 * e2 * one) - (a + 4.0 * x2 * e2) ** 3 / eta


def ratio(D, eta, xi2=None):
    """Rate ratio for given saddle coordinates."""
    if xi2 is None:
        xi2 = xi_squared(eta)
    a = (_one_minus_eta2(eta) + xi2) ** 2 + 4.0 * xi2 * eta * eta
    return eta * (1.0 - 16.0 * D * xi2 * eta / (a * a))


def _scan_grid(D, n=1500):
    eta_min = min(1e-6, 0.08 / (27.0 * D))
    lower = np.geomspace(eta_min, 0.5, n)
    upper = 1.0 - np.geomspace(0.5, 1e-10, n)[1:]
    return np.concatenate([lower, upper])


def _residual(D, eta, xi):
    r1 = complex(xi, -eta)
    f1, f2 = saddle_equations(D, r1, r1.conjugate())
    return max(abs(f1), abs(f2))


def solve_saddle(D):
    """Smallest-``eta`` saddle for decoherence strength ``D > 0``.

    A dense scan of the imaginary-part condition over ``(0, 1)`` locates the
    first sign change; Brent's method refines it to machine precision.

    Raises
    ------
    DomainError
        If ``D <= 0``.
    SolverError
        If the scan finds no sign change.
    """
    if not D > 0:
        raise DomainError(f"D must be positive, got {D!r}")
    grid = _scan_grid(D)
    vals = _g(grid, D)
    change = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if change.size == 0:
        raise SolverError(f"no root of the saddle condition for D={D!r} on eta in [{grid[0]:.3g}, {grid[-1]:.12g}]")
    i = change[0]
    eta = optimize.brentq(_g, grid[i], grid[i + 1], args=(D,), xtol=1e-300, rtol=4 * np.finfo(float).eps,
                          maxiter=500)
    x2 = xi_squared(eta)
    xi = math.sqrt(x2)
    return SuppressionResult(D=D, eta=eta, xi=xi, R=ratio(D, eta, x2), residual=_residual(D, eta, xi),
                             regime=EXACT)


def small_D_saddle(D):
    """Asymptotic saddle ``eta = 1 - delta``, ``xi = delta``, ``delta = (D/2)**(1/3)``."""
    delta = (D / 2.0) ** (1.0 / 3.0)
    return 1.0 - delta, delta


def large_D_saddle(D):
    """Asymptotic saddle ``eta = 8 / (27 D)``, ``xi = 1/sqrt(3)``."""
    return 8.0 / (27.0 * D), 1.0 / math.sqrt(3.0)


def R_small_D(D):
    """``1 - (3/2)(D/2)**(1/3)``; meaningful only for ``D << 1``."""
    return 1.0 - 1.5 * (D / 2.0) ** (1.0 / 3.0)


def R_large_D(D):
    """``4 / (27 D)``; meaningful only for ``D >> 1``."""
    return 4.0 / (27.0 * D)


def suppression(D, method="auto"):
    """Rate ratio for ``D``, choosing the exact solve or an asymptote.

    ``method`` is ``'auto'``, ``'exact'``, ``'small'`` or ``'large'``.  Auto uses
    the asymptotes only where they agree with the exact solve to ~1e-10.
    """
    if not D > 0:
        raise DomainError(f"D must be positive, got {D!r}")
    if method == "auto":
        method = "small" if D <= SMALL_D_CUT else "large" if D >= LARGE_D_CUT else "exact"
    if method == "exact":
        return solve_saddle(D)
    if method == "small":
        eta, xi = small_D_saddle(D)
        return SuppressionResult(D, eta, xi, R_small_D(D), _residual(D, eta, xi), SMALL_D)
    if method == "large":
        eta, xi = large_D_saddle(D)
        return SuppressionResult(D, eta, xi, R_large_D(D), _residual(D, eta, xi), LARGE_D)
    raise DomainError(f"unknown method {method!r}")


def worker_count():
    """Worker cap from ``TUNNELKIT_THREADS`` (default 1)."""
    raw = os.environ.get("TUNNELKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def default_D_grid(D_min=1e-4, D_max=1e4, points=81):
    return np.logspace(math.log10(D_min), math.log10(D_max), points)


def figure2_table(D_grid=None, workers=None):
    """Solve the saddle on every ``D`` of the grid; rows keep the grid order."""
    if D_grid is None:
        D_grid = default_D_grid()
    D_grid = [float(d) for d in D_grid]
    if any(not d > 0 for d in D_grid):
        raise DomainError("all D values must be positive")

    def one(item):
        i, d = item
        try:
            return solve_saddle(d)
        except SolverError as exc:
            raise SolverError(f"row {i} (D={d!r}): {exc}") from exc

    workers = workers or worker_count()
    if workers == 1:
        return [one(item) for item in enumerate(D_grid)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, enumerate(D_grid)))
