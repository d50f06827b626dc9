"""Evolution of the energy-representation coefficients of the decaying state.

Two evolutions are provided.  The phase-shift form is exact and pointwise:
each pair of energies decays with its own rate.  The local Kramers form is
stepped on a momentum lattice by operator splitting and is meant for
demonstration-scale runs.  A direct double sum of the persistence integral
serves as an oracle independent of the saddle-point estimate.
"""
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import ConfigError, DivergenceError, DomainError, SolverError
from .output import write_csv
from .saddle import kernel
from .wkb import ResonanceData, norm_profile, phase_shift_derivative

ENERGY = "energy"
MOMENTUM = "momentum"

DEFAULT_HALF_WIDTH = 60.0  # in units of eps
DEFAULT_SPACING = 0.1  # in units of eps
MIN_HALF_WIDTH = 5.0
CFL_MAX = 0.25


@dataclass(frozen=True)
class EnvironmentParams:
    """Dissipation rate ``gamma`` and diffusion coefficient ``sigma2`` (an energy)."""

    gamma: float = 0.0
    sigma2: float = 0.0

    def __post_init__(self):
        if self.gamma < 0 or self.sigma2 < 0:
            raise DomainError(f"gamma and sigma2 must be >= 0, got {self.gamma!r}, {self.sigma2!r}")

    @classmethod
    def for_D(cls, D, res, sigma2, U_inf=0.0):
        """Environment whose decoherence strength is ``D`` for the resonance ``res``."""
        if D < 0 or not sigma2 > 0:
            raise DomainError("need D >= 0 and sigma2 > 0")
        gamma = D * res.eps**3 / (res.hbar * sigma2 * (res.E0 + U_inf))
        return cls(gamma=gamma, sigma2=sigma2)

    def D(self, res, U_inf=0.0):
        return self.gamma * res.hbar * self.sigma2 * (res.E0 + U_inf) / res.eps**3


@dataclass
class SpectralField:
    """Coefficients on a square lattice shared by both indices.

    ``axis`` holds energies (``basis='energy'``) or momenta
    (``basis='momentum'``), uniformly spaced.  ``values[i, j]`` is the
    coefficient at ``(axis[i], axis[j])``.  ``outflow`` accumulates the weight
    ``sum(C) dp**2`` that left through the lattice edges during Kramers steps.
    """

    axis: np.ndarray
    values: np.ndarray
    t: float
    res: ResonanceData
    env: EnvironmentParams
    basis: str = ENERGY
    U_inf: float = 0.0
    M: float = 1.0
    raw_mass: float = 1.0
    outflow: complex = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def spacing(self):
        return float(self.axis[1] - self.axis[0])

    @property
    def weights(self):
        return trapezoid_weights(self.axis)

    def hermiticity_residual(self):
        """Max-norm of ``C - C^H`` relative to ``max |C|``."""
        scale = np.abs(self.values).max() or 1.0
        return float(np.abs(self.values - self.values.conj().T).max() / scale)

    def copy(self, **changes):
        changes.setdefault("values", self.values.copy())
        return replace(self, **changes)


class DecayFit(NamedTuple):
    rate: float
    alpha: float
    intercept: float


@dataclass(frozen=True)
class DecoherenceScales:
    """Time and length scales of decoherence, see :func:`decoherence_scales`."""

    tau_R: float
    lambda_B: float
    l_D: float
    alpha: float
    tau_D: float
    tau_tunn: float
    D: float

    @property
    def tau_D_identity(self):
        """Second form ``tau_tunn / (alpha**4 D)``, equal to ``tau_D``."""
        return self.tau_tunn / (self.alpha**4 * self.D)


def trapezoid_weights(axis):
    """Trapezoid quadrature weights of a uniform axis."""
    axis = np.asarray(axis, dtype=float)
    if axis.size < 2:
        raise ConfigError("a grid needs at least two nodes")
    w = np.full(axis.size, axis[1] - axis[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def lorentzian_mass(half_width):
    """Exact Lorentzian mass within ``|E - E0| <= half_width * eps``."""
    return 2.0 / math.pi * math.atan(half_width)


def energy_axis(res, half_width=DEFAULT_HALF_WIDTH, spacing=DEFAULT_SPACING):
    """Uniform energies ``E0 + eps * r`` for ``r`` in ``[-half_width, half_width]``."""
    if half_width < MIN_HALF_WIDTH:
        raise ConfigError(f"grid too narrow: half-width {half_width!r} eps < {MIN_HALF_WIDTH} eps")
    if not spacing > 0:
        raise ConfigError(f"grid spacing must be positive, got {spacing!r}")
    n = int(round(half_width / spacing))
    if not math.isclose(n * spacing, half_width, rel_tol=1e-9):
        raise ConfigError("half-width must be an integer multiple of the spacing")
    r = np.arange(-n, n + 1) * spacing
    return res.E0 + res.eps * r


def init_false_vacuum(res, env=None, half_width=DEFAULT_HALF_WIDTH, spacing=DEFAULT_SPACING, U_inf=0.0,
                      M=1.0):
    """Product initial condition ``C = sqrt(w(E1) w(E2))`` of the false vacuum.

    Parameters
    ----------
    res : ResonanceData
    env : EnvironmentParams, optional
    half_width, spacing : float
        Grid extent and spacing in units of ``eps``.
    U_inf : float
        Plateau depth entering the decoherence term.
    M : float
        Mass, used only by momentum conversions.

    Returns
    -------
    SpectralField
        Renormalized so that ``sum w_i w_j |C_ij|**2 = 1``.  The Lorentzian
        mass captured before renormalization is kept in ``raw_mass``.
    """
    env = env or EnvironmentParams()
    E = energy_axis(res, half_width, spacing)
    wt = trapezoid_weights(E)
    w = norm_profile(res, E)
    raw = float(wt @ w)
    w = w / raw
    C = np.sqrt(np.outer(w, w)).astype(complex)
    return SpectralField(axis=E, values=C, t=0.0, res=res, env=env, basis=ENERGY, U_inf=U_inf, M=M,
                         raw_mass=raw)


def decay_exponent(fld):
    """Phase-shift generator ``L[E1, E2]`` on the lattice of ``fld`` (units 1/time)."""
    if fld.basis != ENERGY:
        raise ConfigError("phase-shift evolution needs an energy-basis field")
    res, env = fld.res, fld.env
    E = fld.axis
    d = phase_shift_derivative(res, E)
    dd = d[:, None] - d[None, :]
    return 1j * (E[:, None] - E[None, :]) / res.hbar + 2.0 * env.gamma * env.sigma2 * (res.E0 + fld.U_inf) * dd * dd


def evolve_phase_shift(fld, t):
    """Advance ``fld`` by ``t`` with ``C <- exp(-L t) C``; exact, no stepping."""
    if t < 0:
        raise DomainError(f"time step must be >= 0, got {t!r}")
    L = decay_exponent(fld)
    return fld.copy(values=np.exp(-L * t) * fld.values, t=fld.t + t)


def _same_grid(a, b):
    return a.basis == b.basis and a.axis.shape == b.axis.shape and np.array_equal(a.axis, b.axis)


def persistence(field0, fieldt):
    """Persistence probability ``rho**2`` between two fields on the same lattice.

    Raises
    ------
    ValueError
        If the lattices differ.
    SolverError
        If the imaginary part exceeds 1e-10 (Hermiticity lost).
    """
    if not _same_grid(field0, fieldt):
        raise ValueError("persistence needs both fields on the same grid")
    W = np.outer(field0.weights, field0.weights)
    num = np.sum(W * fieldt.values * field0.values.conj())
    den = np.sum(W * np.abs(field0.values) ** 2)
    rho2 = num / den
    if abs(rho2.imag) > 1e-10:
        raise SolverError(f"persistence has imaginary residue {rho2.imag!r}")
    return float(rho2.real)


def persistence_quadrature(D, s, half_width=DEFAULT_HALF_WIDTH, spacing=DEFAULT_SPACING):
    """Direct double sum of the persistence integral at scaled times ``s``.

    ``s = eps t / hbar``.  In scaled energies ``r`` the weight is
    ``1 / (pi (1 + r**2))`` and the integrand decays with the kernel of
    :mod:`tunnelkit.saddle`, so the result depends on ``D`` alone.
    """
    n = int(round(half_width / spacing))
    r = np.arange(-n, n + 1) * spacing
    wt = np.full(r.size, spacing)
    wt[[0, -1]] *= 0.5
    w = wt / (math.pi * (1.0 + r * r))
    K = kernel(D, r[:, None], r[None, :])
    norm = w.sum() ** 2
    out = []
    for si in np.atleast_1d(np.asarray(s, dtype=float)):
        val = w @ np.exp(-si * K) @ w / norm
        out.append(val.real)
    return np.array(out)


def fit_decay_rate(s, rho2, window=(2.0, 6.0), prefactor=False):
    """Least-squares decay rate of ``log rho2`` over ``window`` of scaled time.

    With ``prefactor=True`` the model is ``c - rate s - alpha log s``, which
    absorbs the power-law prefactor of the stationary-phase estimate;
    otherwise ``alpha`` is 0.
    """
    s = np.asarray(s, dtype=float)
    y = np.log(np.asarray(rho2, dtype=float))
    mask = (s >= window[0]) & (s <= window[1])
    if mask.sum() < (3 if prefactor else 2):
        raise ConfigError(f"too few samples in fit window {window}")
    cols = [np.ones(mask.sum()), -s[mask]]
    if prefactor:
        cols.append(-np.log(s[mask]))
    coef, *_ = np.linalg.lstsq(np.column_stack(cols), y[mask], rcond=None)
    return DecayFit(rate=float(coef[1]), alpha=float(coef[2]) if prefactor else 0.0, intercept=float(coef[0]))


# ---------------------------------------------------------------------------
# momentum representation and the local Kramers equation

def energy_of_momentum(p, M, U_inf):
    return np.asarray(p, dtype=float) ** 2 / (2.0 * M) - U_inf


def momentum_of_energy(E, M, U_inf):
    E = np.asarray(E, dtype=float)
    if np.any(E + U_inf <= 0):
        raise DomainError("energies must exceed -U_inf to map to a real momentum")
    return np.sqrt(2.0 * M * (E + U_inf))


def _interp(axis, values, q1, q2):
    opts = dict(method="linear", bounds_error=False, fill_value=0.0)
    re = RegularGridInterpolator((axis, axis), values.real, **opts)
    im = RegularGridInterpolator((axis, axis), values.imag, **opts)
    pts = np.stack(np.meshgrid(q1, q2, indexing="ij"), axis=-1)
    return re(pts) + 1j * im(pts)


def to_momentum(fld, p_axis):
    """Resample onto momenta with ``C_p(p1, p2) = sqrt(p1 p2) C_E(E1, E2)``."""
    if fld.basis != ENERGY:
        raise ConfigError("field is not in the energy basis")
    p = np.asarray(p_axis, dtype=float)
    if np.any(p <= 0):
        raise DomainError("momentum axis must be positive for the energy mapping")
    E = energy_of_momentum(p, fld.M, fld.U_inf)
    C = _interp(fld.axis, fld.values, E, E) * np.sqrt(np.outer(p, p))
    return fld.copy(axis=p, values=C, basis=MOMENTUM)


def to_energy(fld, E_axis):
    """Inverse of :func:`to_momentum` onto the energies ``E_axis``."""
    if fld.basis != MOMENTUM:
        raise ConfigError("field is not in the momentum basis")
    E = np.asarray(E_axis, dtype=float)
    p = momentum_of_energy(E, fld.M, fld.U_inf)
    C = _interp(fld.axis, fld.values, p, p) / np.sqrt(np.outer(p, p))
    return fld.copy(axis=E, values=C, basis=ENERGY)


def diagnostics(fld):
    """Norm ``N`` and mean energy from the diagonal (trapezoid rule).

    In the momentum basis ``dE = p dp / M`` and ``C_E = C_p / p``, so the
    diagonal sums pick up a factor ``1 / M``.
    """
    diag = np.real(np.diag(fld.values))
    wt = fld.weights
    if fld.basis == ENERGY:
        E = fld.axis
        scale = 1.0
    else:
        E = energy_of_momentum(fld.axis, fld.M, fld.U_inf)
        scale = 1.0 / fld.M
    N = scale * float(wt @ diag)
    meanE = scale * float(wt @ (E * diag)) / N if N != 0 else math.nan
    return N, meanE


def momentum_second_moment(fld):
    """``<p**2 / M>`` over the momentum diagonal, unnormalized (times ``N``)."""
    if fld.basis != MOMENTUM:
        raise ConfigError("field is not in the momentum basis")
    diag = np.real(np.diag(fld.values))
    return float(fld.weights @ (fld.axis**2 / fld.M * diag)) / fld.M


def kramers_time_limit(fld, phase=True, drift=True, diffusion=True):
    """Largest stable step before the safety factor."""
    p = fld.axis
    dp = fld.spacing
    pmax = float(np.abs(p).max())
    g, s2, M = fld.env.gamma, fld.env.sigma2, fld.M
    limits = []
    if phase and pmax > 0:
        limits.append(fld.res.hbar * M / pmax**2)
    if drift and g > 0 and pmax > 0:
        limits.append(dp / (g * pmax))
    if diffusion and g > 0 and s2 > 0:
        limits.append(dp * dp / (g * M * s2))
    return min(limits) if limits else math.inf


def _local_generator(fld, phase, decoherence):
    p = fld.axis
    M, hbar = fld.M, fld.res.hbar
    L = np.zeros((p.size, p.size), dtype=complex)
    if phase:
        L += 1j * (p[:, None] ** 2 - p[None, :] ** 2) / (2.0 * M * hbar)
    if decoherence and fld.env.gamma > 0 and fld.env.sigma2 > 0:
        dp_ = p / M * phase_shift_derivative(fld.res, energy_of_momentum(p, M, fld.U_inf))
        dd = dp_[:, None] - dp_[None, :]
        L += fld.env.gamma * M * fld.env.sigma2 * dd * dd
    return L


def _fd_rhs(C, p, dp, gamma, K):
    """Drift and diffusion along the lattice diagonals in flux form.

    Returns the time derivative and the rate at which ``sum(C) dp**2`` leaves
    through the edges.  Face ``(a, b)`` sits between nodes ``(a-1, b-1)`` and
    ``(a, b)``; nodes outside the lattice are zero ghosts.
    """
    n = p.size
    P = np.zeros((n + 4, n + 4), dtype=complex)
    P[2:-2, 2:-2] = C
    lolo, lo, hi, hihi = (P[k:k + n + 1, k:k + n + 1] for k in range(4))
    a = np.arange(n + 1)
    A, B = a[:, None], a[None, :]
    has_lo = (A >= 1) & (B >= 1)
    has_hi = (A <= n - 1) & (B <= n - 1)
    pf = p[0] + (a - 0.5) * dp
    v = -0.5 * gamma * (pf[:, None] + pf[None, :])
    # linear upwind, first order where the second upwind node is missing
    up_pos = np.where((A >= 2) & (B >= 2), 1.5 * lo - 0.5 * lolo, lo)
    up_neg = np.where((A <= n - 2) & (B <= n - 2), 1.5 * hi - 0.5 * hihi, hi)
    F = v * np.where(v > 0, up_pos, up_neg)
    if K:
        F = F - K * np.where(has_lo & has_hi, (hi - lo) / dp, 0.0)
    rhs = -(F[1:, 1:] - F[:-1, :-1]) / dp
    loss = dp * (F[has_lo & ~has_hi].sum() - F[has_hi & ~has_lo].sum())
    return rhs, loss


def evolve_kramers_local(fld, dt, steps, phase=True, decoherence=True, drift=True, diffusion=True, cfl=CFL_MAX):
    """Step the local Kramers equation on a momentum lattice.

    Strang splitting: exact half-step of the phase and decoherence factors,
    one Heun (SSP-RK2) step of drift plus diffusion, exact half-step again.
    Drift uses linear upwinding along the diagonals, diffusion a centered
    three-point stencil.  Weight reaching an edge leaves the lattice and is
    tallied in ``outflow``.

    Raises
    ------
    ConfigError
        If the basis is wrong or ``dt`` violates the step bound.
    DivergenceError
        On non-finite values; ``.step`` holds the failing step index.
    """
    if fld.basis != MOMENTUM:
        raise ConfigError("Kramers evolution needs a momentum-basis field")
    if not 0 < cfl <= CFL_MAX:
        raise ConfigError(f"safety factor must lie in (0, {CFL_MAX}], got {cfl!r}")
    if steps < 0 or not dt > 0:
        raise ConfigError("need dt > 0 and steps >= 0")
    limit = kramers_time_limit(fld, phase, drift, diffusion)
    if dt > cfl * limit:
        raise ConfigError(f"time step {dt!r} exceeds the stability bound {cfl * limit!r}")
    p, dp = fld.axis, fld.spacing
    gamma = fld.env.gamma if drift else 0.0
    K = fld.env.gamma * fld.M * fld.env.sigma2 if diffusion else 0.0
    half = np.exp(-0.5 * dt * _local_generator(fld, phase, decoherence))
    C = fld.values.copy()
    out = fld.outflow
    fd = gamma > 0 or K > 0
    for step in range(steps):
        C = half * C
        if fd:
            k1, l1 = _fd_rhs(C, p, dp, gamma, K)
            k2, l2 = _fd_rhs(C + dt * k1, p, dp, gamma, K)
            C = C + 0.5 * dt * (k1 + k2)
            out += 0.5 * dt * (l1 + l2)
        C = half * C
        if not np.isfinite(C).all():
            raise DivergenceError(f"non-finite coefficients at step {step}", step=step)
    return fld.copy(values=C, t=fld.t + steps * dt, outflow=out)


def total_weight(fld):
    """Plain lattice sum ``sum(C) d**2`` used for the conservation check."""
    return complex(fld.values.sum() * fld.spacing**2)


def decoherence_scales(res, env, alpha=1.0, M=1.0, U_inf=0.0):
    """Relaxation, de Broglie, decoherence and tunneling scales.

    ``l_D = alpha**2 hbar sqrt(E0 + U_inf) / (2 eps sqrt(M))`` is the length
    over which the energy-difference scale ``alpha eps`` builds up, and
    ``tau_D = tau_R (lambda_B / l_D)**2``, which equals ``tau_tunn / (alpha**4 D)``.

    Raises
    ------
    DomainError
        If ``gamma == 0`` (no relaxation scale) or ``sigma2 == 0``.
    """
    if not env.gamma > 0:
        raise DomainError("no relaxation scale: gamma must be positive")
    if not env.sigma2 > 0:
        raise DomainError("de Broglie length needs sigma2 > 0")
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha!r}")
    hbar = res.hbar
    tau_R = 1.0 / env.gamma
    lambda_B = hbar / (2.0 * math.sqrt(env.sigma2 * M))
    l_D = alpha**2 * hbar * math.sqrt(res.E0 + U_inf) / (2.0 * res.eps * math.sqrt(M))
    return DecoherenceScales(tau_R=tau_R, lambda_B=lambda_B, l_D=l_D, alpha=alpha,
                             tau_D=tau_R * (lambda_B / l_D) ** 2, tau_tunn=hbar / res.eps,
                             D=env.D(res, U_inf))


# ---------------------------------------------------------------------------
# output

def write_snapshot(path, fld):
    """CSV of ``(x1, x2, ReC, ImC)`` for every lattice node."""
    x = fld.axis
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    unit = "energy" if fld.basis == ENERGY else "momentum"
    rows = zip(X1.ravel(), X2.ravel(), fld.values.real.ravel(), fld.values.imag.ravel())
    names = ["E1", "E2"] if fld.basis == ENERGY else ["p1", "p2"]
    return write_csv(path, names + ["ReC", "ImC"], rows, [unit, unit, "1", "1"])


def write_timeseries(path, rows, time_unit="s", energy_unit="J"):
    """CSV of ``(t, rho2, N, meanE)`` rows."""
    return write_csv(path, ["t", "rho2", "N", "meanE"], rows, [time_unit, "1", "1", energy_unit])
