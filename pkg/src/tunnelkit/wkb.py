"""WKB quantities of the cubic well.

Two independent routes to the same numbers live here: direct quadrature of
the momentum along the classical path (:func:`action`, :func:`half_period`)
and the closed parametric form in terms of complete elliptic integrals
(:func:`zeta`, :func:`freq_factor`, :func:`action_factor`).  Resonance data
for the false ground state is assembled from the parametric form.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .elliptic import ellipe, ellipk
from .errors import DomainError, LevelNotTrappedError
from .potential import turning_points

ANHARMONIC = "anharmonic"
HARMONIC = "harmonic"


# ---------------------------------------------------------------------------
# momentum and actions by quadrature

def momentum(pot, E, x):
    """Local momentum magnitude ``sqrt(2 M |U(x) - E|)``."""
    return np.sqrt(2.0 * pot.M * np.abs(pot.evaluate(x) - E))


def _gap_factory(pot, E):
    """Return ``x -> U(x) - E``, in factored form inside the cubic region.

    The factored form keeps full relative accuracy next to turning points.
    """
    if 0.0 < E < pot.eps_s:
        xl, xr, xo = turning_points(pot, E)
        c = pot.lam / 6.0

        def gap(x):
            if x <= pot.x_match:
                return -c * (x - xl) * (x - xr) * (x - xo)
            return pot.evaluate(x) - E

        return gap, (xl, xr, xo)
    return (lambda x: pot.evaluate(x) - E), ()


def _piece(p_of_gap, gap, a, b, turn_a, turn_b, epsrel):
    """Integrate ``p(gap(x))`` over ``[a, b]``.

    Ends that sit on a turning point are handled with ``x = x_t +/- u**2``,
    which removes the square-root behaviour there.
    """
    if b <= a:
        return 0.0
    if turn_a and turn_b:
        mid = 0.5 * (a + b)
        return (_piece(p_of_gap, gap, a, mid, True, False, epsrel)
                + _piece(p_of_gap, gap, mid, b, False, True, epsrel))
    if turn_a:
        f = lambda u: p_of_gap(gap(a + u * u)) * 2.0 * u
        val, _ = integrate.quad(f, 0.0, math.sqrt(b - a), epsabs=0.0, epsrel=epsrel, limit=200)
        return val
    if turn_b:
        f = lambda u: p_of_gap(gap(b - u * u)) * 2.0 * u
        val, _ = integrate.quad(f, 0.0, math.sqrt(b - a), epsabs=0.0, epsrel=epsrel, limit=200)
        return val
    val, _ = integrate.quad(lambda x: p_of_gap(gap(x)), a, b, epsabs=0.0, epsrel=epsrel, limit=200)
    return val


def action(pot, E, y, x, epsrel=1e-10):
    """WKB action ``S(x, y) = integral_y^x p dx'`` (note the argument order).

    Parameters
    ----------
    pot : CubicPotential
    E : float
        Energy.
    y, x : float
        Lower and upper integration limits, ``y <= x``.
    epsrel : float
        Relative tolerance handed to the adaptive quadrature.

    Raises
    ------
    DomainError
        If ``y > x``.
    """
    if y > x:
        raise DomainError(f"action needs y <= x, got y={y!r} > x={x!r}")
    if y == x:
        return 0.0
    gap, turns = _gap_factory(pot, E)
    p_of_gap = lambda g: math.sqrt(2.0 * pot.M * abs(g))
    tol = 64 * np.finfo(float).eps * max(abs(x), abs(y), pot.x_s)
    inner = [t for t in turns if y + tol < t < x - tol]
    knots = [y] + inner + [x]
    is_turn = lambda v: any(abs(v - t) <= tol for t in turns)
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        total += _piece(p_of_gap, gap, a, b, is_turn(a), is_turn(b), epsrel)
    return total


def half_period(pot, E, epsrel=1e-11):
    """Time to go from ``x_L`` to ``x_R`` at energy ``E``: ``integral M/p dx``."""
    xl, xr, xo = turning_points(pot, E)
    half = 0.5 * (xr - xl)
    c = pot.lam / 6.0

    # x = x_L + half*(1 - cos th) makes sqrt((x - x_L)(x_R - x)) = half*sin th
    def f(th):
        x = xl + half * (1.0 - math.cos(th))
        return pot.M / math.sqrt(2.0 * pot.M * c * (xo - x))

    val, _ = integrate.quad(f, 0.0, math.pi, epsabs=0.0, epsrel=epsrel)
    return val


# ---------------------------------------------------------------------------
# parametric form

def _check_k(k, upper_open=False):
    if not (0.0 <= k <= 1.0) or (upper_open and k >= 1.0):
        bound = "[0, 1)" if upper_open else "[0, 1]"
        raise DomainError(f"elliptic parameter k={k!r} outside {bound}")


def _Q(k):
    return 0.25 * (1.0 + 14.0 * k**2 + k**4)


def _a(k):
    return 16.0 / 15.0 * (2.0 - k**2) ** 2 - 0.2 * (1.0 - k**2) * (21.0 - 5.0 * k**2)


def _b(k):
    return 8.0 / 15.0 * (2.0 - k**2) - (1.0 - k**2)


def zeta(k):
    """Energy fraction: ``E = 2 eps_s zeta(k)``; ``zeta(0) = 0``, ``zeta(1) = 1/2``."""
    _check_k(k)
    q = _Q(k)
    s = 1.0 + k * k
    return (2.0 + 3.0 * s / math.sqrt(q) - s**3 / q**1.5) / 8.0


def freq_factor(k):
    """Frequency ratio ``Omega / Omega0`` at parameter ``k``."""
    _check_k(k)
    K = ellipk(k * k)
    if math.isinf(K):
        return 0.0
    return 1.0 / (2.0 / math.pi * (4.0 * _Q(k)) ** 0.25 * K)


def action_factor(k):
    """Dimensionless action: ``S(x_R, x_L) = (eps_s / Omega0) F(k)``."""
    _check_k(k, upper_open=True)
    m = k * k
    return 27.0 / 8.0 * (4.0 / _Q(k)) ** 1.25 * (_a(k) * ellipe(m) - (1.0 - m) * _b(k) * ellipk(m))


# the action factor tends to 18/5 at the barrier top
ACTION_FACTOR_TOP = 3.6
_K_TOP = 1.0 - 1e-15


def zeta_inverse(z):
    """Parameter ``k`` with ``zeta(k) = z`` for ``0 <= z <= 1/2``."""
    if not (0.0 <= z <= 0.5):
        raise DomainError(f"energy fraction {z!r} outside [0, 1/2]")
    if z == 0.0:
        return 0.0
    if z == 0.5:
        return 1.0
    return optimize.brentq(lambda k: zeta(k) - z, 0.0, 1.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


@dataclass(frozen=True)
class EllipticPoint:
    k: float
    zeta: float
    f: float
    F: float

    @classmethod
    def at(cls, k):
        return cls(k=k, zeta=zeta(k), f=freq_factor(k), F=action_factor(k))


def ground_state(pot, n=0):
    """Bohr-Sommerfeld level ``n`` as an :class:`EllipticPoint`.

    Solves ``F(k) = (1 + 2n) pi eps0 / eps_s`` with ``eps0 = hbar Omega0 / 2``.
    The level energy is ``2 eps_s zeta(k)``.

    Raises
    ------
    LevelNotTrappedError
        If the level would sit above the barrier top.
    """
    if n < 0:
        raise DomainError(f"level index must be >= 0, got {n}")
    target = (1 + 2 * n) * math.pi * pot.eps0 / pot.eps_s
    if target >= action_factor(_K_TOP):
        raise LevelNotTrappedError(
            f"level n={n} is not trapped: needs F(k)={target:.6g} but F < {ACTION_FACTOR_TOP} below the barrier top"
        )
    k = optimize.brentq(lambda k: action_factor(k) - target, 0.0, _K_TOP, xtol=1e-15,
                        rtol=4 * np.finfo(float).eps)
    return EllipticPoint.at(k)


def reflect(k):
    """Parameter of the reflected energy ``eps_s - E``: ``zeta(k_ref) = 1/2 - zeta(k)``."""
    if not (0.0 < k < 1.0):
        raise DomainError(f"reflect needs 0 < k < 1, got {k!r}")
    return zeta_inverse(0.5 - zeta(k))


# ---------------------------------------------------------------------------
# resonance of the false ground state

@dataclass(frozen=True)
class ResonanceData:
    """Pole structure of the false ground state.

    ``eps`` is the half-width: the spectral weight has poles at
    ``E0 +/- i eps`` and the closed decay rate is ``2 eps / hbar``.
    """

    E0: float
    eps: float
    tau: float
    Lambda: float
    k_GS: float
    k_ref: float
    hbar: float
    eps_s: float
    Omega0: float

    @property
    def E_plus(self):
        return complex(self.E0, self.eps)

    @property
    def E_minus(self):
        return complex(self.E0, -self.eps)

    @property
    def f_GS(self):
        return freq_factor(self.k_GS)

    @classmethod
    def from_pole(cls, E0, eps, hbar=1.0):
        """Bare resonance with only the pole data filled in.

        Useful when a spectral computation is phrased in units of ``eps``
        and the underlying potential is irrelevant.
        """
        tau = hbar / (4.0 * eps)
        return cls(E0=E0, eps=eps, tau=tau, Lambda=0.0, k_GS=math.nan, k_ref=math.nan,
                   hbar=hbar, eps_s=math.nan, Omega0=math.nan)


def resonance(pot, energy_convention=ANHARMONIC, tau_convention=ANHARMONIC):
    """Resonance data of the false ground state of ``pot``.

    Parameters
    ----------
    pot : CubicPotential
    energy_convention : {'anharmonic', 'harmonic'}
        Energy dividing the reflected action factor in the penetrability,
        ``Lambda = (eps_s / E) F(k_ref)``.  ``'anharmonic'`` uses the
        Bohr-Sommerfeld level ``E0 = 2 eps_s zeta(k_GS)`` and reproduces the
        reference value 8.459 for the measured junction; ``'harmonic'`` uses
        ``hbar Omega0 / 2``, which equals ``2 S(x_out, x_R) / hbar`` exactly.
    tau_convention : {'anharmonic', 'harmonic'}
        Half period ``pi / (Omega0 f(k_GS))`` or ``pi / Omega0``.
    """
    gs = ground_state(pot, 0)
    k_ref = reflect(gs.k)
    E0 = 2.0 * pot.eps_s * gs.zeta
    F_ref = action_factor(k_ref)
    if energy_convention == ANHARMONIC:
        Lam = pot.eps_s / E0 * F_ref
    elif energy_convention == HARMONIC:
        Lam = pot.eps_s / pot.eps0 * F_ref
    else:
        raise DomainError(f"unknown energy convention {energy_convention!r}")
    if tau_convention == ANHARMONIC:
        tau = math.pi / (pot.Omega0 * gs.f)
    elif tau_convention == HARMONIC:
        tau = math.pi / pot.Omega0
    else:
        raise DomainError(f"unknown tau convention {tau_convention!r}")
    eps = pot.hbar / (4.0 * tau) * math.exp(-Lam)
    return ResonanceData(E0=E0, eps=eps, tau=tau, Lambda=Lam, k_GS=gs.k, k_ref=k_ref,
                         hbar=pot.hbar, eps_s=pot.eps_s, Omega0=pot.Omega0)


# ---------------------------------------------------------------------------
# near-resonance phase shifts and spectral weight

@dataclass(frozen=True)
class PhaseShiftProfile:
    E0: float
    eps: float

    @classmethod
    def of(cls, res):
        return cls(E0=res.E0, eps=res.eps)


def phase_shift(prof, E):
    """Energy-dependent part of the phase shift, ``arg sqrt((E - E_-)/(E - E_+))``.

    Continuous in ``E``; falls by ``pi`` across the resonance.
    """
    return np.arctan2(prof.eps, np.asarray(E, dtype=float) - prof.E0)


def phase_shift_derivative(prof, E):
    """``d delta / dE = -eps / ((E - E0)**2 + eps**2)``."""
    x = np.asarray(E, dtype=float) - prof.E0
    return -prof.eps / (x * x + prof.eps**2)


def norm_profile(res, E):
    """Normalized Lorentzian spectral weight of the false ground state."""
    x = np.asarray(E, dtype=float) - res.E0
    return res.eps / (math.pi * (x * x + res.eps**2))
