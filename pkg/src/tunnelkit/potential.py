"""Cubic metastable well with a flat continuation at large x.

``U(x) = M*Omega0**2*x**2/2 - lam*x**3/6`` near the well.  Far beyond the exit
point the potential is flat at ``-U_inf``; a C1 smoothstep blend joins the two
over ``[x_match, x_match + width]``.  Everything the package computes from the
potential (turning points, actions, periods) lives inside ``x <= x_exit``, so
the blend only matters for :meth:`CubicPotential.evaluate` far outside.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class CubicPotential:
    """Parameters of the cubic well.

    Parameters
    ----------
    M : float
        Mass.
    Omega0 : float
        Small-oscillation angular frequency at the well bottom.
    lam : float
        Cubic coupling.
    U_inf : float
        Depth of the far plateau, the potential tends to ``-U_inf``.
    hbar : float
        Reduced Planck constant in the chosen units (1 in natural units).
    match_factor : float
        The blend starts at ``x_match = match_factor * x_exit``.
    blend_factor : float
        The blend width is ``blend_factor * x_exit``.
    """

    M: float
    Omega0: float
    lam: float
    U_inf: float = 0.0
    hbar: float = 1.0
    match_factor: float = 3.0
    blend_factor: float = 1.0

    def __post_init__(self):
        for name in ("M", "Omega0", "lam", "hbar"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.U_inf < 0:
            raise DomainError(f"U_inf must be >= 0, got {self.U_inf!r}")
        if self.match_factor < 1 or self.blend_factor <= 0:
            raise DomainError("plateau blend must start beyond x_exit and have positive width")

    @classmethod
    def natural(cls, lam=3.0, U_inf=0.0, **kw):
        """Potential in units where hbar = M = Omega0 = 1."""
        return cls(M=1.0, Omega0=1.0, lam=lam, U_inf=U_inf, hbar=1.0, **kw)

    @classmethod
    def from_barrier(cls, M, Omega0, eps_s, hbar, U_inf=0.0):
        """Build the well with a prescribed barrier height ``eps_s``."""
        lam = M * Omega0**3 * math.sqrt(2.0 * M / (3.0 * eps_s))
        return cls(M=M, Omega0=Omega0, lam=lam, U_inf=U_inf, hbar=hbar)

    # derived geometry
    @property
    def x_s(self):
        return 2.0 * self.M * self.Omega0**2 / self.lam

    @property
    def eps_s(self):
        return 2.0 * self.M**3 * self.Omega0**6 / (3.0 * self.lam**2)

    @property
    def x_exit(self):
        return 1.5 * self.x_s

    @property
    def eps0(self):
        """Harmonic zero-point energy hbar*Omega0/2."""
        return 0.5 * self.hbar * self.Omega0

    @property
    def x_match(self):
        return self.match_factor * self.x_exit

    @property
    def blend_width(self):
        return self.blend_factor * self.x_exit

    def cubic(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.M * self.Omega0**2 * x**2 - self.lam / 6.0 * x**3

    def evaluate(self, x):
        """Potential energy at ``x``, including the plateau continuation."""
        x = np.asarray(x, dtype=float)
        u = self.cubic(x)
        t = np.clip((x - self.x_match) / self.blend_width, 0.0, 1.0)
        h = t * t * (3.0 - 2.0 * t)
        out = (1.0 - h) * u - h * self.U_inf
        return out if out.ndim else float(out)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        u = self.cubic(x)
        du = self.M * self.Omega0**2 * x - 0.5 * self.lam * x**2
        t = np.clip((x - self.x_match) / self.blend_width, 0.0, 1.0)
        h = t * t * (3.0 - 2.0 * t)
        dh = 6.0 * t * (1.0 - t) / self.blend_width
        out = (1.0 - h) * du - dh * (u + self.U_inf)
        return out if out.ndim else float(out)

    def turning_points(self, E):
        """Return the three classical turning points ``(x_L, x_R, x_out)``."""
        return turning_points(self, E)


def _cubic_roots(pot, E):
    # with y = x / x_s the cubic reads U = eps_s (3 y^2 - 2 y^3), so
    # y^3 - (3/2) y^2 + E/(2 eps_s) = 0; y = z + 1/2 gives z^3 - (3/4) z + q = 0.
    q = 0.5 * E / pot.eps_s - 0.25
    # three real roots: z = cos(theta_k) for 4cos^3 - 3cos = cos(3 theta) = -4q
    phi = math.acos(max(-1.0, min(1.0, -4.0 * q)))
    z = [math.cos((phi - 2.0 * math.pi * j) / 3.0) for j in range(3)]
    return sorted(pot.x_s * (zj + 0.5) for zj in z)


def _polish(pot, x, E, lo, hi):
    # one bisection-guarded Newton step
    f = float(pot.cubic(x)) - E
    d = pot.M * pot.Omega0**2 * x - 0.5 * pot.lam * x * x
    if d != 0.0:
        xn = x - f / d
        if lo < xn < hi:
            return xn
    return x


def turning_points(pot, E):
    """Classical turning points of the cubic at energy ``0 < E < eps_s``.

    Parameters
    ----------
    pot : CubicPotential
    E : float

    Returns
    -------
    tuple of float
        ``x_L < x_R < x_out``, with ``x_L < 0 < x_R < x_s < x_out <= x_exit``.

    Raises
    ------
    DomainError
        If ``E <= 0`` (below the well bottom) or ``E >= eps_s`` (above the
        barrier top).
    """
    if not E > 0.0:
        raise DomainError(f"energy {E!r} is at or below the well bottom (lower bound 0)")
    if not E < pot.eps_s:
        raise DomainError(f"energy {E!r} is at or above the barrier top eps_s={pot.eps_s!r}")
    xl, xr, xo = _cubic_roots(pot, E)
    xs = pot.x_s
    xl = _polish(pot, xl, E, -math.inf, 0.0)
    xr = _polish(pot, xr, E, 0.0, xs)
    xo = _polish(pot, xo, E, xs, pot.x_exit)
    return xl, xr, xo
