"""Complete elliptic integrals of the first and second kind.

Both are computed with the arithmetic-geometric mean, which converges
quadratically; a handful of iterations reach double precision for any
parameter ``m < 1``.  The parameter convention is ``m = k**2``.
"""
import math

import numpy as np

from .errors import DomainError

_MAX_ITER = 64


def _agm_terms(m):
    """Run the AGM on (1, sqrt(1-m)) and return (agm, sum 2**(n-1) c_n**2)."""
    a = 1.0
    b = math.sqrt(1.0 - m)
    c = math.sqrt(m)
    acc = 0.5 * c * c
    power = 0.5
    for _ in range(_MAX_ITER):
        if abs(a - b) <= 4e-16 * a:
            break
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), math.sqrt(a * b)
        power *= 2.0
        acc += power * c * c
    return a, acc


def _check(m):
    if not (0.0 <= m <= 1.0):
        raise DomainError(f"elliptic parameter m={m!r} outside [0, 1]")


def ellipk(m):
    """Complete elliptic integral of the first kind K(m), ``m = k**2``.

    Returns ``inf`` at ``m == 1``.
    """
    if np.ndim(m):
        return np.vectorize(ellipk, otypes=[float])(m)
    m = float(m)
    _check(m)
    if m == 1.0:
        return math.inf
    agm, _ = _agm_terms(m)
    return math.pi / (2.0 * agm)


def ellipe(m):
    """Complete elliptic integral of the second kind E(m), ``m = k**2``."""
    if np.ndim(m):
        return np.vectorize(ellipe, otypes=[float])(m)
    m = float(m)
    _check(m)
    if m == 1.0:
        return 1.0
    agm, acc = _agm_terms(m)
    return math.pi / (2.0 * agm) * (1.0 - acc)
