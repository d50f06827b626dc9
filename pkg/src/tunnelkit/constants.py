"""Physical constants.

Two sets are provided: the values printed alongside the junction data we
reproduce (``PAPER``), and CODATA values from :mod:`scipy.constants`.
Acceptance reproductions always use ``PAPER``.
"""
from dataclasses import dataclass

import scipy.constants as sc


@dataclass(frozen=True)
class Constants:
    hbar: float  # J s
    e: float  # C
    k_B: float  # J / K


PAPER = Constants(hbar=1.054572e-34, e=1.602176e-19, k_B=1.380650e-23)
CODATA = Constants(hbar=sc.hbar, e=sc.e, k_B=sc.k)

# Zero-temperature extrapolated escape temperature of the measured junction [K].
T_ESC_EXPERIMENT = 45e-3


def get_constants(name="paper"):
    try:
        return {"paper": PAPER, "codata": CODATA}[name]
    except KeyError:
        raise ValueError(f"unknown constants set {name!r}; use 'paper' or 'codata'") from None
