"""Tunneling out of a cubic metastable well, with and without decoherence."""
from .closed import ClosedRateReport, closed_report, escape_temperature, instanton_rate, wkb_rate
from .constants import CODATA, PAPER, Constants
from .elliptic import ellipe, ellipk
from .errors import (ConfigError, DivergenceError, DomainError, InversionError, LevelNotTrappedError, SolverError,
                     TunnelkitError)
from .josephson import (PAPER_JUNCTION, DerivedJunction, JunctionParams, derive, invert_critical_current,
                        predict_escape_temperature)
from .potential import CubicPotential, turning_points
from .saddle import SuppressionResult, figure2_table, solve_saddle, suppression
from .spectral import (EnvironmentParams, SpectralField, decoherence_scales, diagnostics, evolve_kramers_local,
                       evolve_phase_shift, init_false_vacuum, persistence, persistence_quadrature)
from .wkb import ResonanceData, action, ground_state, resonance

__version__ = "0.1.0"
