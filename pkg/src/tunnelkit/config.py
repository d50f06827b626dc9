"""Run configuration: strict JSON schema with unknown-key rejection."""
import dataclasses
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .constants import T_ESC_EXPERIMENT
from .errors import ConfigError
from .josephson import PAPER_JUNCTION
from .wkb import ANHARMONIC, HARMONIC

MODES = ("closed", "suppression", "evolve", "junction-predict", "junction-invert")


@dataclass
class PotentialSection:
    """Cubic well in natural units unless ``hbar`` etc. say otherwise."""

    M: float = 1.0
    Omega0: float = 1.0
    lam: float = 0.6
    U_inf: float = 0.0
    hbar: float = 1.0


@dataclass
class JunctionSection:
    I: float = PAPER_JUNCTION.I
    C_cap: float = PAPER_JUNCTION.C_cap
    R_shunt: float = PAPER_JUNCTION.R_shunt
    I_c: Optional[float] = PAPER_JUNCTION.I_c
    s: Optional[float] = None


@dataclass
class EnvironmentSection:
    """Either ``gamma`` directly or a target ``D``; ``sigma2`` defaults to ``eps0``."""

    gamma: float = 0.0
    sigma2: Optional[float] = None
    D: Optional[float] = None


@dataclass
class ConventionSection:
    energy: str = ANHARMONIC
    tau: str = ANHARMONIC
    U_inf_over_E0: float = 0.0
    constants: str = "paper"


@dataclass
class GridSection:
    half_width: float = 60.0
    spacing: float = 0.1


@dataclass
class EvolveSection:
    """Sample times in units of ``hbar / eps``."""

    t_max: float = 8.0
    samples: int = 81
    snapshot_every: int = 0


@dataclass
class SuppressionSection:
    D_min: float = 1e-4
    D_max: float = 1e4
    points: int = 81


@dataclass
class InversionSection:
    """Measured rate, or an escape temperature referred to the junction with ``reference_I_c``."""

    Gamma_exp: Optional[float] = None
    T_esc_exp: float = T_ESC_EXPERIMENT
    reference_I_c: float = PAPER_JUNCTION.I_c
    reference_s: Optional[float] = PAPER_JUNCTION.s


@dataclass
class SolverSection:
    workers: Optional[int] = None
    fit_window: tuple = (2.0, 6.0)


@dataclass
class OutputSection:
    dir: str = "."


@dataclass
class RunConfig:
    mode: Optional[str] = None
    units: str = "natural"
    potential: Optional[PotentialSection] = None
    junction: Optional[JunctionSection] = None
    environment: EnvironmentSection = field(default_factory=EnvironmentSection)
    conventions: ConventionSection = field(default_factory=ConventionSection)
    grid: GridSection = field(default_factory=GridSection)
    evolve: EvolveSection = field(default_factory=EvolveSection)
    suppression: SuppressionSection = field(default_factory=SuppressionSection)
    inversion: InversionSection = field(default_factory=InversionSection)
    solver: SolverSection = field(default_factory=SolverSection)
    output: OutputSection = field(default_factory=OutputSection)


_SECTIONS = {
    "potential": PotentialSection,
    "junction": JunctionSection,
    "environment": EnvironmentSection,
    "conventions": ConventionSection,
    "grid": GridSection,
    "evolve": EvolveSection,
    "suppression": SuppressionSection,
    "inversion": InversionSection,
    "solver": SolverSection,
    "output": OutputSection,
}


def _build(cls, data, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be an object")
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {', '.join(unknown)}")
    return cls(**data)


def from_dict(data):
    """Build a :class:`RunConfig`, rejecting unknown keys at every level."""
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    unknown = sorted(set(data) - {f.name for f in dataclasses.fields(RunConfig)})
    if unknown:
        raise ConfigError(f"unknown keys in config: {', '.join(unknown)}")
    kw = {}
    for key, value in data.items():
        if key in _SECTIONS:
            kw[key] = None if value is None else _build(_SECTIONS[key], value, key)
        else:
            kw[key] = value
    cfg = RunConfig(**kw)
    if isinstance(cfg.solver.fit_window, list):
        cfg.solver.fit_window = tuple(cfg.solver.fit_window)
    return cfg


def load(path):
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return from_dict(data)


def paper_preset():
    """Measured junction with the reference conventions and frozen constants."""
    return RunConfig(units="si", junction=JunctionSection(s=PAPER_JUNCTION.s),
                     conventions=ConventionSection())


def _positive(name, v):
    if not (isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v) and v > 0):
        raise ConfigError(f"{name} must be a positive number, got {v!r}")


def validate(cfg):
    """Check ranges and cross-field rules; raises :class:`ConfigError`."""
    if cfg.mode is not None and cfg.mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {cfg.mode!r}")
    if cfg.units not in ("natural", "si"):
        raise ConfigError(f"units must be 'natural' or 'si', got {cfg.units!r}")
    c = cfg.conventions
    for name in ("energy", "tau"):
        if getattr(c, name) not in (ANHARMONIC, HARMONIC):
            raise ConfigError(f"conventions.{name} must be '{ANHARMONIC}' or '{HARMONIC}'")
    if c.constants not in ("paper", "codata"):
        raise ConfigError("conventions.constants must be 'paper' or 'codata'")
    if c.U_inf_over_E0 < 0:
        raise ConfigError("conventions.U_inf_over_E0 must be >= 0")
    if cfg.potential is not None:
        for name in ("M", "Omega0", "lam", "hbar"):
            _positive(f"potential.{name}", getattr(cfg.potential, name))
        if cfg.potential.U_inf < 0:
            raise ConfigError("potential.U_inf must be >= 0")
    if cfg.junction is not None:
        for name in ("I", "C_cap", "R_shunt"):
            _positive(f"junction.{name}", getattr(cfg.junction, name))
        for name in ("I_c", "s"):
            if getattr(cfg.junction, name) is not None:
                _positive(f"junction.{name}", getattr(cfg.junction, name))
    env = cfg.environment
    if env.gamma < 0:
        raise ConfigError("environment.gamma must be >= 0")
    if env.sigma2 is not None and env.sigma2 < 0:
        raise ConfigError("environment.sigma2 must be >= 0")
    if env.D is not None and env.D < 0:
        raise ConfigError("environment.D must be >= 0")
    _positive("grid.half_width", cfg.grid.half_width)
    _positive("grid.spacing", cfg.grid.spacing)
    _positive("evolve.t_max", cfg.evolve.t_max)
    if not isinstance(cfg.evolve.samples, int) or cfg.evolve.samples < 2:
        raise ConfigError("evolve.samples must be an integer >= 2")
    if not isinstance(cfg.evolve.snapshot_every, int) or cfg.evolve.snapshot_every < 0:
        raise ConfigError("evolve.snapshot_every must be an integer >= 0")
    sup = cfg.suppression
    _positive("suppression.D_min", sup.D_min)
    _positive("suppression.D_max", sup.D_max)
    if sup.D_max < sup.D_min:
        raise ConfigError("suppression.D_max must be >= D_min")
    if not isinstance(sup.points, int) or sup.points < 2:
        raise ConfigError("suppression.points must be an integer >= 2")
    inv = cfg.inversion
    if inv.Gamma_exp is not None:
        _positive("inversion.Gamma_exp", inv.Gamma_exp)
    _positive("inversion.T_esc_exp", inv.T_esc_exp)
    _positive("inversion.reference_I_c", inv.reference_I_c)
    w = cfg.solver.workers
    if w is not None and (not isinstance(w, int) or w < 1):
        raise ConfigError("solver.workers must be a positive integer")
    fw = cfg.solver.fit_window
    if len(fw) != 2 or not 0 < fw[0] < fw[1]:
        raise ConfigError("solver.fit_window must be [lo, hi] with 0 < lo < hi")
    out = Path(cfg.output.dir)
    if out.exists() and not (out.is_dir() and os.access(out, os.W_OK)):
        raise ConfigError(f"output directory {out} is not writable")
    return cfg
