"""
Model parameters and unit handling for the two-charge electron.

Internally every quantity can be expressed in the canonical dimensionless
system d = c = m_e = 1; SI is a presentation layer built on top of it.
"""

import math
from dataclasses import dataclass, asdict

import numpy as np

from . import constants
from ..utils.errors import ModelViolationError

# Scale of each physical kind, as a function of the parameters
UNIT_SCALES = {
    "length": lambda p: p.d,
    "time": lambda p: p.tau0,
    "velocity": lambda p: p.c,
    "acceleration": lambda p: p.c ** 2 / p.d,
    "mass": lambda p: p.m_e,
    "energy": lambda p: p.rest_energy,
    "frequency": lambda p: p.omega0,
    "force": lambda p: p.rest_energy / p.d,
}


@dataclass(frozen=True)
class ModelParams:
    """
    Physical parameters of the model.

    Attributes:
        d: charge separation
        c: speed of light
        e_charge: total charge magnitude of the particle
        eps0: vacuum permittivity (None in dimensionless mode)
        m_e: electromagnetic mass, derived from d
        tau0: light-crossing time d/c
        omega0: characteristic frequency c/d
        unit_mode: "dimensionless" or "SI"
    """
    d: float
    c: float
    e_charge: float
    eps0: float
    m_e: float
    tau0: float
    omega0: float
    unit_mode: str

    @property
    def rest_energy(self):
        """m_e c^2 in the units of this parameter set."""
        return self.m_e * self.c ** 2

    @property
    def force_prefactor(self):
        """e^2 / (8 pi eps0), written as 2 m_e c^2 d so it holds in both unit modes."""
        return 2.0 * self.rest_energy * self.d

    @property
    def is_si(self):
        return self.unit_mode == constants.SI

    def to_dict(self):
        return asdict(self)


def make_params(d=1.0, unit_mode=constants.DIMENSIONLESS):
    """
    Build a ModelParams instance.

    Args:
        d: charge separation; must be 1 in dimensionless mode
        unit_mode: "dimensionless" or "SI"

    Returns:
        ModelParams with m_e, tau0 and omega0 derived from d.
    """
    if unit_mode not in constants.UNIT_MODES:
        raise ModelViolationError(f"Unknown unit mode {unit_mode!r}", unit_mode=unit_mode)
    if not (d > 0) or not math.isfinite(d):
        raise ModelViolationError(f"Charge separation must be positive, got d={d}", d=d)

    if unit_mode == constants.DIMENSIONLESS:
        if d != 1.0:
            raise ModelViolationError(
                f"Dimensionless mode fixes d = 1, got d={d}", d=d, unit_mode=unit_mode)
        return ModelParams(d=1.0, c=1.0, e_charge=1.0, eps0=None, m_e=1.0,
                           tau0=1.0, omega0=1.0, unit_mode=unit_mode)

    c = constants.SPEED_OF_LIGHT
    # m_e = hbar alpha / (4 d c)
    m_e = constants.HBAR * constants.ALPHA / (4.0 * d * c)
    return ModelParams(d=float(d), c=c, e_charge=constants.ELEMENTARY_CHARGE,
                       eps0=constants.EPSILON_0, m_e=m_e, tau0=d / c, omega0=c / d,
                       unit_mode=unit_mode)


def electron_separation():
    """Charge separation (m) whose electromagnetic mass is the CODATA electron mass."""
    return constants.HBAR * constants.ALPHA / (
        4.0 * constants.ELECTRON_MASS * constants.SPEED_OF_LIGHT)


def lorentz_gamma(beta):
    """
    Lorentz factor (1 - beta^2)^(-1/2).

    Works on scalars and numpy arrays; raises ModelViolationError for |beta| >= 1.
    """
    beta_arr = np.asarray(beta, dtype=float)
    if np.any(np.abs(beta_arr) >= 1.0) or np.any(~np.isfinite(beta_arr)):
        raise ModelViolationError(
            "Lorentz factor requires |beta| < 1", beta=_echo(beta_arr))
    gamma = 1.0 / np.sqrt(1.0 - beta_arr * beta_arr)
    return float(gamma) if gamma.ndim == 0 else gamma


def characteristic_period(radius, c):
    """Oscillation period 4 pi radius / c (the zitterbewegung-scale period)."""
    if not radius > 0:
        raise ModelViolationError(f"Radius must be positive, got {radius}", radius=radius)
    return 4.0 * math.pi * radius / c


def to_dimensionless(value, kind, params):
    """
    Express a physical quantity in units of d, c and m_e.

    Round trips are exact to rounding while the scaled value stays a normal
    float; subnormal inputs lose digits.
    """
    scale = _scale(kind, params)
    if np.ndim(value):
        return np.asarray(value, dtype=float) / scale
    return value / scale


def to_physical(value, kind, params):
    """Inverse of to_dimensionless."""
    scale = _scale(kind, params)
    if np.ndim(value):
        return np.asarray(value, dtype=float) * scale
    return value * scale


def _scale(kind, params):
    try:
        return UNIT_SCALES[kind](params)
    except KeyError:
        raise ModelViolationError(f"Unknown quantity kind {kind!r}", kind=kind) from None


def _echo(arr):
    # keep error payloads short
    flat = np.ravel(arr)
    return flat[:4].tolist() if flat.size > 1 else float(flat[0])
