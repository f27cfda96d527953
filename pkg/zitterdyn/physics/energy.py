"""
Self-energy of the two-charge electron and its quantum-potential term.

With chi = gamma^6 bdot^2 the exact self-energy m_e c^2 d / (r - l beta)
reduces to gamma m_e c^2 / sqrt(1 + chi), which splits into the relativistic
energy gamma m_e c^2 plus Q = -gamma m_e c^2 (1 - 1/sqrt(1 + chi)).

All functions accept scalars or numpy arrays for beta and bdot.
"""

import logging
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import retardation
from ..models import constants
from ..models.params import lorentz_gamma
from ..utils.errors import ModelViolationError, SeriesDivergenceWarning

logger = logging.getLogger("Zitterdyn.energy")


@dataclass(frozen=True)
class EnergyBreakdown:
    """
    Self-energy decomposition at one kinematic point.

    Attributes:
        E_exact: m_e c^2 d / (r - l beta)
        E_rel: gamma m_e c^2
        Q_closed: closed-form quantum potential
        Q_series: partial sum of the quantum-potential series
        identity_defect: |E_exact - (E_rel + Q_closed)|
        chi: gamma^6 bdot^2
    """
    E_exact: float
    E_rel: float
    Q_closed: float
    Q_series: float
    identity_defect: float
    chi: float


def chi_parameter(beta, bdot):
    """The recurring radicand chi = gamma^6 bdot^2."""
    gamma = np.asarray(lorentz_gamma(beta))
    return _out(gamma ** 6 * np.asarray(bdot, dtype=float) ** 2)


def potential_prefactor(params):
    """
    (hbar^2 / 2 m_e)(alpha^2 / 8 d^2), which equals m_e c^2 for the derived mass.

    In SI mode it is evaluated from the CODATA table so the identity can be
    checked; in dimensionless mode it is 1.
    """
    if not params.is_si:
        return params.rest_energy
    return constants.HBAR ** 2 / (2.0 * params.m_e) * constants.ALPHA ** 2 / (8.0 * params.d ** 2)


def self_energy_exact(beta, bdot, params):
    """
    Exact self-energy E = m_e c^2 d / (r - l beta).

    r and l come from the closed forms of the retardation module, so this is
    an independent route to the value of the energy identity.
    """
    r = np.asarray(retardation.delay_closed_form(beta, bdot, params))
    l = np.asarray(retardation.separation_l(beta, bdot, params))
    denom = r - l * np.asarray(beta, dtype=float)
    if np.any(denom <= 0):
        raise ModelViolationError("r - l beta must be positive", beta=beta, bdot=bdot)
    return _out(params.rest_energy * params.d / denom)


def quantum_potential_closed(beta, bdot, params):
    """Closed-form quantum potential; never positive, zero iff bdot = 0."""
    gamma = np.asarray(lorentz_gamma(beta))
    chi = gamma ** 6 * np.asarray(bdot, dtype=float) ** 2
    # 1 - 1/sqrt(1+chi) written without cancellation for small chi
    factor = chi / (np.sqrt(1.0 + chi) * (1.0 + np.sqrt(1.0 + chi)))
    return _out(-potential_prefactor(params) * gamma * factor)


def series_coefficients(n_terms):
    """
    Exact coefficients (-1)^n (2n-1)!! / (2^n n!) for n = 1..n_terms.

    Built with the recurrence c_n = -c_{n-1} (2n - 1) / (2n), which is the
    double-factorial recurrence divided through by 2^n n!.
    """
    coefficients = []
    double_factorial = 1
    power_factorial = 1
    for n in range(1, n_terms + 1):
        double_factorial *= 2 * n - 1
        power_factorial *= 2 * n
        coefficients.append(Fraction((-1) ** n * double_factorial, power_factorial))
    return coefficients


def quantum_potential_series(beta, bdot, n_terms, params):
    """
    Partial sum of the quantum-potential series in the variable chi.

    Emits SeriesDivergenceWarning when chi >= 1, where the binomial series
    diverges; the partial sum is still returned.
    """
    if n_terms < 1:
        raise ModelViolationError("n_terms must be at least 1", n_terms=n_terms)
    gamma = np.asarray(lorentz_gamma(beta))
    chi = gamma ** 6 * np.asarray(bdot, dtype=float) ** 2
    if np.any(chi >= 1.0):
        message = f"Quantum-potential series summed at chi={np.max(chi):.4g} >= 1; it diverges there"
        logger.warning(message)
        warnings.warn(message, SeriesDivergenceWarning, stacklevel=2)

    total = np.zeros_like(chi)
    power = np.ones_like(chi)
    for coefficient in series_coefficients(n_terms):
        power = power * chi
        total = total + float(coefficient) * power
    return _out(potential_prefactor(params) * gamma * total)


def energy_taylor(beta, bdot, n_terms, params):
    """
    Taylor form of the self-energy.

    gamma m_e c^2 + sum_n c_n gamma^(6n+1) bdot^(2n) m_e c^2; the gamma powers
    7, 13, 19 of the first three terms are gamma^(6n+1).
    """
    gamma = np.asarray(lorentz_gamma(beta))
    bdot = np.asarray(bdot, dtype=float)
    total = np.array(gamma, dtype=float)
    for n, coefficient in enumerate(series_coefficients(n_terms), start=1):
        total = total + float(coefficient) * gamma ** (6 * n + 1) * bdot ** (2 * n)
    return _out(params.rest_energy * total)


def energy_decomposition(beta, bdot, params, n_terms=40):
    """Assemble the EnergyBreakdown at (beta, bdot)."""
    e_exact = self_energy_exact(beta, bdot, params)
    e_rel = params.rest_energy * lorentz_gamma(beta)
    q_closed = quantum_potential_closed(beta, bdot, params)
    with warnings.catch_warnings():
        # the closed form is the reference here; divergence is expected at large chi
        warnings.simplefilter("ignore", SeriesDivergenceWarning)
        q_series = quantum_potential_series(beta, bdot, n_terms, params)
    return EnergyBreakdown(E_exact=e_exact, E_rel=e_rel, Q_closed=q_closed, Q_series=q_series,
                           identity_defect=_out(np.abs(e_exact - (e_rel + q_closed))),
                           chi=chi_parameter(beta, bdot))


def q_along_trajectory(trajectory, params):
    """
    Quantum potential and exact self-energy along a trajectory.

    Uses the instantaneous (beta, bdot) of every node.

    Returns:
        (t, Q, E_exact) numpy arrays
    """
    beta = trajectory.v / params.c
    bdot = trajectory.a * params.d / params.c ** 2
    return (trajectory.t.copy(),
            np.asarray(quantum_potential_closed(beta, bdot, params)),
            np.asarray(self_energy_exact(beta, bdot, params)))


def energy_table(betas, bdots, n_terms, params):
    """Rows (dicts) of the energy export over the product grid betas x bdots."""
    rows = []
    for beta in betas:
        for bdot in bdots:
            breakdown = energy_decomposition(beta, bdot, params, n_terms=n_terms)
            rows.append({
                "beta": float(beta),
                "bdot": float(bdot),
                "E_exact": breakdown.E_exact,
                "E_rel": breakdown.E_rel,
                "Q_closed": breakdown.Q_closed,
                "Q_series_N": breakdown.Q_series,
                "defect": breakdown.identity_defect,
            })
    return rows


def _out(value):
    return float(value) if np.ndim(value) == 0 else value
