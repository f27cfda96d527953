"""
Lienard-Wiechert field and self-force of the two-charge electron.

Charge bookkeeping: each constituent carries -e/2. The field of the emitting
constituent is written with the prefactor q / (8 pi eps0) and q = -e, i.e. the
field of a point charge -e/2 with 4 pi eps0; the force on the whole body is
then F = -e E because both constituents feel mirror-image fields. The sign of
F_x is carried by the kinematic factor alone since e only enters squared.

Only the x component survives: the y components of the two pairwise forces
cancel (see transverse_force_balance).
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..models.state import KinematicState
from ..utils.errors import ModelViolationError

logger = logging.getLogger("Zitterdyn.selfforce")

# Relative tolerance for the loose light-cone check in eom_residual
LIGHTCONE_CHECK = 1e-6


@dataclass(frozen=True)
class FieldSample:
    """
    Electric field at the receiving constituent.

    Attributes:
        E_x, E_y: field components
        velocity_part: (x, y) of the Coulomb-like summand
        radiation_part: (x, y) of the acceleration summand
    """
    E_x: float
    E_y: float
    velocity_part: tuple
    radiation_part: tuple


def _field_prefactor(params):
    # q / (8 pi eps0) with q = -e, written through e^2 / (8 pi eps0) = 2 m_e c^2 d
    return -params.force_prefactor / params.e_charge


def lw_field(l, r, beta_ret, a_ret, params, emitter="upper"):
    """
    Lienard-Wiechert electric field of one constituent at the other.

    Args:
        l: longitudinal displacement x(t) - x(t_r)
        r: retarded separation
        beta_ret: v / c at the emission time
        a_ret: acceleration at the emission time
        params: ModelParams
        emitter: "upper" (separation vector l x + d y) or "lower" (l x - d y)

    Returns:
        FieldSample
    """
    d, c = params.d, params.c
    if not abs(beta_ret) < 1.0:
        raise ModelViolationError("Field requires |beta| < 1", beta=beta_ret)
    if r < d * (1.0 - 1e-12):
        raise ModelViolationError(
            f"Separation r={r} below the transverse distance d={d}", r=r, d=d)

    sign = 1.0 if emitter == "upper" else -1.0
    r_vec = np.array([l, sign * d, 0.0])
    beta_vec = np.array([beta_ret, 0.0, 0.0])
    a_vec = np.array([a_ret, 0.0, 0.0])

    # r u = r_vec - r beta, with u = r_hat - beta
    ru = r_vec - r * beta_vec
    r_dot_u = r - l * beta_ret
    if r_dot_u <= 0:
        raise ModelViolationError("Non-positive r.u, the state is not subluminal", r=r, l=l, beta=beta_ret)

    scale = _field_prefactor(params) / r_dot_u ** 3
    velocity = scale * ru * (1.0 - beta_ret ** 2)
    radiation = scale * np.cross(r_vec, np.cross(ru, a_vec)) / c ** 2
    total = velocity + radiation
    return FieldSample(E_x=float(total[0]), E_y=float(total[1]),
                       velocity_part=(float(velocity[0]), float(velocity[1])),
                       radiation_part=(float(radiation[0]), float(radiation[1])))


def self_force(l, r, beta_ret, a_ret, params):
    """
    Force the particle exerts on itself along x.

        F_x = e^2/(8 pi eps0) ((l - r beta)(1 - beta^2) - d^2 a / c^2) / (r - l beta)^3

    Accepts scalars or numpy arrays.
    """
    d, c = params.d, params.c
    l = np.asarray(l, dtype=float)
    r = np.asarray(r, dtype=float)
    beta = np.asarray(beta_ret, dtype=float)
    a = np.asarray(a_ret, dtype=float)
    denom = r - l * beta
    if np.any(denom <= 0):
        raise ModelViolationError("r - l beta must be positive (superluminal or invalid state)")
    force = params.force_prefactor * ((l - r * beta) * (1.0 - beta ** 2) - d ** 2 * a / c ** 2) / denom ** 3
    return float(force) if force.ndim == 0 else force


def transverse_force_balance(l, r, beta_ret, a_ret, params):
    """
    Total y force on the body: upper-on-lower plus lower-on-upper.

    Each receiving constituent carries -e/2, so the sum is -(e/2)(E_y + E_y').
    It vanishes by the mirror symmetry of the arrangement.
    """
    upper = lw_field(l, r, beta_ret, a_ret, params, emitter="upper")
    lower = lw_field(l, r, beta_ret, a_ret, params, emitter="lower")
    return -0.5 * params.e_charge * (upper.E_y + lower.E_y)


def eom_residual(state_emit, x_receive, r, params):
    """
    Residual of the emission-time equation of motion.

        (d/c)^2 a(t_r) + (r/c)(1 - beta^2) v(t_r) + (1 - beta^2)(x(t_r) - x(t))

    It vanishes exactly when the self-force vanishes, i.e. on-shell. The
    light-cone consistency of r is only checked loosely and logged.

    Args:
        state_emit: KinematicState at the emission time t_r
        x_receive: position at the reception time t = t_r + r / c
        r: retarded separation
        params: ModelParams
    """
    d = params.d
    l = x_receive - state_emit.x
    defect = abs(r * r - l * l - d * d)
    if defect > LIGHTCONE_CHECK * r * r:
        logger.warning(f"eom_residual called off the light cone: |r^2 - l^2 - d^2| = {defect:.3e}")
    return emission_residual(state_emit.x, state_emit.v, state_emit.a, x_receive, r, params)


def emission_residual(x_emit, v_emit, a_emit, x_receive, r, params):
    """
    Emission-time residual on plain numbers or numpy arrays, without the
    light-cone check; used for whole trajectories.
    """
    d, c = params.d, params.c
    v_emit = np.asarray(v_emit, dtype=float)
    one_minus = 1.0 - (v_emit / c) ** 2
    res = ((d / c) ** 2 * np.asarray(a_emit, dtype=float)
           + (np.asarray(r, dtype=float) / c) * one_minus * v_emit
           + one_minus * (np.asarray(x_emit, dtype=float) - np.asarray(x_receive, dtype=float)))
    return float(res) if res.ndim == 0 else res


def present_time_acceleration(v, x, x_advanced, r, params):
    """
    Acceleration from the present-time form of the equation of motion.

    The emission-time equation shifted forward by r / c, with the advanced
    position x_advanced = x(t + r/c):

        a = -(c/d)(r/d)(1 - beta^2) v - (c/d)^2 (1 - beta^2)(x - x_advanced)
    """
    d, c = params.d, params.c
    one_minus = 1.0 - (np.asarray(v, dtype=float) / c) ** 2
    acc = -(c / d) * (r / d) * one_minus * v - (c / d) ** 2 * one_minus * (x - x_advanced)
    return float(acc) if np.ndim(acc) == 0 else acc


def effective_inertia(params, step=1e-3):
    """
    Acceleration coefficient of the equation of motion, read off numerically.

    Differentiates eom_residual with respect to a on a uniform-motion state;
    the result is d^2 / c^2 (the electromagnetic inertia per unit m_e c^2 / d).
    """
    d, c = params.d, params.c
    accel = step * c ** 2 / d
    plus = KinematicState.from_kinematics(0.0, 0.0, 0.0, accel, params)
    minus = KinematicState.from_kinematics(0.0, 0.0, 0.0, -accel, params)
    return (eom_residual(plus, 0.0, d, params) - eom_residual(minus, 0.0, d, params)) / (2.0 * accel)


def electromagnetic_mass(params):
    """
    Electromagnetic mass m_e = e^2 / (16 pi eps0 d c^2).

    Computed from the charge and permittivity in SI mode, so it can be checked
    against the mass stored in the parameters; 1 in dimensionless mode.
    """
    if not params.is_si:
        return 1.0
    return params.e_charge ** 2 / (16.0 * np.pi * params.eps0 * params.d * params.c ** 2)
