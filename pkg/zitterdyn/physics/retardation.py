r"""
State-dependent retardation of the self-interaction.

Geometry: the two constituents sit at y = +d/2 and y = -d/2 and move along x.
A signal emitted by one of them at t_r reaches the other at t after covering
r = c (t - t_r), where r^2 = l^2 + d^2 and l = x(t) - x(t_r).

    emitter (t_r)  o
                   |\
                 d | \ r
                   |  \
                   +---o  receiver (t)
                     l

All closed forms below are written with the dimensionless acceleration
bdot = a d / c^2 taken at the emission time.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..models.params import lorentz_gamma
from ..utils.errors import ModelViolationError, RetardationError

logger = logging.getLogger("Zitterdyn.retardation")

# Light-cone tolerance, in units of d
TOL_LIGHTCONE = 1e-12
MAX_ITERATIONS = 200


@dataclass(frozen=True)
class DelayResult:
    """
    Solution of the light-cone condition at reception time t.

    Attributes:
        r: retarded separation
        t_r: emission time
        l: longitudinal displacement x(t) - x(t_r)
        residual: |c (t - t_r) - sqrt(l^2 + d^2)|
        t: reception time
    """
    r: float
    t_r: float
    l: float
    residual: float
    t: float

    @property
    def tau(self):
        """Delay t - t_r."""
        return self.t - self.t_r


def delay_closed_form(beta, bdot, params):
    """
    Retarded separation as a function of the emission-time kinematics.

        r / d = gamma sqrt(1 + gamma^6 bdot^2) + gamma^4 beta bdot

    Only the branch continuous with r = gamma d at bdot = 0 is returned; the
    other root of the underlying quadratic is negative.

    Args:
        beta: v / c at the emission event
        bdot: a d / c^2 at the emission event
        params: ModelParams

    Returns:
        r in length units (float or array, matching the inputs)
    """
    gamma = np.asarray(lorentz_gamma(beta))
    beta = np.asarray(beta, dtype=float)
    bdot = np.asarray(bdot, dtype=float)
    g3b = gamma ** 3 * bdot
    r = gamma * np.sqrt(1.0 + g3b * g3b) + gamma ** 4 * beta * bdot
    return _out(r * params.d)


def separation_l(beta, bdot, params):
    """
    Longitudinal displacement between emission and reception.

    The radicand is the expanded square of gamma beta sqrt(1 + gamma^6 bdot^2)
    + gamma^4 bdot; l carries the sign of that expression, so decelerating
    and backward motion are covered as well.
    """
    gamma = np.asarray(lorentz_gamma(beta))
    beta = np.asarray(beta, dtype=float)
    bdot = np.asarray(bdot, dtype=float)
    root = np.sqrt(1.0 + gamma ** 6 * bdot * bdot)
    radicand = (gamma ** 2 * beta ** 2
                + gamma ** 8 * bdot ** 2 * (1.0 + beta ** 2)
                + 2.0 * gamma ** 5 * beta * bdot * root)
    # rounding can push an exact zero slightly negative
    floor = -1e-12 * (1.0 + gamma ** 8 * bdot ** 2 * (1.0 + beta ** 2))
    if np.any(radicand < floor):
        bad = np.argmin(radicand - floor)
        raise ModelViolationError(
            "Negative radicand in the separation formula",
            beta=np.ravel(beta * np.ones_like(radicand))[bad],
            bdot=np.ravel(bdot * np.ones_like(radicand))[bad],
            radicand=np.ravel(radicand)[bad])
    sign = np.where(gamma * beta * root + gamma ** 4 * bdot < 0, -1.0, 1.0)
    return _out(sign * np.sqrt(np.maximum(radicand, 0.0)) * params.d)


def delay_variation(beta, params, delta_vdot, delta_gamma):
    """
    First-order variation of r about uniform motion.

        delta_r = gamma^4 beta (d/c)^2 delta_vdot + d delta_gamma
    """
    gamma = lorentz_gamma(beta)
    return gamma ** 4 * beta * (params.d / params.c) ** 2 * delta_vdot + params.d * delta_gamma


def solve_retarded_time(history, t, params, r_max=None, tol=TOL_LIGHTCONE):
    """
    Solve c (t - t_r) = sqrt((x(t) - x(t_r))^2 + d^2) for t_r < t on a history.

    The defect g(t_r) = c (t - t_r) - sqrt(...) is strictly decreasing while
    |v| < c, with g(t) = -d, so the root is unique. It is bracketed by
    backtracking from t, narrowed by bisection and polished with Newton steps.

    Args:
        history: TrajectoryHistory covering the emission time
        t: reception time
        params: ModelParams
        r_max: optional bound on r; the bracket never reaches further back than r_max / c
        tol: light-cone tolerance in units of d

    Returns:
        DelayResult
    """
    d, c = params.d, params.c
    if not history.t_min < t <= history.t_max:
        raise RetardationError(
            f"Reception time {t} outside history span {history.span}", t=t, span=list(history.span))

    x_t = float(history.x_at(t))

    def defect(t_r):
        l = x_t - float(history.x_at(t_r))
        return c * (t - t_r) - math.hypot(l, d)

    t_hi, g_hi = t, -d
    stride = 2.0 * d / c
    t_lo = t - stride
    limit = history.t_min if r_max is None else max(history.t_min, t - r_max / c)
    while True:
        if t_lo < limit:
            t_lo = limit
            g_lo = defect(t_lo)
            if g_lo <= 0:
                raise RetardationError(
                    f"History too short to bracket the retarded time of t={t}",
                    t=t, t_min=history.t_min, r_max=r_max)
            break
        g_lo = defect(t_lo)
        if g_lo > 0:
            break
        t_hi, g_hi = t_lo, g_lo
        stride *= 2.0
        t_lo = t - stride

    # bisection down to a bracket of width ~ d/c * 1e-3, then Newton
    abs_tol = tol * d
    iterations = 0
    while (t_hi - t_lo) * c > 1e-3 * d and iterations < MAX_ITERATIONS:
        t_mid = 0.5 * (t_lo + t_hi)
        g_mid = defect(t_mid)
        if g_mid > 0:
            t_lo, g_lo = t_mid, g_mid
        else:
            t_hi, g_hi = t_mid, g_mid
        iterations += 1

    t_r = 0.5 * (t_lo + t_hi)
    g = defect(t_r)
    while abs(g) > abs_tol and iterations < MAX_ITERATIONS:
        l = x_t - float(history.x_at(t_r))
        slope = -c + l * float(history.v_at(t_r)) / math.hypot(l, d)
        step = t_r - g / slope
        if not t_lo <= step <= t_hi:
            # Newton left the bracket, fall back to bisection
            step = 0.5 * (t_lo + t_hi)
        t_r = step
        g = defect(t_r)
        if g > 0:
            t_lo = t_r
        else:
            t_hi = t_r
        iterations += 1

    if abs(g) > abs_tol:
        raise RetardationError(
            f"Retarded time did not converge for t={t}", t=t, residual=abs(g), iterations=iterations)

    l = x_t - float(history.x_at(t_r))
    logger.debug(f"Retarded time for t={t}: t_r={t_r}, iterations={iterations}")
    return DelayResult(r=c * (t - t_r), t_r=t_r, l=l, residual=abs(g), t=t)


def _out(value):
    return float(value) if np.ndim(value) == 0 else value
