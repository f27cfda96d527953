"""
Trajectory propagation for the emission-time equation of motion.

Read at the emission time t_r, the equation of motion pins the position at
the reception time t_r + r/c:

    x(t_r + r/c) = x(t_r) + (r/c) v(t_r) + (d/c)^2 a(t_r) / (1 - beta^2)

with r from the closed-form delay. Every node of the known history is mapped
to an image point ahead of it; the images are interpolated onto the uniform
grid, and v, a on the new stretch come from differentiating that interpolant
(method of steps). Each stretch consumes two derivatives of the previous one,
so grid-scale rounding is amplified by roughly 12 / h^2 per delay; the
nonlinear propagator therefore works on the deviation from a straight
reference line, which keeps uniform seeds exactly uniform.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import signal
from scipy.interpolate import CubicSpline

from ..models.params import lorentz_gamma
from ..models.state import TrajectoryHistory
from ..physics.retardation import delay_closed_form
from ..physics.selfforce import emission_residual
from ..utils.errors import ModelViolationError, PropagationError

logger = logging.getLogger("Zitterdyn.dynamics")

# Grid nodes per delay interval
NODES_PER_DELAY = 64
TOL_EOM = 1e-8               # in units of d
MONOTONICITY_FLOOR = 1e-6
SPEED_GUARD = 0.999
NEAR_LUMINAL = 0.95
MAX_GRID_REFINEMENTS = 2
# nodes kept between the accepted stretch and either end of the interpolant;
# spline end effects decay by about 0.27 per node
OVERLAP_NODES = 8
# pulse tails at the edges of the last seed delay, relative to the amplitude
PULSE_TAIL = 1e-8


@dataclass
class PropagationReport:
    """
    Outcome of a propagation run.

    Attributes:
        trajectory: seed plus propagated nodes
        max_eom_residual: worst |residual| over emission nodes whose image lies past the seed
        min_monotonicity_margin: smallest d(s + r(s)/c)/ds met while stepping
        events: near-luminal speed and grid refinement notices
        grid_step: step actually used
        segments: number of method-of-steps stretches
        status: "ok", or "failed" on the report a residual PropagationError carries as .report
    """
    trajectory: TrajectoryHistory
    max_eom_residual: float
    min_monotonicity_margin: float
    events: list = field(default_factory=list)
    grid_step: float = 0.0
    segments: int = 0
    status: str = "ok"

    def summary(self):
        return {
            "status": self.status,
            "nodes": len(self.trajectory),
            "t_min": self.trajectory.t_min,
            "t_max": self.trajectory.t_max,
            "grid_step": self.grid_step,
            "segments": self.segments,
            "max_eom_residual": self.max_eom_residual,
            "min_monotonicity_margin": self.min_monotonicity_margin,
            "events": list(self.events),
        }


class SpectralPeak(NamedTuple):
    omega: float
    power: float


@dataclass(frozen=True)
class ModalSeed:
    """
    Linear perturbation given as Re sum_k A_k exp(mu_k t / tau) on one delay interval.

    Each mode is a (mu, amplitude) pair; mu is in units of the delay tau = gamma d / c.
    """
    modes: tuple
    samples: int = NODES_PER_DELAY


@dataclass(frozen=True)
class SampledSeed:
    """
    Linear perturbation sampled on one delay interval.

    dv and ddv default to derivatives of a cubic spline through dx. Complex
    samples are allowed; the linear map acts on them unchanged.
    """
    t: np.ndarray
    dx: np.ndarray
    dv: np.ndarray = None
    ddv: np.ndarray = None


def delay_interval(beta, params):
    """Delay gamma d / c of uniform motion at speed beta c."""
    return lorentz_gamma(beta) * params.d / params.c


def _grid(t0, t1, step):
    if not t1 > t0:
        raise ModelViolationError(f"Empty time span [{t0}, {t1}]", t0=t0, t1=t1)
    n = max(1, int(math.ceil((t1 - t0) / step - 1e-9)))
    return np.linspace(t0, t1, n + 1)


def _reference_line(t, t0, x0, v0):
    # shared by the seed builders and propagate, so uniform seeds subtract to exact zeros
    return x0 + v0 * (t - t0)


def uniform_history(beta, t0, t1, params, grid_step=None):
    """
    Uniform motion x = beta c t, v = beta c, a = 0 sampled on [t0, t1].

    Every uniform motion is an exact solution of the equation of motion.
    """
    tau = delay_interval(beta, params)
    step = grid_step or tau / NODES_PER_DELAY
    t = _grid(t0, t1, step)
    v = beta * params.c
    x = _reference_line(t, t0, v * t0, v)
    return TrajectoryHistory(t, x, np.full_like(t, v), np.zeros_like(t), c=params.c)


def pulse_history(beta, amplitude, width, t0, t1, params, center=None, grid_step=None):
    """
    Uniform motion plus a Gaussian position pulse A exp(-(t - t_c)^2 / (2 w^2)).

    Only the last delay interval of a seed drives the propagation, so the
    pulse is centred in [t1 - tau, t1] unless center is given. The seed joins
    the propagated part smoothly only while the pulse has died out at both
    edges of that interval, which needs width <= tau / 12 or so.
    """
    if not width > 0:
        raise ModelViolationError(f"Pulse width must be positive, got {width}", width=width)
    tau = delay_interval(beta, params)
    step = grid_step or tau / NODES_PER_DELAY
    t = _grid(t0, t1, step)
    tc = t1 - 0.5 * tau if center is None else center
    edge = min(abs(tc - (t1 - tau)), abs(t1 - tc))
    if math.exp(-0.5 * (edge / width) ** 2) > PULSE_TAIL:
        logger.warning(f"Pulse of width {width:.4g} reaches the edges of the last delay interval; "
                       "the propagated part will not join the seed smoothly")
    u = (t - tc) / width
    g = amplitude * np.exp(-0.5 * u * u)
    v0 = beta * params.c
    x = _reference_line(t, t0, v0 * t0, v0) + g
    v = v0 - g * u / width
    a = g * (u * u - 1.0) / width ** 2
    return TrajectoryHistory(t, x, v, a, c=params.c)


def mode_history(beta, mu, amplitude, t0, t1, params, grid_step=None):
    """
    Uniform motion plus characteristic modes Re(sum_k A_k exp(mu_k t / tau)).

    mu and amplitude are scalars or equally long sequences; mu is dimensionless
    (a root of the characteristic function), tau = gamma d / c.
    """
    tau = delay_interval(beta, params)
    step = grid_step or tau / NODES_PER_DELAY
    t = _grid(t0, t1, step)
    rates = np.atleast_1d(np.asarray(mu, dtype=complex)) / tau
    amps = np.atleast_1d(np.asarray(amplitude, dtype=complex))
    if amps.shape != rates.shape:
        raise ModelViolationError(f"{rates.size} modes but {amps.size} amplitudes",
                                  modes=rates.size, amplitudes=amps.size)
    waves = amps[:, None] * np.exp(rates[:, None] * t[None, :])
    v0 = beta * params.c
    x = _reference_line(t, t0, v0 * t0, v0) + waves.sum(axis=0).real
    v = v0 + (rates[:, None] * waves).sum(axis=0).real
    a = (rates[:, None] ** 2 * waves).sum(axis=0).real
    return TrajectoryHistory(t, x, v, a, c=params.c)


def advance_map(state_emit, params):
    """
    Reception event pinned by an emission state.

    Args:
        state_emit: KinematicState at the emission time
        params: ModelParams

    Returns:
        (t_arrive, x_arrive)
    """
    lorentz_gamma(state_emit.beta)
    r = delay_closed_form(state_emit.beta, state_emit.bdot, params)
    c, d = params.c, params.d
    t_arrive = state_emit.t + r / c
    x_arrive = (state_emit.x + (r / c) * state_emit.v
                + (d / c) ** 2 * state_emit.a / (1.0 - state_emit.beta ** 2))
    return t_arrive, x_arrive


def _image(t, xi, xi_v, a, v0, params):
    # advance map in the frame of the reference line; r uses the full velocity
    c, d = params.c, params.d
    beta = (v0 + xi_v) / c
    r = delay_closed_form(beta, a * d / c ** 2, params)
    t_arr = t + r / c
    xi_arr = xi + (r / c) * xi_v + (d / c) ** 2 * a / (1.0 - beta * beta)
    return t_arr, xi_arr


def eom_residuals(history, params, t_from=None):
    """
    Residual of the emission-time equation at every node whose reception is covered.

    Args:
        history: TrajectoryHistory
        params: ModelParams
        t_from: only keep emission nodes whose reception time is later than this

    Returns:
        (t_emit, residual) arrays
    """
    c, d = params.c, params.d
    beta = history.v / c
    r = delay_closed_form(beta, history.a * d / c ** 2, params)
    t_recv = history.t + r / c
    keep = t_recv <= history.t_max
    if t_from is not None:
        keep &= t_recv > t_from
    x_recv = history.x_at(t_recv[keep])
    res = emission_residual(history.x[keep], history.v[keep], history.a[keep], x_recv, r[keep], params)
    return history.t[keep], np.atleast_1d(res)


def reverse_history(history):
    """Time-reversed copy: t -> -t, v -> -v, a unchanged."""
    return TrajectoryHistory(-history.t[::-1], history.x[::-1], -history.v[::-1],
                             history.a[::-1], c=history.c)


def propagate(seed, t_end, grid_step=None, params=None, tol_eom=TOL_EOM,
              max_refinements=MAX_GRID_REFINEMENTS):
    """
    Extend a seed history to t_end by the method of steps.

    Args:
        seed: TrajectoryHistory covering at least one delay interval
        t_end: final time
        grid_step: node spacing of the propagated part (default tau / 64)
        params: ModelParams
        tol_eom: residual tolerance in units of d
        max_refinements: grid halvings tried when the residual check fails

    Returns:
        PropagationReport
    """
    if params is None:
        raise ModelViolationError("propagate needs model parameters")
    fastest = float(np.max(np.abs(seed.v))) / params.c
    if fastest > SPEED_GUARD:
        raise PropagationError(f"Seed speed {fastest:.6f} c exceeds the guard {SPEED_GUARD}",
                               beta=fastest, guard=SPEED_GUARD)
    tau_end = delay_closed_form(seed.v[-1] / params.c, seed.a[-1] * params.d / params.c ** 2, params) / params.c
    if seed.t_max - seed.t_min < tau_end * (1.0 - 1e-9):
        raise ModelViolationError(
            f"Seed spans {seed.t_max - seed.t_min:.6g}, less than one delay interval {tau_end:.6g}",
            span=seed.t_max - seed.t_min, delay=tau_end)
    if not t_end > seed.t_max:
        raise ModelViolationError(f"t_end={t_end} must lie after the seed end {seed.t_max}",
                                  t_end=t_end, seed_end=seed.t_max)

    step = grid_step or delay_interval(seed.v[0] / params.c, params) / NODES_PER_DELAY
    events = []
    for attempt in range(max_refinements + 1):
        report = _propagate_once(seed, t_end, step, params, events)
        tol = tol_eom * params.d
        if report.max_eom_residual <= tol:
            logger.info(f"Propagated to t={report.trajectory.t_max:.6g} in {report.segments} segments, "
                        f"max residual {report.max_eom_residual:.3e}")
            return report
        if attempt < max_refinements:
            step *= 0.5
            events.append({"event": "grid_refinement", "grid_step": step,
                           "residual": report.max_eom_residual})
            logger.warning(f"Residual {report.max_eom_residual:.3e} above {tol:.1e}, "
                           f"halving grid step to {step:.6g}")

    report.status = "failed"
    error = PropagationError(
        f"Equation-of-motion residual {report.max_eom_residual:.3e} above tolerance after refinement",
        residual=report.max_eom_residual, tolerance=tol_eom * params.d, grid_step=step)
    error.report = report
    raise error


def _propagate_once(seed, t_end, h, params, events):
    c = params.c
    t0, x0, v0 = float(seed.t[0]), float(seed.x[0]), float(seed.v[0])

    t = seed.t.copy()
    xi = seed.x - _reference_line(seed.t, t0, x0, v0)
    xi_v = seed.v - v0
    a = seed.a.copy()

    t_base = float(seed.t[-1])
    n_new = 0
    segments = 0
    min_margin = math.inf
    warned = False

    while t_end - t[-1] >= h * (1.0 - 1e-9):
        frontier = t[-1]
        t_arr, xi_arr = _image(t, xi, xi_v, a, v0, params)

        k0 = max(0, int(np.searchsorted(t_arr, frontier - OVERLAP_NODES * h)) - 2)
        s, ta, xa = t[k0:], t_arr[k0:], xi_arr[k0:]
        margins = np.diff(ta) / np.diff(s)
        worst = int(np.argmin(margins))
        min_margin = min(min_margin, float(margins[worst]))
        if margins[worst] < MONOTONICITY_FLOOR:
            raise PropagationError(
                f"Advance map folds near s={s[worst]:.6g} (margin {margins[worst]:.3e})",
                s=float(s[worst]), margin=float(margins[worst]), floor=MONOTONICITY_FLOOR)

        spline = CubicSpline(ta, xa)
        if ta[-1] >= t_end:
            k_last = int(math.floor((t_end - t_base) / h + 1e-9))
        else:
            k_last = int(math.floor((float(ta[-1]) - t_base) / h + 1e-9))
            if k_last > n_new:
                k_last = max(n_new + 1, k_last - OVERLAP_NODES)
        if k_last <= n_new:
            raise PropagationError(f"No progress past t={frontier:.6g}", t=frontier, grid_step=h)
        t_new = t_base + h * np.arange(n_new + 1, k_last + 1)

        xi_new = spline(t_new)
        v_new = spline(t_new, 1)
        a_new = spline(t_new, 2)
        if not np.all(np.isfinite(xi_new) & np.isfinite(v_new) & np.isfinite(a_new)):
            raise PropagationError(f"Non-finite state after t={frontier:.6g}", t=frontier)

        speed = np.abs(v0 + v_new) / c
        fastest = float(np.max(speed))
        if fastest > SPEED_GUARD:
            k = int(np.argmax(speed))
            raise PropagationError(f"Speed {fastest:.6f} c exceeds the guard at t={t_new[k]:.6g}",
                                   t=float(t_new[k]), beta=fastest, guard=SPEED_GUARD)
        if fastest > NEAR_LUMINAL and not warned:
            warned = True
            events.append({"event": "near_luminal", "t": float(t_new[int(np.argmax(speed))]), "beta": fastest})
            logger.warning(f"Near-luminal speed {fastest:.4f} c reached")

        t = np.concatenate([t, t_new])
        xi = np.concatenate([xi, xi_new])
        xi_v = np.concatenate([xi_v, v_new])
        a = np.concatenate([a, a_new])
        n_new = k_last
        segments += 1
        logger.debug(f"segment {segments}: t in ({frontier:.6g}, {t[-1]:.6g}], {t_new.size} nodes")

    trajectory = TrajectoryHistory(t, _reference_line(t, t0, x0, v0) + xi, v0 + xi_v, a, c=c)
    _, residual = eom_residuals(trajectory, params, t_from=seed.t_max)
    worst = float(np.max(np.abs(residual))) if residual.size else 0.0
    return PropagationReport(trajectory=trajectory, max_eom_residual=worst,
                             min_monotonicity_margin=min_margin, events=list(events),
                             grid_step=h, segments=segments)


def branch_step(beta, params):
    """Coefficients (1, gamma^3 d/c, gamma^4 (d/c)^2) of the linearized one-delay map."""
    gamma = lorentz_gamma(beta)
    tau0 = params.d / params.c
    return 1.0, gamma ** 3 * tau0, gamma ** 4 * tau0 ** 2


def propagate_linearized(beta, delta_seed, n_segments, params):
    """
    Propagate a perturbation of uniform motion with the constant-delay map

        dx(t + tau) = dx(t) + gamma^3 (d/c) dv(t) + gamma^4 (d/c)^2 dv'(t),  tau = gamma d / c

    Args:
        beta: velocity of the unperturbed motion
        delta_seed: ModalSeed or SampledSeed on one delay interval
        n_segments: number of delay intervals to add
        params: ModelParams

    Returns:
        list of (t, dx, dv) array triples, the seed first
    """
    tau = delay_interval(beta, params)
    if n_segments < 0:
        raise ModelViolationError(f"n_segments must be non-negative, got {n_segments}", n_segments=n_segments)
    if isinstance(delta_seed, ModalSeed):
        return _propagate_modes(beta, delta_seed, n_segments, tau)
    if isinstance(delta_seed, SampledSeed):
        return _propagate_samples(beta, delta_seed, n_segments, tau, params)
    raise ModelViolationError(f"Unsupported perturbation seed {type(delta_seed).__name__}")


def _propagate_modes(beta, seed, n_segments, tau):
    gamma_sq = lorentz_gamma(beta) ** 2
    local = np.linspace(0.0, 1.0, seed.samples + 1)[:-1]
    mus = np.array([complex(mu) for mu, _ in seed.modes])
    amps = np.array([complex(amp) for _, amp in seed.modes])
    multipliers = 1.0 + gamma_sq * mus + gamma_sq * mus * mus

    segments = []
    for n in range(n_segments + 1):
        coeff = amps * multipliers ** n
        waves = coeff[:, None] * np.exp(mus[:, None] * local[None, :])
        dx = waves.sum(axis=0).real
        dv = (mus[:, None] / tau * waves).sum(axis=0).real
        if not np.all(np.isfinite(dx) & np.isfinite(dv)):
            raise PropagationError(f"Linearized amplitude overflowed in segment {n}", segment=n)
        segments.append(((n + local) * tau, dx, dv))
    return segments


def _propagate_samples(beta, seed, n_segments, tau, params):
    t = np.asarray(seed.t, dtype=float)
    if t.size < 4 or np.any(np.diff(t) <= 0):
        raise ModelViolationError("A sampled seed needs at least four increasing times")
    if t[-1] - t[0] > tau * (1.0 + 1e-9):
        raise ModelViolationError(f"Sampled seed spans more than one delay {tau:.6g}",
                                  span=float(t[-1] - t[0]), delay=tau)
    dx = np.asarray(seed.dx)
    spline = CubicSpline(t, dx)
    dv = spline(t, 1) if seed.dv is None else np.asarray(seed.dv)
    ddv = spline(t, 2) if seed.ddv is None else np.asarray(seed.ddv)

    one, k_v, k_a = branch_step(beta, params)
    segments = [(t, dx, dv)]
    for n in range(1, n_segments + 1):
        t = t + tau
        dx = one * dx + k_v * dv + k_a * ddv
        if not np.all(np.isfinite(dx)):
            raise PropagationError(f"Linearized amplitude overflowed in segment {n}", segment=n)
        spline = CubicSpline(t, dx)
        dv, ddv = spline(t, 1), spline(t, 2)
        segments.append((t, dx, dv))
    return segments


def measure_spectrum(trajectory, window=None, growth_rate=0.0, quantity="a",
                     nfft_factor=16, floor=1e-10, max_peaks=10):
    """
    Periodogram peaks of a(t) (or x, v) over a time window.

    The signal is resampled on the trajectory grid, multiplied by
    exp(-growth_rate (t - t0)) to remove an exponential envelope, mean-removed
    and Hann-windowed; zero padding refines the peak position.

    Args:
        trajectory: TrajectoryHistory
        window: (t0, t1) inside the trajectory span, default the whole span
        growth_rate: envelope rate in 1 / time
        quantity: "a", "v" or "x"
        nfft_factor: zero-padding factor
        floor: peaks below floor * mean(signal^2) are dropped
        max_peaks: keep at most this many

    Returns:
        list of SpectralPeak(omega, power), strongest first; omega is angular
    """
    t0, t1 = trajectory.span if window is None else window
    if not (trajectory.t_min <= t0 < t1 <= trajectory.t_max):
        raise ModelViolationError(f"Window [{t0}, {t1}] outside trajectory span {trajectory.span}",
                                  window=[t0, t1], span=list(trajectory.span))
    h = trajectory.grid_step
    n = int(math.floor((t1 - t0) / h + 1e-9)) + 1
    if n < 16:
        raise ModelViolationError(f"Window too short: {n} samples", samples=n, window=[t0, t1])
    t = t0 + h * np.arange(n)

    readers = {"a": trajectory.a_at, "v": trajectory.v_at, "x": trajectory.x_at}
    try:
        values = np.asarray(readers[quantity](t), dtype=float)
    except KeyError:
        raise ModelViolationError(f"Unknown quantity {quantity!r}", quantity=quantity) from None
    values = values * np.exp(-growth_rate * (t - t0))

    freq, power = signal.periodogram(values, fs=1.0 / h, window="hann",
                                     nfft=nfft_factor * n, detrend="constant", scaling="spectrum")
    threshold = floor * float(np.mean(values * values)) + np.finfo(float).tiny
    peaks, _ = signal.find_peaks(power, height=threshold)
    order = peaks[np.argsort(power[peaks])[::-1]][:max_peaks]
    return [SpectralPeak(omega=float(2.0 * np.pi * freq[k]), power=float(power[k])) for k in order]
