"""
Invariant suite behind the ``verify`` subcommand.

Each check returns (passed, detail). The checks are independent and run on
the thread pool; the table keeps registration order.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..models import constants
from ..models.params import characteristic_period, electron_separation, make_params
from ..physics.energy import (
    energy_decomposition, quantum_potential_closed, quantum_potential_series, series_coefficients,
)
from ..physics.retardation import delay_closed_form, separation_l
from ..physics.selfforce import lw_field, self_force, transverse_force_balance
from ..solvers import dynamics
from ..solvers.spectrum import SearchBox, char_fn, count_roots, find_roots
from ..utils.errors import ZitterdynError
from ..utils.parallel import map_ordered
from ..views.domain_coloring import render_domain_coloring

logger = logging.getLogger("Zitterdyn.verify")

GRID_BETAS = (0.0, 0.3, 0.6, 0.9)
# the three lowest modes above the real axis at rest
MODE_BOX = SearchBox(3.0, 8.0, 5.0, 25.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def check_electron_scale():
    params = make_params(d=electron_separation(), unit_mode=constants.SI)
    radius_fm = params.d / 2.0 * 1e15
    return abs(radius_fm - 0.352) <= 0.02 * 0.352, f"d/2 = {radius_fm:.4f} fm"


def check_period_anchor():
    period = characteristic_period(2.8179e-15, constants.SPEED_OF_LIGHT)
    return abs(period - 1.18e-22) <= 0.01 * 1.18e-22, f"period = {period:.4e} s"


def check_rest_spectrum():
    near = find_roots(0.0, SearchBox(-1.0, 3.0, -1.0, 1.0))
    zero = [root for root in near.roots if root.mu == 0]
    real = [root.mu.real for root in near.roots if root.mu.imag == 0 and root.mu != 0]
    first = find_roots(0.0, SearchBox(3.0, 6.0, 7.0, 10.0))
    ok = (len(zero) == 1 and zero[0].multiplicity == 2
          and len(real) == 1 and abs(real[0] - 1.7932) <= 1e-3
          and first.certified_count == 1
          and abs(first.roots[0].mu - complex(4.55, 8.33)) <= 0.05 * math.sqrt(2.0))
    mu1 = first.roots[0].mu if first.roots else None
    return ok, f"real root {real}, first pair {mu1}"


def check_left_half_plane():
    box = SearchBox(-10.0, -0.1, 0.1, 60.0)
    counts = [count_roots(beta, box) for beta in GRID_BETAS]
    return all(n == 0 for n in counts), f"counts {counts}"


def check_ladder_spacing():
    roots = find_roots(0.0, SearchBox(0.0, 12.0, 0.5, 60.0))
    eta = sorted(root.mu.imag for root in roots.roots if root.mu.imag > 0)
    gaps = np.diff(eta)[2:]
    ratios = gaps / (2.0 * math.pi)
    ok = gaps.size > 0 and bool(np.all((ratios >= 0.95) & (ratios <= 1.05)))
    return ok, f"spacing / 2pi in [{ratios.min():.4f}, {ratios.max():.4f}]" if gaps.size else "too few roots"


def check_delay_identity():
    params = make_params()
    beta, bdot = np.meshgrid(np.linspace(0.0, 0.99, 50), np.linspace(0.0, 1.0, 50))
    r = delay_closed_form(beta, bdot, params)
    l = separation_l(beta, bdot, params)
    defect = float(np.max(np.abs(r * r - l * l - 1.0) / (r * r)))
    return defect < 1e-12, f"max relative defect {defect:.2e}"


def check_energy_identity():
    params = make_params()
    beta, bdot = np.meshgrid(np.linspace(0.0, 0.99, 50), np.linspace(0.0, 1.0, 50))
    parts = energy_decomposition(beta, bdot, params)
    defect = float(np.max(parts.identity_defect / parts.E_exact))
    spot = energy_decomposition(0.6, 0.1, params)
    ok = (defect < 1e-12 and abs(spot.E_exact - 1.226817) < 1e-5
          and abs(spot.Q_closed + 0.023175) < 1e-5)
    return ok, f"max relative defect {defect:.2e}, E(0.6, 0.1) = {spot.E_exact:.6f}"


def check_series_resummation():
    params = make_params()
    bdot = math.sqrt(0.21)
    series = quantum_potential_series(0.0, bdot, 40, params)
    closed = quantum_potential_closed(0.0, bdot, params)
    leading = [str(c) for c in series_coefficients(3)]
    ok = abs(series - closed) < 1e-12 and leading == ["-1/2", "3/8", "-5/16"]
    return ok, f"|series - closed| = {abs(series - closed):.2e}, coefficients {leading}"


def check_force_equivalence(samples=10_000, seed=0):
    params = make_params()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        l = rng.uniform(-5.0, 5.0)
        r = math.hypot(l, params.d)
        beta = rng.uniform(-0.99, 0.99)
        accel = rng.uniform(-2.0, 2.0)
        field = lw_field(l, r, beta, accel, params)
        force = self_force(l, r, beta, accel, params)
        scale = params.force_prefactor * (abs(l - r * beta) * (1 - beta ** 2) + abs(accel)) / (r - l * beta) ** 3
        worst = max(worst, abs(force + params.e_charge * field.E_x) / scale)
    return worst < 1e-12, f"worst scaled mismatch {worst:.2e} over {samples} samples"


def check_transverse_balance():
    params = make_params()
    fy = transverse_force_balance(0.7, math.hypot(0.7, 1.0), 0.4, 0.3, params)
    return abs(fy) < 1e-14, f"F_y = {fy:.2e}"


def check_conjugate_symmetry():
    rng = np.random.default_rng(1)
    z = rng.uniform(-5, 5, 200) + 1j * rng.uniform(-30, 30, 200)
    worst = max(float(np.max(np.abs(char_fn(np.conj(z), beta) - np.conj(char_fn(z, beta)))
                             / np.maximum(1.0, np.abs(char_fn(z, beta)))))
                for beta in GRID_BETAS)
    return worst < 1e-14, f"max relative |f(conj z) - conj f(z)| = {worst:.1e}"


def check_uniform_invariance(delays=50):
    params = make_params()
    worst = 0.0
    for beta in GRID_BETAS:
        tau = dynamics.delay_interval(beta, params)
        seed = dynamics.uniform_history(beta, -2.0 * tau, 0.0, params)
        report = dynamics.propagate(seed, delays * tau, params=params)
        traj = report.trajectory
        worst = max(worst, float(np.max(np.abs(traj.x - beta * params.c * traj.t))))
    return worst < 1e-10 * params.d, f"max deviation {worst:.2e} d over {delays} delays"


def check_instability():
    params = make_params()
    factors = []
    for beta in GRID_BETAS:
        tau = dynamics.delay_interval(beta, params)
        seed = dynamics.pulse_history(beta, 1e-6, 0.08 * tau, -2.0 * tau, 0.0, params)
        report = dynamics.propagate(seed, tau, params=params)
        traj = report.trajectory
        late = traj.t > seed.t_max
        deviation = traj.x[late] - beta * params.c * traj.t[late]
        factors.append(float(np.max(np.abs(deviation))) / 1e-6)
    return min(factors) >= 10.0, "growth " + ", ".join(f"{f:.3g}x" for f in factors)


def check_linear_growth():
    params = make_params()
    roots = find_roots(0.0, SearchBox(0.0, 6.0, -10.0, 10.0))
    nonzero = [root.mu for root in roots.nonzero()]
    rng = np.random.default_rng(7)
    amps = rng.normal(size=len(nonzero)) + 1j * rng.normal(size=len(nonzero))
    seed = dynamics.ModalSeed(modes=tuple(zip(nonzero, 1e-12 * amps)))
    segments = dynamics.propagate_linearized(0.0, seed, 30, params)
    norms = np.array([np.linalg.norm(dx) for _, dx, _ in segments])
    n = np.arange(len(norms))
    slope = np.polyfit(n[10:], np.log(norms[10:]), 1)[0]
    target = max(mu.real for mu in nonzero)
    return abs(slope - target) <= 0.02 * target, f"slope {slope:.4f} vs max Re mu {target:.4f}"


def check_mode_frequency(seed=3):
    params = make_params()
    roots = find_roots(0.0, MODE_BOX)
    mus = [root.mu for root in roots.roots]
    fastest = max(mus, key=lambda mu: mu.real)
    phases = np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi, len(mus))
    tau = dynamics.delay_interval(0.0, params)
    history = dynamics.mode_history(0.0, mus, 1e-12 * np.exp(1j * phases), -2.0 * tau, 0.0, params)
    report = dynamics.propagate(history, 2.0 * tau, params=params)
    window = (history.t_max, report.trajectory.t_max)
    peaks = dynamics.measure_spectrum(report.trajectory, window=window, growth_rate=fastest.real / tau)
    expected = fastest.imag / tau
    ok = bool(peaks) and abs(peaks[0].omega - expected) <= 0.05 * expected
    return ok, f"peak {peaks[0].omega:.4f} vs Im mu / tau {expected:.4f}" if peaks else "no peak"


def check_render_determinism():
    first = render_domain_coloring(0.0, "-3,3,-3,3", 48, workers=2)
    second = render_domain_coloring(0.0, "-3,3,-3,3", 48, workers=1)
    return first.to_ppm_bytes() == second.to_ppm_bytes(), f"{first.width}x{first.height} image"


CHECKS = (
    ("electron scale constants", check_electron_scale),
    ("period anchor", check_period_anchor),
    ("spectrum at rest", check_rest_spectrum),
    ("left half-plane emptiness", check_left_half_plane),
    ("quantization ladder", check_ladder_spacing),
    ("delay identity", check_delay_identity),
    ("energy identity", check_energy_identity),
    ("series resummation", check_series_resummation),
    ("uniform-motion invariance", check_uniform_invariance),
    ("instability", check_instability),
    ("linearized growth rate", check_linear_growth),
    ("mode frequency", check_mode_frequency),
    ("force equivalence", check_force_equivalence),
    ("transverse balance", check_transverse_balance),
    ("conjugate symmetry", check_conjugate_symmetry),
    ("render determinism", check_render_determinism),
)


def _run(entry):
    name, check = entry
    try:
        passed, detail = check()
    except ZitterdynError as e:
        passed, detail = False, f"{type(e).__name__}: {e.message}"
    logger.info(f"{name}: {'pass' if passed else 'FAIL'} ({detail})")
    return CheckResult(name=name, passed=bool(passed), detail=detail)


def run_verification(workers=None, checks=CHECKS):
    """Run every check; results follow the registration order."""
    return map_ordered(_run, checks, workers)


def format_table(results):
    width = max(len(result.name) for result in results)
    lines = [f"{'check'.ljust(width)}  status  detail", f"{'-' * width}  ------  ------"]
    for result in results:
        status = "pass" if result.passed else "FAIL"
        lines.append(f"{result.name.ljust(width)}  {status.ljust(6)}  {result.detail}")
    passed = sum(result.passed for result in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
