"""
Characteristic roots of the linearized motion about uniform velocity.

    f(mu) = mu^2 + mu + (1 - beta^2)(1 - exp(mu)),   mu = lambda gamma d / c

Roots are seeded by Newton iteration from a lattice over a search box,
deduplicated, polished, and certified against an argument-principle count
over the box boundary.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ..models.params import lorentz_gamma
from ..utils.errors import CertificationError, ContourError, ModelViolationError

logger = logging.getLogger("Zitterdyn.spectrum")

RE_CAP = 50.0                # exp(mu) stays far from overflow
DEDUP_RADIUS = 1e-6
# Newton converges only linearly onto the double root at 0, so candidates
# this close to the origin belong to the cluster {0, exceptional root}
ZERO_CLUSTER_RADIUS = 1e-3
TOL_ROOT = 1e-12             # relative to max(1, |mu|^2)
NEWTON_SWEEPS = 60
POLISH_SWEEPS = 30
MAX_PHASE_STEP = math.pi / 3
CONTOUR_MIN_MODULUS = 1e-9
CONTOUR_MAX_POINTS = 1 << 18
# outward shifts tried when a box edge runs through a root
BOX_PERTURBATIONS = (0.0, 1e-3, 1e-2, 5e-2)

# The seven velocities of the spectrum sweep
DEFAULT_BETAS = (0.0, 0.15, 0.3, 0.45, 0.6, 0.75, 0.9)


@dataclass(frozen=True)
class SearchBox:
    """Rectangle [re_min, re_max] x [im_min, im_max] in the complex mu plane."""
    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ModelViolationError("Search box is degenerate", box=self.as_tuple())
        if self.re_max > RE_CAP:
            raise ModelViolationError(f"Search box must keep Re mu <= {RE_CAP}", box=self.as_tuple())

    @classmethod
    def parse(cls, text):
        """Parse "re_min,re_max,im_min,im_max"."""
        try:
            values = [float(part) for part in str(text).split(",")]
        except ValueError:
            raise ModelViolationError(f"Cannot parse search box {text!r}", box=text) from None
        if len(values) != 4:
            raise ModelViolationError(f"Search box needs four numbers, got {text!r}", box=text)
        return cls(*values)

    def as_tuple(self):
        return (self.re_min, self.re_max, self.im_min, self.im_max)

    def contains(self, z, tol=0.0):
        z = np.asarray(z)
        return ((z.real >= self.re_min - tol) & (z.real <= self.re_max + tol)
                & (z.imag >= self.im_min - tol) & (z.imag <= self.im_max + tol))

    def expanded(self, eps):
        return SearchBox(self.re_min - eps, self.re_max + eps, self.im_min - eps, self.im_max + eps)

    @property
    def is_symmetric(self):
        return self.im_min == -self.im_max

    def corners(self):
        """Counter-clockwise corners, starting bottom-left."""
        return (complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max), complex(self.re_min, self.im_max))


DEFAULT_BOX = SearchBox(0.0, 12.0, -60.0, 60.0)


@dataclass(frozen=True)
class Root:
    """One root of the characteristic function."""
    mu: complex
    residual: float
    multiplicity: int = 1
    is_conjugate_partner: bool = False

    @property
    def eta(self):
        return self.mu.imag


@dataclass(frozen=True)
class RootSet:
    """
    Certified roots of f inside a search box.

    Attributes:
        beta: velocity parameter
        roots: tuple of Root, sorted by (|Im|, Im, Re)
        search_box: the box actually certified (possibly nudged outward)
        certified_count: argument-principle count, multiplicities included
    """
    beta: float
    roots: tuple
    search_box: SearchBox
    certified_count: int
    grid_density: int = field(default=0, compare=False)

    @property
    def total_multiplicity(self):
        return sum(root.multiplicity for root in self.roots)

    def values(self):
        return np.array([root.mu for root in self.roots], dtype=complex)

    def nonzero(self):
        return tuple(root for root in self.roots if root.mu != 0)

    def max_real_part(self, include_zero=False):
        roots = self.roots if include_zero else self.nonzero()
        return max(root.mu.real for root in roots)

    def to_dict(self):
        return {
            "beta": self.beta,
            "search_box": list(self.search_box.as_tuple()),
            "certified_count": self.certified_count,
            "grid_density": self.grid_density,
            "roots": [
                {
                    "re": root.mu.real,
                    "im": root.mu.imag,
                    "residual": root.residual,
                    "multiplicity": root.multiplicity,
                    "is_conjugate_partner": root.is_conjugate_partner,
                    "eta_n": root.eta,
                }
                for root in self.roots
            ],
        }

    @classmethod
    def from_dict(cls, data):
        roots = tuple(Root(mu=complex(item["re"], item["im"]), residual=item["residual"],
                           multiplicity=item.get("multiplicity", 1),
                           is_conjugate_partner=item.get("is_conjugate_partner", False))
                      for item in data["roots"])
        return cls(beta=data["beta"], roots=roots, search_box=SearchBox(*data["search_box"]),
                   certified_count=data["certified_count"], grid_density=data.get("grid_density", 0))


@dataclass(frozen=True)
class EigenLadder:
    """Positive eigenfrequencies omega_n = eta_n c / (gamma d), ascending."""
    eta: tuple
    omega: tuple
    asymptotic_spacing: float


def char_fn(mu, beta):
    """Characteristic function mu^2 + mu + (1 - beta^2)(1 - e^mu)."""
    with np.errstate(over="ignore", invalid="ignore"):
        value = mu * mu + mu - (1.0 - beta * beta) * np.expm1(mu)
    return value


def char_fn_derivative(mu, beta):
    """Analytic derivative 2 mu + 1 - (1 - beta^2) e^mu."""
    with np.errstate(over="ignore", invalid="ignore"):
        value = 2.0 * mu + 1.0 - (1.0 - beta * beta) * np.exp(mu)
    return value


def branch_multiplier(mu, beta):
    """
    One-delay multiplier of the linearized advance map for the mode exp(mu t / tau).

    Equals exp(mu) exactly when mu is a root of char_fn.
    """
    gamma_sq = lorentz_gamma(beta) ** 2
    return 1.0 + gamma_sq * mu + gamma_sq * mu * mu


def count_roots(beta, box):
    """
    Number of roots inside box, multiplicities included (argument principle).

    The phase of f is tracked along the counter-clockwise boundary; every edge
    is subdivided until consecutive phase increments stay below pi/3, which is
    the adaptive quadrature of Im(f'/f) dz.
    """
    if isinstance(box, str):
        box = SearchBox.parse(box)
    lorentz_gamma(beta)

    corners = box.corners()
    total_phase = 0.0
    for k in range(4):
        z0, z1 = corners[k], corners[(k + 1) % 4]
        total_phase += _edge_phase(beta, z0, z1)

    winding = total_phase / (2.0 * math.pi)
    count = int(round(winding))
    if abs(winding - count) > 0.05:
        raise ContourError(f"Non-integer winding {winding:.6f} over box {box.as_tuple()}",
                           winding=winding, box=box.as_tuple(), beta=beta)
    logger.debug(f"count_roots beta={beta} box={box.as_tuple()} -> {count}")
    return count


def _edge_phase(beta, z0, z1):
    s = np.linspace(0.0, 1.0, 65)
    while True:
        z = z0 + s * (z1 - z0)
        values = char_fn(z, beta)
        modulus = np.abs(values)
        scale = np.maximum(1.0, np.abs(z) ** 2)
        if np.any(modulus < CONTOUR_MIN_MODULUS * scale):
            k = int(np.argmin(modulus / scale))
            raise ContourError(f"Contour passes too close to a root near {z[k]:.6g}",
                               z=complex(z[k]), modulus=float(modulus[k]), beta=beta)
        steps = np.angle(values[1:] / values[:-1])
        coarse = np.abs(steps) > MAX_PHASE_STEP
        if not np.any(coarse):
            return float(np.sum(steps))
        if s.size > CONTOUR_MAX_POINTS:
            raise ContourError("Contour refinement limit reached", beta=beta, points=int(s.size))
        midpoints = 0.5 * (s[:-1] + s[1:])[coarse]
        s = np.sort(np.concatenate([s, midpoints]))


def find_roots(beta, box=DEFAULT_BOX, grid_density=200, params=None, max_refinements=2):
    """
    Certified roots of char_fn inside box.

    Args:
        beta: velocity parameter, |beta| < 1
        box: SearchBox or "re_min,re_max,im_min,im_max"
        grid_density: Newton seeds per axis
        params: ModelParams (unused by the dimensionless search, kept for symmetry with the other modules)
        max_refinements: how often the seed lattice is doubled when certification fails

    Returns:
        RootSet
    """
    if isinstance(box, str):
        box = SearchBox.parse(box)
    lorentz_gamma(beta)

    box, certified = _certifiable_box(beta, box)

    density = int(grid_density)
    for attempt in range(max_refinements + 1):
        roots = _newton_roots(beta, box, density)
        found = sum(root.multiplicity for root in roots)
        if found == certified:
            logger.info(f"beta={beta}: {len(roots)} distinct roots, count {certified} certified "
                        f"(grid {density}x{density})")
            return RootSet(beta=float(beta), roots=tuple(roots), search_box=box,
                           certified_count=certified, grid_density=density)
        logger.warning(f"beta={beta}: Newton found {found} roots, contour count {certified}; "
                       f"refining seed grid to {2 * density}")
        density *= 2

    raise CertificationError(
        f"Root certification failed for beta={beta}: Newton {found}, argument principle {certified}",
        beta=beta, newton_count=found, contour_count=certified, box=box.as_tuple())


def _certifiable_box(beta, box):
    last_error = None
    for eps in BOX_PERTURBATIONS:
        candidate = box.expanded(eps) if eps else box
        try:
            count = count_roots(beta, candidate)
        except ContourError as e:
            last_error = e
            continue
        if eps:
            logger.warning(f"Search box nudged outward by {eps} to keep roots off the contour")
        return candidate, count
    raise last_error


def _newton_roots(beta, box, density):
    re = np.linspace(box.re_min, box.re_max, density)
    im = np.linspace(box.im_min, box.im_max, density)
    z = (re[None, :] + 1j * im[:, None]).ravel()

    with np.errstate(all="ignore"):
        for _ in range(NEWTON_SWEEPS):
            z = z - char_fn(z, beta) / char_fn_derivative(z, beta)
        residual = np.abs(char_fn(z, beta))
    ok = (np.isfinite(z) & np.isfinite(residual)
          & (residual < 1e-8 * np.maximum(1.0, np.abs(z) ** 2))
          & box.contains(z, tol=1e-9))
    candidates = z[ok]
    roots = _zero_cluster(beta, box)
    candidates = candidates[np.abs(candidates) >= ZERO_CLUSTER_RADIUS]

    # coarse dedup on a rounded key, then merge within the dedup radius
    keys = np.unique(np.round(candidates.real, 7) + 1j * np.round(candidates.imag, 7))
    distinct = []
    for key in keys:
        if all(abs(key - other) > DEDUP_RADIUS for other in distinct):
            distinct.append(complex(key))

    for guess in distinct:
        mu = _polish(guess, beta)
        if not box.contains(mu, tol=1e-9) or abs(mu) < ZERO_CLUSTER_RADIUS:
            continue
        if any(abs(mu - root.mu) <= DEDUP_RADIUS for root in roots):
            continue
        roots.append(Root(mu=mu, residual=float(abs(char_fn(mu, beta)))))

    # conjugate completion
    for root in list(roots):
        if root.mu.imag != 0 and box.contains(root.mu.conjugate()):
            if not any(abs(root.mu.conjugate() - other.mu) <= DEDUP_RADIUS for other in roots):
                partner = root.mu.conjugate()
                roots.append(Root(mu=partner, residual=float(abs(char_fn(partner, beta)))))

    paired = []
    for root in roots:
        has_partner = root.mu.imag != 0 and any(
            abs(root.mu.conjugate() - other.mu) <= DEDUP_RADIUS for other in roots)
        paired.append(Root(mu=root.mu, residual=root.residual, multiplicity=root.multiplicity,
                           is_conjugate_partner=has_partner))
    paired.sort(key=lambda root: (abs(root.mu.imag), root.mu.imag, root.mu.real))
    return paired


def _zero_cluster(beta, box):
    """
    The roots at and next to the origin, placed exactly instead of by Newton.

    mu = 0 is a root for every beta. The series f = beta^2 mu + (1 + beta^2) mu^2 / 2 + ...
    makes it double at rest; otherwise its partner is the exceptional root.
    """
    roots = []
    exceptional = exceptional_root(beta)
    if box.contains(0j):
        roots.append(Root(mu=0j, residual=0.0, multiplicity=2 if exceptional == 0.0 else 1))
    if exceptional != 0.0 and box.contains(complex(exceptional)):
        mu = complex(exceptional)
        roots.append(Root(mu=mu, residual=float(abs(char_fn(mu, beta)))))
    return roots


def _polish(mu, beta):
    if abs(mu.imag) < 1e-9:
        mu = complex(mu.real, 0.0)
    for _ in range(POLISH_SWEEPS):
        value = char_fn(mu, beta)
        if abs(value) <= TOL_ROOT * max(1.0, abs(mu) ** 2):
            break
        mu = mu - value / char_fn_derivative(mu, beta)
        if abs(mu.imag) < 1e-12:
            mu = complex(mu.real, 0.0)
    return complex(mu)


def exceptional_root(beta):
    """
    The real root on the negative axis that splits off the double root at 0.

    For beta = 0 it coincides with mu = 0; for small beta it sits near
    -2 beta^2 / (1 + beta^2) and it tends to -1 as beta -> 1. It is the only
    root with negative real part.
    """
    lorentz_gamma(beta)
    b2 = beta * beta
    if b2 < 1e-12:
        return 0.0
    near_zero = -1e-3 * b2 / (1.0 + b2)
    return brentq(lambda m: char_fn(m, beta), -1.0, near_zero, xtol=1e-15, rtol=1e-15)


def eigenfrequencies(root_set, beta, params):
    """
    Eigenfrequency ladder omega_n = eta_n c / (gamma d).

    Only roots with positive imaginary part enter the ladder; the asymptotic
    spacing is the last difference of consecutive eta_n (None with fewer than two).
    """
    gamma = lorentz_gamma(beta)
    eta = sorted(root.mu.imag for root in root_set.roots if root.mu.imag > 0)
    omega = tuple(value * params.c / (gamma * params.d) for value in eta)
    spacing = eta[-1] - eta[-2] if len(eta) >= 2 else None
    return EigenLadder(eta=tuple(eta), omega=omega, asymptotic_spacing=spacing)
