"""
Kinematic state of the center of mass and the sampled trajectory history.

A TrajectoryHistory is a uniform-grid record of (t, x, v, a) with C1 cubic
Hermite interpolation, so retarded and advanced lookups can be made at any
time inside its span.
"""

import csv
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from ..utils.errors import ModelViolationError, ConfigError


@dataclass(frozen=True)
class KinematicState:
    """
    State of the center of mass along the motion axis.

    Attributes:
        t, x, v, a: time, position, velocity, acceleration
        beta: v / c
        bdot: dimensionless acceleration a d / c^2
    """
    t: float
    x: float
    v: float
    a: float
    beta: float
    bdot: float

    @classmethod
    def from_kinematics(cls, t, x, v, a, params):
        """Build a state, deriving beta and bdot from the model parameters."""
        beta = v / params.c
        if not abs(beta) < 1.0:
            raise ModelViolationError(
                f"Speed must stay below c, got beta={beta} at t={t}", t=t, v=v, beta=beta)
        return cls(t=float(t), x=float(x), v=float(v), a=float(a),
                   beta=float(beta), bdot=float(a * params.d / params.c ** 2))


class TrajectoryHistory:
    """
    Time-ordered samples of the center-of-mass motion.

    Position is interpolated with a cubic Hermite spline built on (x, v) and
    velocity with one built on (v, a), so both are C1 and exact at the nodes.
    """

    def __init__(self, t, x, v, a, c=1.0):
        """
        Args:
            t, x, v, a: equally long 1-D arrays, t strictly increasing
            c: speed of light in the units of v, used for the |v| < c check
        """
        self.t = np.array(t, dtype=float)
        self.x = np.array(x, dtype=float)
        self.v = np.array(v, dtype=float)
        self.a = np.array(a, dtype=float)

        n = self.t.size
        if n < 2 or not (self.x.size == self.v.size == self.a.size == n):
            raise ModelViolationError("A history needs at least two samples of equal length", samples=n)
        if np.any(np.diff(self.t) <= 0):
            raise ModelViolationError("History times must be strictly increasing")
        if not np.all(np.isfinite(self.x) & np.isfinite(self.v) & np.isfinite(self.a)):
            raise ModelViolationError("History contains non-finite samples")
        fastest = float(np.max(np.abs(self.v)))
        if fastest >= c:
            k = int(np.argmax(np.abs(self.v)))
            raise ModelViolationError(
                f"History reaches |v| >= c at t={self.t[k]}", t=self.t[k], v=self.v[k])

        self.c = c
        self._x_spline = CubicHermiteSpline(self.t, self.x, self.v)
        self._v_spline = CubicHermiteSpline(self.t, self.v, self.a)

    def __len__(self):
        return self.t.size

    def __repr__(self):
        return f"TrajectoryHistory(n={len(self)}, span=[{self.t_min:.6g}, {self.t_max:.6g}])"

    @property
    def t_min(self):
        return float(self.t[0])

    @property
    def t_max(self):
        return float(self.t[-1])

    @property
    def span(self):
        return self.t_min, self.t_max

    @property
    def grid_step(self):
        """Median node spacing."""
        return float(np.median(np.diff(self.t)))

    def x_at(self, t):
        return self._x_spline(t)

    def v_at(self, t):
        return self._v_spline(t)

    def a_at(self, t):
        return self._v_spline(t, 1)

    @classmethod
    def from_csv(cls, path, c=1.0):
        """
        Load a seed history from a CSV file with at least the columns t, x, v, a.

        This is the format written by the simulate subcommand, so exported
        trajectories can be used as seeds again.
        """
        columns = {"t": [], "x": [], "v": [], "a": []}
        try:
            with open(path, newline="") as handle:
                reader = csv.DictReader(handle)
                missing = set(columns) - set(reader.fieldnames or [])
                if missing:
                    raise ConfigError(f"Seed file {path} lacks columns {sorted(missing)}", path=str(path))
                for row in reader:
                    for key in columns:
                        columns[key].append(float(row[key]))
        except OSError as e:
            raise ConfigError(f"Cannot read seed file {path}: {e}", path=str(path)) from e
        return cls(columns["t"], columns["x"], columns["v"], columns["a"], c=c)
