#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
"""
Definition of the Trajectory class: the stacked state-control variables z_0 ... z_K every solve works on.
"""
import numpy as np

from osscp.errors import DimensionMismatchError, NonFiniteValueError, ArgumentOutOfRangeError


class Trajectory(object):
    """K+1 stacked points z_k = [x_k; u_k]. The terminal control u_K is always zero.

    Instances are read-only: arithmetic returns new trajectories built with the same n_x, n_u."""

    def __init__(self, points, n_x, n_u):
        points = np.array(points, dtype=float)
        if n_x < 1 or n_u < 0:
            raise ArgumentOutOfRangeError("n_x must be >= 1 and n_u >= 0 (got %d, %d)." % (n_x, n_u))
        if points.ndim != 2 or points.shape[1] != n_x + n_u:
            raise DimensionMismatchError("points must have shape (K+1, %d), got %s." % (n_x + n_u, points.shape))
        if points.shape[0] < 2:
            raise DimensionMismatchError("a trajectory needs at least 2 points (K >= 1), got %d." % points.shape[0])
        if not np.all(np.isfinite(points)):
            raise NonFiniteValueError("trajectory contains non-finite entries.")
        if np.any(points[-1, n_x:] != 0.0):
            raise ArgumentOutOfRangeError("terminal control u_K must be zero, got %s." % points[-1, n_x:])
        points.setflags(write=False)
        self._points = points
        self.n_x = n_x
        self.n_u = n_u

    @classmethod
    def from_flat(cls, vector, n_x, n_u, zero_terminal_control=True):
        """Build from a flat vector [z_0; z_1; ...; z_K].

        optional arguments:
        * zero_terminal_control: overwrite u_K with exact zeros (solver output carries round-off there).
        """
        vector = np.asarray(vector, dtype=float)
        n_z = n_x + n_u
        if vector.ndim != 1 or vector.size % n_z != 0:
            raise DimensionMismatchError("flat vector of size %d is not a whole number of %d-vectors." % (vector.size, n_z))
        points = vector.reshape(-1, n_z).copy()
        if zero_terminal_control:
            points[-1, n_x:] = 0.0
        return cls(points, n_x, n_u)

    @classmethod
    def from_parts(cls, states, controls):
        """Stack (K+1, n_x) states with (K, n_u) or (K+1, n_u) controls."""
        states = np.atleast_2d(np.asarray(states, dtype=float))
        controls = np.asarray(controls, dtype=float)
        if controls.ndim == 1:
            controls = controls.reshape(-1, 1)
        if controls.shape[0] == states.shape[0] - 1:
            controls = np.vstack([controls, np.zeros((1, controls.shape[1]))])
        if controls.shape[0] != states.shape[0]:
            raise DimensionMismatchError("got %d states but %d controls." % (states.shape[0], controls.shape[0]))
        return cls(np.hstack([states, controls]), states.shape[1], controls.shape[1])

    @classmethod
    def zeros_like(cls, other):
        return cls(np.zeros(other.shape), other.n_x, other.n_u)

    @property
    def points(self):
        return self._points

    @property
    def K(self):
        return self._points.shape[0] - 1

    @property
    def n_z(self):
        return self.n_x + self.n_u

    @property
    def shape(self):
        return self._points.shape

    @property
    def states(self):
        return self._points[:, :self.n_x]

    @property
    def controls(self):
        return self._points[:, self.n_x:]

    def flat(self):
        return self._points.ravel().copy()

    def with_points(self, points):
        return Trajectory(points, self.n_x, self.n_u)

    def _check_compatible(self, other):
        if not isinstance(other, Trajectory) or other.shape != self.shape or other.n_x != self.n_x:
            raise DimensionMismatchError("trajectory shapes differ: %s vs %s." % (self.shape, getattr(other, "shape", None)))

    def __add__(self, other):
        self._check_compatible(other)
        return self.with_points(self._points + other.points)

    def __sub__(self, other):
        self._check_compatible(other)
        return self.with_points(self._points - other.points)

    def scaled(self, factor):
        return self.with_points(self._points * factor)

    def distance(self, other, mask=None):
        """Euclidean norm of (self - other) over all entries, or over the masked components of every z_k."""
        self._check_compatible(other)
        diff = self._points - other.points
        if mask is not None:
            diff = diff[:, np.asarray(mask, dtype=bool)]
        return float(np.linalg.norm(diff))

    def allclose(self, other, atol=1e-8):
        self._check_compatible(other)
        return bool(np.max(np.abs(self._points - other.points)) <= atol)

    def __repr__(self):
        return "Trajectory(K=%d, n_x=%d, n_u=%d)" % (self.K, self.n_x, self.n_u)


def mean_trajectory(trajectories):
    """Componentwise mean of equally shaped trajectories."""
    trajectories = list(trajectories)
    if not trajectories:
        raise ArgumentOutOfRangeError("the mean of no trajectories is undefined.")
    first = trajectories[0]
    for t in trajectories[1:]:
        first._check_compatible(t)
    stacked = np.stack([t.points for t in trajectories])
    return first.with_points(np.mean(stacked, axis=0))
