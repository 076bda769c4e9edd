"""Smooth partition of unity in time and the interval splitting it induces.

The base bump eta is smooth, supported in [-3/4, 3/4], identically 1 on
[-1/4, 1/4], and its integer translates sum to 1 everywhere.  A horizon
[0, T] split into N1 intervals uses the rescaled translates
eta_j(t) = eta(N1*t/T - j); their sum over j = 0..N1 equals 1 on [0, T].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from kp5lab.errors import ConfigurationError
from kp5lab.shells import _smooth_step


def eta(t) -> np.ndarray:
    """Base bump: 1 on [-1/4,1/4], 0 outside (-3/4,3/4), translates sum to 1."""
    a = np.abs(np.asarray(t, dtype=np.float64))
    out = np.zeros_like(a)
    out[a <= 0.25] = 1.0
    ramp = (a > 0.25) & (a < 0.75)
    out[ramp] = _smooth_step(2.0 * (0.75 - a[ramp]))
    return out


@dataclass(frozen=True)
class TimePartition:
    """Partition of [0, T] into N1 intervals with smooth cutoffs eta_j."""

    N1: int
    T: float

    def __post_init__(self) -> None:
        if self.N1 < 2:
            raise ConfigurationError("need at least two intervals")
        if self.T <= 0:
            raise ConfigurationError("horizon must be positive")

    def center(self, j: int) -> float:
        return j * self.T / self.N1

    def interval(self, j: int) -> tuple[float, float]:
        """I_j = [T/N1*(j-1/2), T/N1*(j+1/2)], clipped to [0, T]."""
        h = self.T / self.N1
        return max(0.0, (j - 0.5) * h), min(self.T, (j + 0.5) * h)

    def eta_j(self, j: int, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        return eta(self.N1 * t / self.T - j)

    def eta_tilde_j(self, j: int, t) -> np.ndarray:
        """Wider mate with eta_j * eta~_j = eta_j (dilated by 4 around center j)."""
        t = np.asarray(t, dtype=np.float64)
        return eta((self.N1 * t / self.T - j) / 4.0)

    def evaluate(self, mesh) -> dict:
        """Sample all cutoffs on a time mesh; includes the partition sum."""
        mesh = np.asarray(mesh, dtype=np.float64)
        etas = np.array([self.eta_j(j, mesh) for j in range(self.N1 + 1)])
        tildes = np.array([self.eta_tilde_j(j, mesh) for j in range(self.N1 + 1)])
        return {"mesh": mesh, "eta": etas, "eta_tilde": tildes, "sum": etas.sum(axis=0)}


def time_partition(N1: int, T: float, mesh) -> dict:
    return TimePartition(N1, T).evaluate(mesh)
