"""Fifth-order KP dispersion symbol, exact linear propagator, admissible pairs.

The symbol is w(xi, mu) = xi^5 + delta * mu^2 / xi with delta = +1 (KP-I) or
delta = -1 (KP-II).  Its singular line xi = 0 is excluded by the zero-x-mean
constraint, and the corresponding multiplier entries are set to zero.

The linear flow is advanced exactly in frequency space: each mode is rotated
by exp(-i * t * w), which solves d/dt uhat = -i * w * uhat.

Strichartz exponent bookkeeping uses beta(q, r) = 2 - 4/r - 5/q with exact
rational arithmetic so admissibility edge cases are decided without rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

import numpy as np

from kp5lab.errors import ParameterError
from kp5lab.grid import Field2D, require_zero_x_mean


def dispersion_symbol(grid, delta: int) -> np.ndarray:
    """w(xi, mu) = xi^5 + delta*mu^2/xi on the full lattice; zero on xi = 0."""
    if delta not in (-1, 1):
        raise ParameterError(f"delta must be +1 or -1, got {delta}")
    xi = grid.xi[:, None]
    mu = grid.mu[None, :]
    out = np.zeros((grid.nx, grid.ny))
    nz = grid.xi != 0.0
    out[nz, :] = xi[nz] ** 5 + delta * mu**2 / xi[nz]
    return out


def group_velocity_x(grid, delta: int) -> np.ndarray:
    """dw/dxi = 5*xi^4 - delta*mu^2/xi^2; zero on the xi = 0 line."""
    if delta not in (-1, 1):
        raise ParameterError(f"delta must be +1 or -1, got {delta}")
    xi = grid.xi[:, None]
    mu = grid.mu[None, :]
    out = np.zeros((grid.nx, grid.ny))
    nz = grid.xi != 0.0
    out[nz, :] = 5.0 * xi[nz] ** 4 - delta * mu**2 / xi[nz] ** 2
    return out


def propagate_linear(u: Field2D, t: float, delta: int) -> Field2D:
    """Exact linear solution at time t from data u (rotation by exp(-i*t*w))."""
    require_zero_x_mean(u, "propagate_linear")
    w = dispersion_symbol(u.grid, delta)
    spec = np.fft.fft2(u.samples, norm="ortho")
    spec[0, :] = 0.0
    # The xi-Nyquist row has no conjugate partner on the lattice; rotating it
    # would break realness and unitarity, so it is dropped.
    spec[u.grid.nx // 2, :] = 0.0
    spec *= np.exp(-1j * t * w)
    samples = np.fft.ifft2(spec, norm="ortho").real
    return Field2D(u.grid, samples, zero_x_mean=True)


def _inv(p) -> Fraction:
    """1/p with the convention 1/inf = 0."""
    if isinstance(p, Real) and np.isinf(p):
        return Fraction(0)
    p = Fraction(p)
    if p <= 0:
        raise ParameterError("exponents must be positive")
    return Fraction(1) / p


def beta(q, r) -> Fraction:
    """Scaling exponent beta(q, r) = 2 - 4/r - 5/q, exact rational."""
    return Fraction(2) - 4 * _inv(r) - 5 * _inv(q)


def is_admissible(q, r) -> bool:
    """Admissibility of (q, r): 2 <= q, r <= inf with

    (1/2) * (1/2 - 1/r) <= 1/q <= 1/2 - 1/r,

    excluding the endpoint pairs (2, inf) and (4, inf).
    """
    iq, ir = _inv(q), _inv(r)
    if iq > Fraction(1, 2) or ir > Fraction(1, 2):
        return False
    lo = Fraction(1, 2) * (Fraction(1, 2) - ir)
    hi = Fraction(1, 2) - ir
    if not (lo <= iq <= hi):
        return False
    if ir == 0 and iq in (Fraction(1, 2), Fraction(1, 4)):
        return False
    return True


@dataclass(frozen=True)
class AdmissiblePair:
    """Validated Strichartz pair with its scaling exponent."""

    q: float
    r: float

    def __post_init__(self) -> None:
        if not is_admissible(self.q, self.r):
            raise ParameterError(f"(q, r) = ({self.q}, {self.r}) is not admissible")

    @property
    def beta(self) -> Fraction:
        iq, ir = _inv(self.q), _inv(self.r)
        return Fraction(2) - 4 * ir - 5 * iq
