"""Littlewood-Paley cutoffs and dyadic frequency projections.

The radial profile kappa is a mollified step: identically 1 for |xi| <= 5/4,
identically 0 for |xi| >= 8/5, monotone in between.  The annulus cutoff is
phi(xi) = kappa(|xi|/2) - kappa(|xi|), dilated as phi_N(xi) = phi(xi/N), so
the family telescopes: sum over N in 2^Z of phi_N(xi) = 1 for xi != 0.

On a finite grid the shell set is truncated to a dyadic band [N_min, N_max];
the lowest shell absorbs all lower nonzero frequencies (multiplier
kappa(xi/(2*N_min)) off the xi=0 line) and the highest shell is capped so its
support stays below the 2/3 dealiasing radius.
"""

from __future__ import annotations

import numpy as np

from kp5lab.errors import RangeError
from kp5lab.grid import Field2D, Grid2D

KAPPA_PLATEAU = 5.0 / 4.0
KAPPA_SUPPORT = 8.0 / 5.0


def _smooth_step(x: np.ndarray) -> np.ndarray:
    """C-infinity ramp r with r=0 for x<=0, r=1 for x>=1, r(x)+r(1-x)=1."""
    x = np.asarray(x, dtype=np.float64)

    def bump(t):
        out = np.zeros_like(t)
        pos = t > 0
        out[pos] = np.exp(-1.0 / t[pos])
        return out

    num = bump(x)
    den = num + bump(1.0 - x)
    return num / den


def kappa(xi) -> np.ndarray:
    """Smooth radial cutoff: 1 on |xi|<=5/4, supported in |xi|<8/5, monotone."""
    a = np.abs(np.asarray(xi, dtype=np.float64))
    return _smooth_step((KAPPA_SUPPORT - a) / (KAPPA_SUPPORT - KAPPA_PLATEAU))


def phi(xi) -> np.ndarray:
    """Annulus cutoff kappa(|xi|/2) - kappa(|xi|), supported on 5/4<=|xi|<=16/5."""
    xi = np.asarray(xi, dtype=np.float64)
    return kappa(xi / 2.0) - kappa(xi)


def phi_shell(xi, N: float) -> np.ndarray:
    return phi(np.asarray(xi, dtype=np.float64) / N)


def phi_tilde(xi, N: float) -> np.ndarray:
    """Fattened shell phi_{N/2} + phi_N + phi_{2N} = kappa(xi/4N) - kappa(2xi/N)."""
    xi = np.asarray(xi, dtype=np.float64)
    return kappa(xi / (4.0 * N)) - kappa(2.0 * xi / N)


def phi_low(xi, N: float) -> np.ndarray:
    """Absorbed low shell: sum of phi_M over M <= N, equal to kappa(xi/2N) off 0."""
    xi = np.asarray(xi, dtype=np.float64)
    out = kappa(xi / (2.0 * N))
    return np.where(xi == 0.0, 0.0, out)


class ShellSystem:
    """Dyadic shell family truncated to a grid's resolvable x-frequency band."""

    def __init__(self, grid: Grid2D, dealias: float = 2.0 / 3.0):
        self.grid = grid
        xi_max = np.max(np.abs(grid.xi))
        self.cutoff = dealias * xi_max
        # Highest shell whose support [5N/4, 16N/5] stays below the cutoff.
        n_hi = int(np.floor(np.log2(self.cutoff * 5.0 / 16.0)))
        # Lowest shell at the frequency resolution of the box.
        xi_min = 2.0 * np.pi / grid.Lx
        n_lo = int(np.ceil(np.log2(xi_min)))
        if n_hi < n_lo:
            raise RangeError("grid resolves no dyadic shell band")
        self.N_min = 2.0**n_lo
        self.N_max = 2.0**n_hi

    def shells(self) -> list[float]:
        out = []
        N = self.N_min
        while N <= self.N_max:
            out.append(N)
            N *= 2.0
        return out

    def in_band(self, N: float) -> bool:
        return self.N_min <= N <= self.N_max


def _apply_x_multiplier(u: Field2D, mult: np.ndarray) -> Field2D:
    spec = np.fft.fft(u.samples, axis=0, norm="ortho")
    spec *= mult[:, None]
    samples = np.fft.ifft(spec, axis=0, norm="ortho").real
    return Field2D(u.grid, samples, u.zero_x_mean)


def _check_band(shellsys: ShellSystem, N: float) -> None:
    if not shellsys.in_band(N):
        raise RangeError(
            f"shell N={N} outside resolvable band "
            f"[{shellsys.N_min}, {shellsys.N_max}]"
        )


def shell_multiplier(shellsys: ShellSystem, N: float) -> np.ndarray:
    """x-frequency multiplier of P_N; the lowest shell absorbs all lower modes."""
    _check_band(shellsys, N)
    xi = shellsys.grid.xi
    if N == shellsys.N_min:
        return phi_low(xi, N)
    return phi_shell(xi, N)


def project_shell(u: Field2D, N: float, shellsys: ShellSystem | None = None) -> Field2D:
    """P_N: restrict x-frequencies to the dyadic annulus |xi| ~ N."""
    sys_ = shellsys or ShellSystem(u.grid)
    return _apply_x_multiplier(u, shell_multiplier(sys_, N))


def project_tilde(u: Field2D, N: float, shellsys: ShellSystem | None = None) -> Field2D:
    """Fattened projection with P_N P~_N = P_N."""
    sys_ = shellsys or ShellSystem(u.grid)
    _check_band(sys_, N)
    xi = u.grid.xi
    if N == sys_.N_min:
        # The absorbed low shell is fattened downward to all of |xi| <= 16N/5.
        mult = np.where(xi == 0.0, 0.0, kappa(xi / (4.0 * N)))
    else:
        mult = phi_tilde(xi, N)
    return _apply_x_multiplier(u, mult)


def project_below(u: Field2D, N: float) -> Field2D:
    """P_{<=N}: all shells up to N plus the xi=0 line (multiplier kappa(xi/2N))."""
    return _apply_x_multiplier(u, kappa(u.grid.xi / (2.0 * N)))


def project_much_below(u: Field2D, N: float) -> Field2D:
    """P_{<<N}, realized as P_{<=N/8}."""
    return project_below(u, N / 8.0)
