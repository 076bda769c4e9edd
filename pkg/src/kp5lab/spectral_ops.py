"""Anisotropic Sobolev norms, fractional x-derivatives and the x-antiderivative."""

from __future__ import annotations

import numpy as np

from kp5lab.errors import ConstraintError
from kp5lab.grid import Field2D, require_zero_x_mean
from kp5lab.shells import ShellSystem, project_shell


def sobolev_norm(u: Field2D, s1: float, s2: float) -> float:
    """H^{s1,s2} norm with weights <xi>^{s1} <mu>^{s2} on the spectrum."""
    spec = np.fft.fft2(u.samples, norm="ortho")
    wx = (1.0 + u.grid.xi**2) ** (s1 / 2.0)
    wy = (1.0 + u.grid.mu**2) ** (s2 / 2.0)
    weighted = np.abs(spec) ** 2 * wx[:, None] ** 2 * wy[None, :] ** 2
    return float(np.sqrt(u.grid.cell_area() * np.sum(weighted)))


def dyadic_sobolev_norm(u: Field2D, s: float) -> float:
    """Dyadic-sum form (sum over N of <N>^{2s} ||P_N u||^2)^{1/2}.

    The xi=0 line carries weight 1 to mirror <xi>^s at xi=0.
    """
    from kp5lab.grid import l2_norm

    sys_ = ShellSystem(u.grid)
    total = 0.0
    for N in sys_.shells():
        total += (1.0 + N**2) ** s * l2_norm(project_shell(u, N, sys_)) ** 2
    spec = np.fft.fft2(u.samples, norm="ortho")
    total += u.grid.cell_area() * np.sum(np.abs(spec[0, :]) ** 2)
    return float(np.sqrt(total))


def _apply_x_multiplier(u: Field2D, mult: np.ndarray, zero_x_mean=None) -> Field2D:
    spec = np.fft.fft(u.samples, axis=0, norm="ortho")
    spec *= mult[:, None]
    samples = np.fft.ifft(spec, axis=0, norm="ortho").real
    flag = u.zero_x_mean if zero_x_mean is None else zero_x_mean
    return Field2D(u.grid, samples, flag)


def frac_deriv_x(u: Field2D, theta: float) -> Field2D:
    """Inhomogeneous J_x^theta: multiplier <xi>^theta = (1+xi^2)^{theta/2}."""
    mult = (1.0 + u.grid.xi**2) ** (theta / 2.0)
    return _apply_x_multiplier(u, mult)


def frac_deriv_x_homog(u: Field2D, gamma: float) -> Field2D:
    """Homogeneous D_x^gamma: multiplier |xi|^gamma with the xi=0 line zeroed."""
    if gamma < 0 and not u.zero_x_mean:
        raise ConstraintError("negative homogeneous power needs a zero-x-mean field")
    xi = u.grid.xi
    mult = np.zeros_like(xi)
    nz = xi != 0.0
    mult[nz] = np.abs(xi[nz]) ** gamma
    return _apply_x_multiplier(u, mult, zero_x_mean=u.zero_x_mean or gamma > 0)


def deriv_x(u: Field2D, order: int = 1) -> Field2D:
    """Spectral d^order/dx^order."""
    mult = (1j * u.grid.xi) ** order
    spec = np.fft.fft(u.samples, axis=0, norm="ortho")
    spec *= mult[:, None]
    samples = np.fft.ifft(spec, axis=0, norm="ortho").real
    return Field2D(u.grid, samples, zero_x_mean=True if order >= 1 else u.zero_x_mean)


def deriv_y(u: Field2D, order: int = 1) -> Field2D:
    mult = (1j * u.grid.mu) ** order
    spec = np.fft.fft(u.samples, axis=1, norm="ortho")
    spec *= mult[None, :]
    samples = np.fft.ifft(spec, axis=1, norm="ortho").real
    return Field2D(u.grid, samples, u.zero_x_mean)


def x_antiderivative(u: Field2D) -> Field2D:
    """del_x^{-1}: divide the spectrum by i*xi, with the xi=0 line zero."""
    require_zero_x_mean(u, "x_antiderivative")
    xi = u.grid.xi
    mult = np.zeros(u.grid.nx, dtype=np.complex128)
    nz = xi != 0.0
    mult[nz] = 1.0 / (1j * xi[nz])
    spec = np.fft.fft(u.samples, axis=0, norm="ortho")
    spec *= mult[:, None]
    samples = np.fft.ifft(spec, axis=0, norm="ortho").real
    return Field2D(u.grid, samples, zero_x_mean=True)
