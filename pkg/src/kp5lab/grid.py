"""Periodic grid, fields, spectra and the FFT pair.

Conventions used throughout the package:

* unitary FFT normalization (``norm="ortho"``), so discrete Plancherel is
  exact once both sides carry the quadrature weight ``dx*dy``;
* x along axis 0, y along axis 1; frequency lattices in numpy fft order;
* the KP constraint ``uhat(0, mu) = 0`` is tracked by ``Field2D.zero_x_mean``
  and makes the x-antiderivative and the dispersion symbol well defined.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from kp5lab.errors import ConfigurationError, ConstraintError, ContractError

_HEADER_MAGIC = "kp5-field-v1"


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid2D:
    """Rectangular periodic domain [0,Lx) x [0,Ly) with an FFT frequency lattice."""

    Lx: float
    Ly: float
    nx: int
    ny: int

    def __post_init__(self) -> None:
        if not (self.Lx > 0 and self.Ly > 0):
            raise ConfigurationError("grid periods must be positive")
        if not (_is_power_of_two(self.nx) and self.nx >= 8):
            raise ConfigurationError(f"nx={self.nx} must be a power of two >= 8")
        if not (_is_power_of_two(self.ny) and self.ny >= 8):
            raise ConfigurationError(f"ny={self.ny} must be a power of two >= 8")

    @property
    def dx(self) -> float:
        return self.Lx / self.nx

    @property
    def dy(self) -> float:
        return self.Ly / self.ny

    @property
    def xi(self) -> np.ndarray:
        """x-frequency lattice 2*pi*j/Lx, fft order, shape (nx,)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.nx, d=self.dx)

    @property
    def mu(self) -> np.ndarray:
        """y-frequency lattice 2*pi*k/Ly, fft order, shape (ny,)."""
        return 2.0 * np.pi * np.fft.fftfreq(self.ny, d=self.dy)

    def xi_grid(self) -> np.ndarray:
        return self.xi[:, None] * np.ones((1, self.ny))

    def mu_grid(self) -> np.ndarray:
        return np.ones((self.nx, 1)) * self.mu[None, :]

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        x = np.arange(self.nx) * self.dx
        y = np.arange(self.ny) * self.dy
        return np.meshgrid(x, y, indexing="ij")

    def cell_area(self) -> float:
        return self.dx * self.dy


def build_grid(Lx: float, Ly: float, nx: int, ny: int) -> Grid2D:
    """Construct a grid, rejecting non-power-of-two or nonpositive dimensions."""
    return Grid2D(Lx=float(Lx), Ly=float(Ly), nx=int(nx), ny=int(ny))


@dataclass
class Field2D:
    """Real scalar field sampled on a Grid2D."""

    grid: Grid2D
    samples: np.ndarray
    zero_x_mean: bool = False

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.shape != (self.grid.nx, self.grid.ny):
            raise ContractError(
                f"samples shape {self.samples.shape} != grid shape "
                f"{(self.grid.nx, self.grid.ny)}"
            )
        if not np.all(np.isfinite(self.samples)):
            raise ContractError("field samples must be finite")

    def copy(self) -> "Field2D":
        return Field2D(self.grid, self.samples.copy(), self.zero_x_mean)


@dataclass
class Spectrum2D:
    """Fourier coefficients of a field, unitary normalization, fft layout."""

    grid: Grid2D
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != (self.grid.nx, self.grid.ny):
            raise ContractError(
                f"coeffs shape {self.coeffs.shape} != grid shape "
                f"{(self.grid.nx, self.grid.ny)}"
            )


def to_spectrum(u: Field2D) -> Spectrum2D:
    return Spectrum2D(u.grid, np.fft.fft2(u.samples, norm="ortho"))


def to_field(spec: Spectrum2D, zero_x_mean: bool = False) -> Field2D:
    samples = np.fft.ifft2(spec.coeffs, norm="ortho")
    scale = np.max(np.abs(samples)) or 1.0
    if np.max(np.abs(samples.imag)) > 1e-10 * scale:
        raise ContractError("spectrum does not represent a real field")
    return Field2D(spec.grid, samples.real, zero_x_mean)


def l2_norm(u: Field2D) -> float:
    """Discrete L2 norm with quadrature weight dx*dy."""
    return float(np.sqrt(u.grid.cell_area() * np.sum(u.samples**2)))


def spectrum_l2_norm(spec: Spectrum2D) -> float:
    return float(np.sqrt(spec.grid.cell_area() * np.sum(np.abs(spec.coeffs) ** 2)))


def lp_norm(u: Field2D, p: float) -> float:
    """Discrete L^p lattice norm; p=inf gives the max norm."""
    if np.isinf(p):
        return float(np.max(np.abs(u.samples)))
    w = u.grid.cell_area()
    return float((w * np.sum(np.abs(u.samples) ** p)) ** (1.0 / p))


def x_mean_defect(u: Field2D) -> float:
    """Relative size of the uhat(0, mu) line against the field's L2 norm."""
    spec = np.fft.fft2(u.samples, norm="ortho")
    total = np.sqrt(np.sum(np.abs(spec) ** 2))
    if total == 0.0:
        return 0.0
    return float(np.sqrt(np.sum(np.abs(spec[0, :]) ** 2)) / total)


def require_zero_x_mean(u: Field2D, op: str) -> None:
    if not u.zero_x_mean:
        raise ConstraintError(f"{op} requires a zero-x-mean field")
    if x_mean_defect(u) > 1e-12:
        raise ConstraintError(f"{op}: field flagged zero_x_mean but uhat(0,mu) != 0")


def project_zero_x_mean(u: Field2D) -> Field2D:
    """Remove the x-mean of every y-line and set the constraint flag."""
    samples = u.samples - np.mean(u.samples, axis=0, keepdims=True)
    return Field2D(u.grid, samples, zero_x_mean=True)


def save_field(u: Field2D, path) -> None:
    """Flat binary container: one JSON header line, then row-major float64."""
    header = {
        "magic": _HEADER_MAGIC,
        "Lx": u.grid.Lx,
        "Ly": u.grid.Ly,
        "nx": u.grid.nx,
        "ny": u.grid.ny,
        "zero_x_mean": u.zero_x_mean,
    }
    with open(path, "wb") as fh:
        fh.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
        fh.write(np.ascontiguousarray(u.samples, dtype=np.float64).tobytes())


def load_field(path) -> Field2D:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode("utf-8"))
        if header.get("magic") != _HEADER_MAGIC:
            raise ContractError(f"{path}: not a kp5 field container")
        grid = build_grid(header["Lx"], header["Ly"], header["nx"], header["ny"])
        raw = fh.read(8 * grid.nx * grid.ny)
        samples = np.frombuffer(raw, dtype=np.float64).reshape(grid.nx, grid.ny)
    return Field2D(grid, samples.copy(), header["zero_x_mean"])
