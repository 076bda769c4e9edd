"""Bilinear frequency multipliers on periodic 1D signals and the trilinear form.

Lambda_a pairs two signals through a two-frequency symbol:

    F[Lambda_a(u, v)](xi) = (1/sqrt(n)) * sum_{xi1+xi2 = xi} a(xi1, xi2) uhat(xi1) vhat(xi2)

with unitary DFT normalization, so a == 1 reproduces the pointwise product
exactly.  The index sum is circular (mod n); symbols are evaluated at the
representative lattice frequencies, and inputs are required to be band-limited
to |j| <= n/3 so that wrapped sums never land inside any symbol support used
here.

Sign bookkeeping for the commutator: with the e^{i x xi} convention each
x-derivative contributes a factor i*xi.  The bracket symbol below is kept real
(as displayed), so the exact identity carries the unimodular factor i:

    d/dx P_N(P_{N3}g . Ptilde_N h) - P_{N3}g . d/dx P_N Ptilde_N h
        = i * N3 * Lambda_{a1}(g, h).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from kp5lab.errors import AliasingError, ContractError, OracleInvalidError, ParameterError
from kp5lab.shells import phi_shell, phi_tilde


def xi_lattice(n: int, Lx: float) -> np.ndarray:
    """1D x-frequency lattice 2*pi*j/Lx in fft order."""
    return 2.0 * np.pi * np.fft.fftfreq(n, d=Lx / n)


@dataclass(frozen=True)
class SymbolSpec:
    """Two-frequency symbol a(xi1, xi2) with an optional declared sup bound."""

    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str = "a"
    bound: float | None = None
    meta: dict = field(default_factory=dict)

    def __call__(self, xi1, xi2):
        return self.fn(np.asarray(xi1, dtype=np.float64), np.asarray(xi2, dtype=np.float64))


SYMBOL_ONE = SymbolSpec(fn=lambda xi1, xi2: np.ones(np.broadcast(xi1, xi2).shape), name="one", bound=1.0)


def role_switch(a: SymbolSpec) -> SymbolSpec:
    """First cyclic variant: atilde(xi1, xi2) = a(-xi1-xi2, xi1)."""
    return SymbolSpec(
        fn=lambda xi1, xi2: a.fn(-xi1 - xi2, xi1),
        name=a.name + "~",
        bound=a.bound,
        meta=a.meta,
    )


def role_switch_twice(a: SymbolSpec) -> SymbolSpec:
    """Second cyclic variant: atildetilde(xi1, xi2) = a(xi2, -xi1-xi2)."""
    return SymbolSpec(
        fn=lambda xi1, xi2: a.fn(xi2, -xi1 - xi2),
        name=a.name + "~~",
        bound=a.bound,
        meta=a.meta,
    )


def _check_band(spec_coeffs: np.ndarray, n: int, what: str) -> None:
    j = np.rint(np.fft.fftfreq(n) * n).astype(int)
    scale = np.max(np.abs(spec_coeffs))
    if scale == 0.0:
        return
    live = np.abs(spec_coeffs) > 1e-13 * scale
    if np.any(np.abs(j[live]) > n // 3):
        raise AliasingError(f"{what} carries frequencies above the n/3 band limit")


def lambda_apply(a: SymbolSpec, u: np.ndarray, v: np.ndarray, Lx: float) -> np.ndarray:
    """Apply the bilinear multiplier; returns a complex signal on the lattice."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ContractError("lambda_apply needs two 1D signals of equal length")
    n = u.size
    uhat = np.fft.fft(u, norm="ortho")
    vhat = np.fft.fft(v, norm="ortho")
    _check_band(uhat, n, "first factor")
    _check_band(vhat, n, "second factor")
    xi = xi_lattice(n, Lx)
    A = np.asarray(a(xi[:, None], xi[None, :]), dtype=np.complex128)
    pair = A * uhat[:, None] * vhat[None, :]
    idx = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    out_hat = np.bincount(idx.ravel(), weights=pair.real.ravel(), minlength=n).astype(
        np.complex128
    )
    out_hat += 1j * np.bincount(idx.ravel(), weights=pair.imag.ravel(), minlength=n)
    out_hat /= np.sqrt(n)
    return np.fft.ifft(out_hat, norm="ortho")


def lambda_apply_real(a: SymbolSpec, u: np.ndarray, v: np.ndarray, Lx: float) -> np.ndarray:
    """lambda_apply for symbols whose output on real inputs is real."""
    out = lambda_apply(a, u, v, Lx)
    scale = np.max(np.abs(out)) or 1.0
    if np.max(np.abs(out.imag)) > 1e-10 * scale:
        raise ContractError(f"symbol {a.name} produced a non-real signal")
    return out.real


def symbol_a1(N: float, N3: float) -> SymbolSpec:
    """Commutator symbol: the N3-normalized bracket of derivative cutoffs.

    a1(xi1, xi2) = N3^{-1} phi_{N3}(xi1) phi~_N(xi2)
                   * [phi_N(xi1+xi2)(xi1+xi2) - phi_N(xi2) xi2]

    Bounded uniformly in (N, N3): the bracket is a mean-value increment of
    phi_N(xi) xi over a step |xi1| ~ N3.
    """
    if N3 > N / 8.0:
        raise ParameterError(f"need N3 <= N/8, got N3={N3}, N={N}")

    def fn(xi1, xi2):
        s = xi1 + xi2
        bracket = phi_shell(s, N) * s - phi_shell(xi2, N) * xi2
        return phi_shell(xi1, N3) * phi_tilde(xi2, N) * bracket / N3

    return SymbolSpec(fn=fn, name="a1", meta={"N": N, "N3": N3})


def symbol_a2(N1: float) -> SymbolSpec:
    """a2(xi1, xi2) = (xi1/N1) phi~_{N1}(xi1)."""

    def fn(xi1, xi2):
        return (xi1 / N1) * phi_tilde(xi1, N1) * np.ones_like(xi2)

    return SymbolSpec(fn=fn, name="a2", meta={"N1": N1})


def symbol_a3(N: float) -> SymbolSpec:
    """a3(xi1, xi2) = ((xi1+xi2)/N) phi_N(xi1+xi2)."""

    def fn(xi1, xi2):
        s = xi1 + xi2
        return (s / N) * phi_shell(s, N)

    return SymbolSpec(fn=fn, name="a3", meta={"N": N})


def _x_multiplier(u: np.ndarray, mult: np.ndarray) -> np.ndarray:
    return np.fft.ifft(np.fft.fft(u, norm="ortho") * mult, norm="ortho").real


def commutator_spectral(g: np.ndarray, h: np.ndarray, N: float, N3: float, Lx: float) -> np.ndarray:
    """[d/dx P_N, P_{N3}g] applied to Ptilde_N h, all multipliers spectral."""
    if N3 > N / 8.0:
        raise ParameterError(f"need N3 <= N/8, got N3={N3}, N={N}")
    g = np.asarray(g, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    n = g.size
    xi = xi_lattice(n, Lx)
    glow = _x_multiplier(g, phi_shell(xi, N3))
    hband = _x_multiplier(h, phi_tilde(xi, N))
    dpn = 1j * xi * phi_shell(xi, N)
    term1 = np.fft.ifft(np.fft.fft(glow * hband, norm="ortho") * dpn, norm="ortho").real
    term2 = glow * np.fft.ifft(np.fft.fft(hband, norm="ortho") * dpn, norm="ortho").real
    return term1 - term2


def derivative_kernel(n: int, Lx: float, N: float) -> np.ndarray:
    """Periodic kernel of d/dx P_N: Phi[m] = (1/Lx) sum_xi i xi phi_N(xi) e^{i z_m xi}."""
    xi = xi_lattice(n, Lx)
    mult = 1j * xi * phi_shell(xi, N)
    # Inverse DFT without normalization, divided by Lx, gives the lattice
    # samples of the periodic Fourier series.
    return np.fft.ifft(mult) * n / Lx


def commutator_kernel_oracle(
    g: np.ndarray, h: np.ndarray, N: float, N3: float, Lx: float, tail_tol: float = 1e-8
) -> np.ndarray:
    """Commutator by direct lattice quadrature of its kernel representation.

    [d/dx P_N, a]b (x) = integral of (a(y) - a(x)) b(y) Phi_N(x - y) dy
    with a = P_{N3}g and b = Ptilde_N h.  Independent of the spectral route:
    no product-then-project step, just an O(n^2) weighted lattice sum.
    """
    if N3 > N / 8.0:
        raise ParameterError(f"need N3 <= N/8, got N3={N3}, N={N}")
    g = np.asarray(g, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    n = g.size
    dx = Lx / n
    xi = xi_lattice(n, Lx)
    a = _x_multiplier(g, phi_shell(xi, N3))
    b = _x_multiplier(h, phi_tilde(xi, N))
    Phi = derivative_kernel(n, Lx, N)
    # The oracle is meaningful only when the kernel is localized well inside
    # the periodic cell; otherwise wrap-around pollutes the quadrature.
    z = np.minimum(np.arange(n), n - np.arange(n)) * dx
    total = np.sum(np.abs(Phi))
    tail = np.sum(np.abs(Phi[z > Lx / 4.0]))
    if total > 0 and tail / total > tail_tol:
        raise OracleInvalidError(
            f"kernel tail mass {tail / total:.2e} beyond Lx/4 exceeds {tail_tol:.0e}"
        )
    diff = a[None, :] - a[:, None]  # (a(y) - a(x)) at [x, y]
    K = diff * Phi[(np.arange(n)[:, None] - np.arange(n)[None, :]) % n]
    out = dx * K @ b
    scale = np.max(np.abs(out)) or 1.0
    if np.max(np.abs(out.imag)) > 1e-10 * scale:
        raise OracleInvalidError("kernel quadrature produced a non-real signal")
    return out.real


def kernel_schur_report(g: np.ndarray, N: float, N3: float, Lx: float) -> dict:
    """Row/column l1 sums of the commutator kernel |K(x,y)| (Schur test data)."""
    g = np.asarray(g, dtype=np.float64)
    n = g.size
    dx = Lx / n
    xi = xi_lattice(n, Lx)
    a = _x_multiplier(g, phi_shell(xi, N3))
    Phi = derivative_kernel(n, Lx, N)
    K = np.abs(a[None, :] - a[:, None]) * np.abs(
        Phi[(np.arange(n)[:, None] - np.arange(n)[None, :]) % n]
    )
    return {
        "max_row_sum": float(dx * np.max(np.sum(K, axis=1))),
        "max_col_sum": float(dx * np.max(np.sum(K, axis=0))),
    }


def _random_band_limited(rng: np.random.Generator, n: int, band: int) -> np.ndarray:
    spec = np.fft.fft(rng.normal(size=n), norm="ortho")
    j = np.rint(np.fft.fftfreq(n) * n).astype(int)
    spec[np.abs(j) > band] = 0.0
    return np.fft.ifft(spec, norm="ortho").real


def acceptability_probe(
    a: SymbolSpec,
    n: int,
    Lx: float,
    samples: int,
    seed: int,
    normalization: float = 1.0,
) -> dict:
    """Max/median of ||Lambda_a(u,v)||_2 / (||u||_inf ||v||_2 * normalization)."""
    if samples < 1:
        raise ParameterError("need at least one sample")
    rng = np.random.default_rng(seed)
    dx = Lx / n
    ratios = []
    for _ in range(samples):
        u = _random_band_limited(rng, n, n // 3)
        v = _random_band_limited(rng, n, n // 3)
        out = lambda_apply(a, u, v, Lx)
        num = np.sqrt(dx * np.sum(np.abs(out) ** 2))
        den = np.max(np.abs(u)) * np.sqrt(dx * np.sum(v**2)) * normalization
        if den > 0:
            ratios.append(num / den)
    ratios = np.array(ratios)
    return {
        "symbol": a.name,
        "samples": int(samples),
        "max_ratio": float(np.max(ratios)),
        "median_ratio": float(np.median(ratios)),
        "normalization": float(normalization),
        "seed": int(seed),
    }


def gamma_form(a: SymbolSpec, u1, u2, u3) -> complex:
    """Spatial trilinear form: integral of u1 * Lambda_a(u2, u3) over the box.

    Each factor is a Field2D on a shared grid; the multiplier acts along x on
    every y-line.  The value is complex in general: a real symbol odd under
    (xi1, xi2) -> (-xi1, -xi2) yields a purely imaginary form on real fields
    (the i of the underlying derivative is not folded into the symbol).
    Exact cyclic identities for band-limited inputs:

        gamma_form(a, u1, u2, u3) = gamma_form(a~~, u3, u1, u2)
                                  = gamma_form(a~,  u2, u3, u1).
    """
    if not (u1.grid == u2.grid == u3.grid):
        raise ContractError("gamma_form needs a shared grid")
    g = u1.grid
    total = 0.0 + 0.0j
    for k in range(g.ny):
        lam = lambda_apply(a, u2.samples[:, k], u3.samples[:, k], g.Lx)
        total += np.sum(u1.samples[:, k] * lam)
    return complex(total * g.cell_area())


def gamma_a(a: SymbolSpec, u1, u2, u3) -> complex:
    """Space-time trilinear functional: trapezoid in t of gamma_form slices.

    Each argument is a trajectory-like object with .times (uniform, shared)
    and .fields (Field2D per time).
    """
    t1 = np.asarray(u1.times, dtype=np.float64)
    if not (np.array_equal(t1, u2.times) and np.array_equal(t1, u3.times)):
        raise ContractError("gamma_a needs a shared time mesh")
    vals = np.array(
        [gamma_form(a, f1, f2, f3) for f1, f2, f3 in zip(u1.fields, u2.fields, u3.fields)],
        dtype=np.complex128,
    )
    if t1.size == 1:
        return complex(vals[0])
    return complex(np.trapezoid(vals, t1))
