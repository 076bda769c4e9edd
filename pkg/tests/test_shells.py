import numpy as np
import pytest

from kp5lab.errors import RangeError
from kp5lab.grid import build_grid, l2_norm, project_zero_x_mean, Field2D
from kp5lab.shells import (
    ShellSystem,
    kappa,
    phi,
    phi_low,
    phi_shell,
    phi_tilde,
    project_below,
    project_much_below,
    project_shell,
    project_tilde,
    shell_multiplier,
)


def test_kappa_plateau_support_monotone():
    xi = np.linspace(-3.0, 3.0, 2001)
    k = kappa(xi)
    assert np.all(k[np.abs(xi) <= 1.25] == 1.0)
    assert np.all(k[np.abs(xi) >= 1.6] == 0.0)
    assert np.all((k >= 0.0) & (k <= 1.0))
    pos = xi >= 0
    assert np.all(np.diff(k[pos]) <= 1e-12)


def test_phi_support_and_plateau():
    xi = np.linspace(0.0, 8.0, 4001)
    p = phi(xi)
    assert np.all(p[(xi > 0) & (xi < 1.25)] == 0.0)
    assert np.all(p[xi > 3.2] == 0.0)
    assert np.all(p[(xi >= 1.6) & (xi <= 2.5)] == pytest.approx(1.0, abs=1e-15))
    # Dilation: phi_N supported in [5N/4, 16N/5], 1 on [8N/5, 5N/2].
    N = 8.0
    assert phi_shell(2.0 * N, N) == pytest.approx(1.0)
    assert phi_shell(1.2 * N, N) == 0.0


def test_telescoping_sum_is_one_inside_band():
    xi = np.linspace(-40.0, 40.0, 5001)
    Ns = [2.0**k for k in range(-6, 7)]
    total = sum(phi_shell(xi, N) for N in Ns)
    # Sum telescopes to kappa(xi/2Nmax) - kappa(xi/Nmin): exactly 1 once
    # |xi| clears the support of the bottom cutoff, 1.6*Nmin.
    inside = (np.abs(xi) >= 1.6 * 2.0 ** (-6)) & (np.abs(xi) < 2.5 * 2.0**6)
    assert np.max(np.abs(total[inside] - 1.0)) < 1e-10


def test_phi_tilde_covers_phi():
    xi = np.linspace(-80.0, 80.0, 6001)
    for N in (2.0, 8.0):
        p = phi_shell(xi, N)
        pt = phi_tilde(xi, N)
        assert np.max(np.abs(p * pt - p)) < 1e-12


def test_shell_system_band():
    g = build_grid(2 * np.pi, 2 * np.pi, 128, 128)
    sys_ = ShellSystem(g)
    assert sys_.N_min == 1.0
    # cutoff = (2/3)*64; largest N with 16N/5 <= cutoff is 8.
    assert sys_.N_max == 8.0
    assert sys_.shells() == [1.0, 2.0, 4.0, 8.0]
    with pytest.raises(RangeError):
        shell_multiplier(sys_, 16.0)
    with pytest.raises(RangeError):
        shell_multiplier(sys_, 0.5)


def test_shell_partition_reconstructs_band_limited_field():
    g = build_grid(2 * np.pi, 2 * np.pi, 128, 64)
    sys_ = ShellSystem(g)
    rng = np.random.default_rng(0)
    # Restrict a random real field to |xi| <= 5*N_max/2 off the xi = 0 line,
    # where the truncated telescoping sum is exactly 1.
    keep = (np.abs(g.xi) <= 2.5 * sys_.N_max) & (g.xi != 0.0)
    spec = np.fft.fft(rng.normal(size=(g.nx, g.ny)), axis=0, norm="ortho")
    spec[~keep, :] = 0.0
    u = Field2D(g, np.fft.ifft(spec, axis=0, norm="ortho").real, zero_x_mean=True)
    total = sum(project_shell(u, N, sys_).samples for N in sys_.shells())
    assert np.max(np.abs(total - u.samples)) < 1e-10 * max(1.0, np.max(np.abs(u.samples)))


def test_tilde_projection_is_exact_identity_on_shell():
    g = build_grid(2 * np.pi, 2 * np.pi, 128, 32)
    sys_ = ShellSystem(g)
    rng = np.random.default_rng(5)
    u = project_zero_x_mean(Field2D(g, rng.normal(size=(g.nx, g.ny))))
    for N in sys_.shells():
        pn = project_shell(u, N, sys_)
        both = project_tilde(pn, N, sys_)
        assert np.max(np.abs(both.samples - pn.samples)) < 1e-12


def test_project_below_and_much_below():
    g = build_grid(2 * np.pi, 2 * np.pi, 128, 32)
    rng = np.random.default_rng(9)
    u = Field2D(g, rng.normal(size=(g.nx, g.ny)))
    lo = project_below(u, 4.0)
    spec = np.fft.fft(lo.samples, axis=0, norm="ortho")
    high = np.abs(g.xi) >= 1.6 * 8.0
    assert np.max(np.abs(spec[high, :])) < 1e-13
    # P_{<<N} = P_{<=N/8} keeps only |xi| < 8*(N/8)/5 * 2 = ... below 2*(N/8)*8/5.
    vlo = project_much_below(u, 8.0)
    spec2 = np.fft.fft(vlo.samples, axis=0, norm="ortho")
    assert np.max(np.abs(spec2[np.abs(g.xi) >= 3.2, :])) < 1e-13


def test_low_shell_absorbs_everything_below():
    xi = np.linspace(-3.0, 3.0, 1201)
    low = phi_low(xi, 1.0)
    # Equals the full telescoped tail kappa(xi/2) off xi = 0.
    assert np.all(low[np.abs(xi) <= 2.5] == np.where(xi[np.abs(xi) <= 2.5] == 0, 0, 1.0))
    assert low[600] == 0.0  # xi = 0 stays out
