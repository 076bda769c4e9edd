from fractions import Fraction

import numpy as np
import pytest

from kp5lab.dispersion import (
    AdmissiblePair,
    beta,
    dispersion_symbol,
    group_velocity_x,
    is_admissible,
    propagate_linear,
)
from kp5lab.errors import ConstraintError, ParameterError
from kp5lab.grid import Field2D, build_grid, l2_norm, project_zero_x_mean


def make_field(seed=0, nx=32, ny=32):
    g = build_grid(2 * np.pi, 2 * np.pi, nx, ny)
    rng = np.random.default_rng(seed)
    spec = np.fft.fft(rng.normal(size=(nx, ny)), axis=0, norm="ortho")
    spec[nx // 2, :] = 0.0  # propagator drops the unpaired Nyquist row
    u = Field2D(g, np.fft.ifft(spec, axis=0, norm="ortho").real)
    return project_zero_x_mean(u)


def test_symbol_values_and_zero_line():
    g = build_grid(2 * np.pi, 2 * np.pi, 16, 16)
    for delta in (-1, 1):
        w = dispersion_symbol(g, delta)
        assert np.all(w[0, :] == 0.0)
        i, k = 2, 3  # xi = 2, mu = 3
        assert w[i, k] == pytest.approx(2.0**5 + delta * 9.0 / 2.0)
    with pytest.raises(ParameterError):
        dispersion_symbol(g, 2)


def test_group_velocity_values():
    g = build_grid(2 * np.pi, 2 * np.pi, 16, 16)
    v = group_velocity_x(g, -1)
    assert v[2, 3] == pytest.approx(5 * 16.0 + 9.0 / 4.0)
    assert np.all(v[0, :] == 0.0)


def test_propagator_unitary_and_group_law():
    u = make_field(0)
    for delta in (-1, 1):
        v = propagate_linear(u, 0.37, delta)
        assert l2_norm(v) == pytest.approx(l2_norm(u), rel=1e-12)
        # semigroup: S(t)S(s) = S(t+s)
        w1 = propagate_linear(propagate_linear(u, 0.2, delta), 0.3, delta)
        w2 = propagate_linear(u, 0.5, delta)
        assert np.max(np.abs(w1.samples - w2.samples)) < 1e-11
        # inverse
        back = propagate_linear(v, -0.37, delta)
        assert np.max(np.abs(back.samples - u.samples)) < 1e-11


def test_propagator_zero_time_is_identity():
    u = make_field(3)
    v = propagate_linear(u, 0.0, 1)
    assert np.max(np.abs(v.samples - u.samples)) < 1e-13


def test_propagator_phase_on_single_mode():
    g = build_grid(2 * np.pi, 2 * np.pi, 32, 32)
    X, Y = g.mesh()
    xi0, mu0, delta, t = 2.0, 3.0, -1, 0.01
    u = Field2D(g, np.cos(xi0 * X + mu0 * Y), zero_x_mean=True)
    w = xi0**5 + delta * mu0**2 / xi0
    expect = np.cos(xi0 * X + mu0 * Y - w * t)
    v = propagate_linear(u, t, delta)
    assert np.max(np.abs(v.samples - expect)) < 1e-12


def test_propagator_requires_constraint():
    g = build_grid(2 * np.pi, 2 * np.pi, 16, 16)
    u = Field2D(g, np.random.default_rng(0).normal(size=(16, 16)))
    with pytest.raises(ConstraintError):
        propagate_linear(u, 0.1, 1)


def test_beta_exact_values():
    assert beta(4, 4) == Fraction(-1, 4)
    assert beta(np.inf, 2) == Fraction(0)
    assert beta(2, np.inf) == Fraction(-1, 2)
    assert beta(10, 5) == Fraction(2) - Fraction(4, 5) - Fraction(1, 2)


def test_admissibility_table():
    assert is_admissible(4, 4)
    assert is_admissible(np.inf, 2)
    assert is_admissible(3, np.inf)
    assert not is_admissible(2, np.inf)
    assert not is_admissible(4, np.inf)
    assert not is_admissible(8, np.inf)  # 1/q below the lower scaling line
    assert not is_admissible(1, 2)  # q < 2
    assert not is_admissible(np.inf, 4)  # 1/q = 0 < (1/2)(1/2 - 1/4)
    assert not is_admissible(2, 2)  # 1/q = 1/2 > 1/2 - 1/2 = 0


def test_admissible_pair_dataclass():
    p = AdmissiblePair(4, 4)
    assert p.beta == Fraction(-1, 4)
    with pytest.raises(ParameterError):
        AdmissiblePair(2, np.inf)
