import numpy as np
import pytest

from kp5lab.errors import DomainError, NumericalError, ParameterError
from kp5lab.kernel import (
    FresnelTable,
    decay_sweep,
    kernel_2d_oracle,
    kernel_G,
    kernel_G_brute,
    sup_abs_G,
)

# Cases with moderate phase travel where every integrator is trustworthy.
COARSE_CASES = [
    (0.3, 0.7, 0.5, 2.0, -1),
    (0.3, 0.7, 0.5, 2.0, +1),
    (1.0, 0.2, 0.3, 2.0, -1),
    (-640.5, 1.0, 0.5, 2.0, -1),  # stationary point at xi ~ 4, inside the shell
    (-160.0, 0.5, 0.5, 2.0, +1),
]


def test_domain_guards():
    with pytest.raises(DomainError):
        kernel_G(0.0, 0.0, 0.0, 2.0, -1)
    with pytest.raises(DomainError):
        kernel_G(0.0, 0.0, -1.0, 2.0, -1)
    with pytest.raises(ParameterError):
        kernel_G(0.0, 0.0, 1.0, 2.0, 3)
    with pytest.raises(NumericalError):
        kernel_2d_oracle(0.0, 0.0, 10.0, 16.0, -1)


def test_fresnel_table_against_closed_form():
    # The numeric table reproduces sqrt(pi) e^{i pi/4} e^{-i b^2/4}, i.e. the
    # constant sqrt(pi/2)(1 + i) of the exact Gaussian-phase integral.
    tab = FresnelTable()
    b = np.linspace(-10.0, 10.0, 201)
    exact = np.sqrt(np.pi) * np.exp(1j * np.pi / 4.0) * np.exp(-1j * b**2 / 4.0)
    assert np.max(np.abs(tab(b) - exact)) < 1e-6
    assert np.sqrt(np.pi) == pytest.approx(abs(np.sqrt(np.pi / 2) * (1 + 1j)))
    with pytest.raises(DomainError):
        tab(50.0)


def test_hybrid_matches_brute_dense_quadrature():
    # Scale for cancellation-limited values: amplitude mass of the integrand.
    for x, y, t, N, d in [
        (0.3, 0.7, 0.5, 2.0, -1),
        (0.0, 0.0, 0.01, 4.0, -1),
        (-640.5, 1.0, 0.5, 2.0, -1),
        (-30.0, 0.5, 0.1, 4.0, +1),
    ]:
        g1 = kernel_G(x, y, t, N, d)
        g2 = kernel_G_brute(x, y, t, N, d)
        # Values 6+ orders below the amplitude envelope are pure cancellation;
        # compare against that floor rather than demand relative digits of 0.
        scale = max(abs(g2), 1e-6 * t**-0.5 * N**1.5)
        assert abs(g1 - g2) / scale < 1e-5


def test_reduced_matches_2d_oracle_on_coarse_cases():
    for x, y, t, N, d in COARSE_CASES:
        g1 = kernel_G(x, y, t, N, d)
        g2 = kernel_2d_oracle(x, y, t, N, d)
        assert abs(g1 - g2) / abs(g2) < 1e-4


def test_xy_collapse_to_alpha():
    # G depends on (x, y) only through alpha = x - delta y^2/(4t).
    t, N, d = 0.5, 2.0, -1
    alpha = -640.0
    a = kernel_G(alpha, 0.0, t, N, d)
    b = kernel_G(alpha - 0.5, 1.0, t, N, d)  # x + y^2/(4t) = alpha again
    assert abs(a - b) / abs(a) < 1e-9


def test_decay_envelope_spread():
    rep = decay_sweep(ts=(0.1, 1.0), Ns=(2.0, 8.0), n_alpha=40)
    assert rep["env_spread"] <= 5.0
    for row in rep["rows"]:
        assert row["sup_abs_G"] > 0.0


def test_interpolated_decay_family():
    # sup|G| <= C_theta * t^{-(1/2+theta)} N^{3/2-5theta} with one modest
    # constant per theta across the sampled (t, N) cells.
    cells = [(0.1, 2.0), (0.1, 8.0), (1.0, 2.0), (1.0, 8.0)]
    sups = {cell: sup_abs_G(cell[0], cell[1], -1, n_alpha=40) for cell in cells}
    for theta in (0.0, 0.25, 0.5):
        consts = [
            sups[(t, N)] / (t ** -(0.5 + theta) * N ** (1.5 - 5.0 * theta))
            for (t, N) in cells
        ]
        assert max(consts) < 10.0
