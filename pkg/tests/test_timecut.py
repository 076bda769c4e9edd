import numpy as np
import pytest

from kp5lab.errors import ConfigurationError
from kp5lab.timecut import TimePartition, eta, time_partition


def test_eta_profile():
    t = np.linspace(-2.0, 2.0, 4001)
    e = eta(t)
    assert np.all(e[np.abs(t) <= 0.25] == 1.0)
    assert np.all(e[np.abs(t) >= 0.75] == 0.0)
    assert np.all((e >= 0) & (e <= 1))


def test_eta_translates_sum_to_one():
    t = np.linspace(-3.0, 3.0, 10001)
    total = sum(eta(t - j) for j in range(-5, 6))
    assert np.max(np.abs(total - 1.0)) < 1e-12


def test_partition_sums_to_one_on_horizon():
    part = time_partition(16, 2.5, np.linspace(0.0, 2.5, 10001))
    assert np.max(np.abs(part["sum"] - 1.0)) < 1e-12


def test_eta_j_supported_near_interval():
    p = TimePartition(8, 1.0)
    t = np.linspace(-0.5, 1.5, 20001)
    for j in (0, 3, 8):
        e = p.eta_j(j, t)
        a, b = p.interval(j)
        c, h = p.center(j), p.T / p.N1
        # Support sits inside the 3/2-dilated interval about the center.
        outside = (t < c - 0.75 * h) | (t > c + 0.75 * h)
        assert np.max(e[outside]) == 0.0
        # and the cutoff is 1 on the inner half of I_j.
        inner = (t >= c - 0.25 * h) & (t <= c + 0.25 * h)
        assert np.min(e[inner]) == 1.0
        assert a <= c <= b


def test_eta_tilde_majorizes():
    p = TimePartition(8, 1.0)
    t = np.linspace(-0.5, 1.5, 20001)
    for j in range(9):
        e, et = p.eta_j(j, t), p.eta_tilde_j(j, t)
        assert np.max(np.abs(e * et - e)) == 0.0


def test_partition_validation():
    with pytest.raises(ConfigurationError):
        TimePartition(1, 1.0)
    with pytest.raises(ConfigurationError):
        TimePartition(4, 0.0)
