import numpy as np
import pytest

from kp5lab.errors import ContractError
from kp5lab.grid import build_grid
from kp5lab.modulation import low_modulation_fraction, modulation_besov


class _Traj:
    def __init__(self, grid, times, fields):
        self.grid = grid
        self.times = np.asarray(times, dtype=np.float64)
        self.fields = np.asarray(fields, dtype=np.float64)


def _phase_trajectory(detune=0.0, nt=256, periods=16):
    # Single free wave cos(2x + 3y - (w + detune) t) with w = 2^5 - 3^2/2.
    g = build_grid(2 * np.pi, 2 * np.pi, 16, 16)
    X, Y = g.mesh()
    w = 2.0**5 - 3.0**2 / 2.0
    T = periods * 2.0 * np.pi / w
    times = np.arange(nt) * (T / nt)
    fields = [np.cos(2 * X + 3 * Y - (w + detune) * t) for t in times]
    return _Traj(g, times, fields)


def test_weights_partition_and_mass_accounting():
    rep = modulation_besov(_phase_trajectory(), delta=-1)
    assert rep["partition_defect"] < 1e-10
    assert rep["mass_defect"] < 1e-10


def test_free_wave_concentrates_at_low_modulation():
    rep = modulation_besov(_phase_trajectory(), delta=-1)
    assert low_modulation_fraction(rep) >= 0.90


def test_detuned_wave_leaves_low_shell():
    # Shifting the time frequency off the dispersion relation moves the mass
    # to the shell containing |m| = detune.
    rep = modulation_besov(_phase_trajectory(detune=40.0), delta=-1)
    assert low_modulation_fraction(rep) < 0.05
    masses = rep["masses"]
    near = sum(masses[L] for L in (16.0, 32.0, 64.0) if L in masses)
    assert near / rep["total_mass"] >= 0.90


def test_besov_sum_dominates_low_shell_norm():
    rep = modulation_besov(_phase_trajectory(), delta=-1)
    assert rep["besov_sum"] >= rep["norms"][1.0]
    assert rep["besov_sum"] > 0.0


def test_nonuniform_sampling_rejected():
    traj = _phase_trajectory()
    times = traj.times.copy()
    times[10] += 0.3 * (times[1] - times[0])
    with pytest.raises(ContractError):
        modulation_besov(_Traj(traj.grid, times, traj.fields), delta=-1)


def test_window_length_mismatch_rejected():
    traj = _phase_trajectory()
    with pytest.raises(ContractError):
        modulation_besov(traj, delta=-1, window=np.ones(7))
