import numpy as np
import pytest

from kp5lab.dispersion import AdmissiblePair
from kp5lab.errors import ProbeInvalidError, RangeError
from kp5lab.shells import ShellSystem
from kp5lab.strichartz import (
    _probe_grid,
    probe_sweep,
    shell_packet,
    strichartz_probe,
)


def test_unitary_pair_ratio_is_exactly_one():
    # (q,r) = (inf,2) reduces to L2 conservation of the free flow.
    for N in (4.0, 16.0):
        rep = strichartz_probe(N, AdmissiblePair(np.inf, 2), samples=3)
        assert rep["max_ratio"] == pytest.approx(1.0, abs=1e-12)
        assert rep["median_ratio"] == pytest.approx(1.0, abs=1e-12)


def test_l4l4_ratio_flat_across_shells():
    rep = probe_sweep(Ns=(4.0, 8.0, 16.0, 32.0), pair=AdmissiblePair(4, 4), samples=4)
    assert rep["spread"] <= 3.0
    for row in rep["rows"]:
        assert row["boundary_mass"] < 1e-6
        assert row["sample_count"] == 4


def test_retarded_mode_bounded():
    rep = strichartz_probe(8.0, AdmissiblePair(4, 4), mode="retarded", samples=3)
    assert rep["mode"] == "retarded"
    assert 0.0 < rep["max_ratio"] < 10.0


def test_packet_is_shell_localized():
    grid = _probe_grid()
    sys_ = ShellSystem(grid)
    phi = shell_packet(grid, 8.0, 0, sys_)
    spec = np.fft.fft(phi.samples, axis=0, norm="ortho")
    live = np.abs(grid.xi)[np.max(np.abs(spec), axis=1) > 1e-12]
    assert np.all(live >= 8.0 * 5.0 / 4.0)
    assert np.all(live <= 8.0 * 16.0 / 5.0)


def test_out_of_band_shell_rejected():
    with pytest.raises(RangeError):
        strichartz_probe(1024.0, AdmissiblePair(4, 4))


def test_bad_mode_rejected():
    with pytest.raises(ProbeInvalidError):
        strichartz_probe(8.0, AdmissiblePair(4, 4), mode="sideways")


def test_long_horizon_trips_boundary_monitor():
    # At O(1) horizons the packet wraps the box many times over.
    with pytest.raises(ProbeInvalidError):
        strichartz_probe(16.0, AdmissiblePair(np.inf, 2), T=1.0, samples=1)
