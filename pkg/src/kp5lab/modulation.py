"""Modulation-frequency decomposition of windowed space-time trajectories.

A trajectory sampled uniformly in time is multiplied by a smooth window and
transformed by a 3D FFT.  With numpy's sign conventions the free wave
e^{i(xi x + mu y)} e^{-i w(xi,mu) t} concentrates at time frequency
tau = -w, so the modulation variable is m = tau + w(xi, mu): free solutions
live at m ~ 0 and the dyadic shells Q_L in |m| measure the distance of a
trajectory from the linear flow.

The shell family in m mirrors the spatial one, except the lowest shell is
L = 1 with multiplier kappa(m/2) (it includes m = 0), so the weights sum to
exactly 1 everywhere the family covers the discrete (tau, xi, mu) lattice.
"""

from __future__ import annotations

import numpy as np

from kp5lab.dispersion import dispersion_symbol
from kp5lab.errors import ContractError
from kp5lab.shells import kappa, phi_shell
from kp5lab.timecut import eta


def default_window(nt: int) -> np.ndarray:
    """Smooth bump over the sample range: eta rescaled to peak on the middle half."""
    s = (np.arange(nt) / nt - 0.5) * 1.5
    return eta(s)


def _check_uniform(times: np.ndarray) -> float:
    times = np.asarray(times, dtype=np.float64)
    if times.size < 4:
        raise ContractError("need at least 4 time samples")
    steps = np.diff(times)
    if np.max(np.abs(steps - steps[0])) > 1e-9 * abs(steps[0]):
        raise ContractError("modulation analysis requires uniform time sampling")
    return float(steps[0])


def modulation_besov(traj, delta: int, window: np.ndarray | None = None) -> dict:
    """Dyadic decomposition of a trajectory in the modulation variable.

    Parameters
    ----------
    traj : object with ``times`` (nt,), ``fields`` (nt, nx, ny) and ``grid``.
    delta : transverse sign of the dispersion symbol.
    window : optional time window samples, length nt; defaults to a smooth
        bump vanishing at both ends of the record.

    Returns
    -------
    dict with the shell list, per-shell masses and L2 norms, the windowed
    total mass, the Besov sum ``sum_L L^{1/2} ||Q_L u||_2``, and the maximum
    deviation of the shell weights from a partition of unity on the lattice.
    """
    times = np.asarray(traj.times, dtype=np.float64)
    dt = _check_uniform(times)
    fields = np.asarray(traj.fields, dtype=np.float64)
    nt = times.size
    if fields.shape[0] != nt:
        raise ContractError("times/fields length mismatch")
    if window is None:
        window = default_window(nt)
    window = np.asarray(window, dtype=np.float64)
    if window.shape != (nt,):
        raise ContractError("window length must match the time record")

    grid = traj.grid
    spec = np.fft.fftn(window[:, None, None] * fields, axes=(0, 1, 2), norm="ortho")
    power = np.abs(spec) ** 2
    measure = dt * grid.cell_area()

    tau = 2.0 * np.pi * np.fft.fftfreq(nt, d=dt)
    w = dispersion_symbol(grid, delta)
    m = tau[:, None, None] + w[None, :, :]

    m_max = float(np.max(np.abs(m)))
    # Dyadic cap at the lattice extent; the cap shell absorbs everything above.
    L_top = 2.0 ** max(1, int(np.ceil(np.log2(max(m_max, 1.0)))))
    shells = [1.0]
    L = 2.0
    while L <= L_top:
        shells.append(L)
        L *= 2.0

    weight_sum = np.zeros_like(m)
    masses = {}
    norms = {}
    for L in shells:
        if L == 1.0:
            wgt = kappa(m / 2.0)
        elif L == L_top:
            # Absorbed top shell: the telescoped tail sum_{L' >= L} phi_{L'}.
            wgt = 1.0 - kappa(m / L)
        else:
            wgt = phi_shell(m, L)
        weight_sum += wgt
        masses[L] = float(np.sum(wgt * power) * measure)
        norms[L] = float(np.sqrt(np.sum(wgt**2 * power) * measure))

    total = float(np.sum(power) * measure)
    return {
        "shells": shells,
        "masses": masses,
        "norms": norms,
        "total_mass": total,
        "besov_sum": float(sum(np.sqrt(L) * norms[L] for L in shells)),
        "partition_defect": float(np.max(np.abs(weight_sum - 1.0))),
        "mass_defect": abs(sum(masses.values()) - total) / max(total, 1e-300),
    }


def low_modulation_fraction(report: dict) -> float:
    """Fraction of windowed mass carried by the L = 1 shell."""
    if report["total_mass"] == 0.0:
        return 0.0
    return report["masses"][1.0] / report["total_mass"]
