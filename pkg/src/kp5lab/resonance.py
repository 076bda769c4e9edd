"""Resonance-relation algebra for the quintic dispersion omega(xi) = xi^5.

The gap Omega(xi, xi1) = xi^5 - xi1^5 - (xi-xi1)^5 is evaluated in the
algebraically equivalent factored form

    Omega = 5 * xi * xi1 * xi2 * (xi1^2 + xi1*xi2 + xi2^2),   xi2 = xi - xi1,

which is free of the catastrophic cancellation of the monomial form and keeps
full relative accuracy even when |xi_min| << |xi_max|.  The two-sided bound

    (4/16) |xi_min| |xi_max|^4 <= |Omega| <= (81/16) |xi_min| |xi_max|^4

then verifies cleanly across many orders of magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from kp5lab.errors import DomainError

LOWER_CONST = 4.0 / 16.0
UPPER_CONST = 81.0 / 16.0


@dataclass(frozen=True)
class FrequencyTriple:
    xi: float
    xi1: float

    @property
    def xi2(self) -> float:
        return self.xi - self.xi1

    def ordered_magnitudes(self) -> tuple[float, float, float]:
        mags = sorted([abs(self.xi), abs(self.xi1), abs(self.xi2)])
        return mags[0], mags[1], mags[2]


def omega_gap(xi, xi1):
    """Omega(xi, xi1) = omega(xi) - omega(xi1) - omega(xi - xi1), factored form."""
    xi = np.asarray(xi, dtype=np.float64)
    xi1 = np.asarray(xi1, dtype=np.float64)
    xi2 = xi - xi1
    # xi1^2 + xi1*xi2 + xi2^2 = (xi1 + xi2/2)^2 + 3/4 xi2^2 >= 0, no cancellation.
    quad = (xi1 + 0.5 * xi2) ** 2 + 0.75 * xi2**2
    out = 5.0 * xi * xi1 * xi2 * quad
    if out.ndim == 0:
        return float(out)
    return out


def gap_bounds_check(xi, xi1, rel_slack: float = 1e-9) -> dict:
    """Two-sided resonance bound with exact constants 4/16 and 81/16."""
    xi = np.asarray(xi, dtype=np.float64)
    xi1 = np.asarray(xi1, dtype=np.float64)
    xi2 = xi - xi1
    mags = np.sort(np.stack([np.abs(xi), np.abs(xi1), np.abs(xi2)]), axis=0)
    xi_min, xi_max = mags[0], mags[2]
    value = np.abs(omega_gap(xi, xi1))
    lower = LOWER_CONST * xi_min * xi_max**4
    upper = UPPER_CONST * xi_min * xi_max**4
    ok = (value >= lower * (1.0 - rel_slack)) & (value <= upper * (1.0 + rel_slack))
    return {
        "lower": lower if lower.ndim else float(lower),
        "value": value if value.ndim else float(value),
        "upper": upper if upper.ndim else float(upper),
        "pass": ok if ok.ndim else bool(ok),
    }


def full_resonance(xi, xi1, mu, mu1, delta: int):
    """Full KP resonance xi^5 - xi1^5 - xi2^5 - delta*(xi1*mu - xi*mu1)^2/(xi*xi1*xi2)."""
    xi = np.asarray(xi, dtype=np.float64)
    xi1 = np.asarray(xi1, dtype=np.float64)
    mu = np.asarray(mu, dtype=np.float64)
    mu1 = np.asarray(mu1, dtype=np.float64)
    xi2 = xi - xi1
    if np.any(xi == 0.0) or np.any(xi1 == 0.0) or np.any(xi2 == 0.0):
        raise DomainError("full_resonance needs xi, xi1 and xi - xi1 all nonzero")
    transverse = delta * (xi1 * mu - xi * mu1) ** 2 / (xi * xi1 * xi2)
    out = omega_gap(xi, xi1) - transverse
    if np.ndim(out) == 0:
        return float(out)
    return out


def transverse_term(xi, xi1, mu, mu1, delta: int):
    xi = np.asarray(xi, dtype=np.float64)
    xi2 = xi - xi1
    return delta * (xi1 * mu - xi * mu1) ** 2 / (xi * xi1 * xi2)


def _log_uniform(rng: np.random.Generator, n: int, lo: float, hi: float) -> np.ndarray:
    mags = 10.0 ** rng.uniform(np.log10(lo), np.log10(hi), size=n)
    signs = rng.choice([-1.0, 1.0], size=n)
    return mags * signs


def sweep_gap_bounds(samples: int, seed: int, lo: float = 1e-4, hi: float = 1e8) -> dict:
    """Randomized log-uniform sweep of the two-sided bound; reports slacks."""
    rng = np.random.default_rng(seed)
    xi = _log_uniform(rng, samples, lo, hi)
    xi1 = _log_uniform(rng, samples, lo, hi)
    res = gap_bounds_check(xi, xi1)
    lower, value, upper = res["lower"], res["value"], res["upper"]
    with np.errstate(divide="ignore", invalid="ignore"):
        lower_slack = np.where(lower > 0, 1.0 - value / lower, 0.0)
        upper_slack = np.where(upper > 0, value / upper - 1.0, 0.0)
    failures = int(np.sum(~res["pass"]))
    return {
        "samples": int(samples),
        "failures": failures,
        "max_lower_slack": float(np.max(lower_slack)),
        "max_upper_slack": float(np.max(upper_slack)),
        "seed": int(seed),
    }


def sign_coherence_check(samples: int, seed: int) -> dict:
    """KP-II compounding of the two resonance components on xi1*xi2 > 0.

    For delta = -1 (KP-II) and xi1*xi2 > 0 the polynomial gap and the
    transverse term share sign, so |full| = |Omega| + |transverse| exactly.
    For delta = +1 the fraction of conflicting samples is reported.
    """
    rng = np.random.default_rng(seed)
    xi1 = _log_uniform(rng, samples, 1e-3, 1e3)
    xi2 = np.abs(_log_uniform(rng, samples, 1e-3, 1e3)) * np.sign(xi1)
    xi = xi1 + xi2
    ok = xi != 0.0
    xi, xi1, xi2 = xi[ok], xi1[ok], xi2[ok]
    mu = rng.normal(size=xi.shape)
    mu1 = rng.normal(size=xi.shape)

    gap = omega_gap(xi, xi1)
    report = {"samples": int(xi.size), "seed": int(seed)}
    for delta in (-1, +1):
        trans = transverse_term(xi, xi1, mu, mu1, delta)
        full = gap - trans
        compound = np.abs(full) == np.abs(gap) + np.abs(trans)
        key = "kp2" if delta == -1 else "kp1"
        report[f"{key}_compound_fraction"] = float(np.mean(compound))
        report[f"{key}_conflict_fraction"] = float(np.mean(~compound))
    return report
