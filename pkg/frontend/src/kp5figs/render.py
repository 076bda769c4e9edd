"""Deterministic figure rendering from artifact tables.

Every figure uses fixed geometry, fonts and dpi, and strips volatile
metadata from the PNG, so re-rendering the same artifacts is byte-identical
under the pinned matplotlib.
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from kp5figs.artifacts import FIGURE_SETS, ArtifactIndex  # noqa: E402

_RC = {
    "font.family": "DejaVu Sans",
    "font.size": 10.0,
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "kp5figs",
}

# Drift columns of an exactly conserved quantity can be identically zero;
# clamp to a machine-epsilon floor so log axes stay well defined.
_DRIFT_FLOOR = 1e-17


def _save(fig, path: str) -> str:
    fig.savefig(path, format="png", metadata={"Software": "kp5figs"})
    plt.close(fig)
    return path


def render_decay(index: ArtifactIndex, out: str) -> list[str]:
    """Log-log sup|G| vs t per shell, with the two reference decay slopes."""
    cols = index.table("decay")
    fig, ax = plt.subplots()
    for N in np.unique(cols["N"]):
        sel = cols["N"] == N
        order = np.argsort(cols["t"][sel])
        ts, sup = cols["t"][sel][order], cols["sup_abs_G"][sel][order]
        ax.loglog(ts, sup, marker="o", label=f"N = {N:g}")
    tref = np.array([np.min(cols["t"]), np.max(cols["t"])])
    anchor = np.max(cols["sup_abs_G"]) * 2.0
    ax.loglog(tref, anchor * (tref / tref[0]) ** -0.5, "k--", label=r"$t^{-1/2}$")
    ax.loglog(tref, anchor * (tref / tref[0]) ** -1.0, "k:", label=r"$t^{-1}$")
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\sup\,|G|$")
    ax.set_title("Shell kernel decay")
    ax.legend(loc="lower left", fontsize=8)
    return [_save(fig, os.path.join(out, "decay.png"))]


def render_conservation(index: ArtifactIndex, out: str) -> list[str]:
    """Relative drift traces for the two conserved quantities."""
    cols = index.table("conservation")
    fig, ax = plt.subplots()
    for key, style in (("mass_rel_drift", "-"), ("energy_rel_drift", "--")):
        ax.semilogy(
            cols["t"], np.maximum(cols[key], _DRIFT_FLOOR), style, label=key
        )
    ax.set_xlabel("t")
    ax.set_ylabel("relative drift")
    ax.set_ylim(bottom=_DRIFT_FLOOR / 2)
    ax.set_title("Conserved-quantity drift")
    ax.legend(loc="upper left", fontsize=8)
    return [_save(fig, os.path.join(out, "conservation.png"))]


def render_strichartz(index: ArtifactIndex, out: str) -> list[str]:
    """Space-time norm ratios against shell frequency, one panel per pair."""
    cols = index.table("strichartz")
    pairs = sorted({(q, r) for q, r in zip(cols["q"], cols["r"])})
    fig, axes = plt.subplots(1, len(pairs), figsize=(4.0 * len(pairs), 4.0), squeeze=False)
    for ax, (q, r) in zip(axes[0], pairs):
        sel = (cols["q"] == q) & (cols["r"] == r)
        order = np.argsort(cols["N"][sel])
        Ns = cols["N"][sel][order]
        ax.semilogx(Ns, cols["max_ratio"][sel][order], "o-", base=2, label="max ratio")
        ax.semilogx(Ns, cols["median_ratio"][sel][order], "s--", base=2, label="median ratio")
        ax.set_xlabel("N")
        ax.set_ylabel("ratio")
        qlab = "∞" if np.isinf(q) else f"{q:g}"
        ax.set_title(f"(q, r) = ({qlab}, {r:g})")
        ax.legend(loc="best", fontsize=8)
    fig.suptitle("Space-time norm probe")
    return [_save(fig, os.path.join(out, "strichartz.png"))]


def render_uniqueness(index: ArtifactIndex, out: str) -> list[str]:
    """Scheme-difference norms over time at the tracked Sobolev indices."""
    cols = index.table("uniqueness")
    fig, ax = plt.subplots()
    for key, label in (("w_l2", "s = 0"), ("w_h025", "s = 0.25"), ("w_h05", "s = 0.5")):
        ax.semilogy(cols["t"], np.maximum(cols[key], _DRIFT_FLOOR), label=label)
    ax.set_xlabel("t")
    ax.set_ylabel(r"$\|w(t)\|_{H^{s,0}}$")
    ax.set_title("Scheme-difference norms under refinement")
    ax.legend(loc="lower right", fontsize=8)
    return [_save(fig, os.path.join(out, "uniqueness.png"))]


_RENDERERS = {
    "decay": render_decay,
    "conservation": render_conservation,
    "strichartz": render_strichartz,
    "uniqueness": render_uniqueness,
}


def render(manifest: str, out: str, which: list[str] | None = None) -> dict:
    """Render the requested (or all available) figure sets.

    Explicitly requested sets must have their table present (hard error);
    with no explicit request, only available sets are drawn and an empty
    manifest is a warned no-op.
    """
    index = ArtifactIndex(manifest)
    warnings: list[str] = []
    if which is None:
        targets = index.available()
        if not targets:
            warnings.append("manifest indexes no figure tables; nothing to render")
    else:
        targets = list(which)
        for t in targets:
            index.table(t)  # raises MissingTableError / TableSchemaError early
    written: list[str] = []
    if targets:
        os.makedirs(out, exist_ok=True)
        with plt.rc_context(_RC):
            for t in targets:
                written.extend(_RENDERERS[t](index, out))
    return {"written": written, "warnings": warnings, "sets": targets}


def figure_sets() -> tuple[str, ...]:
    return FIGURE_SETS
