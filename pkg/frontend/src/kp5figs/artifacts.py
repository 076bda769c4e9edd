"""Read-only view over a kp5 artifact directory.

The manifest indexes every file the primary tool wrote; figures consume the
CSV tables through this module and never recompute anything.
"""

from __future__ import annotations

import csv
import json
import os

import numpy as np

from kp5figs.errors import ManifestError, MissingTableError, TableSchemaError

# figure set -> (csv file, declared header)
TABLES = {
    "decay": ("decay.csv", ["N", "t", "sup_abs_G", "c1_ratio", "c2_ratio"]),
    "conservation": (
        "conservation.csv",
        ["t", "mass", "energy", "mass_rel_drift", "energy_rel_drift"],
    ),
    "strichartz": (
        "strichartz.csv",
        ["N", "q", "r", "mode", "sample_count", "max_ratio", "median_ratio", "boundary_mass"],
    ),
    "uniqueness": ("uniqueness.csv", ["t", "w_l2", "w_h025", "w_h05"]),
}

# columns kept as strings rather than parsed to float
_TEXT_COLUMNS = {"mode"}

FIGURE_SETS = tuple(TABLES)


class ArtifactIndex:
    """Manifest plus lazily parsed CSV tables, keyed by figure set."""

    def __init__(self, manifest_path: str) -> None:
        try:
            with open(manifest_path, "r", encoding="utf-8") as fh:
                self.manifest = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ManifestError(f"cannot read manifest {manifest_path!r}: {exc}") from exc
        if not isinstance(self.manifest, dict) or "artifacts" not in self.manifest:
            raise ManifestError(f"{manifest_path!r} lacks an 'artifacts' list")
        self.base = os.path.dirname(os.path.abspath(manifest_path))
        self._names = {e["name"] for e in self.manifest["artifacts"]}

    def available(self) -> list[str]:
        """Figure sets whose backing table is indexed by the manifest."""
        return [s for s in FIGURE_SETS if TABLES[s][0] in self._names]

    def table(self, figure_set: str) -> dict[str, np.ndarray]:
        """Parsed columns for one figure set; hard error on absence/mismatch."""
        if figure_set not in TABLES:
            raise MissingTableError(f"unknown figure set {figure_set!r}")
        name, header = TABLES[figure_set]
        if name not in self._names:
            raise MissingTableError(
                f"figure set {figure_set!r} needs {name!r}, absent from the manifest"
            )
        path = os.path.join(self.base, name)
        try:
            with open(path, "r", encoding="utf-8", newline="") as fh:
                rows = list(csv.reader(fh))
        except OSError as exc:
            raise MissingTableError(f"{name!r} indexed but unreadable: {exc}") from exc
        if not rows or rows[0] != header:
            raise TableSchemaError(
                f"{name!r} header {rows[0] if rows else []} != declared {header}"
            )
        cols: dict[str, np.ndarray] = {}
        for k, col in enumerate(header):
            vals = [r[k] for r in rows[1:]]
            if col in _TEXT_COLUMNS:
                cols[col] = np.array(vals, dtype=object)
            else:
                try:
                    cols[col] = np.array(vals, dtype=np.float64)
                except ValueError as exc:
                    raise TableSchemaError(f"{name!r} column {col!r}: {exc}") from exc
        return cols
