"""Figure rendering over kp5lab artifacts (CSV/JSON in, images out)."""

from kp5figs.artifacts import FIGURE_SETS, ArtifactIndex
from kp5figs.errors import FigureError, ManifestError, MissingTableError, TableSchemaError
from kp5figs.render import render

__all__ = [
    "FIGURE_SETS",
    "ArtifactIndex",
    "FigureError",
    "ManifestError",
    "MissingTableError",
    "TableSchemaError",
    "render",
]
