class FigureError(Exception):
    """Base class for rendering failures."""


class ManifestError(FigureError):
    """Manifest file missing, unreadable, or malformed."""


class MissingTableError(FigureError):
    """A requested figure set's backing table is absent from the manifest."""


class TableSchemaError(FigureError):
    """A CSV table exists but its header does not match the declared schema."""
