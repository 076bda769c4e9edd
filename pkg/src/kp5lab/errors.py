"""Exception hierarchy shared across the laboratory."""


class KP5Error(Exception):
    """Base class for all kp5lab errors."""


class ConfigurationError(KP5Error):
    """Invalid grid or run configuration."""


class ContractError(KP5Error):
    """Caller violated an interface contract (shape/mesh mismatch, off-mesh time)."""


class ConstraintError(KP5Error):
    """Operation requires the zero-x-mean constraint and the field lacks it."""


class DomainError(KP5Error):
    """Argument outside the mathematical domain of the operation."""


class RangeError(KP5Error):
    """Dyadic shell index outside the grid's resolvable band."""


class ParameterError(KP5Error):
    """Symbol or sweep parameters outside their admissible regime."""


class AliasingError(KP5Error):
    """Input band too wide: the discrete convolution would alias."""


class ProbeInvalidError(KP5Error):
    """A probe's validity monitor tripped (e.g. boundary mass too large)."""


class OracleInvalidError(KP5Error):
    """An oracle's own resolution check failed; its output is not trustworthy."""


class BlowUpError(KP5Error):
    """Non-finite values or runaway growth detected during time integration."""


class NumericalError(KP5Error):
    """Quadrature failed to converge to the requested accuracy."""
