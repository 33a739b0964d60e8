"""Exception types raised across critlab."""


class MeasureError(ValueError):
    """Invalid description of a measure on the unit circle."""


class PoleError(ZeroDivisionError):
    """Evaluation requested exactly at a root of the polynomial."""


class OracleScopeError(ValueError):
    """Dense/coefficient oracle called beyond its supported size."""


class DegenerateError(ArithmeticError):
    """Newton denominator vanished; the caller should perturb the point."""


class ContourError(ArithmeticError):
    """Contour passes too close to a zero; choose a different radius."""


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""
