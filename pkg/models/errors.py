#!/usr/bin/env python3
"""
Exception hierarchy for the gaussriesz library

Validation problems raise ValueError subclasses so callers that only know
about ValueError keep working. Recoverable numerical conditions (truncation,
principal-value disagreement, calibration residual) are reported as flags on
results instead of being raised.
"""


class GaussRieszError(Exception):
    """Base class for all library errors"""


class DimensionMismatchError(GaussRieszError, ValueError):
    """Point or multi-index dimension does not match the context dimension"""


class DegreeCapError(GaussRieszError, ValueError):
    """Hermite degree above the evaluation cap"""


class AdmissibilityError(GaussRieszError, ValueError):
    """Ball radius exceeds m(|c_B|)"""


class QuadratureError(GaussRieszError, ValueError):
    """Empty grid, non-finite node values or an underflowing measure"""


class DiagonalSingularityError(GaussRieszError, ValueError):
    """Kernel evaluated too close to the diagonal x = y"""


class JetOverflowError(GaussRieszError, ArithmeticError):
    """Taylor-jet coefficients became non-finite"""

    def __init__(self, message: str, suggested_radius: float = None):
        super().__init__(message)
        self.suggested_radius = suggested_radius


class DegenerateProfileError(GaussRieszError, ValueError):
    """Bump profile components are numerically proportional"""


class ConfigError(GaussRieszError, ValueError):
    """Invalid run configuration; carries the source location when known"""

    def __init__(self, message: str, source: str = None, line: int = None):
        location = ""
        if source is not None:
            location = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(f"{location}{message}")
        self.source = source
        self.line = line


class UnknownExperimentError(GaussRieszError, ValueError):
    """Experiment selector not present in the registry"""
