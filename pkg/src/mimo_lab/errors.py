"""Exception types shared across the package."""

import numpy as np


class MimoLabError(Exception):
    """Base class for all errors raised by mimo_lab."""


class ArgumentError(MimoLabError, ValueError):
    """An argument is outside its documented domain."""


class SingularMatrixError(MimoLabError, np.linalg.LinAlgError):
    """A Hermitian matrix is not (numerically) positive definite.

    Attributes
    ----------
    pivot : int
        Index of the Cholesky pivot that failed.
    batch_index : tuple of int or None
        Position of the offending matrix inside a stacked input, if any.
    """

    def __init__(self, pivot, batch_index=None, reason="non-positive pivot"):
        self.pivot = int(pivot)
        self.batch_index = batch_index
        where = "" if batch_index is None else f" (matrix {batch_index})"
        super().__init__(f"{reason} at pivot {self.pivot}{where}")


class DegenerateChannelError(MimoLabError, ValueError):
    """A channel row is identically zero."""

    def __init__(self, ue):
        self.ue = int(ue)
        super().__init__(f"channel vector of UE {self.ue} is zero")


class InfeasibleError(MimoLabError, ValueError):
    """A formula or rule of thumb has no valid value for the inputs."""


class PrecoderInfeasibleError(InfeasibleError):
    """A precoder cannot be built for the given channel."""


class SimulationError(MimoLabError):
    """Numerical failure inside a Monte Carlo realization."""

    def __init__(self, realization, cause):
        self.realization = int(realization)
        self.cause = cause
        super().__init__(f"realization {self.realization}: {cause}")


class ConfigParseError(MimoLabError, ValueError):
    """A configuration document is malformed."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        loc = []
        if key is not None:
            loc.append(f"key '{key}'")
        if line is not None:
            loc.append(f"line {line}")
        prefix = f"{', '.join(loc)}: " if loc else ""
        super().__init__(prefix + message)
