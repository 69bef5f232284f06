"""Exception hierarchy shared across the package."""


class BayesLassoError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(BayesLassoError, ValueError):
    """A parameter violates its domain constraints."""


class UnsupportedParameterError(ParameterError):
    """Parameters are valid for the family but not for this operation.

    Raised by the density/CDF/quantile/sampling surface when a = 0; the
    limit classifier and the Laplace sampler handle that regime instead.
    """


class NumericalError(BayesLassoError, ArithmeticError):
    """A numerical routine failed (factorization, divergence, overflow)."""


class DataFormatError(BayesLassoError, ValueError):
    """Input data could not be parsed or has an unusable shape."""
