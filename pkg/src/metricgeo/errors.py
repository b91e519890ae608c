"""Exception types shared across the toolkit."""


class MetricGeoError(Exception):
    """Base class for every error raised by this package."""


class MalformedInputError(MetricGeoError):
    """Input data is structurally unusable: wrong shape, NaN, negative lengths."""


class ParameterError(MetricGeoError):
    """A numeric parameter lies outside its legal range."""


class DegenerateTripleError(MetricGeoError):
    """Repeated points were supplied where distinct ones are required."""


class SearchCapError(MetricGeoError):
    """An exact search was refused because the instance exceeds the size cap."""


class StepSizeError(MetricGeoError):
    """A descent step size violates the stability bound for the objective."""
