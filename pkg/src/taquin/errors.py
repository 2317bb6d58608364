"""Exception hierarchy shared by all taquin modules."""


class TaquinError(Exception):
    """Base class for domain errors (the CLI maps these to exit status 1)."""


class MonotonicityViolation(TaquinError, ValueError):
    pass


class IllegalCorner(TaquinError, ValueError):
    pass


class InvalidPrefix(TaquinError, ValueError):
    """A tableau path whose first ``k`` boxes are not a valid diagram."""

    def __init__(self, k, msg=None):
        self.k = k
        super().__init__(msg or f"prefix of length {k} is not a valid diagram")


class EmptyTableau(TaquinError, ValueError):
    pass


class NotPlanar(TaquinError, ValueError):
    pass


class SizeLimitExceeded(TaquinError):
    pass


class NotACover(TaquinError, ValueError):
    pass


class BoxNotInDiagram(TaquinError, KeyError):
    pass


class ZeroFrequency(TaquinError):
    """A corner was never observed; more trials are needed."""


class ExpectedTooSmall(TaquinError, ValueError):
    pass


class TooFewCells(TaquinError, ValueError):
    pass
