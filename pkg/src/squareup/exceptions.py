"""Exception hierarchy for the squareup package."""


class SquareUpError(Exception):
    """Base class for all errors raised by this package."""


class NumericalFailureError(SquareUpError):
    """A dense decomposition failed or produced an unusable result."""


class RankDeficiencyError(SquareUpError):
    """A matrix does not have the rank required by the operation."""


class NoStabilizingSolutionError(SquareUpError):
    """The Riccati equation has no stabilizing solution for the given pair."""


class AssumptionError(SquareUpError):
    """The plant violates a structural assumption required by the pipeline.

    Carries the full :class:`~squareup.statespace.AssumptionReport` so
    callers can see which assumptions failed and why.
    """

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


class UnstabilizableError(SquareUpError):
    """The pseudo-pair has fixed modes that are not strictly stable.

    These modes are transmission zeros of the plant and cannot be moved
    by any output augmentation; ``modes`` lists them.
    """

    def __init__(self, message, modes):
        super().__init__(message)
        self.modes = list(modes)


class GenerationError(SquareUpError):
    """A random-system generator exhausted its retry budget."""


class SystemFileError(SquareUpError):
    """A system file could not be parsed; the message names the bad field."""
