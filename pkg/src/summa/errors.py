"""Exception classes shared across the toolkit."""


class SummaError(ValueError):
    """Base class for every error raised by summa."""


class DomainError(SummaError):
    """An argument lies outside the domain of an operation."""


class GuardExceeded(SummaError):
    """An exhaustive enumeration would exceed its size guard."""


class MeasurabilityError(SummaError):
    """A set or function is not measurable for the given partition."""


class AbsoluteContinuityError(SummaError):
    """A measure charges an atom that the reference measure does not."""

    def __init__(self, atom, message=None):
        self.atom = atom
        super().__init__(message or f"absolute continuity fails at atom {atom}")
