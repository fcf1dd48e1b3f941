"""Exception types raised across the package."""


class FinSplitError(Exception):
    """Base class for all library errors."""


class NotATopology(FinSplitError, ValueError):
    pass


class DuplicateLabel(FinSplitError, ValueError):
    pass


class SpaceMismatch(FinSplitError, ValueError):
    pass


class NotAPartition(FinSplitError, ValueError):
    pass


class EmptyValue(FinSplitError, ValueError):
    pass


class EmptyCandidate(FinSplitError, ValueError):
    pass


class SearchSpaceTooLarge(FinSplitError):
    pass


class TooLarge(SearchSpaceTooLarge):
    pass


class NotHausdorff(FinSplitError):
    pass


class HypothesisViolated(FinSplitError):
    pass


class InvalidChoice(FinSplitError, ValueError):
    pass


class InternalMismatch(FinSplitError, AssertionError):
    """Two independent computations of the same object disagree."""


class ValidationFailed(FinSplitError):
    pass


class OutOfRange(FinSplitError, ValueError):
    pass


class UnknownExample(FinSplitError, KeyError):
    pass


class BadSize(FinSplitError, ValueError):
    pass


class UnknownProperty(FinSplitError, KeyError):
    pass


class ParseError(FinSplitError, ValueError):
    pass


class ValidationError(FinSplitError, ValueError):
    pass


class DanglingReference(FinSplitError, KeyError):
    pass
