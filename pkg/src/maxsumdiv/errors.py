"""Exception hierarchy shared by every module."""


class DiversificationError(Exception):
    """Base class for all errors raised by maxsumdiv."""


class InvalidInputError(DiversificationError, ValueError):
    """Arguments violate an operation's precondition."""


class MetricViolationError(InvalidInputError):
    """A distance matrix is not (or no longer) a metric."""


class UnsupportedQualityError(DiversificationError, TypeError):
    """The algorithm requires a modular quality function."""


class TooLargeError(DiversificationError):
    """Exhaustive search space exceeds the configured guard."""


class DegenerateVectorError(InvalidInputError):
    """A feature vector has zero norm, so cosine distance is undefined."""


class LetorParseError(DiversificationError, ValueError):
    """One or more lines of a ranked-document file could not be parsed."""

    def __init__(self, problems):
        self.problems = list(problems)
        lines = ", ".join(str(lineno) for lineno, _ in self.problems[:20])
        more = "" if len(self.problems) <= 20 else f" (+{len(self.problems) - 20} more)"
        first = f"; line {self.problems[0][0]}: {self.problems[0][1]}" if self.problems else ""
        super().__init__(f"malformed lines: {lines}{more}{first}")


class InternalInvariantError(DiversificationError, RuntimeError):
    """A property guaranteed by theory did not hold; indicates a bug."""
