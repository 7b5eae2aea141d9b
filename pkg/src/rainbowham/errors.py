"""Exception types shared across the package."""


class GraphFormatError(ValueError):
    """Structurally malformed graph input (loop, duplicate edge, bad endpoint)."""


class PreconditionError(ValueError):
    """An operation's stated precondition does not hold for the given input."""


class CertificationError(RuntimeError):
    """A randomized certification step exhausted its retry budget.

    Carries the last violation report in ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class AbsorptionError(RuntimeError):
    """Absorption could not place a vertex (names the stuck vertex)."""

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


class JunctionError(RuntimeError):
    """Path connection through the reservoir ran out of usable connectors."""

    def __init__(self, message, junction=None):
        super().__init__(message)
        self.junction = junction


class BudgetExceededError(ValueError):
    """An exact oracle was asked for an instance above its size budget."""


class StageFailure(RuntimeError):
    """A pipeline stage failed; ``stage`` identifies which one."""

    def __init__(self, stage, message):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
