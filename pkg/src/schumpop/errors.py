"""Exception hierarchy shared by all schumpop modules.

The CLI maps these onto exit codes: scenario/validation problems exit
with 2, domain errors (queries outside a model's domain) with 3, and
numerical failures with 4.
"""


class SchumpopError(Exception):
    """Base class for all errors raised by this package."""


class ScenarioError(SchumpopError, ValueError):
    """A scenario file is syntactically or semantically invalid."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class DomainError(SchumpopError, ValueError):
    """An operation was asked about a point outside its domain.

    Examples: an unknown technology id, a degenerate payoff matrix, a
    parameter tuple that is not Schumpeterian, or a comparative-statics
    query outside the admissible region.
    """


class NumericsError(SchumpopError, RuntimeError):
    """A numerical routine detected an internal inconsistency."""


class IntegrationError(NumericsError):
    """The ODE integrator left the simplex by more than its clamp budget.

    Carries the time at which the offending step happened.
    """

    def __init__(self, message, time):
        super().__init__(f"{message} (at t={time!r})")
        self.time = time
