"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Inputs are malformed or dimensionally inconsistent."""


class SingularMatrix(ArithmeticError):
    pass


class NumericalFailure(ArithmeticError):
    """An iterative numerical kernel did not converge."""


class InfeasibleParameters(Exception):
    """No admissible parameter set exists for the requested model.

    ``reason`` is a short machine-readable tag (``"anisotropic"``,
    ``"omega0"``, ``"axis"``, ``"pair"``, ...) and ``where`` identifies the
    failing axis index or axis pair when that is meaningful.  ``values`` may
    carry the offending (inadmissible) numbers for reporting.
    """

    def __init__(self, message, reason="infeasible", where=None, values=None):
        super().__init__(message)
        self.reason = reason
        self.where = where
        self.values = dict(values or {})


class InfeasibleCorrection(InfeasibleParameters):
    """The source-term correction of a relaxation rate has no real solution."""

    def __init__(self, message, values=None):
        super().__init__(message, reason="correction", values=values)


class DegenerateSource(ZeroDivisionError):
    """``dt * eta == 2``: the macroscopic recovery formula is singular."""


class DegenerateNorm(ZeroDivisionError):
    pass


class DivergenceDetected(FloatingPointError):
    """A non-finite population appeared during time stepping."""

    def __init__(self, message, step, cell):
        super().__init__(message)
        self.step = step
        self.cell = cell
