"""Exception hierarchy shared by all modules."""


class DomainError(ValueError):
    """Argument outside the domain of a function (e.g. negative Bessel argument)."""


class ZeroModeError(ValueError):
    """A mean-zero requirement was violated or the k = 0 mode was queried."""


class SingularSymbolError(ArithmeticError):
    """A symbol denominator fell below the safety threshold."""


class GeometryError(ValueError):
    """Degenerate curve, inconsistent grids, or a radius ratio that is too large."""


class SolverError(RuntimeError):
    """A dense solve failed or left a residual above tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SimulationAbort(RuntimeError):
    """An evolution run left its admissible region (length or self-intersection guard)."""

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class SingularityError(DomainError):
    """A kernel was evaluated at coincident points."""
