"""Exception and warning types shared by the numeric layers."""


class NonConvergence(RuntimeError):
    """Quadrature could not meet its tolerance within the subdivision budget."""


class NonFiniteValue(ArithmeticError):
    """A NaN or infinity showed up where a finite number is required."""


class StateBlowup(ArithmeticError):
    """An integrated state left the configured magnitude bound."""


class DomainError(ValueError):
    """Argument lies outside the domain where the operation is defined."""


class PoleProximity(ValueError):
    """Integration contour passes too close to a pole of the integrand."""


class PoleHit(ZeroDivisionError):
    """Evaluation point sits on (or within the floor of) a pole."""


class TruncationWarning(UserWarning):
    """The neglected tail of a truncated integral exceeds the absolute tolerance."""
