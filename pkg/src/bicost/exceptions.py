"""Exception hierarchy shared by the numerical modules."""


class BicostError(Exception):
    """Base class for all errors raised by bicost."""


class SingularityError(BicostError):
    """The auxiliary function collapsed towards zero during integration."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class ConvergenceError(BicostError):
    """An integrator or root finder failed to converge."""


class ConfigurationError(BicostError):
    """Inputs are individually valid but jointly inconsistent.

    Raised, for instance, when a choice of cost constants makes the squared
    cost negative somewhere on the trajectory.
    """


class DecompositionError(BicostError):
    """The normal-ordered SU(1,1) factorisation does not exist."""


class CausticError(BicostError):
    """The classical trajectory crossed zero, so ln|x_c| diverges."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class NotMonotoneError(BicostError):
    """A time reparametrisation is not single-valued on the requested span."""
