"""Regularized bi-invariant cost of time-evolution operators for oscillators."""
from . import cost, equivalence, ermakov, profiles, quench, specfun, su11
from .exceptions import (
    BicostError, CausticError, ConfigurationError, ConvergenceError,
    DecompositionError, NotMonotoneError, SingularityError,
)
from .specfun import CostConstants, default_cost_constants

__version__ = "0.1.0"
