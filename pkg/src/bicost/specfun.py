"""Bernoulli polynomials, Hurwitz zeta at non-positive integers and cost constants."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.optimize import brentq

__all__ = [
    "CostConstants",
    "bernoulli_poly",
    "hurwitz_zeta_nonpos",
    "solve_mean_ratio",
    "default_cost_constants",
    "epstein_hurwitz_regularized",
    "LAMBDA1_SQ_UNIT",
    "GAMMA_DEFAULT",
]

# Bernoulli numbers B_0 .. B_6 (convention B_1 = -1/2).
_BERNOULLI = (
    Fraction(1), Fraction(-1, 2), Fraction(1, 6), Fraction(0),
    Fraction(-1, 30), Fraction(0), Fraction(1, 42),
)
MAX_BERNOULLI_ORDER = len(_BERNOULLI) - 1

LAMBDA1_SQ_UNIT = math.sqrt(3.0) / 432.0
GAMMA_DEFAULT = -1.0 / (4.0 * math.sqrt(3.0))


def bernoulli_poly(n: int, q):
    """Bernoulli polynomial ``B_n(q) = sum_k C(n,k) B_k q^(n-k)`` for ``0 <= n <= 6``.

    ``q`` may be a float or a :class:`fractions.Fraction`; Fraction input gives
    an exact rational result.
    """
    if not isinstance(n, int) or not 0 <= n <= MAX_BERNOULLI_ORDER:
        raise ValueError(f"bernoulli_poly supports 0 <= n <= {MAX_BERNOULLI_ORDER}, got {n!r}")
    exact = isinstance(q, (Fraction, int))
    # Horner evaluation in q, highest power first.
    acc = Fraction(0) if exact else 0.0
    for k in range(n + 1):
        c = math.comb(n, k) * _BERNOULLI[k]
        acc = acc * q + (c if exact else float(c))
    return acc


def hurwitz_zeta_nonpos(k: int, q):
    """Analytically continued Hurwitz zeta ``zeta(k, q)`` for ``k`` in {0, -1, -2}.

    Uses explicit closed forms, which is a separate evaluation path from
    ``-B_{1-k}(q) / (1-k)`` via :func:`bernoulli_poly`.
    """
    if k == 0:
        return Fraction(1, 2) - q if isinstance(q, (Fraction, int)) else 0.5 - q
    if k == -1:
        if isinstance(q, (Fraction, int)):
            return -(q * q - q + Fraction(1, 6)) / 2
        return -(q * q - q + 1.0 / 6.0) / 2.0
    if k == -2:
        if isinstance(q, (Fraction, int)):
            return -(q * q * q - Fraction(3, 2) * q * q + q / 2) / 3
        return -(q * q * q - 1.5 * q * q + 0.5 * q) / 3.0
    raise ValueError(f"hurwitz_zeta_nonpos supports k in {{0, -1, -2}}, got {k!r}")


def solve_mean_ratio():
    """Roots ``(gamma_plus, gamma_minus)`` of ``zeta(-1, 1/2 - 2 gamma) = 0``.

    The roots are bracketed on either side of the maximum at ``gamma = 0`` and
    refined with Brent's method, then compared with ``+-1/(4 sqrt 3)``.
    """
    def fn(g):
        return hurwitz_zeta_nonpos(-1, 0.5 - 2.0 * g)

    g_plus = brentq(fn, 0.0, 0.25, xtol=1e-16, rtol=1e-15)
    g_minus = brentq(fn, -0.25, 0.0, xtol=1e-16, rtol=1e-15)
    closed = 1.0 / (4.0 * math.sqrt(3.0))
    if abs(g_plus - closed) > 1e-12 or abs(g_minus + closed) > 1e-12:
        raise ArithmeticError("mean-ratio roots disagree with the closed form")
    return g_plus, g_minus


@dataclass(frozen=True)
class CostConstants:
    """Weights of the regularized p=2 cost.

    ``lambda12_sq`` is always ``lambda1_sq + lambda2_sq``; ``gamma`` is the
    ratio of the subtracted mean to ``f`` (or ``f3``).
    """

    lambda0: float
    lambda1_sq: float
    lambda2_sq: float
    gamma: float = GAMMA_DEFAULT

    def __post_init__(self):
        if not self.lambda0 > 0:
            raise ValueError("lambda0 must be positive")
        if not (self.lambda1_sq > 0 and self.lambda2_sq > 0):
            raise ValueError("lambda1_sq and lambda2_sq must be positive")

    @property
    def lambda12_sq(self) -> float:
        return self.lambda1_sq + self.lambda2_sq


def default_cost_constants(lambda0: float = 1.0, lambda2_sq_override: float | None = None) -> CostConstants:
    """Default constants: ``lambda1^2 = sqrt(3)/432 lambda0^2`` and ``lambda2^2 = 0.05 lambda0^2``.

    An override for ``lambda2^2`` is taken as an absolute value.
    """
    if not lambda0 > 0:
        raise ValueError(f"lambda0 must be positive, got {lambda0}")
    if lambda2_sq_override is not None and not lambda2_sq_override > 0:
        raise ValueError(f"lambda2_sq override must be positive, got {lambda2_sq_override}")
    l0sq = lambda0 * lambda0
    l2sq = 0.05 * l0sq if lambda2_sq_override is None else float(lambda2_sq_override)
    return CostConstants(lambda0, LAMBDA1_SQ_UNIT * l0sq, l2sq, GAMMA_DEFAULT)


def epstein_hurwitz_regularized(alpha, beta_sq):
    """Termwise zeta regularization of ``sum_n ((n+alpha)^2 + beta^2)`` at ``s = -1``.

    Equal to ``zeta(-2, alpha) + beta^2 zeta(0, alpha)``. Offered for study as
    an alternative source of ``lambda2^2``; it vanishes at the point used by the
    cost (``alpha = 1/2``), so it is not the default.
    """
    return hurwitz_zeta_nonpos(-2, alpha) + beta_sq * hurwitz_zeta_nonpos(0, alpha)
