"""Matrix elements, regularized cost functions, total costs and bounds."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .ermakov import DerivedFunctions
from .exceptions import ConfigurationError
from .profiles import OTF, CoefficientProfile, TimeIndepGeneralized
from .specfun import CostConstants, hurwitz_zeta_nonpos

__all__ = [
    "MatrixElement",
    "CostTrajectory",
    "TimeIndepCost",
    "matrix_element",
    "cost_squared_otf",
    "cost_squared_otf_alt",
    "cost_squared_otmf",
    "cost_function",
    "cost_timeindep",
    "geodesic_cost",
    "total_cost",
    "cost_bound",
    "kz_time",
    "example1_case1_lambda3_sq",
    "example1_case1_total_cost",
    "example1_case2_G",
    "example1_case2_cost_squared",
    "write_cost_csv",
]

_ROOT = 1.0 / (2.0 * math.sqrt(3.0))  # regularization root of zeta(-1, 1/2 - x) = 0


@dataclass(frozen=True)
class MatrixElement:
    n: int
    m: int
    value: complex


def matrix_element(df: DerivedFunctions, n: int, m: int, t: float) -> MatrixElement:
    """``<phi_m | H | phi_n>`` in the Lewis-Riesenfeld eigenbasis.

    Diagonal entries are ``(n + 1/2) f / 2``. The only non-zero off-diagonal
    entries are ``(g1 - i g2) sqrt(n(n-1)) / 4`` for ``m + 2 = n`` and
    ``(g1 + i g2) sqrt((n+2)(n+1)) / 4`` for ``m = n + 2``.
    """
    if n < 0 or m < 0:
        raise ValueError("indices must be non-negative")
    if n == m:
        return MatrixElement(n, m, complex(0.5 * (n + 0.5) * df.f3(t)))
    if m + 2 == n:
        return MatrixElement(n, m, complex(df.f1(t)) * math.sqrt(n * (n - 1)) / 4)
    if m == n + 2:
        return MatrixElement(n, m, complex(df.f2(t)) * math.sqrt((n + 2) * (n + 1)) / 4)
    return MatrixElement(n, m, 0j)


def _check_nonneg(F2, what):
    F2a = np.asarray(F2)
    if np.any(F2a < 0):
        raise ConfigurationError(f"{what} is negative ({np.min(F2a):.3g}); the cost constants are invalid here")
    return F2


def cost_squared_otf(df: DerivedFunctions, omega: CoefficientProfile, k: CostConstants, t):
    """``lambda12^2 f^2 - 4 lambda2^2 W^2`` for a unit-mass oscillator."""
    f = df.f(t)
    return _check_nonneg(k.lambda12_sq * f * f - 4 * k.lambda2_sq * omega(t) ** 2, "F^2")


def cost_squared_otf_split(df: DerivedFunctions, omega: CoefficientProfile, k: CostConstants, t):
    """Same quantity written as ``lambda1^2 f^2 + lambda2^2 (f^2 - 4 W^2)``."""
    f = df.f(t)
    return k.lambda1_sq * f * f + k.lambda2_sq * (f * f - 4 * omega(t) ** 2)


def cost_squared_otf_alt(df: DerivedFunctions, omega: CoefficientProfile, k: CostConstants, t):
    """Same quantity from the ground-state energy: ``16 lambda12^2 E00^2 - 4 lambda2^2 W^2``."""
    e00 = matrix_element(df, 0, 0, t).value.real
    return 16 * k.lambda12_sq * e00 * e00 - 4 * k.lambda2_sq * omega(t) ** 2


def cost_squared_otmf(df: DerivedFunctions, k: CostConstants, t):
    """``lambda1^2 f3^2 + lambda2^2 (f3^2 - 4 A1 B1)``."""
    f3 = df.f3(t)
    return _check_nonneg(k.lambda1_sq * f3 * f3 + k.lambda2_sq * (f3 * f3 - 4 * df.A1(t) * df.B1(t)), "F^2")


def cost_function(df: DerivedFunctions, k: CostConstants) -> Callable:
    """``t -> F^2(t)`` using the OTF or OTMF formula as appropriate."""
    if isinstance(df.model, OTF):
        return lambda t: cost_squared_otf(df, df.model.omega, k, t)
    return lambda t: cost_squared_otmf(df, k, t)


# --- time-independent branch ---------------------------------------------------


@dataclass(frozen=True)
class TimeIndepCost:
    """Cost of a constant Hamiltonian.

    ``F2`` is the squared norm and ``complexity = sqrt(F2)`` the length of the
    unit-time geodesic it generates. ``mean_roots`` holds both regularizing
    means ``a`` and ``zeta2_by_root`` the matching ``zeta(-2, .)`` values; the
    positive one is used. ``force_regulator_sq`` is set for driven oscillators
    and ``mean`` is the residual mean actually subtracted.
    """

    F2: float
    complexity: float
    omega: float
    mean: float
    mean_roots: tuple
    zeta2_by_root: tuple
    force_regulator_sq: float | None = None
    epsilon: float | None = None


def cost_timeindep(spec: TimeIndepGeneralized, k: CostConstants) -> TimeIndepCost:
    """Regularized cost of ``A0/2 X^2 + B0/2 P^2 + C0/4 (XP+PX) - F0 X + D0/(2 X^2)``.

    The spectrum is ``w (n + q)`` up to a constant shift. The mean ``a`` solves
    ``zeta(-1, q - a/w) = 0``, giving two roots, and
    ``F^2 = lambda0^2 w^2 zeta(-2, q - a/w)`` on the root where this is
    positive.
    """
    A0, B0, C0 = float(spec.A0), float(spec.B0), float(spec.C0)
    disc = 4 * A0 * B0 - C0 * C0
    if not disc > 0 or not B0 > 0:
        raise ConfigurationError(f"not an oscillator: 4 A0 B0 - C0^2 = {disc:g}, B0 = {B0:g}")
    A1 = A0 - C0 * C0 / (4 * B0)
    omega = math.sqrt(A1 * B0)
    l0sq = k.lambda0**2
    force_sq = None
    eps = None

    if spec.isotonic is not None:
        D0 = float(spec.isotonic)
        if not 1 + 4 * D0 / B0 > 0:
            raise ConfigurationError("isotonic strength needs 1 + 4 D0/B0 > 0")
        eps = 0.5 * math.sqrt(1 + 4 * D0 / B0)
        scale = omega / 2  # level spacing convention of the isotonic spectrum
        q = 0.5 * (eps + 1)
        shift = 0.0
    else:
        scale = omega
        q = 0.5
        # a constant force shifts every level by -F0^2/(2 A1)
        shift = -(float(spec.force) ** 2) / (2 * A1) if spec.force is not None else 0.0
        if spec.force is not None:
            force_sq = A1 * omega / math.sqrt(3.0)

    # zeta(-1, q - (a - shift)/scale) = 0  <=>  q - (a - shift)/scale = 1/2 -+ 1/(2 sqrt 3)
    args = (0.5 - _ROOT, 0.5 + _ROOT)
    roots = tuple(scale * (q - x) + shift for x in args)
    z2 = tuple(float(hurwitz_zeta_nonpos(-2, x)) for x in args)
    i = int(np.argmax(z2))
    F2 = l0sq * scale * scale * z2[i]
    return TimeIndepCost(F2, math.sqrt(F2), omega, roots[i], roots, z2, force_sq, eps)


def geodesic_cost(b, k: CostConstants) -> TimeIndepCost:
    """Cost of the constant generator reaching ``exp(b . K)`` in unit time."""
    from .su11 import geodesic_generator

    spec = geodesic_generator(b)
    if spec.A0 == 0 and spec.B0 == 0 and spec.C0 == 0:
        return TimeIndepCost(0.0, 0.0, 0.0, 0.0, (0.0, 0.0), (0.0, 0.0))
    return cost_timeindep(spec, k)


# --- total cost -----------------------------------------------------------------


@dataclass(frozen=True)
class CostTrajectory:
    """Cumulative cost on a time grid.

    ``bound`` is ``lambda12 sqrt((t - t0) int_t0^t f^2)`` when an ``f`` was
    supplied, else ``None``. ``error`` is the summed quadrature error estimate.
    """

    times: np.ndarray
    F2: np.ndarray
    cumulative: np.ndarray
    bound: np.ndarray | None
    error: float

    @property
    def total(self) -> float:
        return float(self.cumulative[-1])


def _integrate(fn, a, b, tol, pts):
    inner = [p for p in pts if a < p < b] or None
    val, err = quad(fn, a, b, points=inner, epsabs=tol, epsrel=tol, limit=500)
    return val, err


def total_cost(costfn: Callable, t_span, tol: float = 1e-10, n_samples: int = 101,
               f_fn: Callable | None = None, lambda12: float | None = None,
               breakpoints=()) -> CostTrajectory:
    """``C(t) = int_t0^t sqrt(F^2)`` by adaptive Gauss-Kronrod quadrature on a grid.

    Each grid interval is integrated separately so ``cumulative`` is exact at
    every sample, not interpolated.
    """
    t0, t1 = map(float, t_span)
    if not t1 >= t0:
        raise ValueError("t_span must be non-decreasing")
    times = np.linspace(t0, t1, n_samples)
    F2 = np.array([float(costfn(t)) for t in times])
    _check_nonneg(F2, "F^2")

    def integrand(t):
        v = float(costfn(t))
        if v < 0:
            raise ConfigurationError(f"F^2 negative at t={t:g}")
        return math.sqrt(v)

    cum = np.zeros(n_samples)
    err_total = 0.0
    ftot = np.zeros(n_samples)
    for i in range(1, n_samples):
        v, e = _integrate(integrand, times[i - 1], times[i], tol / n_samples, breakpoints)
        cum[i] = cum[i - 1] + v
        err_total += e
        if f_fn is not None:
            w, _ = _integrate(lambda t: float(f_fn(t)) ** 2, times[i - 1], times[i], tol / n_samples, breakpoints)
            ftot[i] = ftot[i - 1] + w
    bound = None
    if f_fn is not None:
        if lambda12 is None:
            raise ValueError("lambda12 is required with f_fn")
        bound = lambda12 * np.sqrt((times - t0) * ftot)
    return CostTrajectory(times, F2, cum, bound, err_total)


def cost_bound(f_fn: Callable, k: CostConstants, T: float, t0: float = 0.0, breakpoints=()) -> float:
    """``lambda12 sqrt(T int_t0^{t0+T} f^2 dt)``, the Cauchy-Schwarz bound on the total cost."""
    if T == 0:
        return 0.0
    val, _ = _integrate(lambda t: float(f_fn(t)) ** 2, t0, t0 + T, 1e-12, breakpoints)
    return math.sqrt(k.lambda12_sq) * math.sqrt(T * val)


def kz_time(omega: CoefficientProfile, t_max: float | None = None, n_scan: int = 4000):
    """Smallest ``t > 0`` with ``|W'(t)| / W(t)^2 = 1``, or ``None`` if there is none.

    The scan runs over ``(0, t_max]``; without ``t_max`` it covers the profile
    domain, or ``(0, 1e6]`` on a logarithmic grid for unbounded domains.
    ``None`` means the evolution stays adiabatic by this criterion.
    """
    lo = max(0.0, omega.domain[0])
    hi = omega.domain[1] if t_max is None else min(float(t_max), omega.domain[1])
    if not math.isfinite(hi):
        hi = 1e6
    if math.isfinite(omega.domain[1]) and hi == omega.domain[1]:
        hi = lo + (hi - lo) * (1 - 1e-9)

    def g(t):
        w = float(omega(t))
        return abs(float(omega.deriv(t))) / (w * w) - 1.0

    tiny = max(1e-12, 1e-12 * hi)
    grid = np.unique(np.concatenate([np.linspace(lo + tiny, min(hi, lo + 1.0), n_scan // 2),
                                     np.geomspace(max(lo, tiny) + tiny, hi, n_scan // 2)]))
    vals = np.array([g(t) for t in grid])
    for i in range(len(grid) - 1):
        if vals[i] == 0:
            return float(grid[i])
        if vals[i] * vals[i + 1] < 0:
            return float(brentq(g, grid[i], grid[i + 1], xtol=1e-13, rtol=1e-15))
    return None


# --- closed forms for the 1/(b1 + b2 t) profile -----------------------------------


def example1_case1_lambda3_sq(k: CostConstants, b2: float) -> float:
    """``(16 lambda1^2 + 4 b2^2 lambda2^2) / (4 - b2^2)``."""
    return (16 * k.lambda1_sq + 4 * b2 * b2 * k.lambda2_sq) / (4 - b2 * b2)


def example1_case1_total_cost(lambda3: float, b1: float, b2: float, t):
    """``(lambda3 / b2) ln(1 + b2 t / b1)``."""
    return lambda3 / b2 * np.log1p(b2 * np.asarray(t, dtype=float) / b1)


def example1_case2_G(b1: float, t):
    """``(6 + 2 ln u + ln^2 u)^2 / 4`` with ``u = b1 + 2 t``; equals ``(u f)^2``."""
    L = np.log(b1 + 2 * np.asarray(t, dtype=float))
    return 0.25 * (6 + 2 * L + L * L) ** 2


def example1_case2_cost_squared(k: CostConstants, b1: float, t):
    """``(lambda12^2 G - 4 lambda2^2) / u^2`` for the ``b2 = 2`` solution."""
    u = b1 + 2 * np.asarray(t, dtype=float)
    return (k.lambda12_sq * example1_case2_G(b1, t) - 4 * k.lambda2_sq) / (u * u)


def write_cost_csv(traj: CostTrajectory, fh) -> None:
    """Write columns ``t,F2,C_cum,bound`` (``bound`` empty when absent)."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "F2", "C_cum", "bound"])
    for i, t in enumerate(traj.times):
        b = "" if traj.bound is None else repr(float(traj.bound[i]))
        w.writerow([repr(float(t)), repr(float(traj.F2[i])), repr(float(traj.cumulative[i])), b])
