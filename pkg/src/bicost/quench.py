"""Smooth end-critical quench ``W(t) = delta / (t^2 + eta^2)`` for ``t > 0``.

Everything is expressed in the dimensionless time ``s = t/eta`` and
``beta = delta/eta``; the cost is reported as ``F_N^2 = eta^2 F^2``, which
depends on ``(beta, s)`` only.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .parallel import pmap
from .profiles import Quench
from .specfun import CostConstants

__all__ = [
    "QuenchParams",
    "ScalingFit",
    "ScalingStudy",
    "FigureData",
    "quench_rho",
    "shannon_delta",
    "quench_f",
    "quench_f_from_rho",
    "quench_cost",
    "quench_cost_small_s",
    "quench_cost_large_s",
    "quench_cost_late_rho",
    "count_touches",
    "scaling_study",
    "figure_data",
]


@dataclass(frozen=True)
class QuenchParams:
    """Protocol parameters; ``alpha = delta/eta^2 = W0`` and ``beta = delta/eta``."""

    delta: float
    eta: float

    def __post_init__(self):
        if not (self.delta > 0 and self.eta > 0):
            raise ValueError("quench requires delta > 0 and eta > 0")

    @classmethod
    def from_beta(cls, beta: float, eta: float = 1.0) -> "QuenchParams":
        return cls(beta * eta, eta)

    @property
    def omega0(self) -> float:
        return self.delta / self.eta**2

    @property
    def alpha(self) -> float:
        return self.delta / self.eta**2

    @property
    def beta(self) -> float:
        return self.delta / self.eta

    @property
    def k_exp(self) -> float:
        """Exponent ``sqrt(1 + delta^2/eta^2)`` multiplying ``arctan(t/eta)`` in the closed-form rho."""
        return math.sqrt(1 + self.beta**2)

    def spec(self) -> Quench:
        return Quench(self.delta, self.eta)


def quench_rho(p: QuenchParams, s):
    """``(rho, d rho/dt)`` at dimensionless time ``s``; constant ``W0^(-1/2)`` for ``s <= 0``.

    For ``t > 0``::

        rho = (eta/sqrt(delta)) [ (t^2+eta^2)/(delta^2+eta^2) (cos^2(k arctan(t/eta)) + delta^2/eta^2) ]^(1/2)
    """
    s = np.asarray(s, dtype=float)
    d, e, k = p.delta, p.eta, p.k_exp
    t = np.where(s > 0, s, 0.0) * e
    phi = np.arctan(t / e)
    c = np.cos(k * phi)
    A = (t * t + e * e) / (d * d + e * e)
    Bq = c * c + d * d / (e * e)
    rho = e / math.sqrt(d) * np.sqrt(A * Bq)
    # d/dt of A*Bq, with d(phi)/dt = e/(t^2+e^2)
    dA = 2 * t / (d * d + e * e)
    dB = -2 * c * np.sin(k * phi) * k * e / (t * t + e * e)
    rho_dot = (e / math.sqrt(d)) ** 2 * (dA * Bq + A * dB) / (2 * rho)
    return np.where(s > 0, rho, e / math.sqrt(d))[()], np.where(s > 0, rho_dot, 0.0)[()]


def shannon_delta(p: QuenchParams, s, mode: str = "exact", n: int = 0):
    """Change of Shannon entropy ``ln(sqrt(W0) rho)``; independent of the level ``n``.

    ``mode`` selects the exact value, the adiabatic form ``ln(1+s^2)/2``
    (meant for ``s < beta``) or the late-time small-``beta`` form
    ``ln(1 + (s^2 - pi s/2 + 1) beta^2)/2`` (meant for ``beta << 1``,
    ``s >> 1``). Outside those ranges a warning is issued.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    s_arr = np.asarray(s, dtype=float)
    b = p.beta
    if mode == "exact":
        rho, _ = quench_rho(p, s_arr)
        # before and at the quench rho is the ground-state width, so the change is exactly zero
        return np.where(s_arr > 0, np.log(math.sqrt(p.omega0) * rho), 0.0)[()]
    if mode == "adiabatic":
        if np.any(s_arr >= b):
            warnings.warn("adiabatic form is meant for s < beta", stacklevel=2)
        return (0.5 * np.log1p(s_arr * s_arr))[()]
    if mode == "late_time":
        if b >= 0.5 or np.any(s_arr <= 1):
            warnings.warn("late-time form is meant for beta << 1 and s >> 1", stacklevel=2)
        return (0.5 * np.log1p((s_arr * s_arr - s_arr * math.pi / 2 + 1) * b * b))[()]
    raise ValueError(f"unknown mode {mode!r}")


def quench_f(p: QuenchParams, s):
    """Closed form of ``f`` for ``s >= 0``.

    ``f = [(1+2b^2)(1+2b^2+s^2) + (s^2-1) cos T - 2 s sqrt(1+b^2) sin T] / (2 b eta (1+s^2)(1+b^2))``
    with ``T = 2 sqrt(1+b^2) arctan s``.
    """
    s = np.asarray(s, dtype=float)
    b, e = p.beta, p.eta
    r = math.sqrt(1 + b * b)
    T = 2 * r * np.arctan(s)
    num = (1 + 2 * b * b) * (1 + 2 * b * b + s * s) + (s * s - 1) * np.cos(T) - 2 * s * r * np.sin(T)
    return (num / (2 * b * e * (1 + s * s) * (1 + b * b)))[()]


def quench_f_from_rho(p: QuenchParams, s):
    """``rho'^2 + W^2 rho^2 + 1/rho^2`` evaluated from :func:`quench_rho`."""
    s = np.asarray(s, dtype=float)
    rho, rd = quench_rho(p, s)
    w = p.delta / (p.eta**2 * (1 + np.where(s > 0, s, 0.0) ** 2))
    return (rd * rd + w * w * rho * rho + 1 / (rho * rho))[()]


def _FN2(k: CostConstants, eta_f, beta, s):
    s = np.asarray(s, dtype=float)
    eta_w = beta / (1 + np.where(s > 0, s, 0.0) ** 2)
    val = k.lambda12_sq * eta_f**2 - 4 * k.lambda2_sq * eta_w**2
    if np.any(np.asarray(val) < 0):
        from .exceptions import ConfigurationError
        raise ConfigurationError("negative cost: lambda2^2 is too large for these constants")
    return val[()] if isinstance(val, np.ndarray) else val


def quench_cost(p: QuenchParams, k: CostConstants, s):
    """``F_N^2 = eta^2 (lambda12^2 f^2 - 4 lambda2^2 W^2)``; depends on ``(beta, s)`` only."""
    return _FN2(k, p.eta * quench_f(p, s), p.beta, s)


def quench_cost_small_s(p: QuenchParams, k: CostConstants, s):
    """Series ``4 l1 b^2 - 8 l1 b^2 s^2 + 4 b^2 (4 l1 + l2) s^4`` about ``s = 0``."""
    s = np.asarray(s, dtype=float)
    b2 = p.beta**2
    l1, l2 = k.lambda1_sq, k.lambda2_sq
    return (4 * l1 * b2 - 8 * l1 * b2 * s**2 + 4 * b2 * (4 * l1 + l2) * s**4)[()]


def quench_cost_large_s(p: QuenchParams, k: CostConstants, s):
    """Late-time series ``l12 [1 + 2b^2 + cos(pi sqrt(1+b^2))]^2 (1/(4b^2) + 1/s^2) / (1+b^2)^2``."""
    s = np.asarray(s, dtype=float)
    b = p.beta
    amp = k.lambda12_sq / (1 + b * b) ** 2 * (1 + 2 * b * b + math.cos(math.pi * math.sqrt(1 + b * b))) ** 2
    return (amp * (1 / (4 * b * b) + 1 / s**2))[()]


def quench_cost_late_rho(p: QuenchParams, k: CostConstants, s):
    """Cost built from the truncated late-time ``rho^2 = eta/beta + eta (s^2 - pi s/2 + 1) beta``."""
    s = np.asarray(s, dtype=float)
    b, e = p.beta, p.eta
    P = e / b + e * (s * s - s * math.pi / 2 + 1) * b
    dP = e * (2 * s - math.pi / 2) * b / e  # d(rho^2)/dt
    rho = np.sqrt(P)
    rd = dP / (2 * rho)
    w = p.delta / (e * e * (1 + s * s))
    f = rd * rd + w * w * P + 1 / P
    return _FN2(k, e * f, b, s)


def count_touches(gap, tol: float = 1e-2) -> int:
    """Count sign changes of ``gap`` plus local maxima of ``-|gap|`` that come within ``tol max|gap|`` of zero.

    The exact entropy change never exceeds its adiabatic value, so on a grid
    the curves meet at isolated touching points rather than crossings.
    """
    gap = np.asarray(gap, dtype=float)
    thr = tol * max(float(np.max(np.abs(gap))), 1e-300)
    a = -np.abs(gap)
    crossings = int(np.sum(np.sign(gap[1:]) * np.sign(gap[:-1]) < 0))
    peaks = (a[1:-1] >= a[:-2]) & (a[1:-1] >= a[2:]) & (np.abs(gap[1:-1]) <= thr)
    # a sign change already shows up as a near-zero local maximum of -|gap|
    return max(crossings, int(np.sum(peaks)))


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit on a window of ``beta``.

    ``model`` is ``"power"`` (params ``amplitude``, ``exponent``) or
    ``"linear"`` (params ``slope``, ``intercept`` and the zero crossing
    ``beta0``). ``residual`` is the rms misfit on the window.
    """

    model: str
    params: dict
    window: tuple
    residual: float


@dataclass(frozen=True)
class ScalingStudy:
    s: float
    beta: np.ndarray
    cost: np.ndarray
    power: ScalingFit
    linear: ScalingFit


def _window(beta, lo, hi):
    m = (beta >= lo) & (beta <= hi)
    if np.count_nonzero(m) < 3:
        raise ValueError(f"fewer than 3 grid points in window [{lo}, {hi}]")
    return m


def scaling_study(k: CostConstants, s_fixed: float = 200.0, beta_grid=None,
                  power_window=(0.01, 0.1), linear_window=(0.3, 1.0)) -> ScalingStudy:
    """``F_N^2(beta)`` at fixed ``s`` with a power-law fit and a linear fit."""
    if beta_grid is None:
        beta_grid = np.concatenate([np.geomspace(0.005, 0.3, 120, endpoint=False), np.linspace(0.3, 1.5, 121)])
    beta = np.asarray(beta_grid, dtype=float)
    if beta.ndim != 1 or beta.size < 3 or np.any(beta <= 0) or np.any(np.diff(beta) <= 0):
        raise ValueError("beta_grid must be positive, strictly increasing, with at least 3 points")
    cost = np.array(pmap(lambda b: quench_cost(QuenchParams.from_beta(b), k, s_fixed), beta))

    m = _window(beta, *power_window)
    slope, icpt = np.polyfit(np.log(beta[m]), np.log(cost[m]), 1)
    pred = np.exp(icpt) * beta[m] ** slope
    power = ScalingFit("power", {"amplitude": float(np.exp(icpt)), "exponent": float(slope)},
                       tuple(power_window), float(np.sqrt(np.mean((pred - cost[m]) ** 2))))

    m = _window(beta, *linear_window)
    a, c = np.polyfit(beta[m], cost[m], 1)
    pred = a * beta[m] + c
    linear = ScalingFit("linear", {"slope": float(a), "intercept": float(c), "beta0": float(-c / a)},
                        tuple(linear_window), float(np.sqrt(np.mean((pred - cost[m]) ** 2))))
    return ScalingStudy(float(s_fixed), beta, cost, power, linear)


@dataclass(frozen=True)
class FigureData:
    name: str
    columns: tuple
    data: np.ndarray  # shape (rows, len(columns))

    def write_csv(self, fh) -> None:
        import csv
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.data:
            w.writerow([repr(float(v)) for v in row])


def figure_data(which: str, k: CostConstants, n: int = 400) -> FigureData:
    """Series for the four quench figures.

    ``fig1``: exact and adiabatic entropy change against ``beta`` in (0, 50]
    for ``s = 0.1, 0.15, 0.2``. ``fig2``: exact and late-time entropy change
    for ``beta`` in (0, 0.1] at ``s = 10, 15, 20``. ``fig3``: ``F_N^2`` against
    ``beta`` in (0, 5] at ``s = 2, 20, 200``. ``fig4``: ``F_N^2`` at ``s = 200``
    with the truncated late-time approximation and both fitted scalings.
    """
    cols = ["beta"]
    series = []
    if which == "fig1":
        beta = np.linspace(50 / n, 50, n)
        for s in (0.1, 0.15, 0.2):
            cols += [f"exact_s{s:g}", f"adiabatic_s{s:g}"]
            series.append(pmap(lambda b, s=s: shannon_delta(QuenchParams.from_beta(b), s), beta))
            series.append(np.full(beta.shape, 0.5 * math.log1p(s * s)))
    elif which == "fig2":
        beta = np.linspace(0.1 / n, 0.1, n)
        for s in (10.0, 15.0, 20.0):
            cols += [f"exact_s{s:g}", f"late_time_s{s:g}"]
            series.append(pmap(lambda b, s=s: shannon_delta(QuenchParams.from_beta(b), s), beta))
            series.append(0.5 * np.log1p((s * s - s * math.pi / 2 + 1) * beta**2))
    elif which == "fig3":
        beta = np.linspace(5 / n, 5, n)
        for s in (2.0, 20.0, 200.0):
            cols.append(f"cost_s{s:g}")
            series.append(pmap(lambda b, s=s: quench_cost(QuenchParams.from_beta(b), k, s), beta))
    elif which == "fig4":
        study = scaling_study(k, 200.0)
        beta = study.beta
        cols += ["cost", "late_rho_approx", "power_fit", "linear_fit"]
        series.append(study.cost)
        series.append([quench_cost_late_rho(QuenchParams.from_beta(b), k, 200.0) for b in beta])
        pw, ln = study.power.params, study.linear.params
        series.append(pw["amplitude"] * beta ** pw["exponent"])
        series.append(ln["slope"] * beta + ln["intercept"])
    else:
        raise ValueError(f"unknown figure {which!r}; choose fig1..fig4")
    data = np.column_stack([beta, *[np.asarray(x, dtype=float) for x in series]])
    return FigureData(which, tuple(cols), data)
