"""Time-dependent coefficient profiles and oscillator family descriptors.

A :class:`CoefficientProfile` is an immutable bundle of a real function of
time together with its first and second derivatives. All built-in profiles
carry closed-form derivatives; finite differences are only ever used to test
them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = [
    "CoefficientProfile",
    "constant_profile",
    "make_example1_profile",
    "make_example2_profile",
    "make_quench_profile",
    "make_ck_coefficients",
    "tabulated_profile",
    "linear_combination",
    "TimeIndepGeneralized",
    "OTF",
    "OTMF",
    "GeneralizedTD",
    "CaldirolaKanai",
    "Quench",
    "OscillatorSpec",
    "spec_from_params",
]

INF = math.inf


@dataclass(frozen=True)
class CoefficientProfile:
    """A real coefficient of time with analytic first and second derivatives.

    Parameters
    ----------
    value, deriv, deriv2 : callable
        Vectorised functions of time.
    domain : (float, float)
        Closed interval on which the profile is finite. Either end may be
        infinite.
    breakpoints : tuple of float
        Points where the profile is not smooth (integrators split there).
    name : str
        Label used in reports.
    """

    value: Callable
    deriv: Callable
    deriv2: Callable
    domain: tuple = (-INF, INF)
    breakpoints: tuple = ()
    name: str = ""

    def __call__(self, t):
        return self.value(t)

    def contains(self, t) -> bool:
        t = np.asarray(t, dtype=float)
        lo, hi = self.domain
        return bool(np.all((t >= lo) & (t <= hi)))

    def breakpoints_in(self, t0: float, t1: float) -> list:
        lo, hi = min(t0, t1), max(t0, t1)
        return sorted(b for b in self.breakpoints if lo < b < hi)


def _const(c):
    c = float(c)
    return lambda t: np.full_like(np.asarray(t, dtype=float), c)[()]


def constant_profile(c: float, name: str = "constant") -> CoefficientProfile:
    zero = _const(0.0)
    return CoefficientProfile(_const(c), zero, zero, name=name)


def make_example1_profile(b1: float, b2: float) -> CoefficientProfile:
    """Frequency ``1 / (b1 + b2 t)`` on ``[0, inf)``.

    Only ``b1 > 0`` and ``0 < b2 <= 2`` are accepted; the closed-form
    auxiliary solutions exist for ``b2 < 2`` and ``b2 == 2`` only.
    """
    if not b1 > 0:
        raise ValueError(f"b1 must be positive, got {b1}")
    if not 0 < b2 <= 2:
        raise ValueError(f"b2 must lie in (0, 2], got {b2}")

    def value(t):
        return 1.0 / (b1 + b2 * np.asarray(t, dtype=float))

    def deriv(t):
        return -b2 / (b1 + b2 * np.asarray(t, dtype=float)) ** 2

    def deriv2(t):
        return 2.0 * b2**2 / (b1 + b2 * np.asarray(t, dtype=float)) ** 3

    return CoefficientProfile(value, deriv, deriv2, domain=(0.0, INF),
                              name=f"example1(b1={b1:g},b2={b2:g})")


def make_example2_profile(l1: float, l2: float, domain=None) -> CoefficientProfile:
    """Frequency ``1 / (l1 t + l2)^2`` whose phase has vanishing Schwarzian.

    For ``l1 < 0`` the default domain stops at the pole ``t = -l2/l1``
    (excluded). A user-supplied domain containing the pole is rejected.
    """
    if not l2 > 0:
        raise ValueError(f"l2 must be positive, got {l2}")
    if domain is None:
        domain = (0.0, INF) if l1 >= 0 else (0.0, -l2 / l1)
    lo, hi = domain
    if l1 != 0:
        pole = -l2 / l1
        if lo <= pole <= hi and not (l1 < 0 and pole == hi):
            raise ValueError(f"l1 t + l2 vanishes at t={pole:g} inside {domain}")
        if l1 * lo + l2 <= 0:
            raise ValueError("l1 t + l2 must be positive on the domain")

    def value(t):
        return 1.0 / (l1 * np.asarray(t, dtype=float) + l2) ** 2

    def deriv(t):
        return -2.0 * l1 / (l1 * np.asarray(t, dtype=float) + l2) ** 3

    def deriv2(t):
        return 6.0 * l1**2 / (l1 * np.asarray(t, dtype=float) + l2) ** 4

    return CoefficientProfile(value, deriv, deriv2, domain=(lo, hi),
                              name=f"example2(l1={l1:g},l2={l2:g})")


def make_quench_profile(delta: float, eta: float) -> CoefficientProfile:
    """End-critical quench: ``delta/eta^2`` for ``t <= 0``, ``delta/(t^2+eta^2)`` after.

    The joint at ``t = 0`` is C^1 but not C^2 and is declared as a breakpoint.
    """
    if not (delta > 0 and eta > 0):
        raise ValueError("quench requires delta > 0 and eta > 0")
    e2 = eta * eta

    def value(t):
        t = np.asarray(t, dtype=float)
        tp = np.where(t > 0, t, 0.0)
        return (delta / (tp * tp + e2))[()]

    def deriv(t):
        t = np.asarray(t, dtype=float)
        tp = np.where(t > 0, t, 0.0)
        return (-2.0 * delta * tp / (tp * tp + e2) ** 2)[()]

    def deriv2(t):
        t = np.asarray(t, dtype=float)
        tp = np.where(t > 0, t, 0.0)
        u = tp * tp + e2
        out = -2.0 * delta / u**2 + 8.0 * delta * tp * tp / u**3
        return np.where(t > 0, out, 0.0)[()]

    return CoefficientProfile(value, deriv, deriv2, breakpoints=(0.0,),
                              name=f"quench(delta={delta:g},eta={eta:g})")


def _exp_profile(amp: float, rate: float, name: str) -> CoefficientProfile:
    def value(t):
        return amp * np.exp(rate * np.asarray(t, dtype=float))

    def deriv(t):
        return rate * value(t)

    def deriv2(t):
        return rate * rate * value(t)

    return CoefficientProfile(value, deriv, deriv2, name=name)


def make_ck_coefficients(M: float, omega: float, Delta: float):
    """Caldirola-Kanai coefficients ``A1 = M w^2 e^{D t}``, ``B1 = e^{-D t}/M``.

    ``Delta = 0`` (the undamped oscillator) is allowed. Overdamped parameters,
    ``omega^2 <= Delta^2 / 4``, are rejected.
    """
    if not (M > 0 and omega > 0 and Delta >= 0):
        raise ValueError("Caldirola-Kanai needs M > 0, omega > 0, Delta >= 0")
    if omega**2 - Delta**2 / 4 <= 0:
        raise ValueError(f"overdamped: omega^2 - Delta^2/4 = {omega**2 - Delta**2 / 4:g} <= 0")
    A1 = _exp_profile(M * omega**2, Delta, "ck.A1")
    B1 = _exp_profile(1.0 / M, -Delta, "ck.B1")
    return A1, B1


def tabulated_profile(t, y, name: str = "tabulated") -> CoefficientProfile:
    """Cubic-spline profile through user samples.

    Interpolation error is not controlled here; sample densely enough for the
    tolerance you pass to the solvers.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    if t.ndim != 1 or t.shape != y.shape or t.size < 4:
        raise ValueError("need matching 1-D arrays with at least 4 samples")
    if np.any(np.diff(t) <= 0):
        raise ValueError("sample times must be strictly increasing")
    if not np.all(np.isfinite(y)):
        raise ValueError("samples must be finite")
    spline = CubicSpline(t, y)
    d1 = spline.derivative(1)
    d2 = spline.derivative(2)
    return CoefficientProfile(lambda s: spline(s)[()], lambda s: d1(s)[()],
                              lambda s: d2(s)[()], domain=(t[0], t[-1]), name=name)


def linear_combination(terms, offset: float = 0.0, name: str = "") -> CoefficientProfile:
    """Profile ``offset + sum(c_i * p_i)`` for ``terms = [(c_i, p_i), ...]``."""
    terms = [(float(c), p) for c, p in terms]
    lo = max([p.domain[0] for _, p in terms], default=-INF)
    hi = min([p.domain[1] for _, p in terms], default=INF)
    bps = tuple(sorted({b for _, p in terms for b in p.breakpoints}))

    def comb(attr, off):
        def fn(t):
            out = off
            for c, p in terms:
                out = out + c * getattr(p, attr)(t)
            return out
        return fn

    return CoefficientProfile(comb("value", offset), comb("deriv", 0.0),
                              comb("deriv2", 0.0), domain=(lo, hi),
                              breakpoints=bps, name=name)


# --- oscillator families -------------------------------------------------


@dataclass(frozen=True)
class TimeIndepGeneralized:
    """``H = A0/2 X^2 + B0/2 P^2 + C0/4 (XP + PX) - F0 X + D0 / (2 X^2)``.

    ``force`` (``F0``) and ``isotonic`` (``D0``) are optional; the isotonic
    term is only defined together with ``C0 = 0``.
    """

    A0: float
    B0: float
    C0: float = 0.0
    force: float | None = None
    isotonic: float | None = None

    def __post_init__(self):
        if self.isotonic is not None and self.C0 != 0:
            raise ValueError("the isotonic oscillator has no XP + PX term")


@dataclass(frozen=True)
class OTF:
    """Unit-mass oscillator with time-dependent frequency ``omega(t)``."""

    omega: CoefficientProfile

    def reduced(self):
        return self


@dataclass(frozen=True)
class OTMF:
    """``H = A1(t)/2 X^2 + B1(t)/2 P^2``: mass ``1/B1`` and frequency ``sqrt(A1 B1)``."""

    A1: CoefficientProfile
    B1: CoefficientProfile

    def reduced(self):
        return self


@dataclass(frozen=True)
class GeneralizedTD:
    """Time-dependent generalised oscillator with ``B0 = c1 g(t)``, ``C0 = c2 g(t)``.

    The constant ratio ``C0/B0`` makes the squeeze-removing unitary time
    independent, so the cost equals that of the reduced :class:`OTMF`.
    """

    A0: CoefficientProfile
    c1: float
    c2: float
    g: CoefficientProfile

    def __post_init__(self):
        if self.c1 == 0:
            raise ValueError("c1 must be non-zero (B0 = c1 g must not vanish)")

    @property
    def B0(self) -> CoefficientProfile:
        return linear_combination([(self.c1, self.g)], name="B0")

    @property
    def C0(self) -> CoefficientProfile:
        return linear_combination([(self.c2, self.g)], name="C0")

    def reduced(self) -> OTMF:
        # A1 = A0 - C0^2 / (4 B0) = A0 - (c2^2 / 4 c1) g
        A1 = linear_combination([(1.0, self.A0), (-self.c2**2 / (4 * self.c1), self.g)], name="A1")
        return OTMF(A1, self.B0)


@dataclass(frozen=True)
class CaldirolaKanai:
    M: float
    omega: float
    Delta: float

    def __post_init__(self):
        make_ck_coefficients(self.M, self.omega, self.Delta)

    @property
    def omega0(self) -> float:
        return math.sqrt(self.omega**2 - self.Delta**2 / 4)

    def reduced(self) -> OTMF:
        return OTMF(*make_ck_coefficients(self.M, self.omega, self.Delta))


@dataclass(frozen=True)
class Quench:
    delta: float
    eta: float

    def __post_init__(self):
        if not (self.delta > 0 and self.eta > 0):
            raise ValueError("quench requires delta > 0 and eta > 0")

    def reduced(self) -> OTF:
        return OTF(make_quench_profile(self.delta, self.eta))


OscillatorSpec = Union[TimeIndepGeneralized, OTF, OTMF, GeneralizedTD, CaldirolaKanai, Quench]

_FAMILY_KEYS = {
    "constant": ("omega",),
    "example1": ("b1", "b2"),
    "example1case1": ("b1", "b2"),
    "example1case2": ("b1",),
    "example2": ("l1", "l2"),
    "quench": ("delta", "eta"),
    "ck": ("M", "omega", "Delta"),
    "timeindep": ("A0", "B0", "C0", "F0", "D0"),
}
_REQUIRED = {
    "timeindep": ("A0", "B0"),
}


def spec_from_params(family: str, **params) -> OscillatorSpec:
    """Build an oscillator descriptor from a family name and numeric keys.

    Families and their keys: ``constant(omega)``, ``example1(b1, b2)``,
    ``example1case1(b1, b2)``, ``example1case2(b1)``, ``example2(l1, l2)``,
    ``quench(delta, eta)``, ``ck(M, omega, Delta)``,
    ``timeindep(A0, B0[, C0, F0, D0])``.
    """
    if family not in _FAMILY_KEYS:
        raise ValueError(f"unknown profile family {family!r}; choose from {sorted(_FAMILY_KEYS)}")
    allowed = _FAMILY_KEYS[family]
    unknown = set(params) - set(allowed)
    if unknown:
        raise ValueError(f"unknown keys for {family}: {sorted(unknown)}")
    required = _REQUIRED.get(family, allowed)
    missing = [k for k in required if k not in params]
    if missing:
        raise ValueError(f"missing keys for {family}: {missing}")
    p = {k: float(v) for k, v in params.items()}
    if family == "constant":
        return OTF(constant_profile(p["omega"]))
    if family in ("example1", "example1case1"):
        if family == "example1case1" and p["b2"] >= 2:
            raise ValueError("example1case1 needs 0 < b2 < 2")
        return OTF(make_example1_profile(p["b1"], p["b2"]))
    if family == "example1case2":
        return OTF(make_example1_profile(p["b1"], 2.0))
    if family == "example2":
        return OTF(make_example2_profile(p["l1"], p["l2"]))
    if family == "quench":
        return Quench(p["delta"], p["eta"])
    if family == "ck":
        return CaldirolaKanai(p["M"], p["omega"], p["Delta"])
    return TimeIndepGeneralized(p["A0"], p["B0"], p.get("C0", 0.0),
                                force=p.get("F0"), isotonic=p.get("D0"))
