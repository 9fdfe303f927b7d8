"""Auxiliary (Ermakov-Pinney) equations, their closed-form solutions, and derived functions.

Two governing equations are handled. For a unit-mass oscillator with
frequency ``W(t)``::

    rho'' + W^2 rho - 1/rho^3 = 0,            theta' = 1/rho^2

and for ``H = A1/2 X^2 + B1/2 P^2``::

    rho'' - (B1'/B1) rho' + A1 B1 rho - B1^2/rho^3 = 0,   theta' = B1/rho^2

The phase ``theta`` is integrated alongside ``(rho, rho')``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad, solve_ivp

from .exceptions import ConfigurationError, ConvergenceError, SingularityError
from .profiles import (
    OTF, OTMF, CoefficientProfile, constant_profile, make_ck_coefficients,
    make_example1_profile, make_example2_profile, make_quench_profile,
)

__all__ = [
    "AuxiliaryTrajectory",
    "DerivedFunctions",
    "solve_auxiliary_otf",
    "solve_auxiliary_otmf",
    "solve_auxiliary",
    "analytic_auxiliary",
    "ground_state_initial",
    "derived_functions",
    "f_integral_form",
    "schwarzian_check",
    "ode_residual",
    "DEFAULT_TOL",
]

DEFAULT_TOL = 1e-10
_RHO_FLOOR = 1e-8  # relative to rho0; below this the 1/rho^3 term is treated as a blow-up


def _as_otmf(model):
    """Return ``(A1, B1)`` for an OTF/OTMF-like model (``B1 = 1`` for OTF)."""
    red = model.reduced() if hasattr(model, "reduced") else model
    if isinstance(red, OTF):
        one = constant_profile(1.0, "unit")
        A1 = CoefficientProfile(lambda t: red.omega(t) ** 2,
                                lambda t: 2 * red.omega(t) * red.omega.deriv(t),
                                lambda t: 2 * (red.omega.deriv(t) ** 2 + red.omega(t) * red.omega.deriv2(t)),
                                domain=red.omega.domain, breakpoints=red.omega.breakpoints)
        return A1, one, red
    if isinstance(red, OTMF):
        return red.A1, red.B1, red
    raise ConfigurationError(f"no auxiliary equation for {type(model).__name__}")


@dataclass(frozen=True)
class AuxiliaryTrajectory:
    """Sampled auxiliary solution with continuous evaluation.

    ``model`` is the :class:`OTF` or :class:`OTMF` whose equation the
    trajectory solves. ``source`` is ``"numeric"`` or ``"analytic"`` and
    ``meta`` records the solver settings or the closed-form name and its
    parameters.
    """

    times: np.ndarray
    rho: np.ndarray
    rho_dot: np.ndarray
    theta: np.ndarray
    model: object
    source: str
    meta: dict
    _state: Callable = field(repr=False)
    _accel: Callable = field(repr=False)

    @property
    def t_span(self):
        return float(self.times[0]), float(self.times[-1])

    def state(self, t):
        """``(rho, rho_dot, theta)`` at ``t`` (scalar or array)."""
        return self._state(t)

    def rho_at(self, t):
        return self._state(t)[0]

    def rho_dot_at(self, t):
        return self._state(t)[1]

    def theta_at(self, t):
        return self._state(t)[2]

    def rho_ddot_at(self, t):
        """Second derivative of ``rho``.

        Exact for closed-form trajectories. For numeric trajectories it is a
        fourth-order central difference of the interpolated ``rho_dot``, which
        keeps it independent of the governing equation.
        """
        return self._accel(t)


# --- numeric solver --------------------------------------------------------


def _rhs_factory(A1, B1):
    def rhs(t, y):
        r, v = y[0], y[1]
        b = B1(t)
        return [v, (B1.deriv(t) / b) * v - A1(t) * b * r + b * b / r**3, b / (r * r)]
    return rhs


class _PiecewiseDense:
    """Dense output stitched over the segments between breakpoints."""

    def __init__(self, edges, sols):
        self.edges = np.asarray(edges, dtype=float)
        self.sols = sols

    def _index(self, t):
        idx = np.searchsorted(self.edges, t, side="right") - 1
        return np.clip(idx, 0, len(self.sols) - 1)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        out = np.empty((3, tt.size))
        idx = self._index(tt)
        for i in np.unique(idx):
            m = idx == i
            out[:, m] = self.sols[i](tt[m])
        if scalar:
            return out[0, 0], out[1, 0], out[2, 0]
        return out[0], out[1], out[2]

    def accel(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        tt = np.atleast_1d(t)
        out = np.empty(tt.size)
        idx = self._index(tt)
        for i in np.unique(idx):
            m = idx == i
            x = tt[m]
            sol = self.sols[i]
            h = 1e-3 * max(1.0, float(self.edges[i + 1] - self.edges[i]) / 10.0)
            h = min(h, float(self.edges[i + 1] - self.edges[i]) / 8.0)
            d = (-sol(x + 2 * h)[1] + 8 * sol(x + h)[1] - 8 * sol(x - h)[1] + sol(x - 2 * h)[1]) / (12 * h)
            out[m] = d
        return out[0] if scalar else out


def solve_auxiliary(model, rho0: float, rho_dot0: float, t_span, tol: float = DEFAULT_TOL,
                    n_samples: int = 401, max_step: float = np.inf) -> AuxiliaryTrajectory:
    """Integrate the auxiliary equation of an OTF or OTMF model.

    DOP853 (embedded 8(5,3) Runge-Kutta) with dense output. The stepper runs
    at ``tol / 100`` so that the interpolated solution, not just the accepted
    steps, satisfies the equation to about ``tol``. The span is split at the
    coefficient breakpoints. A terminal event stops the run when ``rho`` falls
    below ``1e-8 rho0``.
    """
    A1, B1, red = _as_otmf(model)
    t0, t1 = map(float, t_span)
    if not t1 > t0:
        raise ValueError("t_span must be increasing")
    if not rho0 > 0:
        raise ValueError("rho0 must be positive")
    if not tol > 0:
        raise ValueError("tol must be positive")
    for prof in (A1, B1):
        lo, hi = prof.domain
        if t0 < lo or t1 > hi:
            raise ConfigurationError(f"t_span {t_span} leaves the coefficient domain {prof.domain}")
    probe = np.linspace(t0, t1, 257)
    bvals = np.asarray(B1(probe), dtype=float)
    if np.any(bvals == 0) or np.any(np.sign(bvals) != np.sign(bvals[0])):
        raise ConfigurationError("B1 vanishes on the integration span")
    if not np.all(np.isfinite(np.asarray(A1(probe), dtype=float))):
        raise ConfigurationError("coefficients are not finite on the integration span")

    bps = sorted(set(A1.breakpoints_in(t0, t1)) | set(B1.breakpoints_in(t0, t1)))
    edges = [t0, *bps, t1]
    rhs = _rhs_factory(A1, B1)
    floor = _RHO_FLOOR * rho0

    def hit_floor(t, y):
        return y[0] - floor
    hit_floor.terminal = True
    hit_floor.direction = -1

    step_tol = max(tol * 1e-2, 3e-14)
    y = [rho0, rho_dot0, 0.0]
    sols = []
    nfev = 0
    for a, b in zip(edges[:-1], edges[1:]):
        res = solve_ivp(rhs, (a, b), y, method="DOP853", rtol=step_tol, atol=step_tol,
                        dense_output=True, events=hit_floor, max_step=max_step)
        nfev += res.nfev
        if res.status == 1:
            tb = float(res.t_events[0][0])
            raise SingularityError(f"rho collapses to zero near t={tb:.6g}", time=tb)
        if res.status != 0:
            raise ConvergenceError(f"integration failed on [{a:g}, {b:g}]: {res.message}")
        if not np.all(np.isfinite(res.y)):
            raise SingularityError(f"non-finite state on [{a:g}, {b:g}]", time=float(res.t[-1]))
        sols.append(res.sol)
        y = res.y[:, -1]

    dense = _PiecewiseDense(edges, sols)
    times = np.linspace(t0, t1, n_samples)
    r, v, th = dense(times)
    meta = {"method": "DOP853", "tol": tol, "step_rtol": step_tol, "step_atol": step_tol, "segments": len(sols), "nfev": nfev}
    return AuxiliaryTrajectory(times, r, v, th, red, "numeric", meta, dense, dense.accel)


def solve_auxiliary_otf(omega: CoefficientProfile, rho0: float, rho_dot0: float, t_span,
                        tol: float = DEFAULT_TOL, **kw) -> AuxiliaryTrajectory:
    return solve_auxiliary(OTF(omega), rho0, rho_dot0, t_span, tol, **kw)


def solve_auxiliary_otmf(A1: CoefficientProfile, B1: CoefficientProfile, rho0: float, rho_dot0: float,
                         t_span, tol: float = DEFAULT_TOL, **kw) -> AuxiliaryTrajectory:
    return solve_auxiliary(OTMF(A1, B1), rho0, rho_dot0, t_span, tol, **kw)


def ground_state_initial(model, t0: float = 0.0):
    """Instantaneous ground-state data ``rho0 = W(t0)^(-1/2)``, ``rho_dot0 = 0``.

    For OTMF models ``W = sqrt(A1 B1)`` and ``rho0 = (B1/W)^(1/2)``, which makes
    ``rho`` stationary for frozen coefficients.
    """
    A1, B1, _ = _as_otmf(model)
    a, b = float(A1(t0)), float(B1(t0))
    if not a * b > 0:
        raise ConfigurationError("no ground state: A1 B1 <= 0 at t0")
    w = math.sqrt(a * b)
    return math.sqrt(b / w), 0.0


# --- closed-form trajectories ------------------------------------------------


def _vectorize3(fn):
    def wrapped(t):
        t = np.asarray(t, dtype=float)
        r, v, th = fn(t)
        return (np.broadcast_to(r, t.shape)[()] * 1.0, np.broadcast_to(v, t.shape)[()] * 1.0,
                np.broadcast_to(th, t.shape)[()] * 1.0)
    return wrapped


def _analytic_constant(omega):
    r0 = omega ** -0.5
    state = _vectorize3(lambda t: (r0 + 0 * t, 0 * t, omega * t))
    return OTF(constant_profile(omega)), state, lambda t: 0.0 * np.asarray(t, dtype=float), (0.0, np.inf)


def _analytic_ex1c1(b1, b2):
    if not 0 < b2 < 2:
        raise ValueError("example1case1 needs 0 < b2 < 2")
    c1 = (1 - b2 * b2 / 4) ** -0.25

    def st(t):
        u = b1 + b2 * t
        return c1 * np.sqrt(u), c1 * b2 / (2 * np.sqrt(u)), np.log(u / b1) / (c1 * c1 * b2)

    def acc(t):
        u = b1 + b2 * np.asarray(t, dtype=float)
        return -c1 * b2 * b2 / (4 * u**1.5)

    return OTF(make_example1_profile(b1, b2)), _vectorize3(st), acc, (0.0, np.inf)


def _analytic_ex1c2(b1):
    def parts(t):
        u = b1 + 2 * np.asarray(t, dtype=float)
        w = 0.5 * np.log(u)
        P = u * (1 + w * w)
        Pd = 2 * (1 + w + w * w)
        Pdd = 2 * (1 + 2 * w) / u
        return u, w, P, Pd, Pdd

    w0 = 0.5 * math.log(b1)

    def st(t):
        u, w, P, Pd, _ = parts(t)
        r = np.sqrt(P)
        return r, Pd / (2 * r), np.arctan(w) - math.atan(w0)

    def acc(t):
        _, _, P, Pd, Pdd = parts(t)
        r = np.sqrt(P)
        return Pdd / (2 * r) - Pd * Pd / (4 * r**3)

    return OTF(make_example1_profile(b1, 2.0)), _vectorize3(st), acc, (0.0, np.inf)


def _analytic_ex2(l1, l2):
    prof = make_example2_profile(l1, l2)
    state = _vectorize3(lambda t: (l1 * t + l2, l1 + 0 * t, t / (l2 * (l1 * t + l2))))
    return OTF(prof), state, lambda t: 0.0 * np.asarray(t, dtype=float), prof.domain


def quench_rho_squared_parts(s, beta, eta):
    """``rho^2`` after the quench and its first two derivatives in ``s = t/eta``."""
    s = np.asarray(s, dtype=float)
    k = math.sqrt(1 + beta * beta)
    K = eta / (beta * (1 + beta * beta))
    psi = k * np.arctan(s)
    c2 = np.cos(psi) ** 2
    q = 1 + s * s
    P = K * q * (c2 + beta * beta)
    Ps = K * (2 * s * (c2 + beta * beta) - k * np.sin(2 * psi))
    Pss = K * (2 * (c2 + beta * beta) - (2 * s * k * np.sin(2 * psi) + 2 * k * k * np.cos(2 * psi)) / q)
    return P, Ps, Pss


def quench_theta(s, beta):
    """Unwrapped phase ``arctan((beta/k) tan(k arctan s))`` for ``s >= 0``."""
    k = math.sqrt(1 + beta * beta)
    psi = k * np.arctan(np.asarray(s, dtype=float))
    branch = np.floor((psi + np.pi / 2) / np.pi)
    # tan has poles at odd multiples of pi/2; evaluate via atan2 to stay finite there.
    base = np.arctan2(beta * np.sin(psi), k * np.cos(psi))
    base = np.where(base > np.pi / 2, base - np.pi, base)
    base = np.where(base < -np.pi / 2, base + np.pi, base)
    return base + np.pi * branch


def _analytic_quench(delta, eta):
    beta = delta / eta
    omega0 = delta / eta**2
    r0 = omega0 ** -0.5

    def st(t):
        t = np.asarray(t, dtype=float)
        s = np.where(t > 0, t, 0.0) / eta
        P, Ps, _ = quench_rho_squared_parts(s, beta, eta)
        r = np.sqrt(P)
        v = Ps / eta / (2 * r)
        th = quench_theta(s, beta)
        return (np.where(t > 0, r, r0), np.where(t > 0, v, 0.0), np.where(t > 0, th, omega0 * t))

    def acc(t):
        t = np.asarray(t, dtype=float)
        s = np.where(t > 0, t, 0.0) / eta
        P, Ps, Pss = quench_rho_squared_parts(s, beta, eta)
        r = np.sqrt(P)
        Pd, Pdd = Ps / eta, Pss / eta**2
        return np.where(t > 0, Pdd / (2 * r) - Pd * Pd / (4 * r**3), 0.0)[()]

    return OTF(make_quench_profile(delta, eta)), _vectorize3(st), acc, (-np.inf, np.inf)


def _analytic_ck(M, omega, Delta):
    A1, B1 = make_ck_coefficients(M, omega, Delta)
    w0 = math.sqrt(omega**2 - Delta**2 / 4)
    amp = (M * w0) ** -0.5

    def st(t):
        r = amp * np.exp(-Delta * t / 2)
        return r, -Delta / 2 * r, w0 * t

    def acc(t):
        return Delta**2 / 4 * amp * np.exp(-Delta * np.asarray(t, dtype=float) / 2)

    return OTMF(A1, B1), _vectorize3(st), acc, (-np.inf, np.inf)


_ANALYTIC = {
    "constant": (_analytic_constant, ("omega",)),
    "example1case1": (_analytic_ex1c1, ("b1", "b2")),
    "example1case2": (_analytic_ex1c2, ("b1",)),
    "example2": (_analytic_ex2, ("l1", "l2")),
    "quench": (_analytic_quench, ("delta", "eta")),
    "ck": (_analytic_ck, ("M", "omega", "Delta")),
}


def analytic_auxiliary(name: str, t_span=(0.0, 1.0), n_samples: int = 401, **params) -> AuxiliaryTrajectory:
    """Closed-form auxiliary solution by name.

    Names and parameters: ``constant(omega)``, ``example1case1(b1, b2)``,
    ``example1case2(b1)``, ``example2(l1, l2)``, ``quench(delta, eta)``,
    ``ck(M, omega, Delta)``. The phase is zero at ``t = 0`` (at ``t = 0`` for
    the quench as well, where the protocol starts).
    """
    if name not in _ANALYTIC:
        raise ValueError(f"unknown analytic solution {name!r}; choose from {sorted(_ANALYTIC)}")
    maker, keys = _ANALYTIC[name]
    if set(params) != set(keys):
        raise ValueError(f"{name} needs parameters {keys}, got {sorted(params)}")
    model, state, accel, dom = maker(*(float(params[k]) for k in keys))
    t0, t1 = map(float, t_span)
    if t0 < dom[0] or t1 > dom[1]:
        raise ValueError(f"t_span {t_span} outside the validity range {dom}")
    times = np.linspace(t0, t1, n_samples)
    r, v, th = state(times)
    return AuxiliaryTrajectory(times, np.asarray(r), np.asarray(v), np.asarray(th), model,
                               "analytic", {"name": name, **params}, state, accel)


# --- residual and derived functions -----------------------------------------


def ode_residual(traj: AuxiliaryTrajectory, t, model=None):
    """Scaled residual of the auxiliary equation at ``t``.

    ``rho''`` comes from :meth:`AuxiliaryTrajectory.rho_ddot_at`; the result is
    divided by the sum of the magnitudes of the individual terms.
    """
    A1, B1, _ = _as_otmf(traj.model if model is None else model)
    t = np.asarray(t, dtype=float)
    r, v, _ = traj.state(t)
    a = traj.rho_ddot_at(t)
    b = B1(t)
    terms = (a, -(B1.deriv(t) / b) * v, A1(t) * b * r, -b * b / r**3)
    res = sum(terms)
    scale = sum(np.abs(x) for x in terms)
    return res / np.where(scale > 0, scale, 1.0)


@dataclass(frozen=True)
class DerivedFunctions:
    """Scalar functions built from an auxiliary trajectory.

    For an OTF model ``f3 == f``. ``g1`` and ``g2_mag`` are the real and
    imaginary parts of the lower off-diagonal coefficient ``g1 - i g2_mag``
    (for OTMF models this coefficient is ``f1``); ``f1f2`` is its squared
    modulus.
    """

    f: Callable
    f3: Callable
    g1: Callable
    g2_mag: Callable
    f1f2: Callable
    theta: Callable
    A1: CoefficientProfile
    B1: CoefficientProfile
    model: object
    traj: AuxiliaryTrajectory

    def Theta(self, n: int, t):
        """Lewis-Riesenfeld phase ``-(n + 1/2) theta(t)``."""
        return -(n + 0.5) * self.theta(t)

    def f1(self, t):
        return self.g1(t) - 1j * self.g2_mag(t)

    def f2(self, t):
        return self.g1(t) + 1j * self.g2_mag(t)

    def omega_sq(self, t):
        """Instantaneous squared frequency ``A1 B1``."""
        return self.A1(t) * self.B1(t)


def derived_functions(traj: AuxiliaryTrajectory, spec=None, check_tol: float = 1e-6) -> DerivedFunctions:
    """Build ``f``, ``f3``, ``g1``, ``g2``, ``f1 f2`` and the phase from a trajectory.

    When ``spec`` is given, the trajectory must satisfy that model's auxiliary
    equation: the scaled residual is checked at interior points and a
    :class:`ConfigurationError` is raised above ``check_tol``.
    """
    model = traj.model if spec is None else spec
    A1, B1, red = _as_otmf(model)
    if spec is not None:
        t0, t1 = traj.t_span
        probe = np.linspace(t0, t1, 13)[1:-1]
        res = np.max(np.abs(ode_residual(traj, probe, model)))
        if not res < check_tol:
            raise ConfigurationError(f"trajectory does not solve the auxiliary equation of this model "
                                     f"(scaled residual {res:.3g})")

    def f3(t):
        r, v, _ = traj.state(t)
        b = B1(t)
        return v * v / b + A1(t) * r * r + b / (r * r)

    def g1(t):
        r, v, _ = traj.state(t)
        b = B1(t)
        return A1(t) * r * r - b / (r * r) + v * v / b

    def g2_mag(t):
        r, v, _ = traj.state(t)
        return 2 * v / r

    def f1f2(t):
        return g1(t) ** 2 + g2_mag(t) ** 2

    return DerivedFunctions(f=f3, f3=f3, g1=g1, g2_mag=g2_mag, f1f2=f1f2, theta=traj.theta_at,
                            A1=A1, B1=B1, model=red, traj=traj)


def g1_from_accel(traj: AuxiliaryTrajectory, t):
    """``g1 = rho'^2 - rho rho''`` using the trajectory's second derivative (OTF only)."""
    r, v, _ = traj.state(t)
    return v * v - r * traj.rho_ddot_at(t)


def f_integral_form(traj: AuxiliaryTrajectory, omega: CoefficientProfile, c: float, t_ref=None):
    """``t -> c + 2 int_{t_ref}^t rho^2 W W' dt'`` evaluated by adaptive quadrature.

    With ``c = f(t_ref)`` this reproduces ``f(t)`` for an OTF trajectory.
    """
    t_ref = traj.t_span[0] if t_ref is None else float(t_ref)

    def integrand(s):
        return 2 * traj.rho_at(s) ** 2 * omega(s) * omega.deriv(s)

    def fn(t):
        t = np.asarray(t, dtype=float)
        out = np.empty(t.shape)
        for i, ti in np.ndenumerate(t):
            pts = omega.breakpoints_in(t_ref, ti) or None
            val, _ = quad(integrand, t_ref, ti, points=pts, epsabs=1e-13, epsrel=1e-12, limit=400)
            out[i] = c + val
        return out[()]

    return fn


def schwarzian_check(traj: AuxiliaryTrajectory, omega: CoefficientProfile, t):
    """Return ``(W^2 - theta'^2 - {theta, t}/2, {theta, t})`` at ``t``.

    ``theta' = 1/rho^2`` and its higher derivatives are built from ``rho``,
    ``rho'`` and the trajectory's own ``rho''`` (not the auxiliary equation).
    """
    t = np.asarray(t, dtype=float)
    r, v, _ = traj.state(t)
    a = traj.rho_ddot_at(t)
    if np.any(r <= 0):
        raise SingularityError("rho vanished", time=None)
    th1 = 1 / r**2
    th2 = -2 * v / r**3
    th3 = -2 * a / r**3 + 6 * v * v / r**4
    schw = th3 / th1 - 1.5 * (th2 / th1) ** 2
    return omega(t) ** 2 - th1**2 - 0.5 * schw, schw
