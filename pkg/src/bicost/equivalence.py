"""Time reparametrization ``d tau = dt / m1(t)`` linking OTMF and unit-mass oscillators.

Under this map the OTMF auxiliary equation becomes the unit-mass one with
``W(tau) = sqrt(A1/B1)``, ``f3(t) = B1 f(tau)`` and ``F_otmf(t) = B1 F_otf(tau)``,
so the total costs agree while the norms themselves do not.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .cost import cost_function, total_cost
from .ermakov import AuxiliaryTrajectory, _as_otmf, derived_functions, ground_state_initial, solve_auxiliary
from .exceptions import ConfigurationError, NotMonotoneError
from .profiles import OTF, OTMF, CoefficientProfile
from .specfun import CostConstants

__all__ = [
    "Reparametrization",
    "mass_from_B1",
    "build_reparam",
    "map_otmf_to_otf",
    "transport_initial_data",
    "verify_f3_mapping",
    "EquivalenceReport",
    "verify_cost_equivalence",
]


def mass_from_B1(B1: CoefficientProfile) -> CoefficientProfile:
    """``m1 = 1/B1`` with its derivatives."""
    def value(t):
        return 1.0 / B1(t)

    def deriv(t):
        return -B1.deriv(t) / B1(t) ** 2

    def deriv2(t):
        b = B1(t)
        return -B1.deriv2(t) / b**2 + 2 * B1.deriv(t) ** 2 / b**3

    return CoefficientProfile(value, deriv, deriv2, B1.domain, B1.breakpoints, "m1")


@dataclass(frozen=True)
class Reparametrization:
    """Monotone map ``tau(t) = int_{t_ref}^t dt'/m1 + c3``; ``c3 = 0`` puts ``tau(t_ref) = 0``."""

    m1: CoefficientProfile
    t_span: tuple
    c3: float
    _dense: Callable = field(repr=False)
    _inverse: Callable = field(repr=False)

    def tau_of_t(self, t):
        t = np.asarray(t, dtype=float)
        return (self._dense(t)[0] + self.c3)[()]

    def jacobian(self, t):
        """``d tau / dt = 1/m1(t)``."""
        return 1.0 / self.m1(t)

    @property
    def tau_span(self):
        return float(self.tau_of_t(self.t_span[0])), float(self.tau_of_t(self.t_span[1]))

    def t_of_tau(self, tau):
        """Inverse map from the co-integrated ``dt/d tau = m1(t)``."""
        tau = np.asarray(tau, dtype=float) - self.c3
        return self._inverse(tau)[0][()]


def build_reparam(m1: CoefficientProfile, t_span, c3: float = 0.0, tol: float = 1e-13) -> Reparametrization:
    """Integrate ``d tau/dt = 1/m1`` over ``t_span`` (dense output, ``tau(t_span[0]) = c3``).

    The inverse ``t(tau)`` is integrated from ``dt/d tau = m1(t)`` with the same
    tolerance rather than found by root solving at every call.
    """
    t0, t1 = map(float, t_span)
    probe = np.asarray(m1(np.linspace(t0, t1, 513)), dtype=float)
    if np.any(probe == 0) or np.any(np.sign(probe) != np.sign(probe[0])):
        raise NotMonotoneError("m1 changes sign or vanishes: tau(t) is not monotone")
    res = solve_ivp(lambda t, y: [1.0 / m1(t)], (t0, t1), [0.0], method="DOP853",
                    rtol=tol, atol=tol, dense_output=True)
    if res.status != 0:
        raise ConfigurationError(res.message)
    tau1 = float(res.y[0, -1])
    inv = solve_ivp(lambda s, y: [m1(y[0])], (0.0, tau1), [t0], method="DOP853",
                    rtol=tol, atol=tol, dense_output=True)
    if inv.status != 0:
        raise ConfigurationError(inv.message)
    return Reparametrization(m1, (t0, t1), float(c3), res.sol, inv.sol)


def map_otmf_to_otf(A1: CoefficientProfile, B1: CoefficientProfile, rep: Reparametrization) -> CoefficientProfile:
    """Unit-mass frequency ``W(tau) = sqrt(A1/B1)`` at ``t(tau)``, with chain-rule derivatives."""
    probe = np.linspace(*rep.t_span, 257)
    if np.any(np.asarray(A1(probe)) / np.asarray(B1(probe)) <= 0):
        raise ConfigurationError("A1/B1 must stay positive")

    def parts(tau):
        t = rep.t_of_tau(tau)
        a, ad, add = A1(t), A1.deriv(t), A1.deriv2(t)
        b, bd, bdd = B1(t), B1.deriv(t), B1.deriv2(t)
        w = np.sqrt(a / b)
        L1 = 0.5 * (ad / a - bd / b)
        L2 = 0.5 * (add / a - (ad / a) ** 2 - bdd / b + (bd / b) ** 2)
        return w, L1 * w, (L2 + L1 * L1) * w, b, bd

    def value(tau):
        return parts(tau)[0]

    def deriv(tau):
        _, wt, _, b, _ = parts(tau)
        return wt / b

    def deriv2(tau):
        _, wt, wtt, b, bd = parts(tau)
        return (wtt / b - wt * bd / b**2) / b

    lo, hi = rep.tau_span
    return CoefficientProfile(value, deriv, deriv2, (min(lo, hi), max(lo, hi)), (), "W(tau)")


def transport_initial_data(rep: Reparametrization, rho0: float, rho_dot0: float, t0: float | None = None):
    """``rho`` is unchanged and ``d rho/d tau = m1 d rho/dt``."""
    t0 = rep.t_span[0] if t0 is None else t0
    return rho0, float(rep.m1(t0)) * rho_dot0


def verify_f3_mapping(otmf_traj: AuxiliaryTrajectory, otf_traj: AuxiliaryTrajectory,
                      rep: Reparametrization, n_points: int = 200) -> float:
    """``max |f3(t) - B1(t) f(tau(t))| / |f3(t)|`` over a grid on the OTMF span."""
    d_m = derived_functions(otmf_traj)
    d_o = derived_functions(otf_traj)
    t = np.linspace(*otmf_traj.t_span, n_points)
    tau = rep.tau_of_t(t)
    tau = np.clip(tau, *otf_traj.t_span)
    f3 = d_m.f3(t)
    rhs = d_m.B1(t) * d_o.f(tau)
    return float(np.max(np.abs(f3 - rhs) / np.abs(f3)))


@dataclass(frozen=True)
class EquivalenceReport:
    D_otmf: float
    D_otf: float
    gap: float
    f3_error: float
    norm_separation: float
    times: np.ndarray
    F2_otmf: np.ndarray
    F2_otf_at_tau: np.ndarray
    B1_times_f_otf: np.ndarray


def verify_cost_equivalence(model, T: float, k: CostConstants, rho0: float | None = None,
                            rho_dot0: float | None = None, tol: float = 1e-10,
                            n_points: int = 101) -> EquivalenceReport:
    """Total cost of an OTMF model on ``[0, T]`` against the mapped unit-mass model on ``[0, tau(T)]``.

    Initial data default to the instantaneous ground state at ``t = 0`` and
    are transported to the unit-mass side. ``gap`` is
    ``|D_otmf - D_otf| / D_otmf``; ``norm_separation`` is
    ``max |F2_otmf(t) - F2_otf(tau(t))|`` on the grid (the norms differ).
    """
    try:
        A1, B1, _ = _as_otmf(model)
    except ConfigurationError:
        raise ConfigurationError("equivalence needs a time-dependent OTMF-type model") from None
    red = OTMF(A1, B1)
    if rho0 is None:
        rho0, rho_dot0 = ground_state_initial(red, 0.0)
    rho_dot0 = 0.0 if rho_dot0 is None else rho_dot0

    rep = build_reparam(mass_from_B1(red.B1), (0.0, T))
    W = map_otmf_to_otf(red.A1, red.B1, rep)
    r_tau, v_tau = transport_initial_data(rep, rho0, rho_dot0)
    traj_m = solve_auxiliary(red, rho0, rho_dot0, (0.0, T), tol)
    tau_T = rep.tau_span[1]
    traj_o = solve_auxiliary(OTF(W), r_tau, v_tau, (0.0, tau_T), tol)

    d_m = derived_functions(traj_m)
    d_o = derived_functions(traj_o)
    F2m = cost_function(d_m, k)
    F2o = cost_function(d_o, k)
    D_m = total_cost(F2m, (0.0, T), tol=tol, n_samples=2).total
    D_o = total_cost(F2o, (0.0, tau_T), tol=tol, n_samples=2).total

    t = np.linspace(0.0, T, n_points)
    tau = np.clip(rep.tau_of_t(t), 0.0, tau_T)
    Fm = np.array([F2m(x) for x in t])
    Fo = np.array([F2o(x) for x in tau])
    Bf = red.B1(t) * d_o.f(tau)
    f3_err = float(np.max(np.abs(d_m.f3(t) - Bf) / np.abs(d_m.f3(t))))
    gap = abs(D_m - D_o) / D_m if D_m else abs(D_m - D_o)
    return EquivalenceReport(D_m, D_o, gap, f3_err, float(np.max(np.abs(Fm - Fo))), t, Fm, Fo, Bf)
