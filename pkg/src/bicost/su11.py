"""SU(1,1) evolution operators in the 2x2 representation.

Generators::

    K0 = 1/2 diag(-1, 1),   K+ = [[0, 0], [1, 0]],   K- = [[0, -1], [0, 0]]

with ``[K+, K-] = -2 K0`` and ``[K0, K+-] = +-K+-``. An element is written
either as a single exponential ``exp(b0 K0 + b+ K+ + b- K-)`` or in normal
order ``exp(c+ K+) exp(c0 K0) exp(c- K-)``. Triples are ordered
``b = (b0, b+, b-)`` and ``c = (c+, c0, c-)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import logm

from .exceptions import CausticError, ConfigurationError, ConvergenceError, DecompositionError
from .profiles import CoefficientProfile, TimeIndepGeneralized

__all__ = [
    "SU11Element",
    "ClassicalTrajectory",
    "k_matrices",
    "matrix_from_b",
    "matrix_from_c",
    "decompose_b_to_c",
    "b_from_matrix",
    "c_to_b",
    "solve_classical",
    "evolution_c_coefficients",
    "evolution_operator",
    "hamiltonian_matrix",
    "verify_schrodinger_residual",
    "geodesic_generator",
]

_SERIES_CUT = 1e-4


def k_matrices():
    """Return ``(K0, K+, K-)`` as complex 2x2 arrays."""
    K0 = np.array([[-0.5, 0.0], [0.0, 0.5]], dtype=complex)
    Kp = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)
    Km = np.array([[0.0, -1.0], [0.0, 0.0]], dtype=complex)
    return K0, Kp, Km


def _cos_sinc(chi_sq):
    """``cos(chi)`` and ``sin(chi)/chi`` as functions of ``chi^2`` (both even in chi)."""
    chi_sq = complex(chi_sq)
    if abs(chi_sq) < _SERIES_CUT**2:
        x = chi_sq
        # six terms each; the truncation error is far below double precision here
        c = 1 - x / 2 + x**2 / 24 - x**3 / 720 + x**4 / 40320 - x**5 / 3628800
        s = 1 - x / 6 + x**2 / 120 - x**3 / 5040 + x**4 / 362880 - x**5 / 39916800
        return c, s
    chi = cmath.sqrt(chi_sq)
    return cmath.cos(chi), cmath.sin(chi) / chi


def _chi_sq(b):
    b0, bp, bm = (complex(v) for v in b)
    return bp * bm - b0 * b0 / 4


def matrix_from_b(b) -> np.ndarray:
    """``exp(b0 K0 + b+ K+ + b- K-) = cos(chi) I + sin(chi)/chi M`` with ``chi^2 = b+ b- - b0^2/4``."""
    b0, bp, bm = (complex(v) for v in b)
    c, s = _cos_sinc(_chi_sq(b))
    return np.array([[c - b0 / 2 * s, -bm * s], [bp * s, c + b0 / 2 * s]], dtype=complex)


def matrix_from_c(c) -> np.ndarray:
    """Normal-ordered product ``exp(c+ K+) exp(c0 K0) exp(c- K-)``."""
    cp, c0, cm = (complex(v) for v in c)
    e = cmath.exp(-c0 / 2)
    return np.array([[e, -cm * e], [cp * e, cmath.exp(c0 / 2) - cp * cm * e]], dtype=complex)


def decompose_b_to_c(b):
    """Normal-ordered coefficients of ``exp(b . K)``.

    ``g = cos(chi) - (b0/2) sin(chi)/chi``, ``c0 = -2 log g`` (principal branch)
    and ``c+- = b+- (sin(chi)/chi) / g``. Raises :class:`DecompositionError`
    when ``g`` vanishes.
    """
    b0, bp, bm = (complex(v) for v in b)
    c, s = _cos_sinc(_chi_sq(b))
    g = c - b0 / 2 * s
    scale = abs(c) + abs(b0 / 2 * s) + 1e-300
    if abs(g) <= 1e-14 * scale:
        raise DecompositionError(f"normal ordering breaks down: g(chi) = {g!r}")
    return bp * s / g, -2 * cmath.log(g), bm * s / g


def b_from_matrix(U) -> tuple:
    """Project the principal matrix logarithm of ``U`` onto ``(K0, K+, K-)``.

    The logarithm is multivalued; only the principal branch is returned.
    Matrices with an eigenvalue on the negative real axis have no principal
    logarithm and raise :class:`DecompositionError`.
    """
    U = np.asarray(U, dtype=complex)
    ev = np.linalg.eigvals(U)
    if np.any((np.abs(ev.imag) < 1e-12) & (ev.real < 0)):
        raise DecompositionError("matrix has a negative real eigenvalue; no principal logarithm")
    L = logm(U)
    return complex(L[1, 1] - L[0, 0]), complex(L[1, 0]), complex(-L[0, 1])


def c_to_b(c) -> tuple:
    """Inverse of :func:`decompose_b_to_c` on the principal branch."""
    return b_from_matrix(matrix_from_c(c))


@dataclass(frozen=True)
class SU11Element:
    """Group element carrying either or both parameter triples."""

    b: tuple | None = None
    c: tuple | None = None

    def __post_init__(self):
        if self.b is None and self.c is None:
            raise ValueError("need a b-triple or a c-triple")

    @property
    def chi_sq(self):
        b = self.b if self.b is not None else c_to_b(self.c)
        return _chi_sq(b)

    @property
    def matrix(self) -> np.ndarray:
        return matrix_from_b(self.b) if self.b is not None else matrix_from_c(self.c)

    def consistency_error(self) -> float:
        """Entrywise difference between the b- and c-built matrices (0 if only one is set)."""
        if self.b is None or self.c is None:
            return 0.0
        return float(np.max(np.abs(matrix_from_b(self.b) - matrix_from_c(self.c))))


# --- classical trajectory and evolution coefficients ------------------------------


@dataclass(frozen=True)
class ClassicalTrajectory:
    """Solution of ``(m1 x')' + m1 W1^2 x = 0`` with the running integral ``int dt/(m1 x^2)``.

    Equivalently ``x'' + xi x' + W1^2 x = 0`` with ``xi = d ln m1 / dt``.
    """

    times: np.ndarray
    x: np.ndarray
    x_dot: np.ndarray
    x0: float
    m1: CoefficientProfile
    omega1: CoefficientProfile
    _dense: Callable = field(repr=False)

    def state(self, t):
        """``(x, p, I)`` at ``t`` with ``p = m1 x'`` and ``I = int_0^t dt'/(m1 x^2)``."""
        return self._dense(t)


def solve_classical(m1: CoefficientProfile, omega1: CoefficientProfile, t_end: float,
                    x0: float = 1.0, x_dot0: float = 0.0, tol: float = 1e-12,
                    n_samples: int = 201) -> ClassicalTrajectory:
    """Integrate the classical equation from ``t = 0`` to ``t_end``.

    Stops with :class:`CausticError` if ``x`` reaches zero, where the
    normal-ordered coefficients diverge.
    """
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if x0 == 0:
        raise ValueError("x0 must be non-zero")

    def rhs(t, y):
        x, p = y[0], y[1]
        m = m1(t)
        return [p / m, -m * omega1(t) ** 2 * x, 1.0 / (m * x * x)]

    # the running integral diverges like 1/(t - tc) before x itself reaches zero,
    # so stop just short of the crossing
    floor = 1e-9 * abs(x0)

    def crossing(t, y):
        return abs(y[0]) - floor
    crossing.terminal = True

    edges = [0.0, *sorted(set(m1.breakpoints_in(0, t_end)) | set(omega1.breakpoints_in(0, t_end))), t_end]
    y = [x0, m1(0.0) * x_dot0, 0.0]
    sols = []
    for a, b in zip(edges[:-1], edges[1:]):
        res = solve_ivp(rhs, (a, b), y, method="DOP853", rtol=tol, atol=tol,
                        dense_output=True, events=crossing)
        if res.status == 1:
            tc = float(res.t_events[0][0])
            raise CausticError(f"x_c vanishes at t={tc:.6g}", time=tc)
        if res.status != 0:
            raise ConvergenceError(res.message)
        sols.append(res.sol)
        y = res.y[:, -1]
    edges_a = np.asarray(edges)

    def dense(t):
        t = np.asarray(t, dtype=float)
        i = np.clip(np.searchsorted(edges_a, t, side="right") - 1, 0, len(sols) - 1)
        if t.ndim == 0:
            return tuple(sols[int(i)](t))
        out = np.empty((3, t.size))
        for k in np.unique(i):
            out[:, i == k] = sols[k](t[i == k])
        return out[0], out[1], out[2]

    times = np.linspace(0.0, t_end, n_samples)
    x, p, _ = dense(times)
    return ClassicalTrajectory(times, x, p / m1(times), float(x0), m1, omega1, dense)


def evolution_c_coefficients(xc: ClassicalTrajectory, t):
    """``(c+, c0, c-)`` of the evolution operator from ``0`` to ``t``.

    ``c+ = m1 x'/x``, ``c0 = -2 ln|x/x0|``, ``c- = -x0^2 int_0^t dt'/(m1 x^2)``.
    """
    x, p, integral = xc.state(t)
    x = float(x)
    if x == 0:
        raise CausticError("x_c vanishes", time=float(t))
    return complex(p / x), complex(-2 * math.log(abs(x / xc.x0))), complex(-xc.x0**2 * integral)


def evolution_operator(xc: ClassicalTrajectory, t) -> np.ndarray:
    return matrix_from_c(evolution_c_coefficients(xc, t))


def hamiltonian_matrix(m1: CoefficientProfile, omega1: CoefficientProfile, t) -> np.ndarray:
    """``a+ K+ + a- K-`` with ``a+ = -i m1 W1^2`` and ``a- = -i/m1``."""
    _, Kp, Km = k_matrices()
    m = float(m1(t))
    return -1j * m * float(omega1(t)) ** 2 * Kp + (-1j / m) * Km


def verify_schrodinger_residual(U: Callable, H: Callable, t_grid, h: float = 1e-3) -> float:
    """``max_t || i dU/dt - H U ||`` (spectral norm) with a five-point derivative."""
    worst = 0.0
    for t in np.asarray(t_grid, dtype=float):
        dU = (-U(t + 2 * h) + 8 * U(t + h) - 8 * U(t - h) + U(t - 2 * h)) / (12 * h)
        r = np.linalg.norm(1j * dU - H(t) @ U(t), 2)
        worst = max(worst, float(r))
    return worst


def geodesic_generator(b, atol: float = 1e-12) -> TimeIndepGeneralized:
    """Constant Hamiltonian ``H0 = i (b0 K0 + b+ K+ + b- K-)`` reaching ``exp(b . K)`` in unit time.

    With ``K+ = (i/2) X^2``, ``K0 = (i/4)(XP + PX)`` and ``K- = (i/2) P^2`` this
    is ``A0/2 X^2 + B0/2 P^2 + C0/4 (XP + PX)`` with ``A0 = -b+``,
    ``B0 = -b-``, ``C0 = -b0``. ``H0`` is Hermitian only for real ``b``.
    """
    b0, bp, bm = (complex(v) for v in b)
    scale = max(1.0, abs(b0), abs(bp), abs(bm))
    if max(abs(b0.imag), abs(bp.imag), abs(bm.imag)) > atol * scale:
        raise ConfigurationError(f"generator is not Hermitian for b = {b!r}")
    return TimeIndepGeneralized(A0=-bp.real, B0=-bm.real, C0=-b0.real)
