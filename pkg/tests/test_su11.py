import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from bicost.exceptions import CausticError, ConfigurationError, DecompositionError
from bicost.profiles import constant_profile, make_ck_coefficients
from bicost.su11 import (
    SU11Element, b_from_matrix, c_to_b, decompose_b_to_c, evolution_c_coefficients, evolution_operator,
    geodesic_generator, hamiltonian_matrix, k_matrices, matrix_from_b, matrix_from_c, solve_classical,
    verify_schrodinger_residual,
)
from bicost.equivalence import mass_from_B1

K0, KP, KM = k_matrices()


def dot_b(b):
    return b[0] * K0 + b[1] * KP + b[2] * KM


def normal_order(c):
    return expm(c[0] * KP) @ expm(c[1] * K0) @ expm(c[2] * KM)


def comm(a, b):
    return a @ b - b @ a


def test_commutators():
    np.testing.assert_allclose(comm(KP, KM), -2 * K0)
    np.testing.assert_allclose(comm(K0, KP), KP)
    np.testing.assert_allclose(comm(K0, KM), -KM)


def random_triples(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        b = rng.normal(size=3) + 1j * rng.normal(size=3)
        if i % 5 == 1:
            b *= 1e-5  # chi near zero
        elif i % 5 == 2:
            b = rng.normal(size=3)  # real: chi^2 may have either sign
        elif i % 5 == 3:
            b = np.array([rng.normal(), 1.0, 1.0]) * 0.5  # chi^2 > 0 so chi is imaginary
        out.append(tuple(complex(v) for v in b))
    return out


@pytest.mark.parametrize("b", random_triples(100, 3))
def test_decomposition_against_expm(b):
    ref = expm(dot_b(b))
    np.testing.assert_allclose(matrix_from_b(b), ref, rtol=0, atol=1e-10 * max(1, np.abs(ref).max()))
    try:
        c = decompose_b_to_c(b)
    except DecompositionError:
        return
    np.testing.assert_allclose(normal_order(c), ref, rtol=0, atol=1e-10 * max(1, np.abs(ref).max()))
    np.testing.assert_allclose(matrix_from_c(c), ref, rtol=0, atol=1e-10 * max(1, np.abs(ref).max()))


def test_exact_chi_zero_and_imaginary_chi():
    for b in [(0, 0, 0), (0, 1e-12, 1e-12), (0.3, -1, 2), (0.5, 1, 1)]:
        ref = expm(dot_b(b))
        c = decompose_b_to_c(b)
        np.testing.assert_allclose(matrix_from_c(c), ref, atol=1e-12)


def test_undecomposable_element():
    # chi = 0 with b0 = 2 makes the upper-left entry of exp(b . K) vanish
    U = matrix_from_b((2.0, 1.0, 1.0))
    assert abs(U[0, 0]) < 1e-15
    with pytest.raises(DecompositionError):
        decompose_b_to_c((2.0, 1.0, 1.0))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1.5, 1.5), min_size=6, max_size=6))
def test_round_trip_and_det(vals):
    b = tuple(complex(vals[i], vals[i + 3]) for i in range(3))
    U = matrix_from_b(b)
    assert abs(np.linalg.det(U) - 1) < 1e-12
    b2 = b_from_matrix(U)
    np.testing.assert_allclose(matrix_from_b(b2), U, atol=1e-10)
    c = decompose_b_to_c(b)
    np.testing.assert_allclose(matrix_from_b(c_to_b(c)), U, atol=1e-9)


def test_element_consistency():
    b = (0.2 + 0.1j, 0.4, -0.3j)
    e = SU11Element(b=b, c=decompose_b_to_c(b))
    assert e.consistency_error() < 1e-13
    assert SU11Element(c=(0.1, 0.2, 0.3)).matrix.shape == (2, 2)
    assert e.chi_sq == pytest.approx(SU11Element(c=e.c).chi_sq, abs=1e-12)
    with pytest.raises(ValueError):
        SU11Element()


def test_constant_oscillator_evolution_matches_expm():
    w = 1.3
    one, om = constant_profile(1.0), constant_profile(w)
    xc = solve_classical(one, om, 1.0)
    H = hamiltonian_matrix(one, om, 0.0)
    for t in (0.2, 0.7, 1.0):
        np.testing.assert_allclose(evolution_operator(xc, t), expm(-1j * H * t), atol=1e-10)
    c = evolution_c_coefficients(xc, 0.5)
    assert c[0] == pytest.approx(-w * math.tan(w * 0.5))
    assert c[2] == pytest.approx(-math.tan(w * 0.5) / w)


def test_schrodinger_residual_constant_and_ck():
    one, om = constant_profile(1.0), constant_profile(1.0)
    xc = solve_classical(one, om, 1.4)
    r = verify_schrodinger_residual(lambda t: evolution_operator(xc, t),
                                    lambda t: hamiltonian_matrix(one, om, t), np.linspace(0.1, 1.3, 25))
    assert r < 1e-6
    A1, B1 = make_ck_coefficients(1.0, 1.0, 0.5)
    m1 = mass_from_B1(B1)
    om = constant_profile(1.0)
    xc = solve_classical(m1, om, 1.4)
    r = verify_schrodinger_residual(lambda t: evolution_operator(xc, t),
                                    lambda t: hamiltonian_matrix(m1, om, t), np.linspace(0.1, 1.3, 25))
    assert r < 1e-6


def test_caustic_detected():
    with pytest.raises(CausticError) as err:
        solve_classical(constant_profile(1.0), constant_profile(1.0), 2.0)
    assert err.value.time == pytest.approx(math.pi / 2, rel=1e-8)


def test_geodesic_generator():
    w = 2.0
    # exp(-i H t) for the unit-mass oscillator at t = 1 has b = (0, -i w^2, -i) ... times -i:
    H = hamiltonian_matrix(constant_profile(1.0), constant_profile(w), 0.0)
    # H = a+ K+ + a- K-, exp(-i H) = exp(b . K) with b = -i a
    b = (0.0, -w * w, -1.0)
    np.testing.assert_allclose(-1j * H, dot_b(b))
    g = geodesic_generator(b)
    assert (g.A0, g.B0, g.C0) == (w * w, 1.0, 0.0)
    with pytest.raises(ConfigurationError):
        geodesic_generator((0.0, -1j * w * w, -1j))
