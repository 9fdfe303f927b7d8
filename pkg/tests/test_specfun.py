import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bicost.specfun import (
    CostConstants, bernoulli_poly, default_cost_constants, epstein_hurwitz_regularized,
    hurwitz_zeta_nonpos, solve_mean_ratio,
)

R3 = math.sqrt(3.0)


def test_bernoulli_basics():
    assert bernoulli_poly(0, 0.7) == 1
    assert bernoulli_poly(2, Fraction(0)) == Fraction(1, 6)
    assert bernoulli_poly(3, Fraction(1, 2)) == 0


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("q", [0.0, 0.3, 0.5, 1.25, 1.9])
def test_bernoulli_against_mpmath(n, q):
    assert bernoulli_poly(n, q) == pytest.approx(float(mpmath.bernpoly(n, q)), abs=1e-13)


def test_bernoulli_range():
    with pytest.raises(ValueError):
        bernoulli_poly(7, 0.1)
    with pytest.raises(ValueError):
        bernoulli_poly(-1, 0.1)


def test_zeta_regularization_roots():
    assert abs(hurwitz_zeta_nonpos(-1, 0.5 - 1 / (2 * R3))) < 1e-12
    assert abs(hurwitz_zeta_nonpos(-1, 0.5 + 1 / (2 * R3))) < 1e-12
    assert hurwitz_zeta_nonpos(-2, 0.5 + 1 / (2 * R3)) == pytest.approx(R3 / 108, abs=1e-12)
    assert hurwitz_zeta_nonpos(0, 0.5) == 0


@pytest.mark.parametrize("k", [0, -1, -2])
@pytest.mark.parametrize("q", [0.1, 0.5, 0.7886751345948129, 1.0, 1.7])
def test_zeta_against_mpmath(k, q):
    assert hurwitz_zeta_nonpos(k, q) == pytest.approx(float(mpmath.zeta(k, q)), abs=1e-14)


def test_zeta_rejects_other_orders():
    with pytest.raises(ValueError):
        hurwitz_zeta_nonpos(-3, 0.5)
    with pytest.raises(ValueError):
        hurwitz_zeta_nonpos(1, 0.5)


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=Fraction(-3), max_value=Fraction(3), max_denominator=10**6))
def test_zeta_matches_bernoulli_exactly(q):
    # two independent polynomial evaluations, compared bit for bit in exact arithmetic
    for n in (0, 1, 2):
        assert hurwitz_zeta_nonpos(-n, q) == -bernoulli_poly(n + 1, q) / (n + 1)


@settings(max_examples=200, deadline=None)
@given(st.floats(-3, 3))
def test_zeta_matches_bernoulli_floats(q):
    for n in (0, 1, 2):
        a = hurwitz_zeta_nonpos(-n, q)
        b = -bernoulli_poly(n + 1, q) / (n + 1)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-14)


def test_zeta0_random():
    np.random.seed(1)
    q = np.random.uniform(0, 2, 1000)
    np.testing.assert_allclose(hurwitz_zeta_nonpos(0, q), 0.5 - q, atol=1e-14)


def test_mean_ratio_roots():
    gp, gm = solve_mean_ratio()
    assert gp == pytest.approx(1 / (4 * R3), abs=1e-12)
    assert gm == pytest.approx(-1 / (4 * R3), abs=1e-12)
    assert abs(gp + gm) < 1e-14
    assert abs(hurwitz_zeta_nonpos(-1, 0.5 - 2 * gm)) < 1e-12
    # time-independent analogue a/w = 2 gamma
    assert 2 * gp == pytest.approx(1 / (2 * R3), abs=1e-12)


def test_default_constants():
    k = default_cost_constants()
    assert k.lambda1_sq == pytest.approx(0.0040094, abs=1e-7)
    assert k.lambda1_sq == pytest.approx(R3 / 432, rel=1e-15)
    assert k.lambda2_sq == 0.05
    assert k.gamma == pytest.approx(-1 / (4 * R3))
    assert default_cost_constants(2.0).lambda1_sq == pytest.approx(4 * R3 / 432)
    k = default_cost_constants(1.0, 0.1)
    assert k.lambda12_sq == k.lambda1_sq + 0.1
    assert default_cost_constants(1.0) == default_cost_constants(1.0)


@pytest.mark.parametrize("l0,override", [(0, None), (-1, None), (1, 0), (1, -0.1)])
def test_default_constants_errors(l0, override):
    with pytest.raises(ValueError):
        default_cost_constants(l0, override)


def test_constants_validation():
    with pytest.raises(ValueError):
        CostConstants(1.0, -1.0, 0.1)


def test_epstein_hurwitz():
    assert epstein_hurwitz_regularized(0.5, 0.75) == 0
    assert epstein_hurwitz_regularized(0.5, 0.0) == 0
    assert epstein_hurwitz_regularized(1.0, 1.0) == pytest.approx(-0.5)
    # oracle: mpmath continuation of each Hurwitz term
    a, b2 = 0.3, 0.7
    ref = float(mpmath.zeta(-2, a) + b2 * mpmath.zeta(0, a))
    assert epstein_hurwitz_regularized(a, b2) == pytest.approx(ref, abs=1e-14)
