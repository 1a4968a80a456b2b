import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jintegral.jformula import alpha_to_t, j_hyper
from jintegral.mahler import (
    ENDPOINT_ALPHA,
    LaurentPolySpec,
    mahler_identity_residual,
    mahler_measure,
    mahler_to_j,
)
from jintegral.modular import j_special
from jintegral.numerics import DomainError, ZeroOnTorusError
from jintegral.quadrature import CubatureGrid, j_direct


@pytest.mark.parametrize("c", [3.0, 0.25, -7.0])
def test_constant(c):
    res = mahler_measure(LaurentPolySpec("const", c))
    assert res.value == math.log(abs(c))
    assert res.work["nodes"] == 1


def test_p5_against_cubature():
    res = mahler_measure(LaurentPolySpec("P5", 5.0))
    assert abs(res.value - (math.log(2) + j_direct(2.5).value)) < 1e-7
    assert abs(res.value - (math.log(2) + float(j_special("t=5/2").value))) < 1e-12


@pytest.mark.parametrize("k", [5.0, 6.0, 40.0, 1e4])
def test_bridge(k):
    measured, closed = mahler_to_j(k)
    assert abs(measured - closed) < 1e-7
    if k > 100:
        assert abs(measured - math.log(k)) < 10 / k


@pytest.mark.parametrize("alpha", [0.05, 0.1])
def test_p1_bridge(alpha):
    m1 = mahler_measure(LaurentPolySpec("P1", alpha)).value
    assert abs(m1 - math.log(8) - float(j_hyper(alpha).value)) < 1e-7


@pytest.mark.parametrize("alpha,tol", [(0.05, 1e-6), (0.1, 1e-6), (ENDPOINT_ALPHA, 1e-5)])
def test_identity(alpha, tol):
    assert mahler_identity_residual(alpha) < tol


def test_identity_is_not_vacuous():
    # swapping a weight must break it
    m = {f: mahler_measure(LaurentPolySpec(f, 0.1)).value for f in ("P1", "P2", "P3", "P4")}
    assert abs(m["P1"] - 10 * m["P2"] + 7 * m["P3"] + 6 * m["P4"]) > 0.1


@pytest.mark.parametrize("c", [2.0, 10.0])
def test_scaling_law(c):
    base = mahler_measure(LaurentPolySpec("P5", 5.0)).value
    scaled = mahler_measure(LaurentPolySpec("P5", 5.0, c)).value
    assert abs(scaled - base - math.log(c)) < 1e-13


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.sampled_from(["P2", "P3", "P4"]))
def test_conjugation_invariance(t1, t2, t3, family):
    # coefficients are real up to a common phase, so |P(conj x)| = |P(x)|
    f = LaurentPolySpec(family, 0.1).kernel()
    a = f(np.array(t1), np.array(t2), np.array(t3))
    b = f(np.array(-t1), np.array(-t2), np.array(-t3))
    assert abs(a - b) <= 1e-12 * abs(a)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1))
def test_kernels_match_laurent_form(t1, t2, t3):
    x, y, z = (np.exp(2j * math.pi * t) for t in (t1, t2, t3))
    a = 0.1
    sx, sy, sz = x + 1 / x, y + 1 / y, z + 1 / z
    w = 4 * a * (1 - a)
    direct = {
        "P1": 8 * math.sqrt(w) + 8 / math.sqrt(w) - 4 * (sx + sy + sz) + sx * sy * sz,
        "P2": 4 / math.sqrt(a * (1 - a)) + sx * sy * sz,
        "P3": 4j * (1 - a) / math.sqrt(a) + sx * sy * sz,
        "P4": x**4 + y**4 + z**4 + 1 + 2 * (1 + a) / (a * (1 - a) ** 2) ** 0.25 * x * y * z,
    }
    for family, value in direct.items():
        k = LaurentPolySpec(family, a).kernel()(np.array(t1), np.array(t2), np.array(t3))
        assert abs(k - abs(value)) < 1e-12 * max(1.0, abs(value))
    k5 = LaurentPolySpec("P5", 5.0).kernel()(np.array(t1), np.array(t2), np.array(t3))
    assert abs(k5 - abs(5 - sx - sy - sz + sx * sy * sz / 4)) < 1e-12


@pytest.mark.parametrize("family", ["P1", "P2", "P3", "P4"])
def test_bounded_away_from_zero(family):
    t = (np.arange(48) + 0.25) / 48
    f = LaurentPolySpec(family, 0.1).kernel()
    assert f(t[:, None, None], t[None, :, None], t[None, None, :]).min() > 0.1


def test_zero_on_torus():
    # at the endpoint P4 vanishes at x = y = z = -1, which a 3-point offset grid hits
    with pytest.raises(ZeroOnTorusError):
        mahler_measure(LaurentPolySpec("P4", ENDPOINT_ALPHA), CubatureGrid(3, "trapezoid", 1))


def test_parameter_validation():
    with pytest.raises(DomainError):
        LaurentPolySpec("P1", 0.2)
    with pytest.raises(DomainError):
        LaurentPolySpec("P5", 4.0)
    with pytest.raises(DomainError):
        LaurentPolySpec("P6", 0.1)
    with pytest.raises(DomainError):
        LaurentPolySpec("const", 0)


def test_p1_matches_t():
    # P1 = 8 (t - sum cos + prod cos) at alpha = 0.05
    t = float(alpha_to_t(0.05))
    f = LaurentPolySpec("P1", 0.05).kernel()
    u = np.array([0.1, 0.3, 0.7])
    c = np.cos(2 * math.pi * u)
    assert abs(f(u[0], u[1], u[2]) - 8 * (t - c.sum() + c.prod())) < 1e-12
