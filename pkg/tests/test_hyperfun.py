import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from jintegral.hyperfun import (
    ENDPOINT_ALPHA,
    HyperSeriesSpec,
    clausen_square_residuals,
    deriv_5f4_coefficients,
    deriv_5f4_identity_residual,
    erdelyi_quadratic_chain,
    pfq,
)
from jintegral.numerics import DivergenceError, DomainError, NonConvergenceError, PrecisionConfig

P40 = PrecisionConfig(digits=40)
HALF = Fraction(1, 2)


def agm_k(m):
    """2F1(1/2,1/2;1;m) = 1/agm(1, sqrt(1-m)), by plain AGM iteration."""
    with mpmath.workdps(60):
        a, b = mpmath.mpf(1), mpmath.sqrt(1 - mpmath.mpf(m))
        while abs(a - b) > mpmath.mpf(10) ** -55:
            a, b = (a + b) / 2, mpmath.sqrt(a * b)
        return 1 / a


def test_zero_argument_is_one():
    res = pfq(HyperSeriesSpec([HALF, HALF], [1], 0))
    assert res.value == 1


def test_elliptic_value_against_agm():
    res = pfq(HyperSeriesSpec([HALF, HALF], [1], HALF), P40)
    assert abs(res.value - agm_k(0.5)) < 1e-25
    assert res.err_bound < 1e-30
    assert res.work["terms"] > 0


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.01, max_value=0.95))
def test_elliptic_family_against_agm(m):
    res = pfq(HyperSeriesSpec([HALF, HALF], [1], m))
    assert abs(res.value - agm_k(m)) < 1e-25


@settings(max_examples=25, deadline=None)
@given(
    st.fractions(min_value=Fraction(-3), max_value=Fraction(3), max_denominator=12),
    st.floats(min_value=-0.9, max_value=0.9),
    st.floats(min_value=-0.9, max_value=0.9),
)
def test_binomial_series(a, x, y):
    z = complex(x, y)
    if abs(z) >= 0.95:
        z *= 0.9 / abs(z)
    res = pfq(HyperSeriesSpec([a], [], z))
    with mpmath.workdps(40):
        exact = (1 - mpmath.mpc(z)) ** (-mpmath.mpf(a.numerator) / a.denominator)
    assert abs(res.value - exact) < 1e-25


def test_log_series():
    res = pfq(HyperSeriesSpec([1, 1], [2], -0.5))
    with mpmath.workdps(40):
        assert abs(res.value - mpmath.log(1.5) / 0.5) < 1e-28


def test_5f4_first_argument_bound():
    spec = HyperSeriesSpec([Fraction(3, 2)] * 3 + [1, 1], [2, 2, 2, 2], Fraction(4 * 5 * 95, 10000))
    res = pfq(spec, P40)
    rerun = pfq(spec, PrecisionConfig(digits=40, term_cap=40_000_000))
    assert res.err_bound < 1e-30
    assert abs(res.value - rerun.value) <= res.err_bound


def test_gauss_sum_at_one():
    res = pfq(HyperSeriesSpec([HALF, HALF], [2], 1), PrecisionConfig(digits=20))
    with mpmath.workdps(30):
        assert abs(res.value - 4 / mpmath.pi) < 1e-18
    assert res.method == "pfq-unit-richardson"


def test_unit_circle_minus_one():
    # 2F1(1/2, 1; 2; z) = 2(1 - sqrt(1 - z)) / z
    res = pfq(HyperSeriesSpec([HALF, 1], [2], -1), PrecisionConfig(digits=20))
    with mpmath.workdps(30):
        assert abs(res.value - 2 * (mpmath.sqrt(2) - 1)) < 1e-18


def test_5f4_at_one_against_mpmath():
    spec = HyperSeriesSpec([Fraction(5, 4), Fraction(3, 2), Fraction(7, 4), 1, 1], [2, 2, 2, 2], 1)
    res = pfq(spec, PrecisionConfig(digits=20))
    with mpmath.workdps(30):
        ref = mpmath.hyper([1.25, 1.5, 1.75, 1, 1], [2, 2, 2, 2], 1)
    assert abs(res.value - ref) < 1e-18


def test_divergence_and_nonconvergence():
    with pytest.raises(DivergenceError):
        pfq(HyperSeriesSpec([HALF, HALF], [1], 1.01))
    with pytest.raises(DivergenceError):  # parameter excess 0 at z = 1
        pfq(HyperSeriesSpec([HALF, HALF], [1], 1))
    with pytest.raises(NonConvergenceError):
        pfq(HyperSeriesSpec([HALF, HALF], [2], 1j))


def test_spec_validation():
    with pytest.raises(DomainError):
        HyperSeriesSpec([1, 1], [-2], 0.1)
    with pytest.raises(DomainError):
        HyperSeriesSpec([1, 1], [0], 0.1)
    with pytest.raises(DomainError):
        HyperSeriesSpec([1, 1, 1], [1], 0.1)


@settings(max_examples=20, deadline=None)
@given(
    st.lists(st.fractions(min_value=Fraction(1, 8), max_value=Fraction(3), max_denominator=8), min_size=3, max_size=3),
    st.lists(st.fractions(min_value=Fraction(1, 2), max_value=Fraction(3), max_denominator=4), min_size=2, max_size=2),
    st.floats(min_value=-0.9, max_value=0.9),
)
def test_tail_bound_is_sound(upper, lower, z):
    spec = HyperSeriesSpec(upper, lower, z)
    lo = pfq(spec, PrecisionConfig(digits=20))
    hi = pfq(spec, PrecisionConfig(digits=45))
    assert math.isfinite(lo.err_bound)
    assert abs(lo.value - hi.value) <= lo.err_bound + 1e-28


@pytest.mark.parametrize("s", [Fraction(1, 4), Fraction(1, 2), Fraction(1, 3)])
def test_derivative_formula_coefficients_exact(s):
    pairs = deriv_5f4_coefficients(s, 50)
    assert all(isinstance(a, Fraction) for a, _ in pairs)
    assert [a for a, _ in pairs] == [b for _, b in pairs]


def test_derivative_formula_coefficients_by_hand():
    # n = 1: both sides start at 1; n = 2 at s = 1/2: (3/2)(3/2)(3/2)/16 * 2 = 27/64
    pairs = deriv_5f4_coefficients(HALF, 2)
    assert pairs[0] == (1, 1)
    assert pairs[1][0] == Fraction(27, 64)


@pytest.mark.parametrize("s,z", [(HALF, 0.1), (Fraction(1, 4), 0.2), (Fraction(1, 4), 0.3 + 0.4j)])
def test_derivative_formula_residual(s, z):
    assert deriv_5f4_identity_residual(s, z, PrecisionConfig(digits=35)) < 1e-28


def test_derivative_formula_small_z_limit():
    # the right side divides (3F2 - 1) by z, so about log10(1/z) digits cancel
    assert deriv_5f4_identity_residual(HALF, 1e-8, P40) < 1e-25
    with pytest.raises(DomainError):
        deriv_5f4_identity_residual(Fraction(3, 2), 0.1)


@pytest.mark.parametrize("alpha", [0.05, 1e-9, ENDPOINT_ALPHA])
def test_erdelyi_chain(alpha):
    lhs, rhs = erdelyi_quadratic_chain(alpha)
    assert abs(lhs - rhs) < 1e-25
    if alpha < 1e-6:
        assert abs(lhs - 1) < 1e-6


def test_erdelyi_chain_twenty_points():
    for j in range(1, 21):
        lhs, rhs = erdelyi_quadratic_chain(ENDPOINT_ALPHA * j / 20)
        assert abs(lhs - rhs) < 1e-25


def test_erdelyi_chain_rejects():
    with pytest.raises(DomainError):
        erdelyi_quadratic_chain(0.5)
    with pytest.raises(DomainError):
        erdelyi_quadratic_chain(0.2)


@pytest.mark.parametrize("alpha", [0.1, 0.05j, 0.03 - 0.04j, 1e-30])
def test_clausen_residuals(alpha):
    assert max(clausen_square_residuals(alpha)) < 1e-25


def test_clausen_outside_disk():
    # at 0.1i the third transformed argument has modulus about 1.58
    with pytest.raises(DivergenceError):
        clausen_square_residuals(0.1j)


@settings(max_examples=20, deadline=None)
@given(st.floats(min_value=0.0, max_value=0.15), st.floats(min_value=-math.pi, max_value=math.pi))
def test_clausen_on_disk_sample(r, phi):
    alpha = complex(r * math.cos(phi), r * math.sin(phi))
    try:
        res = clausen_square_residuals(alpha)
    except DivergenceError:
        return
    assert max(res) < 1e-25
