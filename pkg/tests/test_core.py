import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from ellipbounds.core import (
    E_AT_ONE,
    HALF_PI,
    AxisPair,
    Modulus,
    SeriesPolicy,
    agm,
    binomial_series_inv_sqrt,
    central_ratio,
    complete_e,
    complete_e_series,
    complete_k,
    complete_k_series,
    e_two_param,
    hyper_gauss,
    k_two_param,
    wallis,
)
from ellipbounds.errors import DomainError, TruncationError

positive = st.floats(min_value=1e-150, max_value=1e150, allow_nan=False, allow_infinity=False)


# -- types -------------------------------------------------------------------

@pytest.mark.parametrize("r", [0.0, 1.0, -0.1, 1.5, math.nan, math.inf])
def test_modulus_rejects_closed_endpoints_and_garbage(r):
    with pytest.raises(DomainError):
        Modulus(r)


@given(st.floats(min_value=1e-300, max_value=1.0, exclude_max=True))
def test_modulus_complement(r):
    m = Modulus(r)
    assert abs(m.r_comp**2 + m.r**2 - 1.0) <= 4 * np.finfo(float).eps


@pytest.mark.parametrize("r, s", [(0, 1), (1, -1), (math.inf, 1), (1, math.nan)])
def test_axis_pair_rejects(r, s):
    with pytest.raises(DomainError):
        AxisPair(r, s)


def test_series_policy_validation():
    with pytest.raises(ValueError):
        SeriesPolicy(max_terms=0)
    with pytest.raises(ValueError):
        SeriesPolicy(term_tol=0.0)


# -- agm -------------------------------------------------------------------------

@pytest.mark.parametrize("c", [1e-200, 0.3, 1.0, 7.5, 1e200])
def test_agm_fixed_point(c):
    assert agm(c, c) == c


def test_agm_golden_values():
    assert agm(24, 6) == pytest.approx(oracles.AGM_24_6, rel=1e-15)
    assert agm(1, math.sqrt(2)) == pytest.approx(oracles.AGM_1_SQRT2, rel=1e-15)
    # Gauss's constant is 1/agm(1, sqrt 2)
    assert agm(24, 6) == pytest.approx(oracles.agm_iterate(24, 6), rel=1e-15)


@pytest.mark.parametrize("x, y", [(0, 1), (-1, 1), (1, math.inf), (math.nan, 2)])
def test_agm_domain(x, y):
    with pytest.raises(DomainError):
        agm(x, y)


def test_agm_symmetry_and_sandwich_random():
    rng = np.random.default_rng(20240601)
    xs = 10.0 ** rng.uniform(-8, 8, 10_000)
    ys = 10.0 ** rng.uniform(-8, 8, 10_000)
    for x, y in zip(xs, ys):
        g = agm(x, y)
        assert g == agm(y, x)
        assert min(x, y) <= g <= max(x, y)


@given(positive, positive)
def test_agm_symmetry_and_sandwich(x, y):
    g = agm(x, y)
    assert g == agm(y, x)
    assert min(x, y) <= g <= max(x, y)


# -- K and E ----------------------------------------------------------------------

def test_golden_values():
    assert complete_k(0.5) == pytest.approx(oracles.K_HALF, abs=1e-14)
    assert complete_e(0.5) == pytest.approx(oracles.E_HALF, abs=1e-14)
    assert complete_k(1 / math.sqrt(2)) == pytest.approx(oracles.K_INV_SQRT2, abs=1e-14)


def test_small_modulus_limits():
    assert complete_k(1e-9) == pytest.approx(HALF_PI, abs=1e-15)
    assert complete_e(1e-9) == pytest.approx(HALF_PI, abs=1e-15)


def test_e_tends_to_one():
    assert complete_e(1 - 1e-12) == pytest.approx(E_AT_ONE, abs=1e-9)
    with pytest.raises(DomainError):
        complete_k(1.0)


@pytest.mark.parametrize("r", [0.01, 0.3, 0.77, 0.95, 0.999])
def test_against_mpmath_quadrature(r):
    assert complete_k(r) == pytest.approx(oracles.k_quad(r), rel=1e-14)
    assert complete_e(r) == pytest.approx(oracles.e_quad(r), rel=1e-14)


def test_range_properties():
    grid = np.linspace(1e-6, 1 - 1e-6, 2001)
    ks = [complete_k(r) for r in grid]
    es = [complete_e(r) for r in grid]
    assert all(b > a for a, b in zip(ks, ks[1:]))
    assert all(b < a for a, b in zip(es, es[1:]))
    assert min(ks) >= HALF_PI
    assert all(1.0 < e < HALF_PI for e in es[1:])


def test_method_agreement_series_vs_agm():
    for r in np.arange(1, 901) / 1000:
        assert complete_k_series(r) == pytest.approx(complete_k(r), rel=1e-10)
        assert complete_e_series(r) == pytest.approx(complete_e(r), rel=1e-10)


# -- hypergeometric and other series -------------------------------------------------

def test_hyper_gauss_trivial():
    assert hyper_gauss(0.5, 0.5, 1.0, 0.0) == 1.0


def test_hyper_gauss_reproduces_k():
    assert HALF_PI * hyper_gauss(0.5, 0.5, 1.0, 0.25) == pytest.approx(oracles.K_HALF, rel=1e-14)


def test_hyper_gauss_e_near_one():
    # E(1) = 1 forces F(-1/2, 1/2; 1; 1) = 2/pi; at x = 1 - 1e-4 the gap is E(r) - 1 ~ 2.7e-4
    x = 0.9999
    val = hyper_gauss(-0.5, 0.5, 1.0, x, SeriesPolicy(max_terms=2_000_000))
    assert HALF_PI * val == pytest.approx(complete_e(math.sqrt(x)), rel=1e-12)
    assert abs(val - 2 / math.pi) < 2e-4
    vals = [hyper_gauss(-0.5, 0.5, 1.0, x) for x in (0.9, 0.99, 0.999)]
    assert vals[0] > vals[1] > vals[2] > 2 / math.pi


def test_hyper_gauss_terminating():
    # F(-2, b; c; x) is a polynomial
    b, c, x = 1.5, 2.5, 0.3
    exact = 1 - 2 * b / c * x + b * (b + 1) / (c * (c + 1)) * x * x
    assert hyper_gauss(-2, b, c, x) == pytest.approx(exact, rel=1e-15)


def test_hyper_gauss_errors():
    with pytest.raises(DomainError):
        hyper_gauss(0.5, 0.5, -1.0, 0.5)
    with pytest.raises(DomainError):
        hyper_gauss(0.5, 0.5, 1.0, 1.0)
    with pytest.raises(TruncationError) as exc:
        hyper_gauss(0.5, 0.5, 1.0, 0.99, SeriesPolicy(max_terms=10))
    assert exc.value.terms_used == 10


@pytest.mark.parametrize("t, expected", [(0.0, 1.0), (0.6, 1.25), (0.9, 2.294157338705617659)])
def test_binomial_series(t, expected):
    assert binomial_series_inv_sqrt(t) == pytest.approx(expected, rel=1e-14)


def test_binomial_series_errors():
    with pytest.raises(DomainError):
        binomial_series_inv_sqrt(1.0)
    with pytest.raises(TruncationError):
        binomial_series_inv_sqrt(0.999, SeriesPolicy(max_terms=5))


def test_wallis_values():
    assert wallis(0) == HALF_PI
    assert wallis(1) == pytest.approx(math.pi / 4, rel=1e-15)
    assert wallis(3) == pytest.approx(5 * math.pi / 32, rel=1e-15)
    assert central_ratio(3) == pytest.approx(15 / 48, rel=1e-15)


def test_wallis_recurrence():
    for i in range(0, 400):
        ratio = wallis(i + 1) / wallis(i)
        assert abs(ratio - (2 * i + 1) / (2 * i + 2)) <= 2 * math.ulp(ratio)


def test_wallis_large_index_does_not_overflow():
    assert 0 < wallis(100_000) < 0.01


# -- two-parameter forms ------------------------------------------------------------

@pytest.mark.parametrize("c", [1e-3, 0.5, 1.0, 42.0])
def test_two_param_equal_axes(c):
    assert k_two_param(c, c) == pytest.approx(HALF_PI / c, rel=1e-15)
    assert e_two_param(c, c) == pytest.approx(HALF_PI * c, rel=1e-15)


def test_two_param_golden():
    assert k_two_param(1, 1.1) == pytest.approx(oracles.K2_1_11, rel=1e-14)
    assert e_two_param(3, 4) == pytest.approx(oracles.E2_3_4, rel=1e-14)


def test_agm_identity_log_grid():
    axis = np.geomspace(1e-2, 1e2, 60)
    for r in axis:
        for s in axis:
            assert k_two_param(r, s) * agm(r, s) == pytest.approx(HALF_PI, rel=1e-12)


def test_reduction_identities():
    for r in np.arange(1, 1000) / 1000:
        m = Modulus(r)
        assert k_two_param(1.0, m.r_comp) == pytest.approx(complete_k(m), rel=1e-12)
        assert e_two_param(1.0, m.r_comp) == pytest.approx(complete_e(m), rel=1e-12)


@given(
    st.floats(min_value=1e-2, max_value=1e2),
    st.floats(min_value=1e-2, max_value=1e2),
    st.sampled_from([1e-3, 1.0, 1e3]),
)
def test_homogeneity_and_symmetry(r, s, c):
    assert k_two_param(c * r, c * s) * c == pytest.approx(k_two_param(r, s), rel=1e-12)
    assert e_two_param(c * r, c * s) == pytest.approx(c * e_two_param(r, s), rel=1e-12)
    assert k_two_param(r, s) == k_two_param(s, r)
    assert e_two_param(r, s) == e_two_param(s, r)
