import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linnik_lab.analysis import (DirichletPolynomial, integrate_oscillatory, log_power_tail, mean_square_window,
                                 montgomery_check, mvt_probe, mvt_rhs, rough_progression_polynomial,
                                 taylor_log_deriv_KN)
from linnik_lab.errors import ConditioningError, DomainError

from oracles import is_rough, kn_mp, mangoldt, mean_square_closed_form, spf_table


def poly(d):
    return DirichletPolynomial.from_mapping(d)


def test_polynomial_evaluation():
    P = poly({1: 1, 2: 0.5j, 6: -2})
    s = 1.3 + 4j
    ref = 1 + 0.5j * 2**-s - 2 * 6**-s
    assert abs(P(s) - ref) < 1e-14
    assert P.coefficient(6) == -2 and P.coefficient(5) == 0
    assert P.max_support == 6


def test_polynomial_validation():
    with pytest.raises(DomainError):
        DirichletPolynomial(np.array([0, 1]), np.array([1, 1]))
    with pytest.raises(DomainError):
        DirichletPolynomial(np.array([2, 2]), np.array([1, 1]))


def test_mean_square_examples():
    assert math.isclose(mean_square_window(poly({1: 1}), 1.5, -1, 2), 3.0, rel_tol=1e-12)
    assert math.isclose(mean_square_window(poly({7: 1}), 1.2, 0, 5), 7**-2.4 * 5, rel_tol=1e-12)
    assert mean_square_window(poly({}), 1.2, 0, 5) == 0.0


def test_two_terms_average_out():
    P = {1: 1.0, 3: 0.8}
    v = mean_square_window(poly(P), 1.1, 0, 200)
    diag = (1 + 0.64 * 3**-2.2) * 200
    assert abs(v - diag) <= 0.1 * diag


@settings(max_examples=25, deadline=None)
@given(st.dictionaries(st.integers(1, 60), st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                       min_size=1, max_size=8),
       st.floats(0.5, 2.0), st.floats(-20, 20), st.floats(0.5, 30))
def test_mean_square_against_closed_form(coeffs, sigma, T1, width):
    v = mean_square_window(poly(coeffs), sigma, T1, T1 + width)
    ref = mean_square_closed_form(coeffs, sigma, T1, T1 + width)
    assert abs(v - ref) <= 1e-8 * max(ref, 1e-12) + 1e-12


def test_mean_square_additive():
    P = poly({1: 1, 2: -0.3, 5: 0.7j, 11: 0.2})
    a = mean_square_window(P, 1.2, -3, 4)
    b = mean_square_window(P, 1.2, 4, 17)
    c = mean_square_window(P, 1.2, -3, 17)
    assert abs(a + b - c) <= 1e-9 * c


def test_inverse_square_weight_against_mpmath():
    coeffs = {1: 1, 2: 0.5, 3: -0.25}
    v = mean_square_window(poly(coeffs), 1.3, 2, 20, "inverse-t-squared")
    f = lambda t: abs(sum(a * mpmath.power(n, -(1.3 + 1j * t)) for n, a in coeffs.items())) ** 2 / t**2
    ref = float(mpmath.quad(f, mpmath.linspace(2, 20, 10)))
    assert abs(v - ref) <= 1e-9 * ref


def test_mean_square_domain():
    with pytest.raises(DomainError):
        mean_square_window(poly({1: 1}), 1.2, 3, 3)
    with pytest.raises(DomainError):
        mean_square_window(poly({1: 1}), -1, 0, 3)
    with pytest.raises(DomainError):
        mean_square_window(poly({1: 1}), 1, -1, 3, "inverse-t-squared")


def test_oscillatory_integration():
    assert math.isclose(integrate_oscillatory(np.cos, 0, 100, 1.0), math.sin(100), rel_tol=1e-10)


# Montgomery

def test_montgomery_equal():
    A = poly({1: 1, 2: 0.5, 3: 0.25})
    r = montgomery_check(A, A, 1.5, 5)
    assert r.passed and math.isclose(r.lhs, r.rhs / 3, rel_tol=1e-12)


def test_montgomery_precondition():
    with pytest.raises(DomainError):
        montgomery_check(poly({1: 2}), poly({1: 1}), 1.5, 5)
    with pytest.raises(DomainError):
        montgomery_check(poly({1: 1, 4: 0.1}), poly({1: 1}), 1.5, 5)
    with pytest.raises(DomainError):
        montgomery_check(poly({1: 1}), poly({1: 1}), 1.0, 5)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_montgomery_random_phases(data):
    support = data.draw(st.lists(st.integers(1, 50), min_size=1, max_size=12, unique=True))
    b = {n: data.draw(st.floats(0, 2)) for n in support}
    a = {n: v * np.exp(1j * data.draw(st.floats(0, 2 * math.pi))) for n, v in b.items()}
    r = montgomery_check(poly(a), poly(b), data.draw(st.floats(1.01, 1.99)), data.draw(st.floats(1, 10)))
    assert r.passed


# mean value probe

def test_rough_progression_polynomial_against_naive():
    q, a, y, j, N = 3, 2, 150, 1, 30_000
    spf = spf_table(10**6)
    P = rough_progression_polynomial(q, a, y, j, N)
    ref = {n: mangoldt(n, spf) * math.log(n) ** j for n in range(2, N + 1)
           if n % q == a and mangoldt(n, spf) > 0 and is_rough(n, y, spf)}
    assert P.n.tolist() == sorted(ref)
    assert np.allclose(P.a.real, [ref[n] for n in P.n.tolist()], rtol=1e-14)


def test_log_power_tail():
    N, sigma, p = 1e6, 1.1, 2
    # substitute v = log u so the quadrature sees an exponentially decaying integrand
    ref = float(mpmath.quad(lambda v: v**p * mpmath.exp(-(sigma - 1) * v), [math.log(N), mpmath.inf]))
    assert math.isclose(log_power_tail(N, sigma, p), ref, rel_tol=1e-9)


def test_mvt_rhs_formula():
    assert math.isclose(mvt_rhs(3, 1.1, 1, 2), math.log(4) * 2 / (4 * 0.1**3 * 2))


def test_mvt_probe_small():
    r = mvt_probe(3, 1, 150, 1.1, 0, 1, N_trunc=20_000)
    assert r.terms > 0 and 0 < r.ratio < 100 and r.T_max == 10
    empty = mvt_probe(3, 1, 150, 1.1, 0, 1, N_trunc=100)
    assert empty.terms == 0 and empty.lhs_truncated == 0


def test_mvt_nonincreasing_in_T():
    vals = [mvt_probe(3, 2, 150, 1.2, 0, T, T_max=20, N_trunc=20_000).lhs_truncated for T in (1, 2, 4, 8)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_mvt_domain():
    with pytest.raises(DomainError):
        mvt_probe(3, 1, 100, 1.1, 0, 1)
    with pytest.raises(DomainError):
        mvt_probe(3, 1, 150, 2.5, 0, 1)
    with pytest.raises(DomainError):
        mvt_probe(3, 3, 150, 1.1, 0, 1)
    with pytest.raises(DomainError):
        mvt_probe(3, 1, 150, 1.1, 0, 0.5)


# K / N

def test_kn_constant():
    r = taylor_log_deriv_KN(poly({1: 2.5}), 2, 4)
    assert r.K == 0 and r.N == 0


def test_kn_single_term():
    r = taylor_log_deriv_KN(poly({7: 3}), 1.7 + 2j, 6)
    assert math.isclose(r.K, math.log(7), rel_tol=1e-12)
    assert math.isclose(r.N, math.log(7), rel_tol=1e-12)


def test_kn_conditioning():
    with pytest.raises(ConditioningError):
        taylor_log_deriv_KN(poly({1: 1e-8}), 2, 3)
    with pytest.raises(DomainError):
        taylor_log_deriv_KN(poly({1: 1}), 2, 0)


@pytest.mark.parametrize("seed", range(6))
def test_kn_against_mpmath(seed):
    rng = np.random.default_rng(seed)
    coeffs = {int(n): complex(*rng.normal(size=2)) for n in rng.choice(np.arange(1, 40), 10, replace=False)}
    k = 2 + seed % 5
    r = taylor_log_deriv_KN(poly(coeffs), 2.0 + 0.5j, k)
    K, N = kn_mp(coeffs, 2.0 + 0.5j, k)
    assert math.isclose(r.K, K, rel_tol=1e-9)
    assert math.isclose(r.N, N, rel_tol=1e-9)
    assert r.K / 2 - 1e-9 <= r.N <= 2 * r.K + 1e-9
