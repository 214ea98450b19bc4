import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from framesign import jacobi
from framesign.errors import BadParameter, InsufficientQuadrature, OverflowDetected, RangeTooShort


@pytest.fixture(scope="module")
def szwarc():
    return jacobi.szwarc_coefficients(jacobi.diagonal_sequence("linear", 2002), 0.5)


@pytest.fixture(scope="module")
def trace0(szwarc):
    return jacobi.mate_nevai(szwarc, 0.0, 2000)


def test_szwarc_linear_closed_form(szwarc):
    n = np.arange(1, 50)
    np.testing.assert_allclose(szwarc.a[n], np.sqrt(n * (n + 1)), rtol=1e-15)
    assert szwarc.warnings == ()


def test_constant_diagonal_warns():
    rc = jacobi.szwarc_coefficients(np.full(10, 3.0), 0.5)
    np.testing.assert_allclose(rc.a[1:], 3.0)
    assert rc.warnings


@pytest.mark.parametrize("B", [0.0, 1.0, 1.5])
def test_bad_B(B):
    with pytest.raises(BadParameter):
        jacobi.szwarc_coefficients(np.arange(1.0, 10.0), B)


def test_non_monotone_rejected():
    with pytest.raises(BadParameter):
        jacobi.szwarc_coefficients(np.array([1.0, 3.0, 2.0]), 0.5)


def test_first_polynomials(szwarc):
    for x in (-3.0, 0.0, 2.5):
        p = jacobi.eval_polys(szwarc, x, 3)
        assert p[0] == 1
        assert p[1] == pytest.approx((x - szwarc.b[0]) / szwarc.a[1])


def test_chebyshev_second_kind():
    rc = jacobi.free_coefficients(60)
    theta = math.pi / 3
    p = jacobi.eval_polys(rc, math.cos(theta), 50)
    n = np.arange(51)
    np.testing.assert_allclose(p, np.sin((n + 1) * theta) / math.sin(theta), atol=1e-10)


@pytest.mark.parametrize(
    "rc, oracle",
    [
        (jacobi.legendre_coefficients(30), lambda n, x: math.sqrt(2 * n + 1) * special.eval_legendre(n, x)),
        (jacobi.hermite_coefficients(30), lambda n, x: special.eval_hermite(n, x) / math.sqrt(2.0**n * math.factorial(n))),
        (jacobi.laguerre_coefficients(30), lambda n, x: (-1) ** n * special.eval_laguerre(n, x)),
    ],
)
def test_classical_families_against_scipy(rc, oracle):
    x = np.linspace(-0.9, 0.9, 7) if rc.b[0] == 0 else np.linspace(0.1, 5, 7)
    p = jacobi.eval_polys(rc, x, 25)
    for n in range(26):
        np.testing.assert_allclose(p[n], oracle(n, x), rtol=1e-9, atol=1e-9)


def test_overflow_detected():
    rc = jacobi.free_coefficients(2000)
    with pytest.raises(OverflowDetected):
        jacobi.eval_polys(rc, 1e6, 1999)


def test_three_term_residual(szwarc):
    assert jacobi.three_term_residual(szwarc, 0.7, 500) < 1e-12


def test_regularity_linear(szwarc):
    rc = jacobi.szwarc_coefficients(jacobi.diagonal_sequence("linear", 2000), 0.5)
    rep = jacobi.regularity_report(rc)
    assert rep.variation["a2_over_bb"] == pytest.approx(0.0, abs=1e-12)
    assert rep.last_a2_over_bb == pytest.approx(1.0, abs=1e-12)
    assert rep.target_a2_over_bb == 1.0
    assert abs(rep.last_b_ratio - 1) <= 1e-3
    assert rep.carleman_sum >= 7


def test_lambda_limit(trace0):
    assert abs(trace0.lambda_seq[-1] - 0.5) <= 1e-3
    assert trace0.converged and trace0.f_estimate > 0


def test_identities_hold(trace0, szwarc):
    rep = jacobi.identity_report(trace0, szwarc)
    assert rep.recurrence <= 1e-9
    assert rep.lambda_algebra <= 1e-9
    assert rep.square_form_1 <= 1e-9
    assert rep.square_form_2 <= 1e-9
    assert rep.increment <= 1e-8
    assert rep.bound_next < math.inf and rep.bound_same < math.inf


def test_delta_positive_and_bounded_variation(trace0, szwarc):
    rep = jacobi.delta_recursion_check(trace0, szwarc)
    assert rep.all_positive and rep.min_delta > 0
    assert math.isfinite(rep.eps_sum) and rep.eps_sum < 1
    assert rep.max_residual <= 1e-12


def test_free_case_delta_constant():
    # constant b and a make Lambda constant, so Delta does not move
    rc = jacobi.RecurrenceCoefficients(np.full(400, 10.0), np.full(400, 6.0), B_param=0.5)
    tr = jacobi.mate_nevai(rc, 0.0, 300)
    np.testing.assert_allclose(np.diff(tr.lambda_seq), 0, atol=1e-15)
    np.testing.assert_allclose(tr.delta_seq, tr.delta_seq[0], rtol=1e-10)


def test_trace_outside_spectrum_overflows():
    rc = jacobi.RecurrenceCoefficients(np.full(400, 10.0), np.full(400, 2.5), B_param=0.5)
    with pytest.raises(OverflowDetected):
        jacobi.mate_nevai(rc, 0.0, 399)


def test_trace_too_short(szwarc):
    with pytest.raises(RangeTooShort):
        jacobi.mate_nevai(szwarc, 0.0, 50)


def test_trace_rows(trace0):
    rows = list(trace0.rows())
    assert rows[0][0] == trace0.start_index and math.isnan(rows[0][1])
    assert rows[-1][0] == 2000 and math.isnan(rows[-1][3])


def test_envelope_properties(szwarc):
    env = jacobi.bound_envelope(szwarc, [0.0, 1.0], 1000)
    for i, x in enumerate([0.0, 1.0]):
        N = jacobi.start_index(szwarc, x)
        assert env.c_hat[i] >= szwarc.b[N] * jacobi.eval_polys(szwarc, x, N)[N] ** 2
    longer = jacobi.bound_envelope(szwarc, [0.0, 1.0], 2000)
    assert np.all(longer.c_hat >= env.c_hat)


def test_quadrature_examples(szwarc):
    q1 = jacobi.spectral_quadrature(szwarc, 1)
    assert q1.nodes.tolist() == [szwarc.b[0]] and q1.weights.tolist() == [1.0]
    free = jacobi.free_coefficients(200)
    q4 = jacobi.spectral_quadrature(free, 4)
    np.testing.assert_allclose(q4.nodes, np.sort(np.cos(np.arange(1, 5) * math.pi / 5)), atol=1e-15)
    q400 = jacobi.spectral_quadrature(szwarc, 400)
    assert abs(q400.weights.sum() - 1) <= 1e-12
    assert jacobi.orthonormality_defect(szwarc, q400, 0) <= 1e-12
    assert jacobi.orthonormality_defect(free, jacobi.spectral_quadrature(free, 100), 40) <= 1e-10
    with pytest.raises(InsufficientQuadrature):
        jacobi.orthonormality_defect(free, q4, 2)


def test_quadrature_agrees_with_scipy_gauss_laguerre():
    rc = jacobi.laguerre_coefficients(21)
    q = jacobi.spectral_quadrature(rc, 20)
    x, w = special.roots_laguerre(20)
    np.testing.assert_allclose(q.nodes, x, rtol=1e-12)
    np.testing.assert_allclose(q.weights, w, rtol=1e-8)


def test_discrete_stieltjes_recovers_gauss_rule():
    x, w = special.roots_legendre(30)
    rc, mass = jacobi.discrete_stieltjes(x, w / 2, 20)
    ref = jacobi.legendre_coefficients(20)
    assert mass == pytest.approx(1.0)
    np.testing.assert_allclose(rc.b, 0, atol=1e-13)
    np.testing.assert_allclose(rc.a[1:], ref.a[1:], rtol=1e-12)


@pytest.mark.parametrize("kind", ["linear", "nlog", "power:0.5"])
def test_diagonal_sequences_increase(kind):
    b = jacobi.diagonal_sequence(kind, 100)
    assert np.all(np.diff(b) > 0) and np.all(b > 0)


def test_diagonal_sequence_rejects():
    with pytest.raises(BadParameter):
        jacobi.diagonal_sequence("power:1.5", 10)
    with pytest.raises(BadParameter):
        jacobi.diagonal_sequence("cubic", 10)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 0.9), st.floats(-3, 3))
def test_recurrence_identity_any_B(B, x):
    rc = jacobi.szwarc_coefficients(jacobi.diagonal_sequence("linear", 402), B)
    tr = jacobi.mate_nevai(rc, x, 400)
    rep = jacobi.identity_report(tr, rc)
    assert rep.recurrence <= 1e-9
    assert rep.square_form_1 <= 1e-9 and rep.square_form_2 <= 1e-9


@settings(max_examples=25, deadline=None)
@given(st.integers(8, 60))
def test_gauss_exactness_free(N):
    rc = jacobi.free_coefficients(N + 1)
    q = jacobi.spectral_quadrature(rc, N)
    assert jacobi.orthonormality_defect(rc, q, (N - 2) // 2) <= 1e-10
