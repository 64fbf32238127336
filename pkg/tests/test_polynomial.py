import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ofq.errors import BadExponent, IndexOutOfFamily, LengthMismatch, NotAdmissible, NotHomogeneous
from ofq.fmatrix import from_lambda, params
from ofq.polynomial import (
    AnalyticPoly,
    adjoint,
    adjoint_l2_norm_schur,
    degree_norms,
    fourier_coefficients,
    fourier_hs_norm,
    l2_norm,
    log_dim,
    lp_equiv_norm,
    monomial_l2_norm,
    plancherel_norm,
)

C6 = from_lambda([0.3, 0.5, 0.8, 1.25, 2.0, 1 / 0.3])
P6 = params(C6)


def test_generator_norms(ctx):
    c, p = ctx
    u = AnalyticPoly.monomial((1,), (1,), c)
    assert monomial_l2_norm((1,), (1,), c, p) == pytest.approx(0.2, abs=1e-15)
    assert l2_norm(adjoint(u), p) == pytest.approx(0.8, abs=1e-15)
    assert adjoint_l2_norm_schur(u, p) == pytest.approx(0.8, abs=1e-15)


def test_adjoint_scaling(ctx):
    c, p = ctx
    # u_12^* = (lambda_1 / lambda_2) u_43
    a = adjoint(AnalyticPoly.monomial((1,), (2,), c))
    assert dict(a.terms) == {((4,), (3,)): 0.5}
    assert l2_norm(a, p) == pytest.approx(0.4, abs=1e-15)


def test_adjoint_reverses_order(ctx):
    c, _ = ctx
    a = adjoint(AnalyticPoly.monomial((1, 2), (2, 2), c, 1j))
    (key, x), = a.terms.items()
    assert key == ((3, 4), (3, 3))
    assert x == pytest.approx(-0.5j)


def test_validation(ctx):
    c, _ = ctx
    with pytest.raises(LengthMismatch):
        AnalyticPoly.monomial((1,), (1, 1), c)
    with pytest.raises(NotAdmissible):
        AnalyticPoly.monomial((1, 4), (1, 1), c)
    with pytest.raises(NotHomogeneous):
        (AnalyticPoly.constant(1, c) + AnalyticPoly.monomial((1,), (1,), c)).homogeneous_degree()


def test_zero_terms_dropped(ctx):
    c, _ = ctx
    u = AnalyticPoly.monomial((1,), (1,), c)
    assert len(u + (-1) * u) == 0


def test_degree_norms(ctx):
    c, p = ctx
    f = AnalyticPoly.constant(1, c) + AnalyticPoly.monomial((1,), (1,), c)
    (k0, n0, s0), (k1, n1, s1) = degree_norms(f, p)
    assert (k0, n0, s0) == (0, 1.0, 1.0)
    assert k1 == 1 and n1 == pytest.approx(0.2) and s1 == pytest.approx(0.08)


def test_lp_endpoints(ctx):
    c, p = ctx
    u = AnalyticPoly.monomial((1,), (1,), c)
    assert lp_equiv_norm(u, math.inf, p) == pytest.approx(0.8)
    assert lp_equiv_norm(u, 1, p) == pytest.approx(0.05)
    assert lp_equiv_norm(u, 2, p) == pytest.approx(0.2)
    with pytest.raises(IndexOutOfFamily):
        lp_equiv_norm(AnalyticPoly.monomial((2,), (1,), c), 2, p)
    with pytest.raises(BadExponent):
        lp_equiv_norm(u, 0.5, p)


family = st.sampled_from([1, 2, 3])


@st.composite
def family_polys(draw):
    k = draw(st.integers(0, 4))
    n = draw(st.integers(1, 5))
    terms = {}
    for _ in range(n):
        s = tuple(draw(st.lists(family, min_size=k, max_size=k)))
        t = tuple(draw(st.lists(family, min_size=k, max_size=k)))
        terms[(s, t)] = complex(draw(st.floats(-3, 3)), draw(st.floats(-3, 3)))
    return AnalyticPoly(terms, C6)


@settings(max_examples=100, deadline=None)
@given(family_polys())
def test_lp_at_two_is_l2(f):
    assert lp_equiv_norm(f, 2, P6) == pytest.approx(l2_norm(f, P6), rel=1e-12, abs=1e-300)


@settings(max_examples=100, deadline=None)
@given(family_polys())
def test_adjoint_involution_and_schur(f):
    g = adjoint(adjoint(f))
    for key, x in f.terms.items():
        assert g.terms[key] == pytest.approx(x, rel=1e-13)
    assert l2_norm(adjoint(f), P6) == pytest.approx(adjoint_l2_norm_schur(f, P6), rel=1e-12, abs=1e-300)


@settings(max_examples=100, deadline=None)
@given(family_polys())
def test_plancherel(f):
    assert plancherel_norm(f, P6) == pytest.approx(l2_norm(f, P6), rel=1e-12, abs=1e-300)
    for k, block in fourier_coefficients(f, P6).items():
        nk = dict((kk, n) for kk, n, _ in degree_norms(f, P6))[k]
        assert math.exp(0.5 * log_dim(k, P6)) * fourier_hs_norm(block, C6) == pytest.approx(nk, rel=1e-12)


def test_kac_p_independent():
    c = from_lambda([1, 1, 1])
    p = params(c)
    f = AnalyticPoly({((1, 2), (3, 3)): 1 + 2j, ((2, 1), (1, 1)): -0.5}, c)
    vals = [lp_equiv_norm(f, q, p) for q in (1, 1.5, 2, 4, math.inf)]
    assert max(vals) - min(vals) <= 1e-15 * max(vals)


def test_json_round_trip(ctx):
    c, _ = ctx
    f = AnalyticPoly({((1, 2), (2, 1)): 1 - 2j, ((), ()): 3.0}, c)
    assert AnalyticPoly.from_dict(json.loads(json.dumps(f.to_dict()))) == f


def test_monomial_norm_against_oracle_k2(ctx):
    # brute force: xi^* Q(2)^{-1} xi / Tr Q(2) on the pure tensor e_1 (x) e_2
    from ofq.repdata import hk_oracle, pure_tensor, q_matrix

    c, p = ctx
    B = hk_oracle(4, 2, c)
    Q = q_matrix(B, c, 2)
    xi = B.conj().T @ pure_tensor((1, 2), 4)
    oracle = math.sqrt((xi.conj() @ np.linalg.solve(Q, xi)).real / np.trace(Q).real)
    assert monomial_l2_norm((1, 2), (3, 3), c, p) == pytest.approx(oracle, rel=1e-12)
