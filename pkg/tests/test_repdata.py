import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ofq.errors import IndexOutOfRange, NotAdmissible, TooLarge
from ofq.fmatrix import from_lambda, params
from ofq.repdata import (
    all_tuples,
    chebyshev_u,
    classical_dim,
    contraction_maps,
    dim_table,
    hk_oracle,
    is_admissible,
    log_chebyshev_u,
    pure_tensor,
    q_matrix,
    q_weight,
    quantum_dim,
)


def test_small_values():
    assert chebyshev_u(0, 6.25) == 1
    assert chebyshev_u(1, 6.25) == 6.25
    assert chebyshev_u(2, 6.25, method="recursion") == 38.0625
    assert [classical_dim(k, 4) for k in range(4)] == [1, 4, 15, 56]
    assert classical_dim(5, 2) == 6


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 60), st.floats(2.0001, 12.0))
def test_recursion_matches_closed_form(k, x):
    a = chebyshev_u(k, x, method="recursion")
    b = chebyshev_u(k, x, method="closed")
    assert abs(a - b) <= 1e-10 * b


def test_log_form_large_k():
    lg = log_chebyshev_u(5000, 6.25)
    r = (6.25 + math.sqrt(6.25 ** 2 - 4)) / 2
    assert lg == pytest.approx(5001 * math.log(r) - math.log(r - 1 / r), rel=1e-14)
    assert math.isinf(chebyshev_u(5000, 6.25))


def test_dim_table_overflow(ctx):
    _, p = ctx
    tab = dim_table(p, 400)
    assert math.isinf(tab.d[400]) and math.isfinite(tab.log_d[400])
    assert tab.ratio(399, 400) == pytest.approx(1 / p.r_q, rel=1e-12)
    assert tab.d[3] == quantum_dim(3, p)


def test_admissible():
    assert is_admissible((1, 1, 2), 4)
    assert not is_admissible((1, 4), 4)
    assert not is_admissible((2, 3, 1), 4)
    assert is_admissible((), 4)
    with pytest.raises(IndexOutOfRange):
        is_admissible((0,), 4)


def test_q_weight(ctx):
    c, _ = ctx
    assert q_weight((1, 1), c) == 16
    with pytest.raises(NotAdmissible):
        q_weight((1, 4), c)


@pytest.mark.parametrize("lam,sign", [((0.5, 1, 1, 2), 1), ((0.5, -1, 1, -2), -1), ((1, 1, 1), 1), ((0.4, 2.5), 1)])
def test_schur_traces(lam, sign):
    c = from_lambda(lam, sign)
    p = params(c) if not c.kac or c.N > 2 else None
    for k in range(4):
        if c.N ** k > 500:
            break
        B = hk_oracle(c.N, k, c)
        assert B.shape[1] == round(classical_dim(k, c.N))
        Q = q_matrix(B, c, k)
        d = quantum_dim(k, p)
        assert np.trace(Q).real == pytest.approx(d, rel=1e-10)
        assert np.trace(np.linalg.inv(Q)).real == pytest.approx(d, rel=1e-10)


def test_admissible_kernel_exhaustive():
    c = from_lambda((0.5, 1, 1, 2))
    C = contraction_maps(c.matrix(), 3)
    for t in all_tuples(4, 3):
        in_kernel = np.max(np.abs(C @ pure_tensor(t, 4))) < 1e-12
        assert in_kernel == is_admissible(t, 4)


def test_oracle_guard(ctx):
    c, _ = ctx
    with pytest.raises(TooLarge):
        hk_oracle(4, 8, c)
