import math

import numpy as np
import pytest

import oracle_values as ov
from ofq.errors import ConvergenceFailure, NegativeCoefficient, NotAdmissible, OFQError
from ofq.fmatrix import from_lambda, params
from ofq.polynomial import l2_norm, AnalyticPoly
from ofq.spectral import (
    SingleGenPoly,
    cstar_lower_bound,
    cstar_upper_bound,
    default_M,
    lanczos_sigma_max,
    power_sigma_max,
    sharp_reference,
    svd_sigma_max,
    toeplitz_report,
    toeplitz_truncation,
)


def test_truncation_entries(ctx):
    c, p = ctx
    A = toeplitz_truncation(SingleGenPoly(1, 1, (0, 1), c), 1, p).toarray()
    assert A.shape == (3, 2)
    assert A[1, 0] == pytest.approx(ov.A10, rel=1e-14)
    assert A[2, 1] == pytest.approx(ov.A21, rel=1e-14)
    assert A[0, 0] == 0 and A[2, 0] == 0


def test_weight_limit(ctx):
    c, p = ctx
    A = toeplitz_truncation(SingleGenPoly(1, 1, (0, 1), c), 300, p)
    assert A[300, 299] == pytest.approx(math.sqrt(4 / p.r_q), rel=1e-12)


def test_constant_is_one(ctx):
    c, p = ctx
    for M in (0, 5, 50):
        assert cstar_lower_bound(SingleGenPoly(1, 1, (1.0,), c), M, p) == pytest.approx(1.0, rel=1e-14)
    assert sharp_reference(SingleGenPoly(1, 1, (1.0,), c), p) == 1


def test_sharp_reference_values(ctx):
    c, p = ctx
    assert sharp_reference(SingleGenPoly(1, 1, (0, 1), c), p) == pytest.approx(0.8, rel=1e-15)
    assert sharp_reference(SingleGenPoly(1, 1, (0, 0, 1), c), p) == pytest.approx(ov.SHARP_E2, rel=1e-14)
    with pytest.raises(NegativeCoefficient):
        sharp_reference(SingleGenPoly(1, 1, (1, -1), c), p)


def test_invariants(ctx):
    c, _ = ctx
    with pytest.raises(NotAdmissible):
        SingleGenPoly(2, 1, (1,), from_lambda([0.5, 1, 2]))
    with pytest.raises(OFQError):
        SingleGenPoly(5, 1, (1,), c)


def test_generator_lower_bound(ctx):
    c, p = ctx
    g = SingleGenPoly(1, 1, (0, 1), c)
    vals = [cstar_lower_bound(g, M, p) for M in (10, 50, 200, 400)]
    assert all(b >= a * (1 - 1e-12) for a, b in zip(vals, vals[1:]))
    assert vals[0] >= 0.8
    assert vals[-1] >= 4 * l2_norm(AnalyticPoly.monomial((1,), (1,), c), p)
    assert vals[-1] <= cstar_upper_bound(g, p)


def test_three_routes_agree(ctx):
    c, p = ctx
    rng = np.random.default_rng(0)
    for _ in range(10):
        x = tuple(rng.random(int(rng.integers(1, 7))))
        A = toeplitz_truncation(SingleGenPoly(1, 2, x, c), 100, p)
        ref = svd_sigma_max(A)
        assert power_sigma_max(A)[0] == pytest.approx(ref, rel=1e-9)
        assert lanczos_sigma_max(A)[0] == pytest.approx(ref, rel=1e-12)


def test_power_lower_bound_on_clustered_input(ctx):
    # monomial inputs have a clustered top spectrum; the iterate is still a lower bound
    c, p = ctx
    A = toeplitz_truncation(SingleGenPoly(1, 1, (0, 0, 0, 1), c), 200, p)
    sig, _ = power_sigma_max(A)
    ref = svd_sigma_max(A)
    assert sig <= ref * (1 + 1e-14)
    assert sig == pytest.approx(ref, rel=1e-8)


def test_convergence_failure(ctx):
    c, p = ctx
    A = toeplitz_truncation(SingleGenPoly(1, 1, (1, 1, 1), c), 200, p)
    with pytest.raises(ConvergenceFailure):
        power_sigma_max(A, max_iter=3)


def test_complex_and_scale(ctx):
    c, p = ctx
    x = (0.3, 1.0, 0.5)
    g = SingleGenPoly(2, 1, x, c)
    gc = SingleGenPoly(2, 1, tuple(v * 1j for v in x), c)
    g3 = SingleGenPoly(2, 1, tuple(3 * v for v in x), c)
    lo = cstar_lower_bound(g, 100, p)
    assert cstar_lower_bound(gc, 100, p) == pytest.approx(lo, rel=1e-12)
    assert cstar_lower_bound(g3, 100, p) == pytest.approx(3 * lo, rel=1e-12)
    assert cstar_upper_bound(g3, p) == pytest.approx(3 * cstar_upper_bound(g, p), rel=1e-14)
    assert sharp_reference(g3, p) == pytest.approx(3 * sharp_reference(g, p), rel=1e-14)


def test_sandwich_random(ctx):
    c, p = ctx
    rng = np.random.default_rng(5)
    for _ in range(30):
        g = SingleGenPoly(1, 1, tuple(rng.random(int(rng.integers(1, 10)))), c)
        assert l2_norm(AnalyticPoly({((1,) * k, (1,) * k): v for k, v in enumerate(g.x)}, c), p) \
            <= cstar_lower_bound(g, 400, p) * (1 + 1e-12)
        assert cstar_lower_bound(g, 400, p) <= cstar_upper_bound(g, p)


def test_report(ctx):
    c, p = ctx
    rep = toeplitz_report(SingleGenPoly(1, 1, (0, 0, 1), c), default_M(2), p)
    d = rep.to_dict()
    assert set(d) == {"lower", "upper", "sharp_reference", "M", "converged", "iterations"}
    assert d["M"] == 400 and d["lower"] <= d["upper"]
    assert d["sharp_reference"] == pytest.approx(ov.SHARP_E2)
