import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle_values as ov
from ofq.errors import OFQError
from ofq.fmatrix import from_lambda, params
from ofq.heat import (
    BOUNDED,
    INCONCLUSIVE,
    UNBOUNDED,
    UNBOUNDED_EVIDENCE,
    HeatSpec,
    MultiplierFamily,
    apply_heat,
    ck,
    classify_multiplier,
    heat_family,
    optimal_time,
    series_probe,
)
from ofq.polynomial import AnalyticPoly, degree_norms, l2_norm


def test_ck_values(ctx):
    _, p = ctx
    assert ck(0, p) == 0
    for k, ref in enumerate(ov.C_K, start=1):
        assert ck(k, p) == pytest.approx(ref, rel=1e-13)


def test_ck_monotone(ctx):
    _, p = ctx
    vals = [ck(k, p) for k in range(300)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_optimal_time(ctx):
    _, p = ctx
    assert optimal_time(p) == pytest.approx(ov.T_F, rel=1e-14)
    assert optimal_time(params(from_lambda([1, 1, 1]))) == 0


def test_heat_family_asymptotics(ctx):
    _, p = ctx
    t = 3.0
    fam = heat_family(t, p)
    for k in (20, 40):
        assert fam.phi(k) == pytest.approx(math.exp(-t * ck(k, p)), rel=1e-12)


def test_classifier_examples(ctx):
    _, p = ctx
    b = p.F_norm ** -2
    assert classify_multiplier(MultiplierFamily(1, b, 0), p) == UNBOUNDED
    assert classify_multiplier(MultiplierFamily(1, b, -0.5), p) == UNBOUNDED
    assert classify_multiplier(MultiplierFamily(1, b, -0.6), p) == BOUNDED
    assert classify_multiplier(MultiplierFamily(1, b, -1), p) == BOUNDED
    assert classify_multiplier(MultiplierFamily(1, 0.9 * b, 5), p) == BOUNDED
    assert classify_multiplier(MultiplierFamily(1, 1.1 * b, -5), p) == UNBOUNDED


def test_heat_classifier_threshold(ctx):
    _, p = ctx
    tF = optimal_time(p)
    assert classify_multiplier(heat_family(tF * (1 + 1e-9), p), p) == BOUNDED
    assert classify_multiplier(heat_family(tF * (1 - 1e-9), p), p) == UNBOUNDED


def test_apply_heat(ctx):
    c, p = ctx
    f = AnalyticPoly({((), ()): 2.0, ((1,), (2,)): 1.0, ((1, 1), (2, 2)): -1j}, c)
    assert apply_heat(f, 0, p) == f
    g = apply_heat(f, 1.5, p)
    assert g.terms[((), ())] == 2.0
    expected = math.sqrt(math.fsum(math.exp(-3.0 * ck(k, p)) * n ** 2 for k, n, _ in degree_norms(f, p)))
    assert l2_norm(g, p) == pytest.approx(expected, rel=1e-14)
    with pytest.raises(OFQError):
        apply_heat(f, -1, p)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 5), st.floats(0, 5))
def test_semigroup_and_contraction(s, t):
    c = from_lambda([0.5, 1, 1, 2])
    p = params(c)
    spec = HeatSpec(p)
    f = AnalyticPoly({((), ()): 1.0, ((1,), (3,)): 2.0, ((2, 2, 2), (1, 1, 1)): 0.5j}, c)
    a = apply_heat(apply_heat(f, s, p, spec), t, p, spec)
    b = apply_heat(f, s + t, p, spec)
    for key, x in b.terms.items():
        assert a.terms[key] == pytest.approx(x, rel=1e-12, abs=1e-300)
    assert l2_norm(b, p) <= l2_norm(f, p) * (1 + 1e-15)


def test_probe_heat(ctx):
    _, p = ctx
    tF = optimal_time(p)
    spec = HeatSpec(p)
    good = series_probe(lambda k: math.exp(-2 * tF * spec.c(k)), p, 60)
    assert good.verdict == BOUNDED and good.tail_bound < 1e-6
    assert good.ratio == pytest.approx(p.F_norm ** -4, rel=1e-9)
    bad = series_probe(lambda k: math.exp(-0.5 * tF * spec.c(k)), p, 60)
    assert bad.verdict == UNBOUNDED_EVIDENCE and bad.ratio > 1


def test_probe_supplied_ratio(ctx):
    _, p = ctx
    phi = [1.0, 0.5, 0.1] + [0.0] * 20
    res = series_probe(phi, p, 22, ratio_bound=0)
    assert res.verdict == BOUNDED and res.tail_bound == 0 and res.certified
    assert res.partial_sum == pytest.approx(1 + 0.25 * 16 + 0.01 * 256)
    assert series_probe(phi, p, 22, ratio_bound=1.5).verdict == INCONCLUSIVE


def test_probe_irregular_is_not_overclaimed(ctx):
    _, p = ctx
    b = p.F_norm ** -2
    # oscillating amplitude at the boundary: not in the fitted family
    phi = [b ** k * (2 + math.sin(k)) for k in range(200)]
    assert series_probe(phi, p, 199).verdict == INCONCLUSIVE


def test_spec_thread_safety(ctx):
    from concurrent.futures import ThreadPoolExecutor

    _, p = ctx
    spec = HeatSpec(p)
    with ThreadPoolExecutor(8) as pool:
        vals = list(pool.map(spec.c, [k % 50 for k in range(2000)]))
    assert vals[:50] == [ck(k, p) for k in range(50)]
