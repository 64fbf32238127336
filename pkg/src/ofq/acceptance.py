"""The ten acceptance criteria as plain functions.

Each ``criterion_<n>()`` returns a :class:`Result`; nothing raises on a
failed check, so a report can list every outcome. Used by ``ofq repro`` and
by the test suite.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from types import SimpleNamespace

import numpy as np
from scipy.stats import unitary_group

from . import heat, interp, spectral
from .fmatrix import canonicalize, from_lambda, params
from .haagerup import r_value, upper_bound
from .polynomial import (
    AnalyticPoly,
    adjoint,
    adjoint_l2_norm_schur,
    l2_norm,
    lp_equiv_norm,
    monomial_l2_norm,
)
from .repdata import (
    all_tuples,
    chebyshev_u,
    contraction_maps,
    hk_oracle,
    is_admissible,
    pure_tensor,
    q_matrix,
)

__all__ = ["Result", "CRITERIA", "run_all"]

LAM = (0.5, 1.0, 1.0, 2.0)


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    measured: dict = field(default_factory=dict)

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} [{self.number:2d}] {self.name}: {self.detail} ({self.seconds:.2f}s)"

    def to_dict(self):
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "measured": self.measured,
        }


def _random_canonical(rng, N):
    eps = -1 if (N % 2 == 0 and rng.random() < 0.5) else 1
    half = N // 2
    mags = np.sort(rng.uniform(0.2, 1.0, half))
    mags[rng.random(half) < 0.2] = 1.0
    mags.sort()
    signs = rng.choice([-1.0, 1.0], half)
    lam = np.zeros(N)
    for i in range(half):
        lam[i] = signs[i] * mags[i]
        lam[N - 1 - i] = eps / lam[i]
    if N % 2:
        lam[half] = rng.choice([-1.0, 1.0])
    return from_lambda(lam, eps)


def criterion_1(n_cases=200, seed=1):
    rng = np.random.default_rng(seed)
    worst_lam = worst_res = 0.0
    for _ in range(n_cases):
        N = int(rng.integers(2, 9))
        c0 = _random_canonical(rng, N)
        v = unitary_group.rvs(N, random_state=rng)
        F = v @ c0.matrix() @ v.T
        c, w = canonicalize(F)
        worst_lam = max(worst_lam, float(np.max(np.abs(np.sort(c.abs_lam) - np.sort(c0.abs_lam)))))
        worst_res = max(worst_res, float(np.max(np.abs(w @ F @ w.T - c.matrix()))))
    ok = worst_lam <= 1e-8 and worst_res <= 1e-8
    return ok, f"{n_cases} cases, max |lambda| error {worst_lam:.1e}, max residual {worst_res:.1e}", {
        "lambda_error": worst_lam, "residual": worst_res}


def criterion_2():
    worst = 0.0
    for x in np.linspace(2.0001, 12.0, 120):
        for k in range(61):
            a = chebyshev_u(k, x, method="recursion")
            b = chebyshev_u(k, x, method="closed")
            worst = max(worst, abs(a - b) / abs(b))
    c = from_lambda(LAM)
    p = params(c)
    trace_err, dims = 0.0, []
    for k in range(4):
        B = hk_oracle(4, k, c)
        Q = q_matrix(B, c, k)
        d = chebyshev_u(k, p.N_q)
        trace_err = max(trace_err, abs(np.trace(Q).real - d), abs(np.trace(np.linalg.inv(Q)).real - d))
        dims.append((B.shape[1], chebyshev_u(k, 4.0, method="recursion")))
    dims_ok = all(a == round(b) for a, b in dims)
    ok = worst <= 1e-10 and trace_err <= 1e-8 and dims_ok
    return ok, (f"recursion vs closed rel {worst:.1e}; Tr Q(k) error {trace_err:.1e}; "
                f"dim H_k = {[a for a, _ in dims]}"), {"chebyshev_rel": worst, "trace_error": trace_err}


def criterion_3():
    cases = [((0.5, 2.0), 1), ((0.5, -2.0), -1), ((0.5, 1.0, 2.0), 1),
             ((0.5, 1.0, 1.0, 2.0), 1), ((0.5, -1.0, 1.0, -2.0), -1)]
    checked = mismatches = 0
    for lam, eps in cases:
        c = from_lambda(lam, eps)
        N = c.N
        for k in range(1, 5):
            if N ** k > 256:
                continue
            C = contraction_maps(c.matrix(), k)
            B = hk_oracle(N, k, c)
            for t in all_tuples(N, k):
                xi = pure_tensor(t, N)
                in_kernel = C.shape[0] == 0 or np.max(np.abs(C @ xi)) <= 1e-12
                in_hk = np.linalg.norm(xi - B @ (B.conj().T @ xi)) <= 1e-8
                adm = is_admissible(t, N)
                checked += 1
                mismatches += (adm != in_kernel) + (adm != in_hk)
    return mismatches == 0, f"{checked} tuples, {mismatches} disagreements", {"tuples": checked}


def _random_family_poly(rng, c, idx):
    k = int(rng.integers(0, 5))
    terms = {}
    for _ in range(int(rng.integers(1, 6))):
        s = tuple(int(a) for a in rng.choice(idx, k))
        t = tuple(int(a) for a in rng.choice(idx, k))
        if is_admissible(s, c.N) and is_admissible(t, c.N):
            terms[(s, t)] = complex(rng.normal(), rng.normal())
    if not terms:
        terms = {((idx[0],) * k, (idx[0],) * k): 1.0}
    return AnalyticPoly(terms, c)


def criterion_4(seed=4):
    c = from_lambda(LAM)
    p = params(c)
    # oracle: brute-force H_1 and Q(1), Schur relations with xi = e_1
    B = hk_oracle(4, 1, c)
    Q = q_matrix(B, c, 1)
    d = np.trace(Q).real
    xi = np.zeros(4)
    xi[0] = 1.0
    oracle = math.sqrt((xi @ np.linalg.inv(Q) @ xi).real / d)
    oracle_adj = math.sqrt((xi @ Q @ xi).real / d)
    u = AnalyticPoly.monomial((1,), (1,), c)
    vals = (monomial_l2_norm((1,), (1,), c, p), l2_norm(u, p), oracle)
    adj_vals = (l2_norm(adjoint(u), p), adjoint_l2_norm_schur(u, p), oracle_adj)
    err = max(abs(v - 0.2) for v in vals) + max(abs(v - 0.8) for v in adj_vals)

    rng = np.random.default_rng(seed)
    lp_err = 0.0
    lams = [(0.3, 0.5, 0.8, 1.25, 2.0, 1 / 0.3), (0.5, 1.0, 1.0, 2.0), (0.25, 0.6, 1 / 0.6, 4.0)]
    for i in range(100):
        cc = from_lambda(lams[i % len(lams)])
        pp = params(cc)
        f = _random_family_poly(rng, cc, list(range(1, cc.n + 1)))
        a, b = lp_equiv_norm(f, 2, pp), l2_norm(f, pp)
        lp_err = max(lp_err, abs(a - b) / b)

    kac_spread = 0.0
    for lam in [(1.0, 1.0, 1.0), (1.0, 1.0, 1.0, 1.0, 1.0)]:
        cc = from_lambda(lam)
        pp = params(cc)
        for _ in range(20):
            f = _random_family_poly(rng, cc, list(range(1, cc.N + 1)))
            vs = [lp_equiv_norm(f, q, pp) for q in (1, 1.5, 2, 3, math.inf)]
            kac_spread = max(kac_spread, (max(vs) - min(vs)) / max(vs))
    ok = err <= 2e-12 and lp_err <= 1e-12 and kac_spread <= 1e-12
    return ok, (f"||u11||, ||u11*|| error {err:.1e}; lp(2) vs l2 rel {lp_err:.1e}; "
                f"Kac p-spread {kac_spread:.1e}"), {"norm_error": err, "lp_rel": lp_err}


def criterion_5():
    exact = lim = deriv = 0.0
    for Nq in (2.5, 6.25, 10.0):
        P = SimpleNamespace(N_q=Nq)
        exact = max(exact, abs(heat.ck(1, P) - 1 / Nq) * Nq,
                    abs(heat.ck(2, P) - 2 * Nq / (Nq * Nq - 1)) / (2 * Nq / (Nq * Nq - 1)))
        s = math.sqrt(Nq * Nq - 4)
        lim = max(lim, abs(heat.ck(200, P) - 201 / s + Nq / (Nq * Nq - 4)))
        for k in range(1, 31):
            a, b = heat.ck(k, P), heat.ck_numeric(k, Nq)
            deriv = max(deriv, abs(a - b) / abs(a))
    # "exactly" read as: within a few units in the last place
    ok = exact <= 4 * np.finfo(float).eps and lim <= 1e-6 and deriv <= 1e-6
    return ok, f"c1, c2 rel {exact:.1e}; k=200 limit error {lim:.1e}; derivative rel {deriv:.1e}", {
        "exact_rel": exact, "limit_error": lim, "derivative_rel": deriv}


def criterion_6(seed=6):
    c = from_lambda(LAM)
    p = params(c)
    tF = heat.optimal_time(p)
    target = 2 * math.sqrt(35.0625) * math.log(2)
    lo, hi = 0.5 * tF, 2.0 * tF
    while hi - lo > 1e-13 * tF:
        mid = 0.5 * (lo + hi)
        if heat.classify_multiplier(heat.heat_family(mid, p), p) == heat.BOUNDED:
            hi = mid
        else:
            lo = mid
    flip = abs(0.5 * (lo + hi) - tF)
    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(50):
        while True:
            cc = _random_canonical(rng, int(rng.integers(2, 9)))
            if not cc.kac:
                break
        pp = params(cc)
        t = heat.optimal_time(pp)
        lf = math.log(pp.F_norm)
        if not (2 * (pp.N_q - 2) * lf < t < 2 * pp.N_q * lf):
            bad += 1
    ok = abs(tF - target) <= 1e-12 * target and flip <= 1e-9 and bad == 0
    return ok, f"t_F = {tF:.10f}; classifier flip off by {flip:.1e}; sandwich violations {bad}/50", {
        "t_F": tF, "flip_error": flip}


def criterion_7(M=400, kmax=10):
    c = from_lambda(LAM)
    p = params(c)
    lower, exact_err, ratios = [], 0.0, []
    for k in range(kmax + 1):
        x = (0.0,) * k + (1.0,)
        g = spectral.SingleGenPoly(1, 1, x, c)
        l2 = monomial_l2_norm((1,) * k, (1,) * k, c, p)
        lo = spectral.cstar_lower_bound(g, M, p)
        R = r_value([((1,) * k, (1,) * k)], c) if k else 1.0
        up = upper_bound(k, R, p)
        closed = p.C_q * (1 - 4.0 ** (k + 1)) / (1 - 4.0)
        exact_err = max(exact_err, abs(up - closed) / closed)
        lower.append(lo / l2)
        ratios.append(up * l2 / lo)
    succ = [b / a for a, b in zip(lower, lower[1:])]
    grows = all(s > 1 for s in succ)
    rate_err = abs(succ[-1] - 4.0) / 4.0
    kappa = max(ratios)
    ok = grows and rate_err <= 0.1 and exact_err <= 1e-12 and kappa <= 1e3 and min(ratios) >= 1 - 1e-12
    return ok, (f"successive ratio at k={kmax}: {succ[-1]:.4f} (|.-4|/4 = {rate_err:.1e}); "
                f"upper closed-form rel {exact_err:.1e}; max upper/lower {kappa:.3f}"), {
        "successive_ratios": succ, "upper_over_lower": ratios, "kappa": kappa}


def criterion_8(seed=8, n_inputs=50):
    c = from_lambda(LAM)
    p = params(c)
    rng = np.random.default_rng(seed)
    mono_bad = order_bad = 0
    agree = 0.0
    for _ in range(n_inputs):
        deg = int(rng.integers(0, 9))
        s, t = (int(a) for a in rng.integers(1, 5, 2))
        g = spectral.SingleGenPoly(s, t, tuple(rng.random(deg + 1)), c)
        upper = spectral.cstar_upper_bound(g, p)
        prev = 0.0
        for M in (50, 100, 200, 400):
            A = spectral.toeplitz_truncation(g, M, p)
            sig, _ = spectral.lanczos_sigma_max(A)
            if sig < prev * (1 - 1e-12):
                mono_bad += 1
            if sig > upper * (1 + 1e-12):
                order_bad += 1
            prev = sig
            if M <= 200:
                ref = spectral.svd_sigma_max(A)
                pw, _ = spectral.power_sigma_max(A)
                agree = max(agree, abs(pw - ref) / ref, abs(sig - ref) / ref)
    ok = mono_bad == 0 and order_bad == 0 and agree <= 1e-9
    return ok, (f"{n_inputs} inputs: monotonicity violations {mono_bad}, lower > upper {order_bad}, "
                f"max disagreement power/Lanczos vs SVD {agree:.1e}"), {"agreement": agree}


def criterion_9(seed=9):
    rng = np.random.default_rng(seed)
    lams = [LAM, (0.3, 0.5, 0.8, 1.25, 2.0, 1 / 0.3), (0.25, 4.0)]
    worst = 0.0
    for i in range(100):
        c = from_lambda(lams[i % len(lams)])
        p = params(c)
        pe = float(rng.uniform(1.05, 1.95))
        x = rng.normal(size=int(rng.integers(1, 40)))
        rep = interp.separation_witness(pe, x, p, c)
        closed = math.fsum(abs(v) ** pe for v in x) ** (1 / pe)
        worst = max(worst, abs(rep.lhs - closed) / closed)
    c = from_lambda(LAM)
    p = params(c)
    pe = 1.5
    ns = [2 ** j for j in range(4, 11)]
    ratio_err = 0.0
    ratios = []
    for n in ns:
        r = interp.separation_witness(pe, np.ones(n + 1), p).ratio
        ratio_err = max(ratio_err, abs(r - (n + 1) ** (1 / pe - 0.5)) / r)
        ratios.append(r)
    slope = float(np.polyfit(np.log(ns), np.log(ratios), 1)[0])
    slope_err = abs(slope - (1 / pe - 0.5)) / (1 / pe - 0.5)
    ok = worst <= 1e-9 and ratio_err <= 1e-9 and slope_err <= 0.05
    return ok, (f"witness vs (sum |x|^p)^(1/p) rel {worst:.1e}; ones-ratio rel {ratio_err:.1e}; "
                f"slope {slope:.4f} vs {1 / pe - 0.5:.4f} ({100 * slope_err:.1f}%)"), {
        "slope": slope, "witness_rel": worst}


def criterion_10(K=400):
    c = from_lambda(LAM)
    p = params(c)
    base = -2.0 * math.log(p.F_norm)
    points = [(d, a) for d in (-0.3, -0.03, -0.003, 0.003, 0.03, 0.3) for a in (-2.0, 0.0, 1.0)]
    points += [(0.0, a) for a in (-2.0, -1.5, -1.0, -0.75, -0.6, -0.55, -0.5, -0.25, 0.0, 0.5, 1.0, 2.0)]
    agree = 0
    rows = []
    for d, a in points:
        fam = heat.MultiplierFamily(A=1.0, rho=math.exp(base + d), alpha=a)
        closed = heat.classify_multiplier(fam, p)
        probe = heat.series_probe(fam.phi, p, K).verdict
        match = (closed == heat.BOUNDED) == (probe == heat.BOUNDED) and probe != heat.INCONCLUSIVE
        agree += match
        rows.append((d, a, closed, probe))
    return agree == len(points), f"{agree}/{len(points)} verdicts agree", {"points": rows}


CRITERIA = [
    (1, "canonical-form round-trip", criterion_1),
    (2, "Chebyshev/dimension suite", criterion_2),
    (3, "admissibility vs kernel membership", criterion_3),
    (4, "norm formulas", criterion_4),
    (5, "heat spectral data", criterion_5),
    (6, "ultracontractivity threshold", criterion_6),
    (7, "strong-Haagerup optimality", criterion_7),
    (8, "Toeplitz certification", criterion_8),
    (9, "interpolation witness", criterion_9),
    (10, "multiplier classifier", criterion_10),
]


def run(number):
    for num, name, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            try:
                ok, detail, measured = fn()
            except Exception as exc:  # a crash is a failed criterion, reported as such
                ok, detail, measured = False, f"{type(exc).__name__}: {exc}", {}
            return Result(num, name, bool(ok), detail, time.perf_counter() - t0, measured)
    raise KeyError(number)


def run_all():
    return [run(num) for num, _, _ in CRITERIA]
