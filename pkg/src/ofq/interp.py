"""Fourier-side interpolation functionals and the L^p vs L^{p,p} witness.

Both functionals only see the degree norms ``||f_k||_2``; the Fourier form
``sqrt(d_k) ||f^(k) Q(k)^{1/2}||_{S^2}`` is evaluated alongside as a check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadExponent, KacContext, OFQError
from .polynomial import (
    AnalyticPoly,
    _log_degree_norms,
    degree_norms,
    fourier_coefficients,
    fourier_hs_norm,
    log_dim,
)

__all__ = ["l1_functional", "lorentz_functional", "WitnessReport", "separation_witness"]

CHECK_TOL = 1e-12
WITNESS_TOL = 1e-9


def _fourier_degree_norms(f, params):
    """``{k: sqrt(d_k) ||f^(k) Q(k)^{1/2}||_{S^2}}`` from the Fourier coefficients."""
    out = {}
    for k, block in fourier_coefficients(f, params).items():
        out[k] = math.exp(0.5 * log_dim(k, params)) * fourier_hs_norm(block, f.c)
    return out


def _check(a, b, what):
    # the Fourier form works in linear scale; skip it where that under- or overflows
    if not (1e-280 < a < 1e280 and 1e-280 < b < 1e280):
        return
    if abs(a - b) > CHECK_TOL * max(abs(a), abs(b)):
        raise AssertionError(f"{what}: simplified {a!r} vs Fourier form {b!r}")


def l1_functional(f, params):
    """``sup_k ||F||^{-2k} ||f_k||_2`` (weak-type functional)."""
    log_F = math.log(params.F_norm)
    raw = _fourier_degree_norms(f, params)
    best = 0.0
    for k, nk, _ in degree_norms(f, params):
        val = nk * math.exp(-2.0 * k * log_F)
        _check(val, raw[k] * math.exp(-2.0 * k * log_F), f"degree {k}")
        best = max(best, val)
    return best


def _lorentz_sum(log_norms, p, log_F):
    """``(sum_k ||F||^{-2k(2-p)} ||f_k||^p)^{1/p}`` from ``[(k, log ||f_k||_2)]``."""
    terms = [math.exp(p * ln - 2.0 * k * (2.0 - p) * log_F) for k, ln in log_norms]
    return math.fsum(terms) ** (1.0 / p)


def _check_p(p, hi=2.0, hi_open=False):
    p = float(p)
    ok = p > 1.0 and (p < hi if hi_open else p <= hi)
    if not ok:
        rng = f"(1, {hi})" if hi_open else f"(1, {hi}]"
        raise BadExponent(f"p must lie in {rng}, got {p}")
    return p


def lorentz_functional(f, p, params):
    """``(sum_k ||F||^{-2k(2-p)} ||f_k||_2^p)^{1/p}`` for ``1 < p <= 2``."""
    p = _check_p(p)
    log_F = math.log(params.F_norm)
    raw = _fourier_degree_norms(f, params)
    logs = list(_log_degree_norms(f, params).items())
    for k, ln in logs:
        _check(math.exp(ln), raw[k], f"degree {k}")
    return _lorentz_sum(logs, p, log_F)


@dataclass(frozen=True)
class WitnessReport:
    p: float
    x: tuple
    lhs: float
    rhs_bound: float
    ratio: float
    n: int

    def to_dict(self):
        return {
            "p": self.p,
            "x": list(self.x),
            "lhs": self.lhs,
            "rhs_bound": self.rhs_bound,
            "ratio": self.ratio,
            "n": self.n,
        }


# past this the witness coefficients overflow a double; the log path is used alone
_POLY_CHECK_MAX_LOG = 600.0


def separation_witness(p, x, params, c=None):
    """Witness ``f = sum_k x_k sqrt(d_k) ||F||^{(4-p)k/p} (u_11)^k`` for ``1 < p < 2``.

    ``lhs`` is the Lorentz-side functional of ``f``, which simplifies to
    ``(sum |x_k|^p)^{1/p}``; ``rhs_bound = (sum |x_k|^2)^{1/2}`` is the L^2 norm of
    ``g = sum_k x_k sqrt(d_k) ||F||^{-k} (u_11^*)^k``, which dominates the L^p side.
    Both are evaluated in the log domain from the monomial norms
    ``||(u_11)^k||_2 = ||F||^{-k} / sqrt(d_k)`` and ``||(u_11^*)^k||_2 = ||F||^k / sqrt(d_k)``.
    """
    p = _check_p(p, hi_open=True)
    if params.kac:
        raise KacContext("Kac type: the witness family separates nothing")
    x = tuple(float(v) for v in x)
    if not x:
        raise OFQError("empty coefficient vector")
    n = len(x) - 1
    log_F = math.log(params.F_norm)

    f_logs, g_sq = [], []
    for k, xk in enumerate(x):
        if xk == 0:
            continue
        ld = log_dim(k, params)
        coef = math.log(abs(xk)) + 0.5 * ld + (4.0 - p) * k / p * log_F
        f_logs.append((k, coef - k * log_F - 0.5 * ld))
        g_coef = math.log(abs(xk)) + 0.5 * ld - k * log_F
        g_sq.append(math.exp(2.0 * (g_coef + k * log_F - 0.5 * ld)))
    lhs = _lorentz_sum(f_logs, p, log_F) if f_logs else 0.0
    rhs = math.sqrt(math.fsum(g_sq))

    closed = math.fsum(abs(v) ** p for v in x) ** (1.0 / p)
    if abs(lhs - closed) > WITNESS_TOL * max(closed, 1e-300):
        raise AssertionError(f"witness functional {lhs!r} differs from (sum |x|^p)^(1/p) = {closed!r}")

    if c is not None and (n == 0 or 0.5 * log_dim(n, params) + (4.0 - p) * n / p * log_F < _POLY_CHECK_MAX_LOG):
        terms = {((1,) * k, (1,) * k): xk * math.exp(0.5 * log_dim(k, params) + (4.0 - p) * k / p * log_F)
                 for k, xk in enumerate(x) if xk != 0}
        via_poly = lorentz_functional(AnalyticPoly(terms, c), p, params)
        if abs(via_poly - lhs) > WITNESS_TOL * max(lhs, 1e-300):
            raise AssertionError(f"polynomial path {via_poly!r} differs from log path {lhs!r}")

    ratio = lhs / rhs if rhs > 0 else math.nan
    return WitnessReport(p=p, x=x, lhs=lhs, rhs_bound=rhs, ratio=ratio, n=n)
