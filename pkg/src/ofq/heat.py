"""Heat semigroup on O_F^+: eigenvalues, ultracontractivity time and the
L^2 -> L^inf central-multiplier test.

The heat semigroup acts on the ``k``-th spectral subspace by ``e^{-t c_k}``
with ``c_k = U_k'(N_q) / U_k(N_q)``. A central multiplier ``phi`` maps
``L^2`` boundedly into the reduced C*-algebra iff
``sum_k phi(k)^2 ||F||^{4k} < inf``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .errors import OFQError
from .repdata import chebyshev_u

__all__ = [
    "ck",
    "ck_numeric",
    "HeatSpec",
    "apply_heat",
    "optimal_time",
    "MultiplierFamily",
    "heat_family",
    "classify_multiplier",
    "series_probe",
    "ProbeResult",
    "BOUNDED",
    "UNBOUNDED",
    "UNBOUNDED_EVIDENCE",
    "INCONCLUSIVE",
]

BOUNDED = "Bounded"
UNBOUNDED = "Unbounded"
UNBOUNDED_EVIDENCE = "Unbounded-evidence"
INCONCLUSIVE = "Inconclusive"

# relative width of the band around rho^2 ||F||^4 = 1 treated as the boundary
BOUNDARY_TOL = 1e-12


def _ck_x(k, x):
    if k == 0:
        return 0.0
    s = math.sqrt((x - 2.0) * (x + 2.0))
    rho = (2.0 / (x + s)) ** 2  # q^2; (x - s)^{k+1} / (x + s)^{k+1} = rho^{k+1}
    lr = (k + 1) * math.log(rho)
    frac = -math.exp(lr) / math.expm1(lr)  # rho^{k+1} / (1 - rho^{k+1})
    return (k + 1) / s * (1.0 + 2.0 * frac) - x / (s * s)


def ck(k, params):
    """``c_k = U_k'(N_q) / U_k(N_q)`` by the closed form; ``c_0 = 0``."""
    if k < 0:
        raise OFQError("k must be nonnegative")
    return _ck_x(k, params.N_q)


def ck_numeric(k, x, h=None):
    """Central-difference ``U_k'(x) / U_k(x)`` (oracle for :func:`ck`)."""
    h = 1e-6 * x if h is None else h
    up = chebyshev_u(k, x + h, method="recursion")
    dn = chebyshev_u(k, x - h, method="recursion")
    return (up - dn) / (2.0 * h) / chebyshev_u(k, x, method="recursion")


class HeatSpec:
    """Memoized ``c_k`` for one parameter set. Safe to share across threads."""

    def __init__(self, params):
        self.params = params
        self._c = {0: 0.0}
        self._lock = threading.Lock()

    def c(self, k):
        try:
            return self._c[k]
        except KeyError:
            pass
        val = ck(k, self.params)
        with self._lock:
            return self._c.setdefault(k, val)

    def table(self, K):
        return [self.c(k) for k in range(K + 1)]


def apply_heat(f, t, params, spec=None):
    """``Phi_t f``: every degree-``k`` coefficient times ``e^{-t c_k}``."""
    if t < 0:
        raise OFQError("t must be nonnegative")
    spec = spec or HeatSpec(params)
    return f.map_coefficients(lambda k, x: x * math.exp(-t * spec.c(k)))


def optimal_time(params):
    """``t_F = 2 sqrt(N_q^2 - 4) log ||F||``; 0 for Kac type (check ``params.kac``)."""
    if params.kac:
        return 0.0
    s = math.sqrt((params.N_q - 2.0) * (params.N_q + 2.0))
    return 2.0 * s * math.log(params.F_norm)


@dataclass(frozen=True)
class MultiplierFamily:
    """``phi(k) = A rho^k (k + 1)^alpha``."""

    A: float
    rho: float
    alpha: float

    def __post_init__(self):
        if not (self.A > 0 and self.rho > 0):
            raise OFQError("A and rho must be positive")

    def log_phi(self, k):
        return math.log(self.A) + k * math.log(self.rho) + self.alpha * math.log1p(k)

    def phi(self, k):
        return math.exp(self.log_phi(k))


def heat_family(t, params):
    """Geometric family asymptotic to ``e^{-t c_k}``.

    ``c_k = (k + 1) / s - N_q / s^2 + O(q^{2k})`` with ``s = sqrt(N_q^2 - 4)``,
    so ``e^{-t c_k} / (A rho^k) -> 1`` with ``rho = e^{-t/s}``,
    ``A = e^{t (N_q / s^2 - 1 / s)}``.
    """
    x = params.N_q
    s = math.sqrt((x - 2.0) * (x + 2.0))
    return MultiplierFamily(A=math.exp(t * (x / (s * s) - 1.0 / s)), rho=math.exp(-t / s), alpha=0.0)


def _boundary_exponent(fam, params):
    """``log(rho^2 ||F||^4)`` and the scale used to decide equality."""
    a, b = 2.0 * math.log(fam.rho), 4.0 * math.log(params.F_norm)
    return a + b, max(abs(a), abs(b), 1.0)


def classify_multiplier(fam, params):
    """Closed-form verdict for ``sum phi(k)^2 ||F||^{4k}``.

    Bounded iff ``rho^2 ||F||^4 < 1``, or it equals 1 and ``2 alpha < -1``.
    """
    e, scale = _boundary_exponent(fam, params)
    if abs(e) <= BOUNDARY_TOL * scale:
        return BOUNDED if 2.0 * fam.alpha < -1.0 else UNBOUNDED
    return BOUNDED if e < 0 else UNBOUNDED


@dataclass(frozen=True)
class ProbeResult:
    partial_sum: float
    ratio: float
    tail_bound: float
    verdict: str
    K: int
    fitted_alpha: object = None
    certified: bool = False

    def to_dict(self):
        return {
            "partial_sum": self.partial_sum,
            "ratio": self.ratio,
            "tail_bound": self.tail_bound,
            "verdict": self.verdict,
            "K": self.K,
            "fitted_alpha": self.fitted_alpha,
            "certified": self.certified,
        }


def _log_terms(phi, K, log_F):
    vals = [phi(k) for k in range(K + 1)] if callable(phi) else list(phi)[:K + 1]
    if len(vals) < K + 1:
        raise OFQError(f"need {K + 1} samples, got {len(vals)}")
    out = np.full(K + 1, -np.inf)
    for k, v in enumerate(vals):
        if v != 0:
            out[k] = 2.0 * math.log(abs(v)) + 4.0 * k * log_F
    return out


def series_probe(phi, params, K, ratio_bound=None, fit_tol=1e-8):
    """Empirical convergence test for ``sum_k phi(k)^2 ||F||^{4k}``.

    ``phi`` is a callable or a sequence of at least ``K + 1`` samples. With a
    supplied ``ratio_bound`` (a bound on the term ratio past ``K``; 0 means the
    terms vanish) the tail bound is ``a_K r / (1 - r)``. Otherwise the last half
    of the samples is fitted by ``log a_k = c + k log r + 2 alpha log(k + 1)``:

    - ``log r`` clearly negative: Bounded, geometric tail bound;
    - ``log r`` clearly positive: Unbounded-evidence;
    - ``log r`` at 0 within ``fit_tol``: p-series test on ``alpha``.

    When the fit is poor the verdict falls back to a slope-only fit and is
    Inconclusive unless the slope clears zero by three standard errors; the
    tail bound is then only an estimate (``certified`` is False).
    """
    if K < 10:
        raise OFQError("K must be at least 10")
    log_F = math.log(params.F_norm)
    la = _log_terms(phi, K, log_F)
    finite = la[np.isfinite(la)]
    partial = math.fsum(np.exp(finite)) if finite.size else 0.0

    if ratio_bound is not None:
        r = float(ratio_bound)
        if r == 0.0:
            return ProbeResult(partial, 0.0, 0.0, BOUNDED, K, certified=True)
        if r < 1.0:
            aK = math.exp(la[K]) if np.isfinite(la[K]) else 0.0
            return ProbeResult(partial, r, aK * r / (1.0 - r), BOUNDED, K, certified=True)
        return ProbeResult(partial, r, math.inf, INCONCLUSIVE, K)

    ks = np.arange(K // 2, K + 1)
    window = la[ks]
    if not np.all(np.isfinite(window)):
        # some terms vanish; the three-parameter model does not apply
        return _fallback(la, partial, K)

    X = np.column_stack([np.ones(ks.size), ks, np.log1p(ks)])
    coef, *_ = np.linalg.lstsq(X, window, rcond=None)
    resid = np.max(np.abs(X @ coef - window))
    if resid > 1e-6 * max(1.0, np.max(np.abs(window))):
        return _fallback(la, partial, K)

    log_r, two_alpha = float(coef[1]), float(coef[2])
    alpha = 0.5 * two_alpha
    aK = math.exp(la[K])
    if abs(log_r) <= fit_tol:
        if two_alpha < -1.0 - 1e-6:
            # sum_{k > K} C (k+1)^{2 alpha} <= C (K+1)^{2 alpha + 1} / (-2 alpha - 1)
            tail = aK * (K + 1) / (-two_alpha - 1.0)
            return ProbeResult(partial, 1.0, tail, BOUNDED, K, alpha, certified=False)
        return ProbeResult(partial, 1.0, math.inf, UNBOUNDED_EVIDENCE, K, alpha)
    if log_r > 0:
        return ProbeResult(partial, math.exp(log_r), math.inf, UNBOUNDED_EVIDENCE, K, alpha)
    # past K the term ratio is rho ((k+2)/(k+1))^{2 alpha} <= rho max(1, ((K+2)/(K+1))^{2 alpha})
    r = math.exp(log_r + max(0.0, two_alpha * math.log((K + 2) / (K + 1))))
    if r >= 1.0:
        return ProbeResult(partial, r, math.inf, INCONCLUSIVE, K, alpha)
    return ProbeResult(partial, r, aK * r / (1.0 - r), BOUNDED, K, alpha)


def _fallback(la, partial, K):
    """Slope-only fit of ``log a_k`` over the last half of the samples.

    Bounded or Unbounded-evidence only when the slope clears zero by three
    standard errors; otherwise Inconclusive.
    """
    ks = np.arange(K // 2, K + 1)
    y = la[ks]
    keep = np.isfinite(y)
    if keep.sum() < 3:
        return ProbeResult(partial, math.nan, math.inf, INCONCLUSIVE, K)
    ks, y = ks[keep], y[keep]
    X = np.column_stack([np.ones(ks.size), ks])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    sigma2 = float(resid @ resid) / max(ks.size - 2, 1)
    se = math.sqrt(sigma2 / float(np.sum((ks - ks.mean()) ** 2)))
    slope = float(coef[1])
    if slope + 3.0 * se < 0.0:
        r = math.exp(slope + 3.0 * se)
        aK = math.exp(float(np.max(y[-10:])))
        return ProbeResult(partial, r, aK * r / (1.0 - r), BOUNDED, K)
    if slope - 3.0 * se > 0.0:
        return ProbeResult(partial, math.exp(slope), math.inf, UNBOUNDED_EVIDENCE, K)
    return ProbeResult(partial, math.exp(slope), math.inf, INCONCLUSIVE, K)
