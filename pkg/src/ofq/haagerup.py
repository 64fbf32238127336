"""Strong-Haagerup operator-norm bounds for homogeneous analytic polynomials."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import MixedDegrees, NotAdmissible, NotInS, OFQError
from .polynomial import l2_norm
from .repdata import is_admissible

__all__ = [
    "Source",
    "BoundReport",
    "s_set",
    "mf",
    "r_value",
    "geometric_sum",
    "upper_bound",
    "bound_report",
]


class Source(str, Enum):
    L2_FLOOR = "L2Floor"
    TOEPLITZ_TRUNCATION = "ToeplitzTruncation"
    SHARP_THEOREM_REFERENCE = "SharpTheoremReference"
    CQ_R_BOUND = "CqRBound"
    CQ_F_BOUND = "CqFBound"
    TRIANGLE_SUM = "TriangleSum"


@dataclass(frozen=True)
class BoundReport:
    lower: float
    upper: float
    lower_source: Source
    upper_source: Source
    k: int
    R: float
    l2: float

    def __post_init__(self):
        if not self.lower <= self.upper * (1.0 + 1e-12):
            raise AssertionError(f"lower bound {self.lower!r} exceeds upper bound {self.upper!r}")

    @property
    def ratio(self):
        return self.upper / self.lower

    def to_dict(self):
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_source": self.lower_source.value,
            "upper_source": self.upper_source.value,
            "k": self.k,
            "R": self.R,
            "l2": self.l2,
            "ratio": self.ratio,
        }


def s_set(l, k):
    """``S(l, k) = {|l - k|, |l - k| + 2, ..., l + k}``."""
    return list(range(abs(l - k), l + k + 1, 2))


def mf(s, t, l, n_rep, c):
    """``M_f(l, n)`` for the monomial ``u_{s_1 t_1} ... u_{s_k t_k}``.

    Product over the last ``r = (k + n - l) / 2`` positions of
    ``(F*F)_{s_i s_i}^{1/2} (F*F)_{t_i t_i}^{1/2}``.
    """
    s, t = tuple(s), tuple(t)
    k = len(s)
    if len(t) != k:
        raise OFQError("s and t must have the same length")
    if n_rep not in s_set(l, k):
        raise NotInS(f"n = {n_rep} not in S({l}, {k})")
    r = (k + n_rep - l) // 2
    out = 1.0
    for i in range(k - r, k):
        out *= math.sqrt(c.weight(s[i]) * c.weight(t[i]))
    return out


def r_value(span, c):
    """Uniform geometric constant ``R`` of a span of monomials.

    Maximum over every pair and every position of
    ``(F*F)_{s_i s_i}^{1/4} (F*F)_{t_i t_i}^{1/4}``, which guarantees
    ``M_f(l, n) <= R^{k + n - l}`` for all ``(l, n)``.
    """
    span = [(tuple(s), tuple(t)) for s, t in span]
    if not span:
        raise OFQError("empty span")
    degrees = {len(s) for s, _ in span} | {len(t) for _, t in span}
    if len(degrees) != 1:
        raise MixedDegrees(f"span mixes degrees {sorted(degrees)}")
    R = 0.0
    for s, t in span:
        if not (is_admissible(s, c.N) and is_admissible(t, c.N)):
            raise NotAdmissible(f"key {(s, t)} is not admissible")
        for a, b in zip(s, t):
            R = max(R, (c.weight(a) * c.weight(b)) ** 0.25)
    if degrees == {0}:
        return 1.0
    return R


def geometric_sum(R, k):
    """``sum_{j=0}^k R^{2j} = (1 - R^{2k+2}) / (1 - R^2)``, with the ``R = 1`` limit ``k + 1``."""
    if R <= 0:
        raise OFQError("R must be positive")
    if R == 1.0:
        return float(k + 1)
    lr = 2.0 * math.log(R)
    return math.expm1((k + 1) * lr) / math.expm1(lr)


def upper_bound(k, R, params):
    """``C_q (1 - R^{2k+2}) / (1 - R^2)``; ``C_q (k + 1)`` at ``R = 1``."""
    return params.C_q * geometric_sum(R, k)


def bound_report(f, params):
    """Two-sided bracket for the reduced C*-norm of a homogeneous ``f``.

    Lower side is the L^2 norm; upper side is the strong-Haagerup bound
    with ``R`` taken from the monomials present in ``f``.
    """
    k = f.homogeneous_degree()
    l2 = l2_norm(f, params)
    keys = list(f.terms) or [((), ())]
    R = r_value(keys, f.c)
    upper = upper_bound(k, R, params) * l2
    return BoundReport(
        lower=l2,
        upper=upper,
        lower_source=Source.L2_FLOOR,
        upper_source=Source.CQ_R_BOUND,
        k=k,
        R=R,
        l2=l2,
    )
