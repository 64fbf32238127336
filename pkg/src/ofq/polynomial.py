"""Analytic polynomials in the generators ``u_ij`` and their norms.

An :class:`AnalyticPoly` is a finite sum ``sum x_{s,t} u_{s_1 t_1} ... u_{s_k t_k}``
over pairs of admissible index tuples ``(s, t)`` of equal length ``k``. Such
monomials are matrix coefficients of the ``k``-th irreducible representation
at pure tensors, so distinct keys are orthogonal in ``L^2`` and all norms here
reduce to weighted sums over the stored coefficients.
"""

from __future__ import annotations

import math
from types import MappingProxyType

from .errors import (
    BadExponent,
    IndexOutOfFamily,
    LengthMismatch,
    NotAdmissible,
    NotHomogeneous,
    OFQError,
    ResultNotAdmissible,
)
from .fmatrix import from_lambda
from .repdata import is_admissible, log_chebyshev_u

__all__ = [
    "AnalyticPoly",
    "log_dim",
    "monomial_l2_norm",
    "log_monomial_l2_norm",
    "l2_norm",
    "adjoint",
    "lp_equiv_norm",
    "degree_norms",
    "fourier_coefficients",
    "plancherel_norm",
    "fourier_hs_norm",
    "adjoint_l2_norm_schur",
]


def log_dim(k, params):
    """``log d_k``; exact for ``k <= 1``."""
    if k == 0:
        return 0.0
    if k == 1:
        return math.log(params.N_q)
    return log_chebyshev_u(k, params.N_q)


def _key_sort(item):
    (s, t), _ = item
    return (len(s), s, t)


class AnalyticPoly:
    """Immutable sparse analytic polynomial attached to a canonical F-matrix.

    Parameters
    ----------
    terms : mapping
        ``{(s, t): coefficient}`` with ``s``, ``t`` tuples of 1-based indices.
        Zero coefficients are dropped.
    c : CanonicalF
    """

    __slots__ = ("_terms", "c")

    def __init__(self, terms, c):
        clean = {}
        for (s, t), x in dict(terms).items():
            s = tuple(int(a) for a in s)
            t = tuple(int(a) for a in t)
            if len(s) != len(t):
                raise LengthMismatch(f"|s| = {len(s)} differs from |t| = {len(t)}")
            if not (is_admissible(s, c.N) and is_admissible(t, c.N)):
                raise NotAdmissible(f"key {(s, t)} is not admissible")
            x = complex(x)
            if x != 0:
                clean[(s, t)] = clean.get((s, t), 0) + x
        ordered = sorted(((k, v) for k, v in clean.items() if v != 0), key=_key_sort)
        self._terms = MappingProxyType(dict(ordered))
        self.c = c

    @classmethod
    def constant(cls, value, c):
        return cls({((), ()): value}, c)

    @classmethod
    def monomial(cls, s, t, c, coef=1.0):
        return cls({(tuple(s), tuple(t)): coef}, c)

    @classmethod
    def generator_power(cls, s, t, k, c, coef=1.0):
        """``coef * (u_st)^k``."""
        return cls({((s,) * k, (t,) * k): coef}, c)

    @property
    def terms(self):
        return self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __eq__(self, other):
        if not isinstance(other, AnalyticPoly):
            return NotImplemented
        return self.c == other.c and dict(self._terms) == dict(other._terms)

    def __repr__(self):
        return f"AnalyticPoly({dict(self._terms)!r}, N={self.c.N})"

    def degrees(self):
        return sorted({len(s) for s, _ in self._terms})

    def homogeneous_degree(self):
        degs = self.degrees()
        if len(degs) > 1:
            raise NotHomogeneous(f"polynomial has degrees {degs}")
        return degs[0] if degs else 0

    def by_degree(self):
        out = {}
        for (s, t), x in self._terms.items():
            out.setdefault(len(s), {})[(s, t)] = x
        return out

    def map_coefficients(self, fn):
        """New polynomial with ``x -> fn(k, x)`` applied per term."""
        return AnalyticPoly({key: fn(len(key[0]), x) for key, x in self._terms.items()}, self.c)

    def __add__(self, other):
        if self.c != other.c:
            raise OFQError("polynomials live over different F-matrices")
        terms = dict(self._terms)
        for key, x in other._terms.items():
            terms[key] = terms.get(key, 0) + x
        return AnalyticPoly(terms, self.c)

    def __mul__(self, alpha):
        return AnalyticPoly({k: alpha * x for k, x in self._terms.items()}, self.c)

    __rmul__ = __mul__

    def to_dict(self):
        return {
            "lambda": list(self.c.lam),
            "sign": self.c.sign,
            "terms": [
                {"s": list(s), "t": list(t), "re": x.real, "im": x.imag}
                for (s, t), x in self._terms.items()
            ],
        }

    @classmethod
    def from_dict(cls, data):
        c = from_lambda(data["lambda"], int(data.get("sign", 1)))
        terms = {}
        for item in data["terms"]:
            key = (tuple(item["s"]), tuple(item["t"]))
            terms[key] = terms.get(key, 0) + complex(item.get("re", 0.0), item.get("im", 0.0))
        return cls(terms, c)


def _check_monomial(s, t, c):
    s, t = tuple(s), tuple(t)
    if len(s) != len(t):
        raise LengthMismatch(f"|s| = {len(s)} differs from |t| = {len(t)}")
    if not (is_admissible(s, c.N) and is_admissible(t, c.N)):
        raise NotAdmissible(f"key {(s, t)} is not admissible")
    return s, t


def log_monomial_l2_norm(s, t, c, params):
    s, t = _check_monomial(s, t, c)
    log_num = math.fsum(math.log(c.inv_weight(a)) for a in s)
    return 0.5 * (log_num - log_dim(len(s), params))


def monomial_l2_norm(s, t, c, params):
    """``||u_{s_1 t_1} ... u_{s_k t_k}||_2 = sqrt(prod lam_{s_i}^2 / d_k)``.

    Depends on ``s`` only.
    """
    return math.exp(log_monomial_l2_norm(s, t, c, params))


def _scaled_norm(pairs):
    """``(sqrt(sum (a_i e^{l_i})^2), its log)`` for ``pairs = [(a_i, l_i)]``, ``a_i > 0``.

    Uses linear scaling by the largest term when everything is representable
    (exact on simple data) and a max-shifted log sum otherwise.
    """
    logs = [math.log(a) + l for a, l in pairs]
    m = max(logs)
    if -600.0 < m < 600.0 and all(abs(l) < 600.0 for _, l in pairs):
        vals = [a * math.exp(l) for a, l in pairs]
        big = max(vals)
        if big > 0.0:
            n = big * math.sqrt(math.fsum((v / big) ** 2 for v in vals))
            return n, math.log(n)
    ln = m + 0.5 * math.log(math.fsum(math.exp(2.0 * (v - m)) for v in logs))
    return math.exp(ln), ln


def _degree_pairs(f, params):
    acc = {}
    for (s, t), x in f:
        acc.setdefault(len(s), []).append((abs(x), log_monomial_l2_norm(s, t, f.c, params)))
    return dict(sorted(acc.items()))


def _log_degree_norms(f, params):
    """``{k: log ||f_k||_2}``, free of under- and overflow."""
    return {k: _scaled_norm(pairs)[1] for k, pairs in _degree_pairs(f, params).items()}


def l2_norm(f, params):
    pairs = [pair for ps in _degree_pairs(f, params).values() for pair in ps]
    return _scaled_norm(pairs)[0] if pairs else 0.0


def degree_norms(f, params):
    """``[(k, ||f_k||_2, ||f_k||_2 / sqrt(d_k))]`` for every degree present."""
    out = []
    for k, pairs in _degree_pairs(f, params).items():
        n, ln = _scaled_norm(pairs)
        out.append((k, n, math.exp(ln - 0.5 * log_dim(k, params))))
    return out


def adjoint(f):
    """The polynomial representing ``f^*``.

    ``u_ab^* = (lam_a / lam_b) u_{N+1-a, N+1-b}``, and the adjoint of a
    product reverses the order of the factors.
    """
    c = f.c
    terms = {}
    for (s, t), x in f:
        s2 = tuple(c.flip(a) for a in reversed(s))
        t2 = tuple(c.flip(b) for b in reversed(t))
        if not (is_admissible(s2, c.N) and is_admissible(t2, c.N)):
            raise ResultNotAdmissible(f"flip of {(s, t)} is not admissible")
        scale = math.prod(c.lam[a - 1] / c.lam[b - 1] for a, b in zip(s, t))
        terms[(s2, t2)] = x.conjugate() * scale
    return AnalyticPoly(terms, c)


def adjoint_l2_norm_schur(f, params):
    """``||f^*||_2`` from the second Schur relation, without forming ``f^*``:
    ``sum |x|^2 q_weight(t) / d_k``."""
    c = f.c
    pairs = []
    for (s, t), x in f:
        lw = math.fsum(math.log(c.weight(b)) for b in t)
        pairs.append((abs(x), 0.5 * (lw - log_dim(len(t), params))))
    return _scaled_norm(pairs)[0] if pairs else 0.0


def _in_family(a, c):
    return c.kac or abs(c.lam[a - 1]) < 1.0


def lp_equiv_norm(f, p, params):
    """Equivalent-norm functional for ``||f||_p`` on homogeneous ``f``.

    ``d_k^{-1/2} (sum |x|^2 [prod lam_s]^{4/p} [prod lam_t]^{4/p - 2})^{1/2}``
    with ``4/p = 0`` at ``p = inf``. Only indices with ``|lam| < 1`` are
    accepted (all indices in a Kac context, where every weight is 1).
    """
    p = float(p)
    if not p >= 1.0:
        raise BadExponent(f"p must lie in [1, inf], got {p}")
    k = f.homogeneous_degree()
    c = f.c
    e = 0.0 if math.isinf(p) else 4.0 / p
    pairs = []
    for (s, t), x in f:
        for a in s + t:
            if not _in_family(a, c):
                raise IndexOutOfFamily(f"index {a} has |lambda| >= 1")
        ls = math.fsum(math.log(abs(c.lam[a - 1])) for a in s)
        lt = math.fsum(math.log(abs(c.lam[b - 1])) for b in t)
        pairs.append((abs(x), 0.5 * (e * ls + (e - 2.0) * lt) - 0.5 * log_dim(k, params)))
    return _scaled_norm(pairs)[0] if pairs else 0.0


def fourier_coefficients(f, params):
    """Sparse Fourier coefficients ``{k: {(t, s): A}}``.

    With pure tensors as basis vectors, ``f = sum_k d_k (A Q)_{ts} u_{st}``
    gives ``A_{ts} = x / (d_k Q_{ss})``. Valid while ``d_k`` is finite.
    """
    c = f.c
    out = {}
    for (s, t), x in f:
        k = len(s)
        d = math.exp(log_dim(k, params))
        qs = math.prod(c.weight(a) for a in s)
        out.setdefault(k, {})[(t, s)] = x / (d * qs)
    return out


def fourier_hs_norm(block, c):
    """``||A Q^{1/2}||_{S^2}`` for one sparse Fourier block."""
    return math.sqrt(math.fsum(
        abs(A) ** 2 * math.prod(c.weight(a) for a in s) for (_, s), A in block.items()))


def plancherel_norm(f, params):
    """``(sum_k d_k Tr(A^* A Q))^{1/2}`` computed from the Fourier coefficients.

    The largest coefficient is factored out first so tiny or huge inputs stay in range.
    """
    if len(f) == 0:
        return 0.0
    scale = max(abs(x) for _, x in f)
    vals = []
    for k, block in fourier_coefficients((1.0 / scale) * f, params).items():
        d = math.exp(log_dim(k, params))
        vals.append(d * fourier_hs_norm(block, f.c) ** 2)
    return scale * math.sqrt(math.fsum(vals))

