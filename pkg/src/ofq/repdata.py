"""Chebyshev dimensions, admissible index tuples and the brute-force H_k oracle."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import IndexOutOfRange, NotAdmissible, OFQError, TooLarge

__all__ = [
    "chebyshev_u",
    "log_chebyshev_u",
    "quantum_dim",
    "log_quantum_dim",
    "classical_dim",
    "DimTable",
    "dim_table",
    "is_admissible",
    "q_weight",
    "contraction_maps",
    "hk_oracle",
    "q_matrix",
    "HK_MAX",
    "pure_tensor",
    "all_tuples",
]

HK_MAX = 20000
_LOG_SWITCH = 600.0
_AUTO_RECURSION_MAX = 64


def _roots(x):
    disc = math.sqrt((x - 2.0) * (x + 2.0))
    r = 0.5 * (x + disc)
    return r, 1.0 / r, disc


def chebyshev_u(k, x, method="auto"):
    """Chebyshev polynomial of the second kind, ``U_0 = 1``, ``U_1 = x``,
    ``x U_k = U_{k+1} + U_{k-1}``.

    ``method`` is ``"recursion"``, ``"closed"`` (requires ``x > 2``) or
    ``"auto"``: the recursion up to ``k = 64`` (stable for ``x >= 2``, where
    ``U_k`` is the dominant solution, and exact on small integer-like data)
    and the closed form beyond. Returns ``inf`` when the value overflows; use
    :func:`log_chebyshev_u` for large ``k``.
    """
    if k < 0:
        raise OFQError("k must be nonnegative")
    if method == "auto":
        method = "closed" if (x > 2.0 and k > _AUTO_RECURSION_MAX) else "recursion"
    if method == "recursion":
        prev, cur = 1.0, float(x)
        if k == 0:
            return 1.0
        for _ in range(k - 1):
            prev, cur = cur, x * cur - prev
        return cur
    if method != "closed":
        raise OFQError(f"unknown method {method!r}")
    if not x > 2.0:
        raise OFQError("closed form requires x > 2")
    lg = log_chebyshev_u(k, x)
    if lg > 709.0:
        return math.inf
    return math.exp(lg)


def log_chebyshev_u(k, x):
    """``log U_k(x)`` for ``x > 2``, stable for any ``k``.

    ``U_k(x) = (r^{k+1} - q^{k+1}) / (r - q)`` with ``r q = 1``, so
    ``log U_k = (k+1) log r + log1p(-q^{2(k+1)}) - log(r - q)``.
    """
    if x <= 2.0:
        raise OFQError("log form requires x > 2")
    r, q, disc = _roots(x)
    return (k + 1) * math.log(r) + math.log1p(-(q * q) ** (k + 1)) - math.log(disc)


def quantum_dim(k, params):
    """``d_k = U_k(N_q)``."""
    return chebyshev_u(k, params.N_q)


def log_quantum_dim(k, params):
    return log_chebyshev_u(k, params.N_q)


def classical_dim(k, N):
    """``n_k = dim H_k``: ``U_k(N)`` for ``N >= 3`` and ``k + 1`` for ``N = 2``."""
    if N == 2:
        return float(k + 1)
    return chebyshev_u(k, float(N), method="recursion")


@dataclass(frozen=True)
class DimTable:
    """Quantum dimensions ``d_0 .. d_K`` (``inf`` past overflow) with their logs."""

    d: tuple
    log_d: tuple
    n_cl: tuple

    def ratio(self, m, j):
        """``d_m / d_j`` evaluated as ``exp(log d_m - log d_j)``."""
        return math.exp(self.log_d[m] - self.log_d[j])


def dim_table(params, K):
    """Build a :class:`DimTable` up to degree ``K`` by the three-term recursion.

    Past ``k log r_q > 600`` the linear values are reported as ``inf``; the
    log column comes from the closed form and stays finite.
    """
    x = params.N_q
    d = [1.0]
    if K >= 1:
        d.append(x)
    for k in range(1, K):
        d.append(x * d[k] - d[k - 1])
    log_r = math.log(params.r_q)
    log_d = []
    for k in range(K + 1):
        if k * log_r > _LOG_SWITCH:
            d[k] = math.inf
        log_d.append(math.log(d[k]) if k * log_r <= 50.0 else log_chebyshev_u(k, x))
    n_cl = tuple(classical_dim(k, params.N) for k in range(K + 1))
    return DimTable(d=tuple(d), log_d=tuple(log_d), n_cl=n_cl)


def _check_range(t, N):
    for a in t:
        if not 1 <= a <= N:
            raise IndexOutOfRange(f"index {a} outside [1, {N}]")


def is_admissible(t, N):
    """Whether the pure tensor ``e_{t_1} (x) ... (x) e_{t_k}`` lies in ``H_k``.

    For a canonical F the contraction at position ``i`` of a pure tensor is a
    nonzero multiple of ``[t_{i+1} = N + 1 - t_i]``, so admissibility is the
    absence of an adjacent pair ``(a, N + 1 - a)``.
    """
    t = tuple(t)
    _check_range(t, N)
    return all(b != N + 1 - a for a, b in zip(t, t[1:]))


def q_weight(t, c):
    """``(xi^* Q(k) xi)`` for the pure tensor ``xi`` of ``t``: ``prod lam_{t_i}^{-2}``."""
    t = tuple(t)
    if not is_admissible(t, c.N):
        raise NotAdmissible(f"tuple {t} is not admissible")
    return math.prod(c.weight(a) for a in t)


def contraction_maps(F, k):
    """Stacked matrix of the ``k - 1`` adjacent contractions ``id^i (x) T^* (x) id``.

    ``T = sum_j e_j (x) F e_j``; the result has shape
    ``((k-1) N^{k-2}, N^k)`` with row-major (C order) tensor indexing.
    """
    F = np.asarray(F, dtype=complex)
    N = F.shape[0]
    T = F.T  # T[a, b] = F[b, a] is the coefficient of e_a (x) e_b
    Tstar = T.conj().reshape(1, N * N)
    blocks = []
    for i in range(k - 1):
        left = np.eye(N ** i)
        right = np.eye(N ** (k - 2 - i))
        blocks.append(np.kron(np.kron(left, Tstar), right))
    if not blocks:
        return np.zeros((0, N ** k), dtype=complex)
    return np.vstack(blocks)


def hk_oracle(N, k, c):
    """Orthonormal basis (columns) of ``H_k`` inside ``(C^N)^{(x) k}``.

    Brute force: null space of the stacked contraction maps. Small instances
    only (``N^k <= 20000``).
    """
    if N != c.N:
        raise OFQError(f"N={N} does not match the F-matrix size {c.N}")
    if N ** k > HK_MAX:
        raise TooLarge(f"N^k = {N ** k} exceeds {HK_MAX}")
    if k <= 1:
        return np.eye(N ** k, dtype=complex)
    C = contraction_maps(c.matrix(), k)
    return scipy.linalg.null_space(C, rcond=1e-10)


def q_matrix(basis, c, k):
    """``Q(k) = iota^* (F*F)^{(x) k} iota`` for an orthonormal basis ``iota`` of ``H_k``."""
    D = np.ones(1)
    w = c.weights
    for _ in range(k):
        D = np.kron(D, w)
    return basis.conj().T @ (D[:, None] * basis)


def pure_tensor(t, N):
    v = np.zeros(N ** len(t))
    idx = 0
    for a in t:
        idx = idx * N + (a - 1)
    v[idx] = 1.0
    return v


def all_tuples(N, k):
    return itertools.product(range(1, N + 1), repeat=k)
