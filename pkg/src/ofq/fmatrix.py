"""F-matrices of free orthogonal quantum groups and their canonical form.

An F-matrix is an invertible complex N x N matrix with ``conj(F) F = +-Id``.
Up to the congruence ``F -> w F w^T`` with ``w`` unitary, every such matrix is
a real anti-diagonal matrix ``sum_i lambda_i e_{i, N+1-i}`` whose entries are
ordered by modulus. :func:`canonicalize` computes that form together with the
unitary ``w``; :func:`params` derives the scalar data (``N_q``, ``q``, ``C_q``
...) that every other module consumes.

Indices in the public API are 1-based, matching the usual matrix notation
``u_ij``; internally arrays are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DecompositionFailed,
    KacDegenerate,
    NotInvertible,
    NotSquare,
    OFQError,
    RelationViolated,
)

__all__ = [
    "CanonicalF",
    "GroupParams",
    "validate",
    "canonicalize",
    "params",
    "from_lambda",
    "TOL_CAN",
    "TOL_PAIR",
]

TOL_CAN = 1e-8
TOL_PAIR = 1e-8
_TOL_UNIT = 1e-12


@dataclass(frozen=True)
class CanonicalF:
    """Canonical anti-diagonal F-matrix ``sum_i lam[i] e_{i, N+1-i}``.

    ``lam`` is stored signed, with ``lam[i] * lam[N-1-i] == sign``. Everything
    downstream only uses ``lam[i]**2``.
    """

    lam: tuple
    sign: int
    N: int
    n: int

    def __post_init__(self):
        if len(self.lam) != self.N:
            raise OFQError(f"lambda has length {len(self.lam)}, expected N={self.N}")

    @property
    def abs_lam(self):
        return np.abs(np.asarray(self.lam, dtype=float))

    @property
    def weights(self):
        """Diagonal of ``F*F``: ``(F*F)_{ss} = lam_s^{-2}`` (0-based array)."""
        return 1.0 / np.asarray(self.lam, dtype=float) ** 2

    def weight(self, s):
        """``(F*F)_{ss}`` for a 1-based index ``s``."""
        return 1.0 / self.lam[s - 1] ** 2

    def inv_weight(self, s):
        """``(F*F)^{-1}_{ss} = lam_s^2`` for a 1-based index ``s``."""
        return self.lam[s - 1] ** 2

    @property
    def kac(self):
        return self.n == 0

    @property
    def norm(self):
        """Operator norm ``||F|| = max |lam_i|``."""
        return float(np.max(self.abs_lam))

    def flip(self, s):
        """The paired index ``N + 1 - s``."""
        return self.N + 1 - s

    def matrix(self):
        F = np.zeros((self.N, self.N))
        for i, value in enumerate(self.lam):
            F[i, self.N - 1 - i] = value
        return F

    def to_dict(self):
        return {"N": self.N, "lambda": list(self.lam), "sign": self.sign, "n": self.n}


@dataclass(frozen=True)
class GroupParams:
    N: int
    N_q: float
    q: float
    r_q: float
    C_q: float
    C_q_tail: float
    C_q_terms: int
    F_norm: float
    kac: bool

    def to_dict(self):
        return {
            "N": self.N,
            "N_q": self.N_q,
            "q": self.q,
            "r_q": self.r_q,
            "C_q": self.C_q,
            "C_q_tail": self.C_q_tail,
            "C_q_terms": self.C_q_terms,
            "F_norm": self.F_norm,
            "kac": self.kac,
        }


def from_lambda(lam, sign=1, tol=TOL_CAN):
    """Build a :class:`CanonicalF` from the shorthand ``(lambda, sign)``.

    The vector must already satisfy the canonical invariants: pairing
    ``lam_i lam_{N+1-i} = sign`` and moduli ordered increasingly.
    """
    lam = tuple(float(x) for x in lam)
    N = len(lam)
    if N < 2:
        raise NotSquare("N must be at least 2")
    if sign not in (1, -1):
        raise OFQError(f"sign must be +1 or -1, got {sign}")
    if sign == -1 and N % 2:
        raise OFQError("sign -1 requires even N")
    if any(x == 0.0 for x in lam):
        raise NotInvertible("lambda contains a zero entry")
    for i in range(N):
        if abs(lam[i] * lam[N - 1 - i] - sign) > tol:
            raise OFQError(
                f"lambda_{i + 1} * lambda_{N - i} = {lam[i] * lam[N - 1 - i]!r}, expected {sign}")
    mods = [abs(x) for x in lam]
    if any(b < a - tol for a, b in zip(mods, mods[1:])):
        raise OFQError("|lambda| must be nondecreasing")
    if sign == -1 and N == 2 and lam[0] == lam[1]:
        raise OFQError("sign -1 requires lambda_1 lambda_2 = -1")
    n = sum(1 for m in mods if m < 1.0 - _TOL_UNIT)
    return CanonicalF(lam=lam, sign=sign, N=N, n=n)


def validate(F, tol=None):
    """Return the sign ``eps`` with ``conj(F) F = eps Id``.

    ``tol`` defaults to ``1e-10 * ||F||^2``.
    """
    F = np.asarray(F, dtype=complex)
    if F.ndim != 2 or F.shape[0] != F.shape[1]:
        raise NotSquare(f"F must be square, got shape {F.shape}")
    N = F.shape[0]
    if N < 2:
        raise NotSquare("N must be at least 2")
    sv = np.linalg.svd(F, compute_uv=False)
    if sv[-1] <= 1e-12 * max(1.0, sv[0]):
        raise NotInvertible(f"smallest singular value {sv[-1]:.3e}")
    if tol is None:
        tol = 1e-10 * sv[0] ** 2
    G = F.conj() @ F
    eye = np.eye(N)
    dev_plus = np.max(np.abs(G - eye))
    dev_minus = np.max(np.abs(G + eye))
    if dev_plus <= dev_minus:
        eps, dev = 1, dev_plus
    else:
        eps, dev = -1, dev_minus
    if dev > tol:
        raise RelationViolated(dev, tol)
    return eps


def _is_canonical(F, eps, tol):
    N = F.shape[0]
    anti = np.fliplr(np.eye(N, dtype=bool))
    if np.max(np.abs(F[~anti]), initial=0.0) > tol or np.max(np.abs(F.imag)) > tol:
        return None
    lam = np.fliplr(F.real).diagonal().copy()
    try:
        return from_lambda(lam, eps, tol=tol)
    except OFQError:
        return None


def _gram_schmidt(candidates, basis, tol=1e-6):
    """Append normalized components of ``candidates`` orthogonal to ``basis``."""
    out = list(basis)
    for v in candidates:
        norm0 = np.linalg.norm(v)
        if norm0 <= tol:
            continue
        v = v / norm0
        for _ in range(2):
            for b in out:
                v = v - np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv > 0.5:
            out.append(v / nv)
    return out[len(basis):]


def canonicalize(F, tol_can=TOL_CAN, tol_pair=TOL_PAIR):
    """Reduce ``F`` to canonical anti-diagonal form.

    Returns ``(c, w)`` with ``w`` unitary and ``w @ F @ w.T`` equal to
    ``c.matrix()`` up to ``tol_can * max(1, ||F||)``.

    The antilinear map ``A x = F conj(x)`` squares to ``eps`` and has polar
    decomposition ``A = U P^{1/2}`` with ``P = conj(F* F)``. ``U`` is
    antiunitary, squares to ``eps`` and exchanges the eigenspaces of ``P`` for
    ``mu`` and ``1/mu``; the eigenvectors of ``P`` above 1 together with their
    images under ``U`` give the paired outer basis vectors. On the
    ``mu = 1`` eigenspace ``U`` is put in anti-diagonal form directly: for
    ``eps = +1`` via ``(r_j +- i r_{m+1-j}) / sqrt 2`` built from a ``U``-real
    basis, for ``eps = -1`` via the pairs ``(x, U x)``.
    """
    F = np.asarray(F, dtype=complex)
    eps = validate(F)
    N = F.shape[0]
    fnorm = np.linalg.norm(F, 2)
    scale = max(1.0, fnorm)

    c = _is_canonical(F, eps, tol_can * scale)
    if c is not None:
        return c, np.eye(N, dtype=complex)

    P = (F.conj().T @ F).conj()
    P = 0.5 * (P + P.conj().T)
    mu, V = np.linalg.eigh(P)
    sig = np.sqrt(mu)
    P_isqrt = (V / sig) @ V.conj().T

    def U(x):
        return F @ np.conj(P_isqrt @ x)

    big = [i for i in range(N) if sig[i] > 1.0 + tol_pair]
    small = [i for i in range(N) if sig[i] < 1.0 - tol_pair]
    unit = [i for i in range(N) if abs(sig[i] - 1.0) <= tol_pair]
    if len(big) != len(small):
        raise DecompositionFailed(
            f"singular values do not pair: {len(big)} above 1, {len(small)} below 1")
    big.sort(key=lambda i: -sig[i])
    small.sort(key=lambda i: sig[i])
    for i, j in zip(big, small):
        if abs(sig[i] * sig[j] - 1.0) > tol_pair * sig[i] * 10:
            raise DecompositionFailed(
                f"singular values {sig[i]!r} and {sig[j]!r} are not reciprocal")

    n = len(big)
    m = len(unit)
    if eps == -1 and m % 2:
        raise DecompositionFailed("odd unit block for sign -1")

    B = np.zeros((N, N), dtype=complex)
    lam = np.zeros(N)
    for pos, i in enumerate(big):
        e = V[:, i]
        f = U(e)
        f = f / np.linalg.norm(f)
        B[:, pos] = e
        B[:, N - 1 - pos] = f
        lam[N - 1 - pos] = sig[i]
        lam[pos] = eps / sig[i]

    if m:
        Vu = V[:, unit]
        if eps == 1:
            cands = []
            for col in Vu.T:
                Ucol = U(col)
                cands.append(col + Ucol)
                cands.append(1j * (col - Ucol))
            R = _gram_schmidt(cands, [])
            if len(R) < m:
                raise DecompositionFailed("could not build a real basis of the unit block")
            R = R[:m]
            for j in range(m // 2):
                a, b = R[j], R[m - 1 - j]
                B[:, n + j] = (a + 1j * b) / math.sqrt(2)
                B[:, n + m - 1 - j] = (a - 1j * b) / math.sqrt(2)
            if m % 2:
                B[:, n + m // 2] = R[m // 2]
            lam[n:n + m] = 1.0
        else:
            chosen = []
            for j in range(m // 2):
                picked = _gram_schmidt(list(Vu.T), chosen)
                if not picked:
                    raise DecompositionFailed("could not pair the unit block")
                x = picked[0]
                y = U(x)
                y = y / np.linalg.norm(y)
                chosen.extend([x, y])
                B[:, n + j] = x
                B[:, n + m - 1 - j] = y
                lam[n + j] = -1.0
                lam[n + m - 1 - j] = 1.0

    w = B.conj().T
    c = CanonicalF(lam=tuple(float(x) for x in lam), sign=eps, N=N, n=n)
    residual = np.max(np.abs(w @ F @ w.T - c.matrix()))
    unitarity = np.max(np.abs(w @ w.conj().T - np.eye(N)))
    if residual > tol_can * scale or unitarity > tol_can:
        raise DecompositionFailed(
            f"canonical form check failed: residual {residual:.3e}, unitarity {unitarity:.3e}")
    return c, w


def _cq(q, series_tol):
    q2 = q * q
    logs = [-math.log1p(-q2)]
    m = 1
    qm = q2
    while True:
        logs.append(-3.0 * math.log1p(-qm))
        if qm / (1.0 - q2) < series_tol:
            break
        m += 1
        qm *= q2
    q_next = qm * q2
    # sum_{j>m} -3 log(1 - q^{2j}) <= 3 q^{2(m+1)} / ((1 - q^2)(1 - q^{2(m+1)}))
    log_tail = 3.0 * q_next / ((1.0 - q2) * (1.0 - q_next))
    value = math.exp(math.fsum(logs))
    return value, math.expm1(log_tail), m


def params(c, series_tol=1e-14):
    """Scalar parameters of ``O_F^+`` for a canonical ``c``."""
    N_q = math.fsum(x * x for x in c.lam)
    if N_q - 2.0 <= 1e-12:
        raise KacDegenerate("N_q = 2: q is not defined in (0, 1)")
    disc = math.sqrt((N_q - 2.0) * (N_q + 2.0))
    r_q = 0.5 * (N_q + disc)
    q = 2.0 / (N_q + disc)
    C_q, tail, terms = _cq(q, series_tol)
    return GroupParams(
        N=c.N,
        N_q=N_q,
        q=q,
        r_q=r_q,
        C_q=C_q,
        C_q_tail=tail,
        C_q_terms=terms,
        F_norm=c.norm,
        kac=c.kac,
    )
