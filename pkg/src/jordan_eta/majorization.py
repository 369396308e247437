"""Weak majorization on R^n and its lattice structure on nonnegative decreasing vectors.

Vectors are plain 1-d float arrays. A "decreasing vector" (``DecVector``) is a
nonnegative array with ``v[0] >= v[1] >= ... >= v[-1] >= 0``; every lattice
operation here returns one.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9


class DimensionError(ValueError):
    """Vectors (or elements/operators) of incompatible sizes were combined."""


def _vec(v) -> np.ndarray:
    a = np.asarray(v, dtype=float)
    if a.ndim != 1 or a.size == 0:
        raise DimensionError(f"expected a nonempty 1-d vector, got shape {a.shape}")
    return a


def _pair(p, q) -> tuple[np.ndarray, np.ndarray]:
    p, q = _vec(p), _vec(q)
    if p.shape != q.shape:
        raise DimensionError(f"length mismatch: {p.size} vs {q.size}")
    return p, q


def decreasing_rearrangement(v) -> np.ndarray:
    """Entries of ``v`` sorted in decreasing order."""
    return np.sort(_vec(v))[::-1].copy()


def partial_sum(v, k: int) -> float:
    """Sum of the ``k`` largest entries of ``v`` (1 <= k <= n)."""
    v = _vec(v)
    if not 1 <= k <= v.size:
        raise IndexError(f"k={k} out of range 1..{v.size}")
    return float(decreasing_rearrangement(v)[:k].sum())


def partial_sums(v) -> np.ndarray:
    """All partial sums ``(S_1(v), ..., S_n(v))``; works row-wise on 2-d input."""
    a = np.asarray(v, dtype=float)
    return np.cumsum(-np.sort(-a, axis=-1), axis=-1)


def _scaled_tol(q: np.ndarray, tol: float) -> float:
    return tol * max(1.0, float(np.max(np.abs(q))))


def weak_majorizes(p, q, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``p`` is weakly majorized by ``q``.

    Every partial sum of ``p`` must be at most the matching partial sum of ``q``
    up to an additive slack of ``tol * max(1, max|q|)``.
    """
    p, q = _pair(p, q)
    slack = _scaled_tol(q, tol)
    return bool(np.all(partial_sums(p) <= partial_sums(q) + slack))


def majorizes(p, q, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``p`` is majorized by ``q`` (weak majorization plus equal totals)."""
    p, q = _pair(p, q)
    if not weak_majorizes(p, q, tol):
        return False
    return abs(p.sum() - q.sum()) <= _scaled_tol(q, tol)


def wmaj_gap(P, Q) -> np.ndarray:
    """Row-wise ``max_k S_k(P) - S_k(Q)``; positive means ``P`` is not weakly majorized.

    Broadcasts over leading axes, so a single ``q`` can be compared with a batch.
    """
    return np.max(partial_sums(P) - partial_sums(Q), axis=-1)


def hadamard(p, q) -> np.ndarray:
    """Componentwise product."""
    p, q = _pair(p, q)
    return p * q


def is_decvector(v, tol: float = 0.0) -> bool:
    v = np.asarray(v, dtype=float)
    return bool(v.ndim == 1 and v.size > 0 and np.all(np.diff(v) <= tol) and v[-1] >= -tol)


def ones_k(n: int, k: int) -> np.ndarray:
    """Vector with ones in the first ``k`` slots and zeros elsewhere."""
    out = np.zeros(n)
    out[:k] = 1.0
    return out


def _stack(vectors: Iterable[Sequence[float]] | np.ndarray) -> np.ndarray:
    a = np.asarray(vectors if isinstance(vectors, np.ndarray) else list(vectors), dtype=float)
    if a.ndim == 1:
        a = a[None, :]
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise ValueError("expected a nonempty finite set of equal-length vectors")
    if np.any(a < 0):
        raise ValueError("w_inf/w_sup are defined on nonnegative vectors only")
    return a


def _from_partial_sums(beta: np.ndarray) -> np.ndarray:
    r = np.diff(np.concatenate(([0.0], beta)))
    # clean fp jitter so the output is exactly decreasing and nonnegative
    return np.maximum(np.minimum.accumulate(r), 0.0)


def w_inf(Q) -> np.ndarray:
    """Greatest lower bound of a finite set of nonnegative vectors.

    With ``beta_k = min_{q in Q} S_k(q)`` the result is ``r_k = beta_k - beta_{k-1}``.
    """
    a = _stack(Q)
    beta = partial_sums(a).min(axis=0)
    return _from_partial_sums(beta)


def least_concave_majorant(m: np.ndarray) -> np.ndarray:
    """Least concave majorant of the points ``(0, 0), (1, m_1), ..., (n, m_n)``.

    Returns the majorant evaluated at ``k = 1..n``. Uses a monotone-chain
    upper hull, so the work is linear after the points are ordered by ``k``.
    """
    m = np.asarray(m, dtype=float)
    n = m.size
    ys = np.concatenate(([0.0], m))
    hull: list[int] = []
    for k in range(n + 1):
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            # drop j when it lies on or below the chord i -> k
            if (ys[j] - ys[i]) * (k - i) <= (ys[k] - ys[i]) * (j - i):
                hull.pop()
            else:
                break
        hull.append(k)
    xs = np.arange(n + 1, dtype=float)
    return np.interp(xs, np.asarray(hull, dtype=float), ys[hull])[1:]


def w_sup(S) -> np.ndarray:
    """Least upper bound of a finite set of nonnegative vectors.

    ``m_k`` is the largest ``k``-th partial sum over the set; the answer's partial
    sums are the least concave nondecreasing majorant of ``k -> m_k``.
    """
    a = _stack(S)
    m = partial_sums(a).max(axis=0)
    return _from_partial_sums(least_concave_majorant(m))


def join(r, s) -> np.ndarray:
    """Join of two vectors in the weak-majorization order."""
    r, s = _pair(r, s)
    return w_sup(np.vstack([r, s]))
