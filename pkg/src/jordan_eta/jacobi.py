"""Cyclic Jacobi eigensolver for stacks of real symmetric or complex Hermitian matrices.

All matrices in a stack are rotated together, one ``(p, q)`` pair at a time, so
the Python-level cost depends on the matrix size and not on the batch size.
"""

from __future__ import annotations

import numpy as np

OFF_TOL = 1e-13
MAX_SWEEPS = 50


def _off_norm(A: np.ndarray) -> np.ndarray:
    m = A.shape[0]
    mask = ~np.eye(m, dtype=bool)
    return np.sqrt(np.sum(np.abs(A[mask]) ** 2, axis=0))


def jacobi_eigh(mats, vectors: bool = True, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigen-decompose a matrix or a stack of Hermitian matrices.

    Parameters
    ----------
    mats : array_like, shape (..., m, m)
        Real symmetric or complex Hermitian. Only the Hermitian part is used.
    vectors : bool
        If False, skip accumulating eigenvectors.
    tol : float
        Sweeping stops once the off-diagonal Frobenius mass of every matrix is
        below ``tol`` times its Frobenius norm.

    Returns
    -------
    w : ndarray, shape (..., m)
        Eigenvalues in decreasing order (stable sort on ties).
    V : ndarray, shape (..., m, m)
        Unitary matrices whose columns are the matching eigenvectors
        (only when ``vectors`` is True).
    """
    A = np.asarray(mats)
    complex_ = np.iscomplexobj(A)
    dtype = np.complex128 if complex_ else np.float64
    lead = A.shape[:-2]
    m = A.shape[-1]
    A = A.astype(dtype).reshape(-1, m, m)
    A = 0.5 * (A + np.conj(np.swapaxes(A, -1, -2)))
    B = A.shape[0]
    # batch index last: each rotation then reads and writes contiguous rows
    A = np.ascontiguousarray(np.moveaxis(A, 0, -1))
    V = np.broadcast_to(np.eye(m, dtype=dtype)[:, :, None], (m, m, B)).copy() if vectors else None

    scale = np.sqrt(np.sum(np.abs(A) ** 2, axis=(0, 1)))
    for _ in range(max_sweeps):
        if m < 2 or np.all(_off_norm(A) <= tol * scale):
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                r = np.abs(apq)
                active = r > 1e-300
                if not np.any(active):
                    continue
                r_safe = np.where(active, r, 1.0)
                phase = np.where(active, apq / r_safe, 1.0)
                theta = (A[q, q].real - A[p, p].real) / (2.0 * r_safe)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(theta == 0.0, 1.0, t)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                c = np.where(active, c, 1.0)
                s = np.where(active, s, 0.0)
                cph = np.conj(phase)

                # A <- A J with J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on (p, q)
                Ap = A[:, p].copy()
                Aq = A[:, q]
                A[:, p] = c * Ap - (cph * s) * Aq
                A[:, q] = s * Ap + (cph * c) * Aq
                # A <- J^* A
                Ap = A[p].copy()
                Aq = A[q]
                A[p] = c * Ap - (phase * s) * Aq
                A[q] = s * Ap + (phase * c) * Aq
                A[p, q] = 0.0
                A[q, p] = 0.0
                if vectors:
                    Vp = V[:, p].copy()
                    Vq = V[:, q]
                    V[:, p] = c * Vp - (cph * s) * Vq
                    V[:, q] = s * Vp + (cph * c) * Vq

    w = np.diagonal(A, axis1=0, axis2=1).real.copy()  # (B, m)
    order = np.argsort(-w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1).reshape(lead + (m,))
    if not vectors:
        return w
    V = np.moveaxis(V, -1, 0)
    V = np.take_along_axis(V, order[:, None, :], axis=-1).reshape(lead + (m, m))
    return w, V
