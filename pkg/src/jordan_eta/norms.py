"""Spectral r-norms and operator (r -> s) norm bounds.

Exponents are floats in ``[1, inf]``; ``math.inf`` is handled as its own case
everywhere, never as a large number.
"""

from __future__ import annotations

import math

import numpy as np

from .eja import Algebra, Element, eigenvalues
from .eta import CheckResult, SampleConfig, _result, _test_points, eta_estimate
from .operators import LinearOperator

INF = math.inf


def _check_order(r: float) -> float:
    r = float(r)
    if not (r >= 1.0):
        raise ValueError(f"norm exponent must be >= 1, got {r}")
    return r


def vector_norm(v, r: float) -> np.ndarray:
    """``l_r`` norm along the last axis."""
    r = _check_order(r)
    a = np.abs(np.asarray(v, dtype=float))
    if r == INF:
        return a.max(axis=-1)
    if r == 1.0:
        return a.sum(axis=-1)
    return np.sum(a ** r, axis=-1) ** (1.0 / r)


def spectral_norm(x: Element, r: float) -> float:
    """``||lambda(x)||_r``; for ``r = inf`` this is ``lambda_1(|x|)``."""
    return float(vector_norm(eigenvalues(x), r))


def _spectral_norms(alg: Algebra, X, r: float) -> np.ndarray:
    return vector_norm(alg.eigvals(X), r)


def conjugate_exponent(r: float, s: float) -> float:
    """The exponent ``rs / (r - s)`` for ``s < r``, equal to ``s`` when ``r = inf``."""
    r, s = _check_order(r), _check_order(s)
    if not s < r:
        raise ValueError("needs s < r")
    if r == INF:
        return s
    return r * s / (r - s)


def op_norm_upper_from_eta(T: LinearOperator, r: float, s: float, eta=None, config: SampleConfig = SampleConfig()) -> float:
    """Upper bound on ``||T||_{r->s}``: ``||eta||_inf`` if ``r <= s`` else ``||eta||_{rs/(r-s)}``.

    ``eta`` defaults to the upper end of :func:`eta_estimate`.
    """
    r, s = _check_order(r), _check_order(s)
    if eta is None:
        eta = eta_estimate(T, config).upper
    if r <= s:
        return float(vector_norm(eta, INF))
    return float(vector_norm(eta, conjugate_exponent(r, s)))


def op_norm_lower(
    T: LinearOperator,
    r: float,
    s: float,
    config: SampleConfig = SampleConfig(),
    steps: int = 50,
    proposals: int = 16,
) -> float:
    """Lower bound on ``||T||_{r->s}`` from sampling followed by a seeded hill-climb.

    Candidates: ``+-e``, frame atoms, ``c o eps`` products and Gaussian
    elements. The best one is then perturbed ``steps`` times (``proposals``
    random perturbations per step, step size decaying by 0.9) and a move is
    kept only when it raises the ratio.
    """
    r, s = _check_order(r), _check_order(s)
    alg = T.algebra
    rng = np.random.default_rng([config.seed, 3])
    X = np.vstack([_test_points(alg, config), alg.random_frame_coords(rng, 8).reshape(-1, alg.dim)])

    def ratios(X):
        # one eigen-solve for x and T(x) together
        lam = alg.eigvals(np.vstack([X, T.apply_coords(X)]))
        den = vector_norm(lam[: len(X)], r)
        num = vector_norm(lam[len(X) :], s)
        return np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)

    vals = ratios(X)
    i = int(np.argmax(vals))
    best, x = float(vals[i]), X[i] / max(np.linalg.norm(X[i]), 1e-300)
    step = 0.5
    for _ in range(steps):
        cand = x + step * rng.standard_normal((proposals, alg.dim))
        v = ratios(cand)
        j = int(np.argmax(v))
        if v[j] > best:
            best = float(v[j])
            x = cand[j] / np.linalg.norm(cand[j])
        step *= 0.9
    return best


def holder_bound_check(
    T: LinearOperator,
    p: float,
    r: float,
    s: float,
    config: SampleConfig = SampleConfig(),
    eta=None,
) -> CheckResult:
    """Test ``||T(x)||_p <= ||eta||_r ||x||_s`` on sampled ``x`` where ``1/p = 1/r + 1/s``."""
    p, r, s = _check_order(p), _check_order(r), _check_order(s)
    inv = lambda t: 0.0 if t == INF else 1.0 / t
    if abs(inv(p) - (inv(r) + inv(s))) > 1e-12:
        raise ValueError(f"exponents must satisfy 1/p = 1/r + 1/s (got p={p}, r={r}, s={s})")
    alg = T.algebra
    if eta is None:
        eta = eta_estimate(T, config).upper
    const = float(vector_norm(eta, r))
    X = _test_points(alg, config)
    lhs = _spectral_norms(alg, T.apply_coords(X), p)
    rhs = const * _spectral_norms(alg, X, s)
    slack = config.tol * np.maximum(1.0, rhs)
    return _result(alg, X, lhs - rhs, slack)
