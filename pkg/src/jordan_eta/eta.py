"""The least weak-majorization constant of a linear map.

For a linear map ``T`` on an algebra of rank ``n``, ``eta(T)`` is the smallest
(in weak majorization) nonnegative decreasing ``q`` with
``lambda(|T(x)|) <_w q * lambda(|x|)`` for every ``x``. It equals the w-sup of
``lambda(|T(c o eps)|)`` and ``lambda(|T^*(c o eps)|)`` over nonzero idempotents
``c`` and sign elements ``eps``.

This module returns a bracket ``[lower, upper]``:

* ``lower`` is the w-sup over a finite, seeded sample of ``c o eps``; it never
  exceeds the true value.
* ``upper`` is the w-inf of valid members of the constraint set: a crude
  operator-norm bound, bounds derived from the way ``T`` was built, and the
  closed form ``lambda(T(e)) v lambda(T^*(e))`` when ``T`` is certified positive.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .eja import Algebra, Element, MatrixAlgebra, lowner_batch
from .jacobi import jacobi_eigh
from .majorization import hadamard, is_decvector, join, w_inf, w_sup, wmaj_gap
from .operators import LinearOperator, make_lyapunov_matrix, structurally_positive


class PositivityNotCertified(ValueError):
    """The closed form was requested for a map whose positivity is not certified."""


@dataclass(frozen=True)
class SampleConfig:
    n_frames: int = 200
    ranks: tuple | None = None  # None means every rank 1..n
    signs_per_frame: int = 8
    n_random_x: int = 1000
    seed: int = 0
    tol: float = 1e-8

    def __post_init__(self):
        if self.n_frames < 1 or self.signs_per_frame < 1 or self.n_random_x < 0:
            raise ValueError("sample counts must be positive")
        if self.ranks is not None:
            object.__setattr__(self, "ranks", tuple(int(k) for k in self.ranks))

    def ranks_for(self, alg: Algebra) -> tuple:
        if self.ranks is None:
            return tuple(range(1, alg.rank + 1))
        bad = [k for k in self.ranks if not 1 <= k <= alg.rank]
        if bad:
            raise ValueError(f"ranks {bad} out of range for rank-{alg.rank} algebra")
        return self.ranks


@dataclass(frozen=True, eq=False)
class EtaEstimate:
    lower: np.ndarray
    upper: np.ndarray
    exact: bool
    method: str
    samples: int = 0
    seed: int | None = None

    @property
    def value(self) -> np.ndarray:
        """The upper end; equals eta(T) when ``exact`` is set."""
        return self.upper

    def to_dict(self) -> dict:
        return {
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
            "exact": self.exact,
            "method": self.method,
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True, eq=False)
class CheckResult:
    passed: bool
    witness: Element | None
    samples: int
    worst_gap: float

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "witness": None if self.witness is None else self.witness.coords.tolist(),
            "samples": self.samples,
            "worst_gap": self.worst_gap,
        }


# ---------------------------------------------------------------------------
# Sampling


def sample_idempotent_signs(alg: Algebra, config: SampleConfig) -> np.ndarray:
    """Seeded finite sample of products ``c o eps`` (rows of coordinates).

    Row 0 is always ``e`` (``c = e``, ``eps = e``). Each frame batch adds the
    sign elements themselves (``c = e``), then for every rank ``k`` and every
    sign draw one shared-frame product and one product whose ``c`` and
    ``eps`` come from independent frames.
    """
    rng = np.random.default_rng(config.seed)
    N, S, n = config.n_frames, config.signs_per_frame, alg.rank
    F = alg.random_frame_coords(rng, N)
    G = alg.random_frame_coords(rng, N)
    s_shared = rng.choice([-1.0, 1.0], size=(N, S, n))
    s_indep = rng.choice([-1.0, 1.0], size=(N, S, n))
    eps_shared = np.einsum("bsi,bid->bsd", s_shared, F)
    eps_indep = np.einsum("bsi,bid->bsd", s_indep, G)

    rows = [alg.unit_coords()[None, :], eps_shared.reshape(-1, alg.dim)]
    for k in config.ranks_for(alg):
        order = np.argsort(rng.random((N, n)), axis=1)
        mask = np.zeros((N, n))
        np.put_along_axis(mask, order[:, :k], 1.0, axis=1)
        c = np.einsum("bi,bid->bd", mask, F)
        shared = np.einsum("bsi,bid->bsd", s_shared * mask[:, None, :], F)
        indep = alg.jordan(c[:, None, :], eps_indep)
        rows.append(shared.reshape(-1, alg.dim))
        rows.append(indep.reshape(-1, alg.dim))
    return np.vstack(rows)


def _test_points(alg: Algebra, config: SampleConfig) -> np.ndarray:
    """Points for pointwise checks: ``c o eps`` samples, ``+-e``, Gaussian and rank-one elements."""
    rng = np.random.default_rng([config.seed, 1])
    e = alg.unit_coords()
    gauss = rng.standard_normal((config.n_random_x, alg.dim))
    ones = alg.random_primitive_coords(rng, config.n_random_x) * rng.normal(size=(config.n_random_x, 1))
    return np.vstack([e, -e, sample_idempotent_signs(alg, config), gauss, ones])


def _nonneg_points(alg: Algebra, config: SampleConfig) -> np.ndarray:
    rng = np.random.default_rng([config.seed, 2])
    N = config.n_frames
    F = alg.random_frame_coords(rng, N)
    weights = np.abs(rng.standard_normal((N, alg.rank))) * (rng.random((N, alg.rank)) < 0.7)
    psd = np.einsum("bi,bid->bd", weights, F)
    idem = np.einsum("bi,bid->bd", (rng.random((N, alg.rank)) < 0.5).astype(float), F)
    ones = alg.random_primitive_coords(rng, config.n_random_x) * np.abs(rng.normal(size=(config.n_random_x, 1)))
    return np.vstack([alg.unit_coords(), psd, idem, ones])


# ---------------------------------------------------------------------------
# Lower bound


def _lower_and_count(T: LinearOperator, config: SampleConfig) -> tuple[np.ndarray, int]:
    alg = T.algebra
    P = sample_idempotent_signs(alg, config)
    lam = alg.abs_eigvals(T.apply_coords(P))
    lam_adj = alg.abs_eigvals(T.T.apply_coords(P))
    return w_sup(np.vstack([lam, lam_adj])), 2 * P.shape[0]


def eta_lower_sampled(T: LinearOperator, config: SampleConfig = SampleConfig()) -> np.ndarray:
    """w-sup of ``lambda(|T(c o eps)|)`` and ``lambda(|T^*(c o eps)|)`` over the seeded sample."""
    return _lower_and_count(T, config)[0]


# ---------------------------------------------------------------------------
# Upper bounds


def largest_singular_value(M, rtol: float = 1e-10, max_iter: int = 20000, seed=0) -> float:
    """Largest singular value by power iteration on ``M^T M``, padded to stay an upper bound.

    Stops when the residual ``|B v - rho v|`` drops below ``rtol * rho``; if that
    never happens the Frobenius norm (always an upper bound) is returned.
    """
    M = np.asarray(M, dtype=float)
    B = M.T @ M
    fro = float(np.linalg.norm(M))
    if fro == 0.0:
        return 0.0
    v = np.random.default_rng(seed).standard_normal(B.shape[0])
    v /= np.linalg.norm(v)
    for _ in range(max_iter):
        w = B @ v
        rho = float(v @ w)
        if np.linalg.norm(w - rho * v) <= rtol * rho:
            return min(fro, np.sqrt(rho) * (1.0 + 1e-8))
        v = w / np.linalg.norm(w)
    return fro


def eta_upper_crude(T: LinearOperator) -> np.ndarray:
    """``sqrt(n) * sigma_max(T) * 1``.

    For a rank-``k`` idempotent ``c`` and sign element ``eps``,
    ``S_l(|T(c o eps)|) <= sqrt(l) |T(c o eps)| <= sqrt(l k) sigma <= sqrt(n) sigma min(l, k)``,
    which is the ``l``-th partial sum of ``q * 1_k``.
    """
    n = T.algebra.rank
    return np.full(n, np.sqrt(n) * largest_singular_value(T.matrix))


def _clean_nonneg(lam: np.ndarray, what: str) -> np.ndarray:
    floor = -1e-9 * max(1.0, float(np.abs(lam).max()))
    if lam.min() < floor:
        raise ValueError(f"{what} has a negative eigenvalue {lam.min():.3g}")
    return np.maximum(lam, 0.0)


def eta_closed_form(T: LinearOperator) -> np.ndarray:
    """``lambda(T(e)) v lambda(T^*(e))``; equals eta(T) only for positive ``T``."""
    alg = T.algebra
    e = alg.unit_coords()
    a = _clean_nonneg(alg.eigvals(T.apply_coords(e)), "T(e)")
    b = _clean_nonneg(alg.eigvals(T.T.apply_coords(e)), "T*(e)")
    return join(a, b)


def _abs_lam(alg: Algebra, x) -> np.ndarray:
    return alg.abs_eigvals(np.asarray(x, dtype=float))


def _psd_parts(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, V = jacobi_eigh(A)
    Ap = (V * np.maximum(w, 0.0)) @ V.T
    Am = (V * np.maximum(-w, 0.0)) @ V.T
    return Ap, Am


def _desc(v) -> np.ndarray:
    return np.sort(np.asarray(v, dtype=float))[::-1]


def _structured_bound(T: LinearOperator) -> np.ndarray:
    alg = T.algebra
    if structurally_positive(T):
        return eta_closed_form(T)
    k, p = T.kind, T.params
    if k == "lyapunov":
        return _abs_lam(alg, p["a"].coords)
    if k == "quad_pair_power":
        return _abs_lam(alg, p["a"].coords)
    if k == "quad_pair":
        a, b = p["a"].coords, p["b"].coords
        la, lb = _abs_lam(alg, a), _abs_lam(alg, b)
        return 2.0 * la * lb + _abs_lam(alg, alg.jordan(a, b))
    if k == "schur":
        Ap, Am = _psd_parts(np.asarray(p["A"], dtype=float))
        return np.maximum(_desc(np.diag(Ap)), 0.0) + np.maximum(_desc(np.diag(Am)), 0.0)
    if k == "lyapunov_matrix" and isinstance(alg, MatrixAlgebra):
        M = np.asarray(p["M"])
        H = 0.5 * (M + np.conj(M).T)
        K = 0.5 * (M - np.conj(M).T)
        bound = 2.0 * _abs_lam(alg, alg.from_matrix(H))
        if np.abs(K).max() > 0:
            bound = bound + eta_upper_crude(make_lyapunov_matrix(alg, K))
        return bound
    if k == "scale":
        return abs(p["alpha"]) * _structured_bound(T.parts[0])
    if k == "sum":
        return np.sum([_structured_bound(part) for part in T.parts], axis=0)
    if k == "compose":
        out = np.ones(alg.rank)
        for part in T.parts:
            out = hadamard(out, _structured_bound(part))
        return out
    return eta_upper_crude(T)


def eta_upper_structured(T: LinearOperator) -> np.ndarray | None:
    """Upper bound derived from the operator's construction; ``None`` for untagged maps.

    Rules: ``L_a`` gives ``lambda(|a|)``; ``P_{a^t, a^(1-t)}`` with ``a > 0`` gives
    ``lambda(a)``; a Schur map gives ``diag(A+) + diag(A-)`` (each sorted);
    scaling multiplies by ``|alpha|``; sums add bounds; compositions multiply
    them entrywise; certified-positive pieces use the closed form. Pieces
    without a rule fall back to the crude bound.
    """
    if T.kind == "generic":
        return None
    return _structured_bound(T)


def eta_exact_positive(T: LinearOperator) -> EtaEstimate:
    if not structurally_positive(T):
        raise PositivityNotCertified("positivity of T is not certified; use eta_estimate for a bracket")
    value = eta_closed_form(T)
    method = "closed form lambda(T(e))" if T.is_self_adjoint() else "closed form lambda(T(e)) v lambda(T*(e))"
    return EtaEstimate(value, value.copy(), True, method, 0, None)


def eta_estimate(T: LinearOperator, config: SampleConfig = SampleConfig()) -> EtaEstimate:
    if structurally_positive(T):
        return eta_exact_positive(T)
    lower, npts = _lower_and_count(T, config)
    candidates = [eta_upper_crude(T)]
    methods = ["crude"]
    structured = eta_upper_structured(T)
    if structured is not None:
        candidates.append(structured)
        methods.append("structured")
    upper = w_inf(np.vstack(candidates))
    exact = bool(np.max(np.abs(lower - upper)) <= config.tol)
    method = "sampled lower; upper = w-inf(" + ", ".join(methods) + ")"
    return EtaEstimate(lower, upper, exact, method, npts, config.seed)


# ---------------------------------------------------------------------------
# Pointwise checks


def _validate_q(q, n: int) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (n,):
        raise ValueError(f"q must have length {n}")
    if not is_decvector(q, 1e-12):
        raise ValueError("q must be nonnegative with decreasing entries")
    return q


def _result(alg: Algebra, X: np.ndarray, gaps: np.ndarray, slack: np.ndarray) -> CheckResult:
    bad = np.flatnonzero(gaps > slack)
    witness = Element(alg, X[bad[0]]) if bad.size else None
    return CheckResult(bad.size == 0, witness, X.shape[0], float(np.max(gaps - slack)))


def check_inequality(T: LinearOperator, q, config: SampleConfig = SampleConfig()) -> CheckResult:
    """Test ``lambda(|T(x)|) <_w q * lambda(|x|)`` on sampled ``x``; report the first violator."""
    alg = T.algebra
    q = _validate_q(q, alg.rank)
    X = _test_points(alg, config)
    lhs = alg.abs_eigvals(T.apply_coords(X))
    rhs = q * alg.abs_eigvals(X)
    slack = config.tol * np.maximum(1.0, rhs.max(axis=1))
    return _result(alg, X, wmaj_gap(lhs, rhs), slack)


def check_inequality_nonneg(T: LinearOperator, q, config: SampleConfig = SampleConfig()) -> CheckResult:
    """The positive-map form: ``lambda(T(x)) <_w q * lambda(x)`` for sampled ``x >= 0``."""
    alg = T.algebra
    q = _validate_q(q, alg.rank)
    X = _nonneg_points(alg, config)
    lhs = alg.eigvals(T.apply_coords(X))
    rhs = q * alg.eigvals(X)
    slack = config.tol * np.maximum(1.0, np.abs(rhs).max(axis=1))
    return _result(alg, X, wmaj_gap(lhs, rhs), slack)


def check_majorization_pointwise(T: LinearOperator, q, config: SampleConfig = SampleConfig()) -> CheckResult:
    """Test ``lambda(T(x)) < q * lambda(x)`` (majorization, signed) on sampled ``x``.

    ``q`` only needs decreasing entries; it may be negative.
    """
    alg = T.algebra
    q = np.asarray(q, dtype=float)
    if q.shape != (alg.rank,) or np.any(np.diff(q) > 1e-12):
        raise ValueError("q must be a decreasing vector of length n")
    X = _test_points(alg, config)
    lhs = alg.eigvals(T.apply_coords(X))
    rhs = q * alg.eigvals(X)
    slack = config.tol * np.maximum(1.0, np.abs(rhs).max(axis=1))
    gaps = np.maximum(wmaj_gap(lhs, rhs), np.abs(lhs.sum(axis=1) - rhs.sum(axis=1)))
    return _result(alg, X, gaps, slack)


@dataclass(frozen=True)
class Sublinear:
    """``phi(t) = alpha t`` for ``t >= 0`` and ``beta t`` for ``t <= 0``."""

    alpha: float
    beta: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t >= 0, self.alpha * t, self.beta * t)


def as_sublinear(phi: Callable) -> Sublinear:
    """Identify a nonnegative sublinear scalar function from a probe of its values."""
    if isinstance(phi, Sublinear):
        s = phi
    else:
        s = Sublinear(float(phi(1.0)), -float(phi(-1.0)))
    probe = np.array([-3.0, -1.5, -0.25, 0.0, 0.25, 1.5, 3.0])
    got = np.array([float(phi(t)) for t in probe])
    if not np.allclose(got, s(probe), atol=1e-12) or s.alpha < 0 or s.beta > 0:
        raise ValueError("phi must be nonnegative and sublinear (alpha t on t >= 0, beta t on t <= 0, beta <= 0 <= alpha)")
    return s


def sublinear_check(T: LinearOperator, phi: Callable, config: SampleConfig = SampleConfig(), q=None) -> CheckResult:
    """For positive ``T``: ``lambda(phi(T(x))) <_w lambda(T(phi(x))) <_w q * lambda(phi(x))``.

    ``q`` defaults to eta(T) from the closed form. Both links of the chain are
    checked; the gap reported is the worse of the two.
    """
    if not structurally_positive(T):
        raise PositivityNotCertified("sublinear_check needs a map with certified positivity")
    s = as_sublinear(phi)
    alg = T.algebra
    q = eta_closed_form(T) if q is None else _validate_q(q, alg.rank)
    X = _test_points(alg, config)
    phiX = lowner_batch(alg, s, X)
    phiTX = lowner_batch(alg, s, T.apply_coords(X))
    a = alg.eigvals(phiTX)
    b = alg.eigvals(T.apply_coords(phiX))
    c = q * alg.eigvals(phiX)
    slack = config.tol * np.maximum(1.0, np.abs(c).max(axis=1))
    gaps = np.maximum(wmaj_gap(a, b), wmaj_gap(b, c))
    return _result(alg, X, gaps, slack)
