"""Linear maps on an algebra: dense coordinate matrices plus a structure tag.

The tag (``kind``, ``params``, ``parts``) records how an operator was built so
that positivity can be certified structurally and tighter bounds on its
majorization constant can be derived. The coordinate matrix is always the
source of truth for evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .eja import (
    Algebra,
    AlgebraMismatch,
    Element,
    JordanFrame,
    MatrixAlgebra,
    Product,
    Spin,
    lowner_batch,
    peirce_batch,
    standard_frame,
)
from .jacobi import jacobi_eigh

COND_LIMIT = 1e12
SELF_ADJOINT_KINDS = {"identity", "lyapunov", "quad", "quad_pair", "quad_pair_power", "schur"}


class SingularOperatorError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LinearOperator:
    algebra: Algebra
    matrix: np.ndarray
    kind: str = "generic"
    params: dict = field(default_factory=dict)
    parts: tuple = ()

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        d = self.algebra.dim
        if M.shape != (d, d):
            raise ValueError(f"operator matrix must be {d}x{d}, got {M.shape}")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "parts", tuple(self.parts))

    def __call__(self, x: Element) -> Element:
        return apply(self, x)

    def apply_coords(self, X) -> np.ndarray:
        """Apply to a batch of coordinate rows ``(..., dim)``."""
        return np.asarray(X, dtype=float) @ self.matrix.T

    @cached_property
    def T(self) -> LinearOperator:
        return adjoint(self)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1.0, other))

    def __neg__(self):
        return scale(-1.0, self)

    def __mul__(self, alpha):
        return scale(alpha, self)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return compose(self, other)

    def is_self_adjoint(self, tol: float = 1e-10) -> bool:
        M = self.matrix
        return bool(np.abs(M - M.T).max() <= tol * max(1.0, np.abs(M).max()))

    def __repr__(self):
        return f"LinearOperator({self.algebra!r}, kind={self.kind!r})"


def _check_same(*ops: LinearOperator) -> Algebra:
    alg = ops[0].algebra
    for op in ops[1:]:
        if op.algebra != alg:
            raise AlgebraMismatch("operators act on different algebras")
    return alg


def _matrix_of(alg: Algebra, f) -> np.ndarray:
    """Coordinate matrix of the linear map whose batched action is ``f``."""
    return np.asarray(f(np.eye(alg.dim)), dtype=float).T


def apply(T: LinearOperator, x: Element) -> Element:
    if x.algebra != T.algebra:
        raise AlgebraMismatch("operator and element belong to different algebras")
    return Element(T.algebra, T.matrix @ x.coords)


def dense(alg: Algebra, matrix) -> LinearOperator:
    return LinearOperator(alg, matrix)


def identity(alg: Algebra) -> LinearOperator:
    return LinearOperator(alg, np.eye(alg.dim), "identity")


def zero_operator(alg: Algebra) -> LinearOperator:
    return LinearOperator(alg, np.zeros((alg.dim, alg.dim)))


def random_dense(alg: Algebra, seed=None) -> LinearOperator:
    rng = np.random.default_rng(seed)
    return LinearOperator(alg, rng.standard_normal((alg.dim, alg.dim)))


def adjoint(T: LinearOperator) -> LinearOperator:
    """Adjoint under the trace inner product: the transpose, with the tag mapped accordingly."""
    M = T.matrix.T
    kind, params = T.kind, dict(T.params)
    if kind in SELF_ADJOINT_KINDS:
        return LinearOperator(T.algebra, M, kind, params, T.parts)
    if kind in ("congruence", "lyapunov_matrix"):
        params["M"] = np.conj(np.asarray(params["M"])).T
        return LinearOperator(T.algebra, M, kind, params)
    if kind == "automorphism":
        if "Q" in params:
            params["Q"] = np.asarray(params["Q"]).T
        return LinearOperator(T.algebra, M, kind, params)
    if kind in ("scale", "sum", "inverse"):
        return LinearOperator(T.algebra, M, kind, params, tuple(p.T for p in T.parts))
    if kind == "compose":
        return LinearOperator(T.algebra, M, kind, params, tuple(p.T for p in reversed(T.parts)))
    return LinearOperator(T.algebra, M)


def add(*ops: LinearOperator) -> LinearOperator:
    alg = _check_same(*ops)
    flat = []
    for op in ops:
        flat.extend(op.parts if op.kind == "sum" else (op,))
    return LinearOperator(alg, sum(op.matrix for op in flat), "sum", {}, tuple(flat))


def scale(alpha: float, T: LinearOperator) -> LinearOperator:
    alpha = float(alpha)
    if T.kind == "scale":
        alpha *= T.params["alpha"]
        T = T.parts[0]
    return LinearOperator(T.algebra, alpha * T.matrix, "scale", {"alpha": alpha}, (T,))


def compose(*ops: LinearOperator) -> LinearOperator:
    """``compose(T1, T2)`` is ``x -> T1(T2(x))``."""
    alg = _check_same(*ops)
    flat = []
    for op in ops:
        flat.extend(op.parts if op.kind == "compose" else (op,))
    M = np.eye(alg.dim)
    for op in flat:
        M = M @ op.matrix
    return LinearOperator(alg, M, "compose", {}, tuple(flat))


def invert(T: LinearOperator) -> LinearOperator:
    if T.kind == "inverse":
        return T.parts[0]
    cond = np.linalg.cond(T.matrix)
    if not np.isfinite(cond) or cond >= COND_LIMIT:
        raise SingularOperatorError(f"operator is numerically singular (condition {cond:.3g})")
    Minv = np.linalg.solve(T.matrix, np.eye(T.algebra.dim))
    return LinearOperator(T.algebra, Minv, "inverse", {}, (T,))


# ---------------------------------------------------------------------------
# Structured families


def make_lyapunov(a: Element) -> LinearOperator:
    """``x -> a o x``."""
    alg = a.algebra
    M = _matrix_of(alg, lambda X: alg.jordan(a.coords, X))
    return LinearOperator(alg, M, "lyapunov", {"a": a})


def _quad_pair_matrix(alg: Algebra, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = alg.jordan(a, b)

    def f(X):
        return alg.jordan(a, alg.jordan(b, X)) + alg.jordan(b, alg.jordan(a, X)) - alg.jordan(ab, X)

    return _matrix_of(alg, f)


def make_quad(a: Element) -> LinearOperator:
    """Quadratic representation ``x -> 2 a o (a o x) - a^2 o x``."""
    alg = a.algebra
    a2 = alg.jordan(a.coords, a.coords)
    M = _matrix_of(alg, lambda X: 2.0 * alg.jordan(a.coords, alg.jordan(a.coords, X)) - alg.jordan(a2, X))
    return LinearOperator(alg, M, "quad", {"a": a})


def make_quad_pair(a: Element, b: Element) -> LinearOperator:
    """``L_a L_b + L_b L_a - L_{a o b}``."""
    if a.algebra != b.algebra:
        raise AlgebraMismatch("a and b belong to different algebras")
    M = _quad_pair_matrix(a.algebra, a.coords, b.coords)
    return LinearOperator(a.algebra, M, "quad_pair", {"a": a, "b": b})


def make_quad_pair_power(a: Element, t: float) -> LinearOperator:
    """``P_{a^t, a^(1-t)}`` for ``a`` in the interior of the cone and ``0 <= t <= 1``."""
    alg = a.algebra
    w = alg.eigvals(a.coords)
    if w[-1] <= 0:
        raise ValueError("a must lie in the interior of the symmetric cone")
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    at = lowner_batch(alg, lambda s: s ** t, a.coords)
    a1t = lowner_batch(alg, lambda s: s ** (1.0 - t), a.coords)
    M = _quad_pair_matrix(alg, at, a1t)
    return LinearOperator(alg, M, "quad_pair_power", {"a": a, "t": float(t)})


def make_schur(A, frame: JordanFrame | None = None, alg: Algebra | None = None) -> LinearOperator:
    """Schur product map ``x -> sum_{i<=j} A_ij x_ij`` over Peirce components of ``frame``."""
    if frame is None:
        if alg is None:
            raise ValueError("give a frame or an algebra")
        frame = standard_frame(alg)
    alg = frame.algebra
    A = np.asarray(A, dtype=float)
    n = alg.rank
    if A.shape != (n, n):
        raise ValueError(f"parameter matrix must be {n}x{n} for a rank-{n} algebra")
    if np.abs(A - A.T).max() > 1e-12 * max(1.0, np.abs(A).max()):
        raise ValueError("parameter matrix must be symmetric")

    def f(X):
        comps = peirce_batch(alg, frame.coords, X)
        return sum(A[i, j] * c for (i, j), c in comps.items())

    return LinearOperator(alg, _matrix_of(alg, f), "schur", {"A": A, "frame": frame})


def _require_matrix_algebra(alg: Algebra, M) -> np.ndarray:
    if not isinstance(alg, MatrixAlgebra):
        raise TypeError("this operator family needs a real-symmetric or complex-hermitian algebra")
    M = np.asarray(M)
    if M.shape != (alg.m, alg.m):
        raise ValueError(f"matrix parameter must be {alg.m}x{alg.m}")
    if not alg.complex_ and np.iscomplexobj(M):
        if np.abs(M.imag).max() > 0:
            raise ValueError("complex parameter on a real-symmetric algebra")
        M = M.real
    return M


def make_congruence(alg: Algebra, M) -> LinearOperator:
    """``X -> M X M^*``."""
    M = _require_matrix_algebra(alg, M)
    mat = _matrix_of(alg, lambda X: alg.from_matrix(M @ alg.to_matrix(X) @ np.conj(M).T))
    return LinearOperator(alg, mat, "congruence", {"M": M})


def make_lyapunov_matrix(alg: Algebra, M) -> LinearOperator:
    """``X -> M X + X M^*``."""
    M = _require_matrix_algebra(alg, M)
    Mh = np.conj(M).T
    mat = _matrix_of(alg, lambda X: alg.from_matrix(M @ alg.to_matrix(X) + alg.to_matrix(X) @ Mh))
    return LinearOperator(alg, mat, "lyapunov_matrix", {"M": M})


def _random_orthogonal(rng, k: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((k, k)))
    return Q * np.sign(np.diag(R))


def random_automorphism(alg: Algebra, seed=None) -> LinearOperator:
    """A random algebra automorphism.

    Matrix algebras: congruence by a random unitary (orthogonal). Spin: fix
    ``x0`` and rotate ``xbar`` by a random orthogonal matrix. Products: one
    automorphism per factor.
    """
    rng = np.random.default_rng(seed)
    if isinstance(alg, MatrixAlgebra):
        return make_congruence(alg, alg.random_unitary(rng))
    if isinstance(alg, Spin):
        Q = _random_orthogonal(rng, alg.d - 1)
        M = np.eye(alg.d)
        M[1:, 1:] = Q
        return LinearOperator(alg, M, "automorphism", {"Q": Q})
    if isinstance(alg, Product):
        M = np.zeros((alg.dim, alg.dim))
        for f, (a, b) in zip(alg.factors, alg.offsets):
            M[a:b, a:b] = random_automorphism(f, rng).matrix
        return LinearOperator(alg, M, "automorphism", {})
    raise TypeError(f"no automorphism sampler for {alg!r}")


# ---------------------------------------------------------------------------
# Positivity and stochasticity


@dataclass(frozen=True, eq=False)
class PositivityVerdict:
    status: str  # "certified" | "falsified" | "undetermined"
    witness: Element | None = None
    samples: int = 0

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    @property
    def falsified(self) -> bool:
        return self.status == "falsified"


def _min_eig(alg: Algebra, X) -> np.ndarray:
    return alg.eigvals(X)[..., -1]


def _is_psd_matrix(A, tol: float = 1e-12) -> bool:
    w = jacobi_eigh(np.asarray(A, dtype=float), vectors=False)
    return bool(w[-1] >= -tol * max(1.0, np.abs(w).max()))


def _is_z_type(T: LinearOperator) -> bool:
    if T.kind in ("identity", "lyapunov", "lyapunov_matrix"):
        return True
    if T.kind == "scale":
        return T.params["alpha"] >= 0 and _is_z_type(T.parts[0])
    if T.kind == "sum":
        return all(_is_z_type(p) for p in T.parts)
    return False


def structurally_positive(T: LinearOperator, tol: float = 1e-10) -> bool:
    """True when the way ``T`` was built guarantees ``T(V+) <= V+``.

    Inverses are certified only for Z-type maps ``L`` (Lyapunov-like sums)
    where ``d = L^{-1}(e)`` lies in the interior of the cone: then ``L`` is
    positive stable and its inverse keeps the cone invariant.
    """
    k = T.kind
    if k in ("identity", "quad", "congruence", "automorphism"):
        return True
    if k == "quad_pair_power":
        return T.params["t"] == 0.5
    if k == "quad_pair":
        return np.allclose(T.params["a"].coords, T.params["b"].coords, rtol=0, atol=1e-14)
    if k == "schur":
        return _is_psd_matrix(T.params["A"])
    if k == "scale":
        return T.params["alpha"] >= 0 and structurally_positive(T.parts[0], tol)
    if k in ("sum", "compose"):
        return all(structurally_positive(p, tol) for p in T.parts)
    if k == "inverse":
        L = T.parts[0]
        if not _is_z_type(L):
            return False
        d = T.apply_coords(L.algebra.unit_coords())
        return bool(_min_eig(L.algebra, d) > tol)
    return False


def sample_positivity_violation(T: LinearOperator, samples: int = 2000, seed=0, tol: float = 1e-9):
    """Most negative ``lambda_min(T(c))`` over sampled primitive idempotents ``c``.

    Returns ``(witness coords or None, worst value)``; primitive idempotents
    generate the extreme rays of the cone, so any negative value disproves
    positivity.
    """
    rng = np.random.default_rng(seed)
    alg = T.algebra
    C = np.vstack([alg.standard_frame_coords(), alg.random_primitive_coords(rng, samples)])
    mins = _min_eig(alg, T.apply_coords(C))
    i = int(np.argmin(mins))
    if mins[i] < -tol:
        return C[i], float(mins[i])
    return None, float(mins[i])


def falsify_positivity(T: LinearOperator, samples: int = 2000, seed=0, tol: float = 1e-9) -> PositivityVerdict:
    if structurally_positive(T):
        return PositivityVerdict("certified")
    witness, _ = sample_positivity_violation(T, samples, seed, tol)
    if witness is not None:
        return PositivityVerdict("falsified", Element(T.algebra, witness), samples)
    return PositivityVerdict("undetermined", None, samples)


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    positivity: PositivityVerdict
    is_ds: bool
    is_dss: bool
    scalar_ds: float | None

    def to_dict(self) -> dict:
        return {
            "positivity": self.positivity.status,
            "positivity_witness": None if self.positivity.witness is None else self.positivity.witness.coords.tolist(),
            "positivity_samples": self.positivity.samples,
            "is_ds": self.is_ds,
            "is_dss": self.is_dss,
            "scalar_ds": self.scalar_ds,
        }


def classify_stochastic(T: LinearOperator, tol: float = 1e-9, samples: int = 2000, seed=0) -> ClassificationReport:
    """Doubly (sub)stochastic tests and the scalar-multiple-of-doubly-stochastic test.

    Positivity evidence means "not falsified": a certified verdict, or no
    violation among the sampled primitive idempotents.
    """
    alg = T.algebra
    n = alg.rank
    e = alg.unit_coords()
    Te = T.apply_coords(e)
    Tse = T.T.apply_coords(e)
    verdict = falsify_positivity(T, samples, seed, tol)
    evidence = not verdict.falsified

    is_ds = evidence and np.linalg.norm(Te - e) <= tol and np.linalg.norm(Tse - e) <= tol
    is_dss = evidence and _min_eig(alg, e - Te) >= -tol and _min_eig(alg, e - Tse) >= -tol

    t = float(Te @ e) / n
    scalar = None
    if abs(t) <= tol:
        if np.abs(T.matrix).max() <= tol:
            scalar = 0.0
    else:
        slack = tol * max(1.0, abs(t))
        if np.linalg.norm(Te - t * e) <= slack and np.linalg.norm(Tse - t * e) <= slack:
            if not falsify_positivity(scale(1.0 / t, T), samples, seed, tol).falsified:
                scalar = t
    return ClassificationReport(verdict, bool(is_ds), bool(is_dss), scalar)
