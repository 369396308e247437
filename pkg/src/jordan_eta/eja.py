"""Concrete Euclidean Jordan algebras carrying the trace inner product.

Every element is stored as real coordinates in a fixed orthonormal basis for
``<x, y> = tr(x o y)``, so inner products are plain dot products and the
adjoint of a linear map is the transpose of its coordinate matrix.

Basis conventions
-----------------
real-symmetric(m)
    ``E_ii`` for ``i = 0..m-1``, then ``(E_ij + E_ji)/sqrt(2)`` for ``i < j``
    in row-major order.
complex-hermitian(m)
    The real-symmetric basis, followed by ``i(E_ij - E_ji)/sqrt(2)`` for
    ``i < j`` in row-major order.
spin(d)
    An element ``(x0; xbar)`` with ``xbar`` in R^(d-1) has coordinates
    ``sqrt(2) * (x0, xbar)``. Eigenvalues are ``x0 +/- |xbar|``.
product
    Concatenation of factor coordinates.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .jacobi import jacobi_eigh

SQRT2 = np.sqrt(2.0)
FRAME_TOL = 1e-8


class AlgebraMismatch(ValueError):
    """Elements or operators from different algebras were combined."""


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


class Algebra:
    """Base class. Subclasses implement the batched coordinate-level primitives.

    All ``*_batch`` style methods take arrays of shape ``(..., dim)``.
    """

    kind: str = "abstract"

    @property
    def rank(self) -> int:
        raise NotImplementedError

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def unit_coords(self) -> np.ndarray:
        raise NotImplementedError

    def jordan(self, X, Y) -> np.ndarray:
        raise NotImplementedError

    def spectral(self, X, vectors: bool = True):
        """Eigenvalues ``(..., n)`` in decreasing order and, if asked, frames ``(..., n, dim)``."""
        raise NotImplementedError

    def standard_frame_coords(self) -> np.ndarray:
        raise NotImplementedError

    def random_frame_coords(self, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        raise NotImplementedError

    def random_primitive_coords(self, rng: np.random.Generator, size: int) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def eigvals(self, X) -> np.ndarray:
        return self.spectral(X, vectors=False)

    def abs_eigvals(self, X) -> np.ndarray:
        """``lambda(|x|)``: absolute eigenvalues sorted decreasingly."""
        return -np.sort(-np.abs(self.eigvals(X)), axis=-1)


class MatrixAlgebra(Algebra):
    """Shared machinery for real symmetric and complex Hermitian matrices."""

    m: int
    complex_: bool = False

    @property
    def rank(self) -> int:
        return self.m

    @cached_property
    def basis(self) -> np.ndarray:
        m = self.m
        dtype = np.complex128 if self.complex_ else np.float64
        mats = []
        for i in range(m):
            E = np.zeros((m, m), dtype=dtype)
            E[i, i] = 1.0
            mats.append(E)
        for i in range(m):
            for j in range(i + 1, m):
                E = np.zeros((m, m), dtype=dtype)
                E[i, j] = E[j, i] = 1.0 / SQRT2
                mats.append(E)
        if self.complex_:
            for i in range(m):
                for j in range(i + 1, m):
                    E = np.zeros((m, m), dtype=dtype)
                    E[i, j] = 1j / SQRT2
                    E[j, i] = -1j / SQRT2
                    mats.append(E)
        return np.array(mats)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def to_matrix(self, X) -> np.ndarray:
        return np.einsum("...k,kij->...ij", np.asarray(X, dtype=float), self.basis)

    def from_matrix(self, M) -> np.ndarray:
        M = np.asarray(M)
        if not self.complex_ and np.iscomplexobj(M):
            if np.any(np.abs(M.imag) > 1e-12):
                raise ValueError("complex matrix given for a real-symmetric algebra")
            M = M.real
        M = 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))
        return np.einsum("kji,...ij->...k", self.basis, M).real

    def unit_coords(self) -> np.ndarray:
        return self.from_matrix(np.eye(self.m))

    def jordan(self, X, Y) -> np.ndarray:
        A, B = self.to_matrix(X), self.to_matrix(Y)
        return self.from_matrix(0.5 * (A @ B + B @ A))

    def _frame_from_unitary(self, V) -> np.ndarray:
        # e_i = v_i v_i^*, v_i the i-th column
        outer = np.einsum("...ai,...bi->...iab", V, np.conj(V))
        return self.from_matrix(outer)

    def spectral(self, X, vectors: bool = True):
        M = self.to_matrix(X)
        if not vectors:
            return jacobi_eigh(M, vectors=False)
        w, V = jacobi_eigh(M)
        return w, self._frame_from_unitary(V)

    def standard_frame_coords(self) -> np.ndarray:
        return np.eye(self.dim)[: self.m].copy()

    def random_unitary(self, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
        shape = (self.m, self.m) if size is None else (size, self.m, self.m)
        G = rng.standard_normal(shape)
        if self.complex_:
            G = G + 1j * rng.standard_normal(shape)
        Q, R = np.linalg.qr(G)
        d = np.diagonal(R, axis1=-2, axis2=-1)
        ph = d / np.where(np.abs(d) > 0, np.abs(d), 1.0)
        return Q * ph[..., None, :]

    def random_frame_coords(self, rng, size=None) -> np.ndarray:
        return self._frame_from_unitary(self.random_unitary(rng, size))

    def random_primitive_coords(self, rng, size: int) -> np.ndarray:
        v = rng.standard_normal((size, self.m))
        if self.complex_:
            v = v + 1j * rng.standard_normal((size, self.m))
        v /= np.linalg.norm(v, axis=-1, keepdims=True)
        return self.from_matrix(np.einsum("ba,bc->bac", v, np.conj(v)))


@dataclass(frozen=True)
class RealSymmetric(MatrixAlgebra):
    m: int
    kind = "real-symmetric"
    complex_ = False

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("matrix size must be at least 1")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "m": self.m}


@dataclass(frozen=True)
class ComplexHermitian(MatrixAlgebra):
    m: int
    kind = "complex-hermitian"
    complex_ = True

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("matrix size must be at least 1")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "m": self.m}


@dataclass(frozen=True)
class Spin(Algebra):
    """Jordan spin algebra on R^d: ``(x0; xbar) o (y0; ybar) = (x0 y0 + xbar.ybar; x0 ybar + y0 xbar)``."""

    d: int
    kind = "spin"

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("spin algebra needs d >= 2")

    @property
    def rank(self) -> int:
        return 2

    @property
    def dim(self) -> int:
        return self.d

    def to_dict(self) -> dict:
        return {"kind": self.kind, "d": self.d}

    def natural(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) / SQRT2

    def from_natural(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) * SQRT2

    def unit_coords(self) -> np.ndarray:
        return self.from_natural(np.eye(self.d)[0])

    def jordan(self, X, Y) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        X, Y = np.broadcast_arrays(X, Y)
        out = np.empty(X.shape)
        out[..., 0] = np.sum(X * Y, axis=-1)
        out[..., 1:] = X[..., :1] * Y[..., 1:] + Y[..., :1] * X[..., 1:]
        return out / SQRT2

    def _frame_from_direction(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        F = np.empty(u.shape[:-1] + (2, self.d))
        F[..., 0, 0] = F[..., 1, 0] = 1.0
        F[..., 0, 1:] = u
        F[..., 1, 1:] = -u
        return F / SQRT2

    def spectral(self, X, vectors: bool = True):
        X = np.asarray(X, dtype=float)
        x0 = X[..., 0] / SQRT2
        xb = X[..., 1:] / SQRT2
        r = np.linalg.norm(xb, axis=-1)
        w = np.stack([x0 + r, x0 - r], axis=-1)
        if not vectors:
            return w
        axis = np.zeros(self.d - 1)
        axis[0] = 1.0
        safe = np.where(r > 0, r, 1.0)[..., None]
        u = np.where(r[..., None] > 0, xb / safe, axis)
        return w, self._frame_from_direction(u)

    def standard_frame_coords(self) -> np.ndarray:
        axis = np.zeros(self.d - 1)
        axis[0] = 1.0
        return self._frame_from_direction(axis)

    def _random_direction(self, rng, size):
        shape = (self.d - 1,) if size is None else (size, self.d - 1)
        u = rng.standard_normal(shape)
        return u / np.linalg.norm(u, axis=-1, keepdims=True)

    def random_frame_coords(self, rng, size=None) -> np.ndarray:
        return self._frame_from_direction(self._random_direction(rng, size))

    def random_primitive_coords(self, rng, size: int) -> np.ndarray:
        return self.random_frame_coords(rng, size)[:, 0, :]


@dataclass(frozen=True)
class Product(Algebra):
    """Direct product of algebras; rank and dimension add up."""

    factors: tuple
    kind = "product"

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise ValueError("product algebra needs at least one factor")

    @cached_property
    def offsets(self) -> list[tuple[int, int]]:
        out, start = [], 0
        for f in self.factors:
            out.append((start, start + f.dim))
            start += f.dim
        return out

    @cached_property
    def rank_offsets(self) -> list[tuple[int, int]]:
        out, start = [], 0
        for f in self.factors:
            out.append((start, start + f.rank))
            start += f.rank
        return out

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)

    @property
    def dim(self) -> int:
        return sum(f.dim for f in self.factors)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "factors": [f.to_dict() for f in self.factors]}

    def unit_coords(self) -> np.ndarray:
        return np.concatenate([f.unit_coords() for f in self.factors])

    def jordan(self, X, Y) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        X, Y = np.broadcast_arrays(X, Y)
        return np.concatenate(
            [f.jordan(X[..., a:b], Y[..., a:b]) for f, (a, b) in zip(self.factors, self.offsets)],
            axis=-1,
        )

    def _embed_frames(self, parts) -> np.ndarray:
        lead = parts[0].shape[:-2]
        F = np.zeros(lead + (self.rank, self.dim))
        for Fi, (a, b), (ra, rb) in zip(parts, self.offsets, self.rank_offsets):
            F[..., ra:rb, a:b] = Fi
        return F

    def spectral(self, X, vectors: bool = True):
        X = np.asarray(X, dtype=float)
        ws, Fs = [], []
        for f, (a, b) in zip(self.factors, self.offsets):
            if vectors:
                w, F = f.spectral(X[..., a:b])
                Fs.append(F)
            else:
                w = f.spectral(X[..., a:b], vectors=False)
            ws.append(w)
        w = np.concatenate(ws, axis=-1)
        order = np.argsort(-w, axis=-1, kind="stable")
        w = np.take_along_axis(w, order, axis=-1)
        if not vectors:
            return w
        F = self._embed_frames(Fs)
        F = np.take_along_axis(F, order[..., None], axis=-2)
        return w, F

    def standard_frame_coords(self) -> np.ndarray:
        return self._embed_frames([f.standard_frame_coords() for f in self.factors])

    def random_frame_coords(self, rng, size=None) -> np.ndarray:
        return self._embed_frames([f.random_frame_coords(rng, size) for f in self.factors])

    def random_primitive_coords(self, rng, size: int) -> np.ndarray:
        ranks = np.array([f.rank for f in self.factors], dtype=float)
        which = rng.choice(len(self.factors), size=size, p=ranks / ranks.sum())
        out = np.zeros((size, self.dim))
        for i, (f, (a, b)) in enumerate(zip(self.factors, self.offsets)):
            idx = np.flatnonzero(which == i)
            if idx.size:
                out[idx, a:b] = f.random_primitive_coords(rng, idx.size)
        return out


def algebra_from_dict(spec: dict) -> Algebra:
    """Build an algebra from its JSON descriptor (see :meth:`Algebra.to_dict`)."""
    kind = spec.get("kind")
    if kind in ("real-symmetric", "sym"):
        return RealSymmetric(int(spec["m"]))
    if kind in ("complex-hermitian", "herm"):
        return ComplexHermitian(int(spec["m"]))
    if kind == "spin":
        return Spin(int(spec["d"]))
    if kind == "product":
        return Product(tuple(algebra_from_dict(f) for f in spec["factors"]))
    raise ValueError(f"unknown algebra kind {kind!r}")


# ---------------------------------------------------------------------------
# Elements


@dataclass(frozen=True, eq=False)
class Element:
    algebra: Algebra
    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.shape != (self.algebra.dim,):
            raise ValueError(f"expected {self.algebra.dim} coordinates, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    def _check(self, other: Element) -> None:
        if not isinstance(other, Element) or other.algebra != self.algebra:
            raise AlgebraMismatch("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return Element(self.algebra, self.coords + other.coords)

    def __sub__(self, other):
        self._check(other)
        return Element(self.algebra, self.coords - other.coords)

    def __neg__(self):
        return Element(self.algebra, -self.coords)

    def __mul__(self, alpha):
        return Element(self.algebra, float(alpha) * self.coords)

    __rmul__ = __mul__

    def __truediv__(self, alpha):
        return Element(self.algebra, self.coords / float(alpha))

    def __repr__(self):
        return f"Element({self.algebra!r}, {np.array2string(self.coords, precision=6)})"

    def matrix(self) -> np.ndarray:
        if not isinstance(self.algebra, MatrixAlgebra):
            raise TypeError("matrix form exists only for matrix algebras")
        return self.algebra.to_matrix(self.coords)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coords))


def element(alg: Algebra, coords) -> Element:
    return Element(alg, coords)


def from_matrix(alg: MatrixAlgebra, M) -> Element:
    return Element(alg, alg.from_matrix(M))


def spin_element(alg: Spin, x0: float, xbar: Sequence[float]) -> Element:
    """Element ``(x0; xbar)`` of a spin algebra given in natural coordinates."""
    return Element(alg, alg.from_natural(np.concatenate(([x0], np.asarray(xbar, dtype=float)))))


def unit(alg: Algebra) -> Element:
    return Element(alg, alg.unit_coords())


def zero(alg: Algebra) -> Element:
    return Element(alg, np.zeros(alg.dim))


def random_element(alg: Algebra, seed=None) -> Element:
    return Element(alg, _rng(seed).standard_normal(alg.dim))


def jordan_product(x: Element, y: Element) -> Element:
    x._check(y)
    return Element(x.algebra, x.algebra.jordan(x.coords, y.coords))


def square(x: Element) -> Element:
    return jordan_product(x, x)


def inner(x: Element, y: Element) -> float:
    """Trace inner product ``tr(x o y)``; a dot product in the orthonormal coordinates."""
    x._check(y)
    return float(x.coords @ y.coords)


def trace(x: Element) -> float:
    return float(x.coords @ x.algebra.unit_coords())


# ---------------------------------------------------------------------------
# Frames and spectral decomposition


@dataclass(frozen=True, eq=False)
class JordanFrame:
    algebra: Algebra
    coords: np.ndarray  # (n, dim), one primitive idempotent per row

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.shape != (self.algebra.rank, self.algebra.dim):
            raise ValueError(f"frame must have shape {(self.algebra.rank, self.algebra.dim)}")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def idempotents(self) -> list[Element]:
        return [Element(self.algebra, row) for row in self.coords]

    def __len__(self):
        return self.coords.shape[0]

    def combine(self, values) -> Element:
        """``sum_i values[i] e_i``."""
        return Element(self.algebra, np.asarray(values, dtype=float) @ self.coords)

    def defect(self) -> float:
        """Largest violation of the frame identities (idempotent, orthogonal, unit sum, unit norm)."""
        alg, F = self.algebra, self.coords
        n = F.shape[0]
        prods = alg.jordan(F[:, None, :], F[None, :, :])
        target = np.zeros_like(prods)
        target[np.arange(n), np.arange(n)] = F
        worst = np.abs(prods - target).max()
        worst = max(worst, np.abs(F.sum(axis=0) - alg.unit_coords()).max())
        worst = max(worst, np.abs(np.einsum("ij,ij->i", F, F) - 1.0).max())
        return float(worst)

    def is_valid(self, tol: float = FRAME_TOL) -> bool:
        return self.defect() <= tol


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    frame: JordanFrame

    def reconstruct(self) -> Element:
        return self.frame.combine(self.eigenvalues)


def spectral_decomposition(x: Element) -> SpectralDecomposition:
    w, F = x.algebra.spectral(x.coords)
    return SpectralDecomposition(w, JordanFrame(x.algebra, F))


def eigenvalues(x: Element) -> np.ndarray:
    """Eigenvalue vector in decreasing order. Solver noise is not clamped."""
    return x.algebra.eigvals(x.coords)


def standard_frame(alg: Algebra) -> JordanFrame:
    return JordanFrame(alg, alg.standard_frame_coords())


def random_jordan_frame(alg: Algebra, seed=None) -> JordanFrame:
    return JordanFrame(alg, alg.random_frame_coords(_rng(seed)))


def lowner_apply(phi: Callable, x: Element) -> Element:
    """Löwner map: apply ``phi`` to the eigenvalues and keep the spectral frame."""
    sd = spectral_decomposition(x)
    vals = np.asarray(phi(sd.eigenvalues), dtype=float)
    if vals.shape != sd.eigenvalues.shape:
        vals = np.array([phi(t) for t in sd.eigenvalues], dtype=float)
    return sd.frame.combine(vals)


def lowner_batch(alg: Algebra, phi: Callable, X) -> np.ndarray:
    """Batched Löwner map on coordinates ``(..., dim)``; ``phi`` must be vectorised."""
    w, F = alg.spectral(X)
    return np.einsum("...i,...id->...d", phi(w), F)


def abs_element(x: Element) -> Element:
    return lowner_apply(np.abs, x)


def plus_part(x: Element) -> Element:
    return lowner_apply(lambda t: np.maximum(t, 0.0), x)


def sign_element(x: Element) -> Element:
    """The sign element ``eps`` (eps^2 = e) with ``|x| = x o eps``; zero eigenvalues get +1."""
    return lowner_apply(lambda t: np.where(t >= 0, 1.0, -1.0), x)


def random_idempotent(alg: Algebra, k: int, seed=None) -> Element:
    """Sum of ``k`` members of a random Jordan frame: an idempotent of rank ``k``."""
    if not 1 <= k <= alg.rank:
        raise IndexError(f"rank k={k} out of range 1..{alg.rank}")
    rng = _rng(seed)
    F = alg.random_frame_coords(rng)
    pick = rng.choice(alg.rank, size=k, replace=False)
    return Element(alg, F[pick].sum(axis=0))


def random_sign_element(alg: Algebra, seed=None) -> Element:
    rng = _rng(seed)
    F = alg.random_frame_coords(rng)
    s = rng.choice([-1.0, 1.0], size=alg.rank)
    return Element(alg, s @ F)


def cone_membership(x: Element, tol: float = 1e-9) -> bool:
    """True iff every eigenvalue of ``x`` is at least ``-tol``."""
    return bool(eigenvalues(x)[-1] >= -tol)


# ---------------------------------------------------------------------------
# Peirce decomposition


def peirce_batch(alg: Algebra, F, X) -> dict[tuple[int, int], np.ndarray]:
    """Peirce components of coordinates ``X (..., dim)`` relative to frame rows ``F``.

    ``x_ii = 2 e_i o (e_i o x) - e_i o x`` and ``x_ij = 4 e_i o (e_j o x)`` for ``i < j``.
    """
    X = np.asarray(X, dtype=float)
    F = np.asarray(F, dtype=float)
    n = F.shape[0]
    ex = [alg.jordan(F[i], X) for i in range(n)]
    out = {}
    for i in range(n):
        for j in range(i, n):
            if i == j:
                out[i, i] = 2.0 * alg.jordan(F[i], ex[i]) - ex[i]
            else:
                out[i, j] = 4.0 * alg.jordan(F[i], ex[j])
    return out


def peirce_components(x: Element, frame: JordanFrame) -> dict[tuple[int, int], Element]:
    if frame.algebra != x.algebra:
        raise AlgebraMismatch("frame and element belong to different algebras")
    if not frame.is_valid():
        raise ValueError("not a Jordan frame")
    comps = peirce_batch(x.algebra, frame.coords, x.coords)
    return {ij: Element(x.algebra, c) for ij, c in comps.items()}
