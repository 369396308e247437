"""Random operators with known majorization constants.

Every generator takes a numpy ``Generator`` so callers control the stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eja import (
    Algebra,
    ComplexHermitian,
    Element,
    MatrixAlgebra,
    RealSymmetric,
    Spin,
    lowner_batch,
)
from .operators import (
    LinearOperator,
    add,
    compose,
    make_congruence,
    make_lyapunov,
    make_quad,
    make_quad_pair_power,
    make_schur,
    random_automorphism,
    scale,
)

FIXTURE_ALGEBRAS = (ComplexHermitian(3), RealSymmetric(3), Spin(5))
POWERS = (0.0, 0.25, 0.5, 1.0)


@dataclass(frozen=True, eq=False)
class Fixture:
    name: str
    operator: LinearOperator
    eta: np.ndarray


def random_element(alg: Algebra, rng) -> Element:
    return Element(alg, rng.standard_normal(alg.dim))


def random_with_spectrum(alg: Algebra, rng, lam) -> Element:
    F = alg.random_frame_coords(rng)
    return Element(alg, np.asarray(lam, dtype=float) @ F)


def random_positive_element(alg: Algebra, rng, low: float = 0.2, high: float = 3.0) -> Element:
    """Element with eigenvalues drawn uniformly from ``[low, high]``."""
    return random_with_spectrum(alg, rng, rng.uniform(low, high, alg.rank))


def random_psd_matrix(rng, n: int, rank: int | None = None) -> np.ndarray:
    B = rng.standard_normal((n, rank or n))
    return B @ B.T


def random_symmetric_matrix(rng, n: int) -> np.ndarray:
    B = rng.standard_normal((n, n))
    return 0.5 * (B + B.T)


def random_matrix_param(alg: MatrixAlgebra, rng) -> np.ndarray:
    M = rng.standard_normal((alg.m, alg.m))
    if alg.complex_:
        M = M + 1j * rng.standard_normal((alg.m, alg.m))
    return M


def mean_of_automorphisms(alg: Algebra, rng, count: int = 3) -> LinearOperator:
    """A doubly stochastic map: the average of ``count`` random automorphisms."""
    autos = [random_automorphism(alg, rng) for _ in range(count)]
    return scale(1.0 / count, add(*autos))


def _desc(v) -> np.ndarray:
    return -np.sort(-np.asarray(v, dtype=float))


def _sq_eigs(alg: Algebra, a: Element) -> np.ndarray:
    return _desc(alg.eigvals(a.coords) ** 2)


def closed_form_fixtures(alg: Algebra, rng) -> list[Fixture]:
    """One instance of each closed-form family on ``alg``, with its exact constant."""
    n = alg.rank
    out = []
    a = random_element(alg, rng)
    out.append(Fixture("lyapunov", make_lyapunov(a), _desc(np.abs(alg.eigvals(a.coords)))))
    a = random_element(alg, rng)
    out.append(Fixture("quad", make_quad(a), _sq_eigs(alg, a)))
    out.append(Fixture("doubly-stochastic", mean_of_automorphisms(alg, rng), np.ones(n)))
    if isinstance(alg, MatrixAlgebra):
        M = random_matrix_param(alg, rng)
        T = make_congruence(alg, M)
        out.append(Fixture("congruence", T, _desc(alg.eigvals(alg.from_matrix(M @ np.conj(M).T)))))
    else:
        a = random_element(alg, rng)
        T = compose(make_quad(a), random_automorphism(alg, rng))
        out.append(Fixture("quad-automorphism", T, _sq_eigs(alg, a)))
    for t in POWERS:
        a = random_positive_element(alg, rng)
        out.append(Fixture(f"quad-pair-power-{t:g}", make_quad_pair_power(a, t), alg.eigvals(a.coords)))
    A = random_psd_matrix(rng, n, rank=int(rng.integers(1, n + 1)))
    out.append(Fixture("schur-psd", make_schur(A, alg=alg), _desc(np.diag(A))))
    return out


def random_positive_map(alg: Algebra, rng, kind: str | None = None) -> LinearOperator:
    """A structurally certified positive map of a random (or the given) family."""
    kinds = ["quad", "schur", "ds", "quad-half", "sum", "compose"]
    if isinstance(alg, MatrixAlgebra):
        kinds.append("congruence")
    kind = kind or kinds[int(rng.integers(len(kinds)))]
    if kind == "quad":
        return make_quad(random_element(alg, rng))
    if kind == "schur":
        return make_schur(random_psd_matrix(rng, alg.rank), alg=alg)
    if kind == "ds":
        return mean_of_automorphisms(alg, rng, int(rng.integers(1, 4)))
    if kind == "quad-half":
        return make_quad_pair_power(random_positive_element(alg, rng), 0.5)
    if kind == "congruence":
        return make_congruence(alg, random_matrix_param(alg, rng))
    if kind == "sum":
        return add(random_positive_map(alg, rng, "quad"), scale(rng.uniform(0.1, 2.0), random_positive_map(alg, rng, "ds")))
    if kind == "compose":
        return compose(random_positive_map(alg, rng, "quad"), random_automorphism(alg, rng))
    raise ValueError(f"unknown positive family {kind!r}")


def sqrt_element(a: Element) -> Element:
    return Element(a.algebra, lowner_batch(a.algebra, np.sqrt, a.coords))

