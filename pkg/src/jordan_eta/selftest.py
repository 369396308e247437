"""Acceptance suites, shared by ``jordan-eta selftest`` and the test-suite.

Each ``criterion_*`` function runs one suite and returns a :class:`SuiteResult`.
``quick=True`` shrinks instance counts for a fast smoke run; tolerances never
change.
"""

from __future__ import annotations

import itertools
import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from .eja import ComplexHermitian, Product, RealSymmetric, Spin
from .eta import (
    SampleConfig,
    check_inequality,
    check_majorization_pointwise,
    eta_estimate,
    eta_lower_sampled,
    eta_upper_structured,
)
from .fixtures import (
    FIXTURE_ALGEBRAS,
    closed_form_fixtures,
    mean_of_automorphisms,
    random_element,
    random_positive_element,
    random_positive_map,
    random_symmetric_matrix,
    sqrt_element,
)
from .majorization import hadamard, w_inf, w_sup, weak_majorizes, wmaj_gap
from .norms import holder_bound_check, op_norm_lower, op_norm_upper_from_eta
from .operators import (
    classify_stochastic,
    falsify_positivity,
    make_lyapunov,
    make_quad,
    make_quad_pair_power,
    make_schur,
    random_dense,
    scale,
)

INF = math.inf
DENSE_ALGEBRAS = (RealSymmetric(3), ComplexHermitian(3), Spin(5), Product((RealSymmetric(2), Spin(3))))

# Lighter sampling for suites that evaluate thousands of operators. The
# deterministic samples (e, +-e) are always present.
LIGHT = SampleConfig(n_frames=40, signs_per_frame=4, n_random_x=200)


@dataclass
class SuiteResult:
    number: int
    title: str
    passed: bool
    checked: int
    failures: int
    seconds: float = 0.0
    notes: list = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({'; '.join(self.notes)})" if self.notes else ""
        return f"[{status}] {self.number}. {self.title}: {self.checked} checks, {self.failures} failures, {self.seconds:.1f}s{extra}"

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "title": self.title,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "seconds": self.seconds,
            "notes": list(self.notes),
        }


def _n(full: int, quick: bool, small: int) -> int:
    return small if quick else full


def _fixture_sets(count: int, seed: int):
    """``count`` rounds of closed-form fixtures on each fixture algebra (deterministic)."""
    out = []
    for ai, alg in enumerate(FIXTURE_ALGEBRAS):
        rng = np.random.default_rng([seed, 100 + ai])
        for _ in range(count):
            out.extend(closed_form_fixtures(alg, rng))
    return out


# ---------------------------------------------------------------------------


def criterion_1(quick: bool = False, seed: int = 0) -> SuiteResult:
    """Closed-form values: exact estimate to 1e-8 and sampled lower bound to 1e-6."""
    fixtures = _fixture_sets(_n(50, quick, 5), seed)
    failures, notes = 0, []
    for f in fixtures:
        est = eta_estimate(f.operator)
        lo = eta_lower_sampled(f.operator, LIGHT)
        ok = est.exact and np.abs(est.upper - f.eta).max() <= 1e-8 and np.abs(est.lower - f.eta).max() <= 1e-8
        ok = ok and np.abs(lo - f.eta).max() <= 1e-6
        if not ok:
            failures += 1
            if len(notes) < 3:
                notes.append(f"{f.name} on {f.operator.algebra!r}")
    return SuiteResult(1, "closed-form eta fixtures", failures == 0, len(fixtures), failures, notes=notes)


def _nonpositive_dense(alg, rng):
    while True:
        T = random_dense(alg, rng)
        if falsify_positivity(T, samples=200, seed=0).falsified:
            return T


def criterion_2(quick: bool = False, seed: int = 0) -> SuiteResult:
    """Bracket soundness on random dense non-positive maps."""
    count = _n(100, quick, 5)
    failures, checked, notes = 0, 0, []
    for ai, alg in enumerate(DENSE_ALGEBRAS):
        rng = np.random.default_rng([seed, 200 + ai])
        for _ in range(count):
            T = _nonpositive_dense(alg, rng)
            est = eta_estimate(T)
            res = check_inequality(T, est.upper)
            checked += 1
            ok = weak_majorizes(est.lower, est.upper, tol=1e-8) and res.passed and res.samples >= 10_000
            if not ok:
                failures += 1
                if len(notes) < 3:
                    notes.append(f"{alg!r}: samples={res.samples} worst_gap={res.worst_gap:.3g}")
    return SuiteResult(2, "bracket soundness", failures == 0, checked, failures, notes=notes)


def criterion_3(quick: bool = False, seed: int = 0) -> SuiteResult:
    """Least-ness: shrinking any single entry of eta by 1% must expose a witness."""
    fixtures = _fixture_sets(_n(50, quick, 5), seed)
    instances, misses, notes = 0, 0, []
    for f in fixtures:
        for i in range(f.eta.size):
            if f.eta[i] <= 0:
                continue
            q = f.eta.copy()
            q[i] *= 0.99
            q = np.sort(q)[::-1]
            instances += 1
            if check_inequality(f.operator, q, LIGHT).passed:
                misses += 1
                if len(notes) < 3:
                    notes.append(f"no witness: {f.name} entry {i}")
    rate = 1.0 - misses / max(instances, 1)
    notes.insert(0, f"witness rate {rate:.4f}")
    return SuiteResult(3, "least-ness probe", rate >= 0.95, instances, misses, notes=notes)


def criterion_4(quick: bool = False, seed: int = 0) -> SuiteResult:
    """Scalar-doubly-stochastic classification."""
    reps = _n(10, quick, 2)
    failures, checked, notes = 0, 0, []
    for ai, alg in enumerate(FIXTURE_ALGEBRAS):
        rng = np.random.default_rng([seed, 400 + ai])
        for _ in range(reps):
            for t in (-2.0, 0.5, 3.0):
                T = scale(t, mean_of_automorphisms(alg, rng, 3))
                rep = classify_stochastic(T)
                checked += 1
                if rep.scalar_ds is None or abs(rep.scalar_ds - t) > 1e-8:
                    failures += 1
                    notes.append(f"t={t} on {alg!r}: got {rep.scalar_ds}")
            a = random_element(alg, rng)
            T = make_quad(a)
            rep = classify_stochastic(T)
            lam2 = np.sort(alg.eigvals(a.coords) ** 2)[::-1]
            qs = (lam2, np.full(alg.rank, lam2.mean()))
            found = all(not check_majorization_pointwise(T, q, LIGHT).passed for q in qs)
            checked += 1
            if rep.scalar_ds is not None or not found:
                failures += 1
                notes.append(f"P_a on {alg!r}: scalar={rep.scalar_ds} witness={found}")
    return SuiteResult(4, "scalar-DS classifier", failures == 0, checked, failures, notes=notes[:3])


# ---------------------------------------------------------------------------
# Inequality suites


def _rank_k_idempotents(alg, rng, size):
    F = alg.random_frame_coords(rng, size)
    k = rng.integers(1, alg.rank + 1, size)
    mask = (np.arange(alg.rank)[None, :] < k[:, None]).astype(float)
    return np.einsum("bi,bid->bd", mask, F), k


def _partial(lam, k):
    S = np.cumsum(lam, axis=-1)
    return S[np.arange(lam.shape[0]), k - 1]


def inequality_suites(alg, count: int, rng) -> dict[str, int]:
    """Violation counts for each eigenvalue inequality on ``count`` random instances."""
    tol = 1e-9
    X = rng.standard_normal((count, alg.dim))
    Y = rng.standard_normal((count, alg.dim))
    lx, ly = alg.eigvals(X), alg.eigvals(Y)
    ip = np.einsum("bd,bd->b", X, Y)
    out = {}

    rhs = np.einsum("bi,bi->b", lx, ly)
    out["ftvn"] = int(np.sum(ip > rhs + tol * np.maximum(1, np.abs(rhs))))

    ax, ay = alg.abs_eigvals(X), alg.abs_eigvals(Y)
    rhs = np.einsum("bi,bi->b", ax, ay)
    out["abs-inner"] = int(np.sum(ip > rhs + tol * np.maximum(1, rhs)))

    # <x, c> <= S_k(x) for rank-k idempotents, with equality at x's own top-k idempotent
    C, k = _rank_k_idempotents(alg, rng, count)
    sk = _partial(lx, k)
    viol = np.einsum("bd,bd->b", X, C) > sk + tol * np.maximum(1, np.abs(sk))
    _, F = alg.spectral(X)
    mask = (np.arange(alg.rank)[None, :] < k[:, None]).astype(float)
    top = np.einsum("bi,bid->bd", mask, F)
    attained = np.abs(np.einsum("bd,bd->b", X, top) - sk) <= 1e-9 * np.maximum(1, np.abs(sk))
    out["variational"] = int(np.sum(viol | ~attained))

    # lambda(|x o eps|) <_w lambda(|x|) for sign elements eps
    Fe = alg.random_frame_coords(rng, count)
    eps = np.einsum("bi,bid->bd", rng.choice([-1.0, 1.0], (count, alg.rank)), Fe)
    lhs = alg.abs_eigvals(alg.jordan(X, eps))
    out["sign-product"] = int(np.sum(wmaj_gap(lhs, ax) > tol * np.maximum(1, ax[:, 0])))

    lsum = alg.eigvals(X + Y)
    both = lx + ly
    gap = np.maximum(wmaj_gap(lsum, both), np.abs(lsum.sum(1) - both.sum(1)))
    out["lidskii"] = int(np.sum(gap > tol * np.maximum(1, np.abs(both).max(1))))

    P = alg.jordan(Y, Y)  # squares lie in the cone
    ly2 = alg.eigvals(X + P)
    out["monotone"] = int(np.sum(np.any(lx > ly2 + tol * np.maximum(1, np.abs(ly2)), axis=1)))
    return out


def vector_suites(n: int, count: int, rng) -> dict[str, int]:
    tol = 1e-9
    p = rng.standard_normal((count, n))
    q = rng.standard_normal((count, n))
    a = np.einsum("bi,bi->b", p, q)
    b = np.einsum("bi,bi->b", np.abs(p), np.abs(q))
    c = np.einsum("bi,bi->b", -np.sort(-np.abs(p)), -np.sort(-np.abs(q)))
    out = {"inner-rearrangement": int(np.sum((a > b + tol * np.maximum(1, b)) | (b > c + tol * np.maximum(1, c))))}

    # p <_w q via a doubly substochastic mix of permutations, then the Hadamard products
    Q = -np.sort(-np.abs(rng.standard_normal((count, n))))
    mix = np.zeros((count, n))
    w = rng.dirichlet(np.ones(3), count)
    for j in range(3):
        perm = np.argsort(rng.random((count, n)), axis=1)
        mix += w[:, j : j + 1] * np.take_along_axis(Q, perm, axis=1)
    P = -np.sort(-(mix * rng.uniform(0.5, 1.0, (count, 1))))
    R = -np.sort(-np.abs(rng.standard_normal((count, n))))
    g = wmaj_gap(R * P, R * Q)
    ip = np.einsum("bi,bi->b", R, P) - np.einsum("bi,bi->b", R, Q)
    out["hadamard-monotone"] = int(np.sum((g > tol * np.maximum(1, (R * Q)[:, 0])) | (ip > tol * np.maximum(1, np.abs(R * Q).sum(1)))))
    return out


def criterion_5(quick: bool = False, seed: int = 0) -> SuiteResult:
    count = _n(10_000, quick, 1000)
    failures, checked, notes = 0, 0, []
    for ai, alg in enumerate(DENSE_ALGEBRAS):
        rng = np.random.default_rng([seed, 500 + ai])
        for name, bad in inequality_suites(alg, count, rng).items():
            checked += count
            failures += bad
            if bad:
                notes.append(f"{name} on {alg!r}: {bad}")
    rng = np.random.default_rng([seed, 599])
    for n in (2, 3, 5):
        for name, bad in vector_suites(n, count, rng).items():
            checked += count
            failures += bad
            if bad:
                notes.append(f"{name} n={n}: {bad}")
    return SuiteResult(5, "eigenvalue inequality suites", failures == 0, checked, failures, notes=notes[:3])


# ---------------------------------------------------------------------------
# Lattice oracles


def lub_by_lp(P: np.ndarray) -> np.ndarray:
    """Least upper bound in weak majorization via a linear program over partial sums."""
    from scipy.optimize import linprog

    n = P.shape[1]
    target = np.cumsum(-np.sort(-P, axis=1), axis=1).max(axis=0)
    rows, rhs = [], []
    for k in range(n):
        r = np.zeros(n)
        r[k] = -1.0  # s_k >= target_k
        rows.append(r)
        rhs.append(-target[k])
        r = np.zeros(n)  # increments nonnegative: s_{k-1} - s_k <= 0
        r[k] = -1.0
        if k:
            r[k - 1] = 1.0
        rows.append(r)
        rhs.append(0.0)
        if k + 1 < n:  # concavity: s_{k+1} - 2 s_k + s_{k-1} <= 0
            r = np.zeros(n)
            r[k + 1] = 1.0
            r[k] = -2.0
            if k:
                r[k - 1] = 1.0
            rows.append(r)
            rhs.append(0.0)
    res = linprog(np.ones(n), A_ub=np.array(rows), b_ub=np.array(rhs), bounds=[(None, None)] * n, method="highs")
    if not res.success:
        raise RuntimeError(res.message)
    return np.diff(np.concatenate(([0.0], res.x)))


def grid_upper_bounds(P: np.ndarray, top: float, step: float = 0.25) -> np.ndarray:
    """Every decreasing vector on the ``step`` grid in ``[0, top]`` weakly majorizing all rows of ``P``."""
    n = P.shape[1]
    levels = np.arange(0.0, top + step / 2, step)
    G = np.array(list(itertools.combinations_with_replacement(levels[::-1], n)))
    ok = np.ones(len(G), dtype=bool)
    for p in P:
        ok &= wmaj_gap(np.broadcast_to(p, G.shape), G) <= 1e-12
    return G[ok]


def w_inf_bruteforce(P: np.ndarray) -> np.ndarray:
    sums = [list(itertools.accumulate(sorted(row, reverse=True))) for row in P.tolist()]
    beta = [min(col) for col in zip(*sums)]
    return np.array([b - a for a, b in zip([0.0] + beta[:-1], beta)])


def criterion_6(quick: bool = False, seed: int = 0) -> SuiteResult:
    count = _n(500, quick, 60)
    rng = np.random.default_rng([seed, 600])
    failures, notes = 0, []
    for _ in range(count):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, 5))
        P = rng.integers(0, 9, (m, n)) / 4.0
        sup = w_sup(P)
        ok = np.abs(sup - lub_by_lp(P)).max() <= 1e-9
        G = grid_upper_bounds(P, top=2.0)
        ok = ok and bool(np.all(wmaj_gap(np.broadcast_to(sup, G.shape), G) <= 1e-12))
        on_grid = np.allclose(sup * 4, np.round(sup * 4), atol=1e-12)
        if on_grid:
            ok = ok and bool(np.any(np.all(np.abs(G - sup) <= 1e-12, axis=1)))
        ok = ok and np.abs(w_inf(P) - w_inf_bruteforce(P)).max() <= 1e-12
        if not ok:
            failures += 1
            if len(notes) < 3:
                notes.append(f"set {P.tolist()}")
    return SuiteResult(6, "lattice oracle equivalence", failures == 0, count, failures, notes=notes)


# ---------------------------------------------------------------------------


def criterion_7(quick: bool = False, seed: int = 0) -> SuiteResult:
    """Scaling, subadditivity, submultiplicativity and isotonicity probes."""
    failures, checked, notes = 0, 0, []

    def fail(msg):
        nonlocal failures
        failures += 1
        if len(notes) < 3:
            notes.append(msg)

    rng = np.random.default_rng([seed, 700])
    algs = DENSE_ALGEBRAS
    for i in range(_n(40, quick, 4)):
        alg = algs[i % len(algs)]
        T = random_dense(alg, rng)
        alpha = float(rng.uniform(-3, 3))
        base = eta_estimate(T, LIGHT).lower
        scaled = eta_estimate(scale(alpha, T), LIGHT).lower
        checked += 1
        if np.abs(scaled - abs(alpha) * base).max() > 1e-10:
            fail(f"scaling alpha={alpha:.3f} on {alg!r}")

    for i in range(_n(200, quick, 12)):
        alg = algs[i % len(algs)]
        T1 = random_dense(alg, rng) if rng.random() < 0.5 else random_positive_map(alg, rng)
        T2 = random_dense(alg, rng) if rng.random() < 0.5 else make_lyapunov(random_element(alg, rng))
        u1, u2 = eta_estimate(T1, LIGHT).upper, eta_estimate(T2, LIGHT).upper
        checked += 2
        if not weak_majorizes(eta_lower_sampled(T1 + T2, LIGHT), u1 + u2, tol=1e-9):
            fail(f"subadditivity on {alg!r}")
        if not weak_majorizes(eta_lower_sampled(T1 @ T2, LIGHT), hadamard(u1, u2), tol=1e-9):
            fail(f"submultiplicativity on {alg!r}")

    for i in range(_n(50, quick, 6)):
        alg = FIXTURE_ALGEBRAS[i % len(FIXTURE_ALGEBRAS)]
        a = random_positive_element(alg, rng)
        t = float(rng.uniform(0, 1))
        chain = [make_quad(sqrt_element(a)), make_quad_pair_power(a, t), make_lyapunov(a)]
        X = rng.standard_normal((500, alg.dim))
        lams = [alg.eigvals(T.apply_coords(X)) for T in chain]
        for lo_op, hi_op, l1, l2 in zip(chain, chain[1:], lams, lams[1:]):
            checked += 1
            gap = np.maximum(wmaj_gap(l1, l2), np.abs(l1.sum(1) - l2.sum(1)))
            pointwise = bool(np.all(gap <= 1e-9 * np.maximum(1.0, np.abs(l2).max(1))))
            bracket = weak_majorizes(eta_lower_sampled(lo_op, LIGHT), eta_estimate(hi_op, LIGHT).upper, tol=1e-9)
            if not (pointwise and bracket):
                fail(f"isotonicity t={t:.3f} on {alg!r}: pointwise={pointwise} bracket={bracket}")
    return SuiteResult(7, "scaling / subadditivity / submultiplicativity / isotonicity", failures == 0, checked, failures, notes=notes)


HOLDER_TRIPLES = ((1.0, 2.0, 2.0), (2.0, INF, 2.0), (1.0, INF, 1.0), (3.0, INF, 3.0), (INF, INF, INF))
NORM_PAIRS = ((INF, INF), (1.0, INF), (INF, 1.0), (2.0, 1.0))
HOLDER_CONFIG = SampleConfig(n_frames=10, signs_per_frame=4, n_random_x=100)


def criterion_8(quick: bool = False, seed: int = 0) -> SuiteResult:
    """Norm bounds from eta: Hoelder-type inequality and the operator-norm sandwich."""
    failures, checked, notes = 0, 0, []
    for f in _fixture_sets(_n(50, quick, 3), seed):
        for p, r, s in HOLDER_TRIPLES:
            checked += 1
            res = holder_bound_check(f.operator, p, r, s, HOLDER_CONFIG, eta=f.eta)
            if not res.passed:
                failures += 1
                if len(notes) < 3:
                    notes.append(f"holder {(p, r, s)} {f.name} gap={res.worst_gap:.3g}")
    count = _n(100, quick, 5)
    cfg = SampleConfig(n_frames=5, signs_per_frame=2, n_random_x=50)
    for ai, alg in enumerate(FIXTURE_ALGEBRAS):
        rng = np.random.default_rng([seed, 800 + ai])
        for _ in range(count):
            T = random_positive_map(alg, rng)
            eta = eta_estimate(T).upper
            for r, s in NORM_PAIRS:
                checked += 1
                lo = op_norm_lower(T, r, s, cfg, steps=50, proposals=8)
                hi = op_norm_upper_from_eta(T, r, s, eta)
                if lo > hi + 1e-9 * max(1.0, hi):
                    failures += 1
                    if len(notes) < 3:
                        notes.append(f"norm ({r},{s}) on {alg!r}: {lo} > {hi}")
    return SuiteResult(8, "norm bounds", failures == 0, checked, failures, notes=notes)


def criterion_9(quick: bool = False, seed: int = 0) -> SuiteResult:
    """Schur maps with indefinite parameter on Hermitian(4)."""
    alg = ComplexHermitian(4)
    rng = np.random.default_rng([seed, 900])
    count = _n(100, quick, 5)
    failures, notes = 0, []
    for _ in range(count):
        A = random_symmetric_matrix(rng, 4)
        T = make_schur(A, alg=alg)
        w, V = np.linalg.eigh(A)
        Ap = (V * np.maximum(w, 0)) @ V.T
        Am = (V * np.maximum(-w, 0)) @ V.T
        bound = np.sort(np.diag(Ap))[::-1] + np.sort(np.diag(Am))[::-1]
        low = np.sort(np.abs(np.diag(A)))[::-1]
        lower = eta_lower_sampled(T, LIGHT)
        upper = eta_upper_structured(T)
        ok = weak_majorizes(low, lower, tol=1e-9) and weak_majorizes(lower, upper, tol=1e-9)
        ok = ok and weak_majorizes(upper, bound, tol=1e-9)
        if not ok:
            failures += 1
            if len(notes) < 3:
                notes.append(f"A={np.round(A, 3).tolist()}")
    return SuiteResult(9, "indefinite Schur sandwich", failures == 0, count, failures, notes=notes)


CRITERIA: dict[int, Callable[..., SuiteResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_criterion(number: int, quick: bool = False, seed: int = 0) -> SuiteResult:
    t0 = time.perf_counter()
    res = CRITERIA[number](quick=quick, seed=seed)
    res.seconds = time.perf_counter() - t0
    return res


def run_all(quick: bool = False, seed: int = 0, numbers=None) -> list[SuiteResult]:
    return [run_criterion(k, quick, seed) for k in (numbers or sorted(CRITERIA))]
