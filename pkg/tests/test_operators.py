import numpy as np
import pytest

from jordan_eta.eja import (
    AlgebraMismatch,
    ComplexHermitian,
    Element,
    JordanFrame,
    Product,
    RealSymmetric,
    Spin,
    eigenvalues,
    from_matrix,
    inner,
    jordan_product,
    random_element,
    square,
    unit,
)
from jordan_eta.fixtures import mean_of_automorphisms, random_positive_element
from jordan_eta.majorization import majorizes, weak_majorizes
from jordan_eta.operators import (
    SingularOperatorError,
    adjoint,
    classify_stochastic,
    compose,
    dense,
    falsify_positivity,
    identity,
    invert,
    make_congruence,
    make_lyapunov,
    make_lyapunov_matrix,
    make_quad,
    make_quad_pair,
    make_quad_pair_power,
    make_schur,
    random_automorphism,
    random_dense,
    scale,
    structurally_positive,
    zero_operator,
)

ALGEBRAS = [RealSymmetric(3), ComplexHermitian(3), Spin(4), Product((RealSymmetric(2), Spin(3)))]
MATRIX_ALGEBRAS = [RealSymmetric(3), ComplexHermitian(3)]


def _close_ops(S, T, tol=1e-10):
    return np.allclose(S.matrix, T.matrix, atol=tol)


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_linearity_and_adjoint(alg):
    rng = np.random.default_rng(0)
    T = random_dense(alg, rng)
    x, y = random_element(alg, rng), random_element(alg, rng)
    assert np.allclose(T(2 * x - 3 * y).coords, (2 * T(x) - 3 * T(y)).coords, atol=1e-10)
    assert np.isclose(inner(T(x), y), inner(x, T.T(y)), atol=1e-10)
    assert _close_ops(adjoint(adjoint(T)), T)


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_adjoint_of_composition(alg):
    rng = np.random.default_rng(1)
    T1, T2 = random_dense(alg, rng), make_quad(random_element(alg, rng))
    assert _close_ops(adjoint(compose(T1, T2)), compose(adjoint(T2), adjoint(T1)))


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_invert(alg):
    assert _close_ops(invert(identity(alg)), identity(alg))
    T = random_dense(alg, 2)
    assert np.allclose((invert(T) @ T).matrix, np.eye(alg.dim), atol=1e-8)
    with pytest.raises(SingularOperatorError):
        invert(zero_operator(alg))


def test_algebra_mismatch():
    with pytest.raises(AlgebraMismatch):
        identity(Spin(3)) + identity(RealSymmetric(2))
    with pytest.raises(ValueError):
        dense(Spin(3), np.eye(4))


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_lyapunov(alg):
    assert _close_ops(make_lyapunov(unit(alg)), identity(alg))
    a = random_element(alg, 3)
    L = make_lyapunov(a)
    assert np.allclose(L(unit(alg)).coords, a.coords)
    assert L.is_self_adjoint()
    rng = np.random.default_rng(3)
    for _ in range(100):
        x = random_element(alg, rng)
        assert np.allclose(L(x).coords, jordan_product(a, x).coords, atol=1e-10)


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_quad(alg):
    assert _close_ops(make_quad(unit(alg)), identity(alg))
    rng = np.random.default_rng(4)
    a, b = random_element(alg, rng), random_element(alg, rng)
    P = make_quad(a)
    assert np.allclose(P(unit(alg)).coords, square(a).coords, atol=1e-10)
    assert P.is_self_adjoint()
    assert _close_ops(make_quad_pair(a, a), P)
    assert _close_ops(make_quad_pair(a, b), make_quad_pair(b, a))
    for _ in range(100):
        x = random_element(alg, rng)
        direct = 2 * jordan_product(a, jordan_product(a, x)) - jordan_product(square(a), x)
        assert np.allclose(P(x).coords, direct.coords, atol=1e-10)


def test_quad_matches_matrix_formula():
    # on Hermitian matrices P_a(X) = A X A
    alg = ComplexHermitian(3)
    rng = np.random.default_rng(5)
    a, x = random_element(alg, rng), random_element(alg, rng)
    A, X = a.matrix(), x.matrix()
    assert np.allclose(make_quad(a)(x).matrix(), A @ X @ A, atol=1e-10)


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_quad_pair_power(alg):
    a = random_positive_element(alg, np.random.default_rng(6))
    assert _close_ops(make_quad_pair_power(a, 0.0), make_lyapunov(a), 1e-9)
    assert _close_ops(make_quad_pair_power(a, 1.0), make_lyapunov(a), 1e-9)
    assert np.allclose(make_quad_pair_power(a, 0.3)(unit(alg)).coords, a.coords, atol=1e-9)
    with pytest.raises(ValueError):
        make_quad_pair_power(-1.0 * a, 0.5)
    with pytest.raises(ValueError):
        make_quad_pair_power(a, 1.5)


def _frame_from_unitary(alg, U):
    return JordanFrame(alg, np.array([alg.from_matrix(np.outer(U[:, i], np.conj(U[:, i]))) for i in range(alg.m)]))


@pytest.mark.parametrize("alg", MATRIX_ALGEBRAS, ids=repr)
def test_schur_against_hadamard_formula(alg):
    rng = np.random.default_rng(7)
    U = alg.random_unitary(rng)
    B = rng.standard_normal((3, 3))
    A = B + B.T
    D = make_schur(A, frame=_frame_from_unitary(alg, U))
    for _ in range(100):
        x = random_element(alg, rng)
        X = x.matrix()
        expected = U @ (A * (np.conj(U).T @ X @ U)) @ np.conj(U).T
        assert np.allclose(D(x).matrix(), expected, atol=1e-10)
    assert D.is_self_adjoint()


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_schur_examples(alg):
    n = alg.rank
    assert _close_ops(make_schur(np.ones((n, n)), alg=alg), identity(alg))
    rng = np.random.default_rng(8)
    B = rng.standard_normal((n, n))
    A = B @ B.T
    D = make_schur(A, alg=alg)
    assert np.allclose(eigenvalues(D(unit(alg))), np.sort(np.diag(A))[::-1], atol=1e-10)
    assert structurally_positive(D)
    assert not structurally_positive(make_schur(A - 10 * np.eye(n), alg=alg))
    with pytest.raises(ValueError):
        make_schur(np.triu(np.ones((n, n))), alg=alg)
    with pytest.raises(ValueError):
        make_schur(np.eye(n + 1), alg=alg)


def test_schur_identity_is_diagonal_projection():
    alg = RealSymmetric(3)
    X = np.arange(9.0).reshape(3, 3)
    X = X + X.T
    D = make_schur(np.eye(3), alg=alg)
    assert np.allclose(D(from_matrix(alg, X)).matrix(), np.diag(np.diag(X)))


@pytest.mark.parametrize("alg", MATRIX_ALGEBRAS, ids=repr)
def test_congruence(alg):
    rng = np.random.default_rng(9)
    assert _close_ops(make_congruence(alg, np.eye(3)), identity(alg))
    M = rng.standard_normal((3, 3)) + (1j * rng.standard_normal((3, 3)) if alg.complex_ else 0)
    T = make_congruence(alg, M)
    assert _close_ops(T.T, make_congruence(alg, np.conj(M).T))
    assert np.allclose(T.T.params["M"], np.conj(M).T)
    x = random_element(alg, rng)
    assert np.allclose(T(x).matrix(), M @ x.matrix() @ np.conj(M).T, atol=1e-10)
    Q = make_congruence(alg, alg.random_unitary(rng))
    for _ in range(20):
        y = random_element(alg, rng)
        assert np.allclose(eigenvalues(Q(y)), eigenvalues(y), atol=1e-10)
    with pytest.raises(TypeError):
        make_congruence(Spin(3), np.eye(3))


def test_lyapunov_matrix():
    alg = ComplexHermitian(2)
    assert _close_ops(make_lyapunov_matrix(alg, 0.5 * np.eye(2)), identity(alg))
    assert _close_ops(make_lyapunov_matrix(alg, np.eye(2)), scale(2, identity(alg)))
    T = make_lyapunov_matrix(alg, np.diag([1.0, 2.0]))
    E11 = from_matrix(alg, np.diag([1.0, 0.0]))
    assert np.allclose(T(E11).matrix(), 2 * np.diag([1.0, 0.0]))
    with pytest.raises(TypeError):
        make_lyapunov_matrix(Spin(3), np.eye(3))


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_automorphisms_preserve_spectrum(alg):
    rng = np.random.default_rng(10)
    Phi = random_automorphism(alg, rng)
    for _ in range(20):
        x, y = random_element(alg, rng), random_element(alg, rng)
        assert np.allclose(eigenvalues(Phi(x)), eigenvalues(x), atol=1e-10)
        assert np.allclose(Phi(jordan_product(x, y)).coords, jordan_product(Phi(x), Phi(y)).coords, atol=1e-10)
    assert np.allclose(Phi.T.matrix @ Phi.matrix, np.eye(alg.dim), atol=1e-10)


# ---------------------------------------------------------------------------
# Positivity


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_positivity_verdicts(alg):
    rng = np.random.default_rng(11)
    assert falsify_positivity(make_quad(random_element(alg, rng))).certified
    neg = falsify_positivity(scale(-1, identity(alg)))
    assert neg.falsified
    c = neg.witness
    assert eigenvalues(c)[-1] >= -1e-12
    assert eigenvalues(-1 * c)[-1] < -1e-9
    assert falsify_positivity(random_dense(alg, rng)).falsified


def test_indefinite_lyapunov_falsified():
    alg = RealSymmetric(2)
    v = falsify_positivity(make_lyapunov(from_matrix(alg, np.diag([1.0, -1.0]))))
    assert v.falsified
    Tc = make_lyapunov(from_matrix(alg, np.diag([1.0, -1.0])))(v.witness)
    assert eigenvalues(Tc)[-1] < -1e-9


def test_positive_but_untagged_is_undetermined():
    alg = Spin(3)
    T = dense(alg, make_quad(random_element(alg, 0)).matrix)
    assert falsify_positivity(T).status == "undetermined"


def test_inverse_of_lyapunov_certified():
    alg = ComplexHermitian(3)
    rng = np.random.default_rng(12)
    M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) + 4 * np.eye(3)  # positive stable
    Linv = invert(make_lyapunov_matrix(alg, M))
    assert structurally_positive(Linv)
    C = alg.random_primitive_coords(rng, 500)
    assert np.all(alg.eigvals(Linv.apply_coords(C))[:, -1] >= -1e-10)
    unstable = invert(make_lyapunov_matrix(alg, M - 8 * np.eye(3)))
    assert not structurally_positive(unstable)
    assert not structurally_positive(invert(make_quad(random_positive_element(alg, rng))))


def test_inverse_of_lyapunov_a_positive():
    alg = Spin(4)
    a = random_positive_element(alg, np.random.default_rng(13))
    Linv = invert(make_lyapunov(a))
    assert structurally_positive(Linv)
    assert falsify_positivity(Linv, samples=3000, seed=1).certified


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_certified_maps_are_positive_on_samples(alg):
    rng = np.random.default_rng(14)
    maps = [
        make_quad(random_element(alg, rng)),
        make_quad_pair_power(random_positive_element(alg, rng), 0.5),
        scale(2.0, mean_of_automorphisms(alg, rng)),
        compose(make_quad(random_element(alg, rng)), random_automorphism(alg, rng)),
    ]
    for T in maps:
        assert structurally_positive(T)
        C = alg.random_primitive_coords(rng, 500)
        assert np.all(alg.eigvals(T.apply_coords(C))[:, -1] >= -1e-9)


# ---------------------------------------------------------------------------
# Classification


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_classify_doubly_stochastic(alg):
    rng = np.random.default_rng(15)
    T = mean_of_automorphisms(alg, rng, 2)
    rep = classify_stochastic(T)
    assert rep.is_ds and rep.is_dss and np.isclose(rep.scalar_ds, 1.0)
    rep = classify_stochastic(scale(2.5, T))
    assert not rep.is_ds and not rep.is_dss
    assert abs(rep.scalar_ds - 2.5) <= 1e-8
    rep = classify_stochastic(scale(0.5, identity(alg)))
    assert rep.is_dss and not rep.is_ds
    rep = classify_stochastic(scale(-2.0, T))
    assert abs(rep.scalar_ds + 2.0) <= 1e-8
    assert classify_stochastic(zero_operator(alg)).scalar_ds == 0.0


def test_classify_non_scalar():
    alg = ComplexHermitian(3)
    rep = classify_stochastic(make_quad(random_element(alg, 16)))
    assert rep.scalar_ds is None and not rep.is_ds
    # identity plus a derivation fixes e (and so does its adjoint) but is not positive
    T = identity(alg) + make_lyapunov_matrix(alg, 1j * np.diag([1.0, -1.0, 0.0]))
    assert np.allclose(T(unit(alg)).coords, unit(alg).coords)
    rep = classify_stochastic(T)
    assert rep.positivity.falsified and not rep.is_ds and rep.scalar_ds is None


@pytest.mark.parametrize("alg", ALGEBRAS, ids=repr)
def test_doubly_stochastic_majorization(alg):
    rng = np.random.default_rng(17)
    T = mean_of_automorphisms(alg, rng, 3)
    S = scale(0.7, T)
    for _ in range(100):
        x = random_element(alg, rng)
        assert majorizes(eigenvalues(T(x)), eigenvalues(x))
        p = Element(alg, alg.jordan(x.coords, x.coords))
        assert weak_majorizes(eigenvalues(S(p)), eigenvalues(p))
