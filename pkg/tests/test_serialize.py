import json

import numpy as np
import pytest

from jordan_eta.eja import ComplexHermitian, RealSymmetric, Spin, eigenvalues
from jordan_eta.serialize import (
    SpecError,
    load_json,
    operator_tree,
    parse_config,
    parse_element,
    parse_job,
    parse_matrix,
    parse_operator,
    parse_vector,
)


def test_load_json_sources(tmp_path):
    assert load_json('{"a": 1}') == {"a": 1}
    f = tmp_path / "job.json"
    f.write_text('{"b": [1, 2]}')
    assert load_json(str(f)) == {"b": [1, 2]}
    with pytest.raises(SpecError, match="not found"):
        load_json(str(tmp_path / "missing.json"))


def test_malformed_json_reports_location():
    with pytest.raises(SpecError, match="line 2, column"):
        load_json('{"a": 1,\n "b": }')


def test_matrix_entries():
    assert parse_matrix([[1, 2], [3, 4]]).dtype == float
    M = parse_matrix([[1, [0, 1]], [[0, -1], 2]])
    assert np.iscomplexobj(M) and M[0, 1] == 1j
    # zero imaginary parts collapse to a real matrix
    assert not np.iscomplexobj(parse_matrix([[[1, 0]]]))
    with pytest.raises(SpecError):
        parse_matrix([[1, 2], [3]])
    with pytest.raises(SpecError):
        parse_matrix([[1, [0, 1, 2]]])
    with pytest.raises(SpecError):
        parse_matrix([[1, "x"]])


def test_vector():
    assert parse_vector("[1, 0.5]").tolist() == [1.0, 0.5]
    for bad in ("[1,", "[]", "[[1]]", '["a"]'):
        with pytest.raises(SpecError):
            parse_vector(bad)


def test_element_forms():
    alg = ComplexHermitian(2)
    x = parse_element(alg, [[2, [0, 1]], [[0, -1], 2]])
    assert np.allclose(eigenvalues(x), [3, 1])
    y = parse_element(alg, {"coords": x.coords.tolist()})
    assert np.allclose(y.coords, x.coords)
    with pytest.raises(SpecError, match="Hermitian"):
        parse_element(alg, [[1, 1], [0, 1]])
    with pytest.raises(SpecError, match="2x2"):
        parse_element(alg, [[1]])
    with pytest.raises(SpecError, match="coordinates"):
        parse_element(alg, [1, 2])
    with pytest.raises(SpecError, match="complex"):
        parse_element(RealSymmetric(2), [[1, [0, 1]], [[0, -1], 1]])


def test_spin_natural_form():
    alg = Spin(3)
    x = parse_element(alg, {"natural": [2, 1, 0]})
    assert np.allclose(eigenvalues(x), [3, 1])
    with pytest.raises(SpecError):
        parse_element(alg, {"natural": [1, 0]})
    with pytest.raises(SpecError):
        parse_element(RealSymmetric(2), {"natural": [1, 0, 0]})
    with pytest.raises(SpecError, match="matrix literals"):
        parse_element(alg, [[1, 0], [0, 1]])


@pytest.mark.parametrize(
    "spec, kind",
    [
        ({"kind": "identity"}, "identity"),
        ({"kind": "quad", "a": [[1, 0], [0, 2]]}, "quad"),
        ({"kind": "lyapunov", "a": [[1, 0], [0, -2]]}, "lyapunov"),
        ({"kind": "quad_pair", "a": [[1, 0], [0, 2]], "b": [[2, 1], [1, 2]]}, "quad_pair"),
        ({"kind": "quad_pair_power", "a": [[1, 0], [0, 2]], "t": 0.25}, "quad_pair"),
        ({"kind": "schur", "A": [[1, 0.5], [0.5, 1]]}, "schur"),
        ({"kind": "congruence", "M": [[1, 2], [0, 1]]}, "congruence"),
        ({"kind": "lyapunov_matrix", "M": [[1, 2], [0, 1]]}, "lyapunov_matrix"),
        ({"kind": "automorphism", "seed": 3}, "congruence"),
        ({"kind": "dense", "matrix": np.eye(3).tolist()}, "generic"),
    ],
)
def test_operator_kinds(spec, kind):
    T = parse_operator(RealSymmetric(2), spec)
    assert T.kind.startswith(kind)
    assert T.matrix.shape == (3, 3)


def test_composite_operators():
    alg = RealSymmetric(2)
    spec = {
        "kind": "sum",
        "operators": [
            {"kind": "scale", "alpha": 2, "operator": {"kind": "identity"}},
            {"kind": "compose", "operators": [{"kind": "quad", "a": [[1, 0], [0, 2]]}, {"kind": "identity"}]},
        ],
    }
    T = parse_operator(alg, spec)
    assert np.allclose(T.matrix, 2 * np.eye(3) + parse_operator(alg, spec["operators"][1]).matrix)
    tree = operator_tree(T)
    assert tree["kind"] == "sum" and len(tree["parts"]) == 2
    inv = parse_operator(alg, {"kind": "inverse", "operator": {"kind": "quad", "a": [[1, 0], [0, 2]]}})
    assert np.allclose(inv.matrix @ parse_operator(alg, {"kind": "quad", "a": [[1, 0], [0, 2]]}).matrix, np.eye(3))


@pytest.mark.parametrize(
    "spec, message",
    [
        ({"kind": "nope"}, "unknown operator"),
        ({"kind": "quad"}, "needs 'a'"),
        ({"kind": "sum", "operators": []}, "at least one"),
        ({"kind": "dense", "matrix": [[1]]}, "dense operator"),
        ({"kind": "schur", "A": [[1, [0, 1]], [[0, -1], 1]]}, "real"),
        ({"kind": "schur", "A": np.eye(2).tolist(), "frame": [[[1, 0], [0, 0]], [[1, 0], [0, 0]]]}, "Jordan frame"),
        ({}, "kind"),
    ],
)
def test_operator_errors(spec, message):
    with pytest.raises(SpecError, match=message):
        parse_operator(RealSymmetric(2), spec)


def test_matrix_only_kinds_rejected_on_spin():
    with pytest.raises(SpecError, match="real-symmetric or complex-hermitian"):
        parse_operator(Spin(3), {"kind": "congruence", "M": [[1]]})


def test_config_and_job():
    cfg = parse_config({"n_frames": 7}, seed=4, tol=None)
    assert cfg.n_frames == 7 and cfg.seed == 4
    with pytest.raises(SpecError, match="unknown config"):
        parse_config({"frames": 7})
    job = parse_job(json.loads('{"algebra": {"kind": "spin", "d": 3}, "operator": {"kind": "identity"}}'))
    assert job.algebra == Spin(3)
    with pytest.raises(SpecError, match="needs 'operator'"):
        parse_job({"algebra": {"kind": "spin", "d": 3}})
    with pytest.raises(SpecError, match="algebra descriptor"):
        parse_job({"algebra": {"kind": "spin"}, "operator": {"kind": "identity"}})
    with pytest.raises(SpecError, match="JSON object"):
        parse_job([1])
