import io
import json
import math

import numpy as np
import pytest

from jordan_eta.cli import EXIT_INPUT, EXIT_OK, EXIT_WITNESS, run

QUAD = '{"algebra": {"kind": "complex-hermitian", "m": 3}, "operator": {"kind": "quad", "a": [[2, [0, 1], 0], [[0, -1], 2, 0], [0, 0, -1]]}}'
SCHUR = '{"algebra": {"kind": "real-symmetric", "m": 3}, "operator": {"kind": "schur", "A": [[2, 1, 0], [1, 2, 0], [0, 0, 1]]}}'
CONG = '{"algebra": {"kind": "real-symmetric", "m": 2}, "operator": {"kind": "congruence", "M": [[1, 2], [0, 1]]}}'
DENSE = json.dumps({"algebra": {"kind": "spin", "d": 3}, "operator": {"kind": "dense", "matrix": np.arange(9.0).reshape(3, 3).tolist()}})


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def call_json(*argv):
    code, out, _ = call(*argv, "--json")
    return code, json.loads(out)


def test_vec_commands():
    assert call("vec", "join", "[1,0]", "[0.6,0.6]")[:2] == (EXIT_OK, "[1.0, 0.2]\n")
    assert call("vec", "winf", "[2,0]", "[1,1]")[1] == "[1.0, 1.0]\n"
    assert call("vec", "wsup", "[1,3,2]")[1] == "[3.0, 2.0, 1.0]\n"
    assert call("vec", "wmaj", "[1,1]", "[2,0]")[0] == EXIT_OK
    assert call("vec", "wmaj", "[2,0]", "[1,1]")[0] == EXIT_WITNESS


@pytest.mark.parametrize(
    "argv",
    [
        ("vec", "join", "[1,0]", "[1,0,0]"),
        ("vec", "join", "[1,0]"),
        ("vec", "wsup", "[1,-1]"),
        ("vec", "winf", "[1,"),
        ("eta", '{"algebra": {"kind": "spin", "d": 3}}'),
        ("eta", '{"algebra": {"kind": "spin", "d": 3}, "operator": {"kind": "quad", "a": [1, 2]}}'),
        ("check", "--q", "[1, 1, 1]", CONG),
        ("norm", "--r", "2", "--s", "2", "--p", "2", CONG),
        ("norm", "--r", "0.5", "--s", "2", CONG),
        ("eta", "/nonexistent/job.json"),
        ("eta", '{"algebra": {"kind": "spin", "d": 3}, "operator": {"kind": "inverse", "operator": {"kind": "dense", "matrix": [[0,0,0],[0,0,0],[0,0,0]]}}}'),
    ],
)
def test_input_errors_exit_2(argv):
    assert call(*argv)[0] == EXIT_INPUT


def test_malformed_json_location():
    code, _, err = call("eta", '{"algebra": {"kind": "spin", "d": 3},\n  "operator": {"kind": }}')
    assert code == EXIT_INPUT
    assert "line 2, column" in err


def test_error_json_report():
    code, out, _ = call("eta", "--json", "{")
    assert code == EXIT_INPUT
    assert "error" in json.loads(out)


@pytest.mark.parametrize(
    "spec, expected",
    [
        (QUAD, [9.0, 1.0, 1.0]),
        (SCHUR, [2.0, 2.0, 1.0]),
        (CONG, [3 + 2 * math.sqrt(2), 3 - 2 * math.sqrt(2)]),
    ],
)
def test_worked_examples(spec, expected):
    code, rep = call_json("eta", spec)
    assert code == EXIT_OK
    assert rep["eta"]["exact"] is True
    assert np.allclose(rep["eta"]["upper"], expected, atol=1e-10)
    assert np.allclose(rep["eta"]["lower"], expected, atol=1e-10)


def test_eta_report_is_deterministic_apart_from_timing():
    a = call_json("eta", "--quick", "--seed", "3", DENSE)[1]
    b = call_json("eta", "--quick", "--seed", "3", DENSE)[1]
    a.pop("timing"), b.pop("timing")
    assert a == b
    assert a["eta"]["exact"] is False and a["seed"] == 3
    assert set(a) >= {"command", "version", "algebra", "operator", "eta", "exit_code"}


def test_check_witness_and_pass():
    code, rep = call_json("check", "--quick", "--q", "[2, 1.5, 1]", SCHUR)
    assert code == EXIT_WITNESS and rep["result"]["passed"] is False
    assert len(rep["result"]["witness"]) == 6
    assert call("check", "--quick", "--q", "[2, 2, 1]", SCHUR)[0] == EXIT_OK


def test_classify():
    code, rep = call_json("classify", '{"algebra": {"kind": "spin", "d": 4}, "operator": {"kind": "automorphism", "seed": 1}}')
    assert code == EXIT_OK
    c = rep["classification"]
    assert c["is_ds"] is True and math.isclose(c["scalar_ds"], 1.0)
    code, out, _ = call("classify", "--samples", "300", DENSE)
    assert code == EXIT_OK and "positivity:" in out


def test_norm_and_holder():
    code, rep = call_json("norm", "--quick", "--r", "inf", "--s", "2", "--p", "2", CONG)
    assert code == EXIT_OK
    n = rep["norm"]
    assert n["r"] == "inf" and n["lower"] <= n["upper"] * (1 + 1e-9)
    assert math.isclose(n["upper"], math.hypot(3 + 2 * math.sqrt(2), 3 - 2 * math.sqrt(2)))
    assert rep["holder"]["passed"] is True


def test_selftest_subset():
    code, out, _ = call("selftest", "--quick", "--only", "4", "--only", "6")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 2 and all(line.startswith("[PASS]") for line in lines)


def test_usage_errors():
    assert call()[0] == EXIT_INPUT
    assert call("nosuchcommand")[0] == EXIT_INPUT
    assert call("--version")[0] == EXIT_OK
