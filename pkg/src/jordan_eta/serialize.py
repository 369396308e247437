"""JSON job specs: algebra descriptor, element literals and operator trees."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .eja import Algebra, Element, JordanFrame, MatrixAlgebra, Spin, algebra_from_dict
from .eta import SampleConfig
from .operators import (
    LinearOperator,
    add,
    compose,
    dense,
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
    scale,
)


class SpecError(ValueError):
    """The job spec is malformed or inconsistent with the algebra."""


@dataclass(frozen=True, eq=False)
class JobSpec:
    algebra: Algebra
    operator: LinearOperator
    config: SampleConfig
    raw: dict


def load_json(source: str) -> dict:
    """Parse inline JSON (starting with ``{``), ``-`` for stdin, or a file path."""
    text = source
    where = "<inline>"
    if source == "-":
        text, where = sys.stdin.read(), "<stdin>"
    elif not source.lstrip().startswith(("{", "[")):
        path = Path(source)
        if not path.is_file():
            raise SpecError(f"spec file not found: {source}")
        text, where = path.read_text(), str(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed JSON in {where} at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _entry(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise SpecError("complex entries must be [re, im] pairs")
        return complex(float(x[0]), float(x[1]))
    return complex(float(x))


def parse_matrix(value) -> np.ndarray:
    """Row-major nested lists; each entry is a number or an ``[re, im]`` pair."""
    if not isinstance(value, (list, tuple)) or not value or not all(isinstance(r, (list, tuple)) for r in value):
        raise SpecError("expected a matrix as a list of rows")
    if len({len(r) for r in value}) != 1:
        raise SpecError("matrix rows have different lengths")
    try:
        M = np.array([[_entry(x) for x in row] for row in value], dtype=complex)
    except (TypeError, ValueError):
        raise SpecError("matrix entries must be numbers or [re, im] pairs") from None
    return M.real.copy() if not np.any(M.imag) else M


def parse_vector(value, what: str = "vector") -> np.ndarray:
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError as exc:
            raise SpecError(f"malformed {what} at column {exc.colno}: {exc.msg}") from None
    try:
        v = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise SpecError(f"{what} must be a list of numbers") from None
    if v.ndim != 1 or v.size == 0:
        raise SpecError(f"{what} must be a non-empty flat list of numbers")
    return v


def parse_element(alg: Algebra, value) -> Element:
    """Coordinates, a Hermitian matrix literal, or ``{"natural": [x0, ...]}`` for spin factors."""
    if isinstance(value, dict):
        if "coords" in value:
            return parse_element(alg, list(value["coords"]))
        if "matrix" in value:
            value = value["matrix"]
        elif "natural" in value:
            if not isinstance(alg, Spin):
                raise SpecError("natural form is only defined for spin algebras")
            x = parse_vector(value["natural"], "natural coordinates")
            if x.size != alg.d:
                raise SpecError(f"natural form needs {alg.d} entries")
            return Element(alg, alg.from_natural(x))
        else:
            raise SpecError("element object needs 'coords', 'matrix' or 'natural'")
    if isinstance(value, (list, tuple)) and value and not isinstance(value[0], (list, tuple)):
        arr = parse_vector(value, "element coordinates")
        if arr.size != alg.dim:
            raise SpecError(f"element needs {alg.dim} coordinates, got {arr.size}")
        return Element(alg, arr)
    if not isinstance(alg, MatrixAlgebra):
        raise SpecError("matrix literals need a real-symmetric or complex-hermitian algebra")
    M = parse_matrix(value)
    if M.shape != (alg.m, alg.m):
        raise SpecError(f"matrix literal must be {alg.m}x{alg.m}")
    if np.abs(M - np.conj(M).T).max() > 1e-10 * max(1.0, np.abs(M).max()):
        raise SpecError("matrix literal is not Hermitian")
    if np.iscomplexobj(M) and not alg.complex_:
        if np.abs(M.imag).max() > 0:
            raise SpecError("complex entries in a real-symmetric algebra")
        M = M.real
    return Element(alg, alg.from_matrix(M))


def _need(spec: dict, key: str):
    if key not in spec:
        raise SpecError(f"operator of kind {spec.get('kind')!r} needs '{key}'")
    return spec[key]


def parse_operator(alg: Algebra, spec: dict) -> LinearOperator:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SpecError("operator must be an object with a 'kind'")
    kind = spec["kind"]
    if kind == "identity":
        return identity(alg)
    if kind == "dense":
        M = parse_matrix(_need(spec, "matrix"))
        if M.shape != (alg.dim, alg.dim) or np.iscomplexobj(M):
            raise SpecError(f"dense operator needs a real {alg.dim}x{alg.dim} matrix")
        return dense(alg, M)
    if kind == "lyapunov":
        return make_lyapunov(parse_element(alg, _need(spec, "a")))
    if kind == "quad":
        return make_quad(parse_element(alg, _need(spec, "a")))
    if kind == "quad_pair":
        return make_quad_pair(parse_element(alg, _need(spec, "a")), parse_element(alg, _need(spec, "b")))
    if kind == "quad_pair_power":
        return make_quad_pair_power(parse_element(alg, _need(spec, "a")), float(_need(spec, "t")))
    if kind == "schur":
        A = parse_matrix(_need(spec, "A"))
        if np.iscomplexobj(A):
            raise SpecError("Schur parameter must be real")
        frame = None
        if "frame" in spec:
            frame = JordanFrame(alg, np.array([parse_element(alg, f).coords for f in spec["frame"]]))
            if not frame.is_valid():
                raise SpecError("the given frame is not a Jordan frame")
        return make_schur(A, frame=frame, alg=alg)
    if kind in ("congruence", "lyapunov_matrix"):
        if not isinstance(alg, MatrixAlgebra):
            raise SpecError(f"{kind} needs a real-symmetric or complex-hermitian algebra")
        M = parse_matrix(_need(spec, "M"))
        return make_congruence(alg, M) if kind == "congruence" else make_lyapunov_matrix(alg, M)
    if kind == "automorphism":
        return random_automorphism(alg, int(spec.get("seed", 0)))
    if kind == "scale":
        return scale(float(_need(spec, "alpha")), parse_operator(alg, _need(spec, "operator")))
    if kind in ("sum", "compose"):
        ops = [parse_operator(alg, s) for s in _need(spec, "operators")]
        if not ops:
            raise SpecError(f"{kind} needs at least one operator")
        return add(*ops) if kind == "sum" else compose(*ops)
    if kind == "inverse":
        return invert(parse_operator(alg, _need(spec, "operator")))
    raise SpecError(f"unknown operator kind {kind!r}")


def parse_config(spec: dict | None, **overrides) -> SampleConfig:
    spec = dict(spec or {})
    spec.update({k: v for k, v in overrides.items() if v is not None})
    allowed = {"n_frames", "ranks", "signs_per_frame", "n_random_x", "seed", "tol"}
    unknown = set(spec) - allowed
    if unknown:
        raise SpecError(f"unknown config keys: {sorted(unknown)}")
    return SampleConfig(**spec)


def parse_job(doc: dict, **overrides) -> JobSpec:
    if not isinstance(doc, dict):
        raise SpecError("spec must be a JSON object")
    for key in ("algebra", "operator"):
        if key not in doc:
            raise SpecError(f"spec needs '{key}'")
    try:
        alg = algebra_from_dict(doc["algebra"])
    except (KeyError, TypeError, AttributeError) as exc:
        raise SpecError(f"bad algebra descriptor: {exc}") from None
    op = parse_operator(alg, doc["operator"])
    return JobSpec(alg, op, parse_config(doc.get("config"), **overrides), doc)


def operator_tree(T: LinearOperator) -> dict:
    """Structure summary of an operator for reports."""
    out = {"kind": T.kind}
    if T.parts:
        out["parts"] = [operator_tree(p) for p in T.parts]
    if "alpha" in T.params:
        out["alpha"] = T.params["alpha"]
    if "t" in T.params:
        out["t"] = T.params["t"]
    return out
