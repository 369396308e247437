"""Command-line front end.

Exit codes: 0 success, 1 a witness was found (or a check failed), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .eja import AlgebraMismatch
from .eta import check_inequality, eta_estimate
from .majorization import DimensionError, join, w_inf, w_sup, weak_majorizes
from .norms import holder_bound_check, op_norm_lower, op_norm_upper_from_eta
from .operators import SingularOperatorError, classify_stochastic
from .serialize import SpecError, load_json, operator_tree, parse_job, parse_vector

EXIT_OK, EXIT_WITNESS, EXIT_INPUT = 0, 1, 2


def _exponent(text: str) -> float:
    if text.lower() in ("inf", "infinity", "oo"):
        return math.inf
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a norm exponent: {text!r}") from None
    if not value >= 1.0:
        raise argparse.ArgumentTypeError("norm exponents must be >= 1")
    return value


def _round(v) -> list:
    return [round(float(x), 12) + 0.0 for x in np.asarray(v).ravel()]


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="sampling seed (default 0)")
    common.add_argument("--samples", type=int, default=None, help="number of sampled Jordan frames")
    common.add_argument("--tol", type=float, default=None, help="comparison tolerance")
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--quick", action="store_true", help="lighter sampling / smaller self-test")

    parser = argparse.ArgumentParser(prog="jordan-eta", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eta", parents=[common], help="estimate eta(T)")
    p.add_argument("spec", help="JSON spec: file path, '-' for stdin, or inline JSON")

    p = sub.add_parser("check", parents=[common], help="test lambda(|T(x)|) <_w q * lambda(|x|) on samples")
    p.add_argument("spec")
    p.add_argument("--q", required=True, help="candidate vector, e.g. '[1, 0.5]'")

    p = sub.add_parser("classify", parents=[common], help="positivity and doubly stochastic tests")
    p.add_argument("spec")

    p = sub.add_parser("norm", parents=[common], help="bounds on the (r -> s) operator norm")
    p.add_argument("spec")
    p.add_argument("--r", type=_exponent, required=True)
    p.add_argument("--s", type=_exponent, required=True)
    p.add_argument("--p", type=_exponent, default=None, help="also test ||T(x)||_p <= ||eta||_r ||x||_s")

    p = sub.add_parser("vec", parents=[common], help="weak-majorization lattice on vectors")
    p.add_argument("op", choices=["winf", "wsup", "join", "wmaj"])
    p.add_argument("vectors", nargs="+", help="JSON lists, e.g. '[1,0]'")

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suites")
    p.add_argument("--only", type=int, action="append", help="run only this suite number (repeatable)")
    return parser


def _config_overrides(args) -> dict:
    out = {"seed": args.seed, "n_frames": args.samples, "tol": args.tol}
    if args.quick and args.samples is None:
        out.update(n_frames=40, signs_per_frame=4, n_random_x=200)
    return out


def _job(args):
    return parse_job(load_json(args.spec), **_config_overrides(args))


def _base_report(args, job=None) -> dict:
    report = {"command": args.command, "version": __version__}
    if job is not None:
        report["algebra"] = job.algebra.to_dict()
        report["operator"] = operator_tree(job.operator)
        report["seed"] = job.config.seed
    else:
        report["seed"] = 0 if args.seed is None else args.seed
    return report


def cmd_eta(args, report):
    job = _job(args)
    report.update(_base_report(args, job))
    est = eta_estimate(job.operator, job.config)
    report["eta"] = est.to_dict()
    report["eta"]["seed"] = job.config.seed
    text = [
        f"eta(T) {'exact' if est.exact else 'bracket'} [{est.method}]",
        f"  lower: {_round(est.lower)}",
        f"  upper: {_round(est.upper)}",
    ]
    return EXIT_OK, text


def _witness_lines(res) -> list[str]:
    if res.passed:
        return [f"pass on {res.samples} samples (worst gap {res.worst_gap:.3g})"]
    return [f"witness found among {res.samples} samples", f"  x = {_round(res.witness.coords)}"]


def cmd_check(args, report):
    job = _job(args)
    report.update(_base_report(args, job))
    q = parse_vector(args.q, "--q")
    if q.size != job.algebra.rank:
        raise SpecError(f"--q needs {job.algebra.rank} entries for this algebra")
    res = check_inequality(job.operator, q, job.config)
    report["q"] = q.tolist()
    report["result"] = res.to_dict()
    return (EXIT_OK if res.passed else EXIT_WITNESS), _witness_lines(res)


def cmd_classify(args, report):
    job = _job(args)
    report.update(_base_report(args, job))
    samples = 2000 if args.samples is None else args.samples
    rep = classify_stochastic(job.operator, tol=args.tol or 1e-9, samples=samples, seed=job.config.seed)
    report["classification"] = rep.to_dict()
    text = [
        f"positivity: {rep.positivity.status}",
        f"doubly stochastic: {rep.is_ds}",
        f"doubly substochastic: {rep.is_dss}",
        f"scalar multiple of doubly stochastic: {'no' if rep.scalar_ds is None else rep.scalar_ds}",
    ]
    return EXIT_OK, text


def cmd_norm(args, report):
    job = _job(args)
    report.update(_base_report(args, job))
    T, cfg = job.operator, job.config
    est = eta_estimate(T, cfg)
    lo = op_norm_lower(T, args.r, args.s, cfg)
    hi = op_norm_upper_from_eta(T, args.r, args.s, est.upper)
    report["norm"] = {"r": args.r, "s": args.s, "lower": lo, "upper": hi, "eta_upper": est.upper.tolist()}
    text = [f"||T||_(r={args.r} -> s={args.s}) in [{lo:.12g}, {hi:.12g}]"]
    code = EXIT_OK
    if args.p is not None:
        res = holder_bound_check(T, args.p, args.r, args.s, cfg, eta=est.upper)
        report["holder"] = {"p": args.p, **res.to_dict()}
        text.append(f"||T(x)||_p <= ||eta||_r ||x||_s with p={args.p}:")
        text.extend("  " + line for line in _witness_lines(res))
        code = EXIT_OK if res.passed else EXIT_WITNESS
    return code, text


def cmd_vec(args, report):
    report.update(_base_report(args))
    vecs = [parse_vector(v, f"vector {i + 1}") for i, v in enumerate(args.vectors)]
    if len({v.size for v in vecs}) != 1:
        raise SpecError("all vectors must have the same length")
    if args.op == "wmaj":
        if len(vecs) != 2:
            raise SpecError("wmaj takes exactly two vectors: p q (tests p <_w q)")
        tol = 1e-9 if args.tol is None else args.tol
        ok = weak_majorizes(vecs[0], vecs[1], tol=tol)
        report["result"] = ok
        return (EXIT_OK if ok else EXIT_WITNESS), [str(ok).lower()]
    if args.op == "join" and len(vecs) != 2:
        raise SpecError("join takes exactly two vectors")
    fn = {"winf": w_inf, "wsup": w_sup, "join": lambda V: join(V[0], V[1])}[args.op]
    out = _round(fn(np.vstack(vecs)))
    report["result"] = out
    return EXIT_OK, [json.dumps(out)]


def cmd_selftest(args, report):
    from .selftest import run_all

    report.update(_base_report(args))
    seed = 0 if args.seed is None else args.seed
    results = run_all(quick=args.quick, seed=seed, numbers=args.only)
    report["suites"] = [r.to_dict() for r in results]
    report["passed"] = all(r.passed for r in results)
    return (EXIT_OK if report["passed"] else EXIT_WITNESS), [r.line() for r in results]


COMMANDS = {
    "eta": cmd_eta,
    "check": cmd_check,
    "classify": cmd_classify,
    "norm": cmd_norm,
    "vec": cmd_vec,
    "selftest": cmd_selftest,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)

    report: dict = {}
    t0 = time.perf_counter()
    try:
        code, text = COMMANDS[args.command](args, report)
    except (SpecError, AlgebraMismatch, DimensionError, SingularOperatorError, ValueError, TypeError) as exc:
        print(f"input error: {exc}", file=stderr)
        if args.json:
            print(json.dumps({"command": args.command, "version": __version__, "error": str(exc)}, sort_keys=True), file=stdout)
        return EXIT_INPUT
    report["timing"] = {"seconds": round(time.perf_counter() - t0, 6)}
    report["exit_code"] = code
    if args.json:
        print(json.dumps(_jsonable(report), sort_keys=True), file=stdout)
    else:
        print("\n".join(text), file=stdout)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
