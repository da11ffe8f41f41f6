"""Command line interface.

Exit codes: 0 success, 1 certificate or validation failure, 2 usage error,
3 numerically inconclusive result.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .algebra import Tolerances, TOL_ALG, TOL_PD, TOL_SUB, validate
from .errors import (
    BadDimension,
    BadMode,
    CertificateFailure,
    DimensionMismatch,
    NotInNullity,
    NumericalError,
    SingularMetric,
)
from .family import ExampleSpec, build_example, transport_check, verify_family_certificate
from .holonomy import DEFAULT_SEED
from .io import InputFormatError, digest, dump_algebra, read_algebra, write_atomic
from .report import analyze, dumps

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
SEED_ENV = "NULLITYLAB_SEED"


def _seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise InputFormatError(f"{SEED_ENV} must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _tolerances(args) -> Tolerances:
    tol_alg = args.tol_alg if args.tol_alg is not None else (args.tol if args.tol is not None else TOL_ALG)
    tol_sub = args.tol_sub if args.tol_sub is not None else (args.tol if args.tol is not None else TOL_SUB)
    return Tolerances(tol_alg=tol_alg, tol_sub=tol_sub, tol_pd=args.tol_pd)


def _emit(text: str, path=None) -> None:
    if path:
        write_atomic(path, text + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_validate(args) -> int:
    alg, _ = read_algebra(args.file)
    report = validate(alg, _tolerances(args))
    _emit(dumps(report.as_dict()))
    return EXIT_OK if report.valid else EXIT_FAIL


def cmd_analyze(args) -> int:
    alg, dig = read_algebra(args.file)
    report = analyze(alg, dig, _tolerances(args), _seed(args))
    _emit(report.to_json(), args.json)
    if not report.validation["valid"]:
        print("input algebra failed validation", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _read_matrix(path, d: int) -> np.ndarray:
    try:
        A = np.loadtxt(path, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise InputFormatError(f"could not read matrix from {path}: {exc}") from exc
    if A.shape != (d, d):
        raise BadDimension(f"matrix in {path} has shape {A.shape}, expected {(d, d)}")
    return A


def _spec(args) -> ExampleSpec:
    if getattr(args, "matrix", None):
        return ExampleSpec(args.dim, A=_read_matrix(args.matrix, args.dim), mode="custom_A")
    return ExampleSpec(args.dim)


def cmd_example(args) -> int:
    alg = build_example(_spec(args))
    _emit(dump_algebra(alg).rstrip("\n"), args.emit)
    return EXIT_OK


def cmd_certify(args) -> int:
    cert = verify_family_certificate(ExampleSpec(args.dim), strict=False, seed=_seed(args), tol=_tolerances(args).tol_alg)
    _emit(dumps(cert.as_dict()))
    if not cert.passed:
        print(f"certificate clause failed: {cert.first_failure.name}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _parse_range(text: str) -> range:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError as exc:
        raise InputFormatError(f"--dims expects LO..HI, got {text!r}") from exc
    if lo > hi:
        raise InputFormatError(f"empty dimension range {text!r}")
    return range(lo, hi + 1)


def sweep_one(d: int, tol: Tolerances, seed: int) -> tuple:
    """Analysis report (with the family certificate attached) for one dimension."""
    spec = ExampleSpec(d)
    alg = build_example(spec)
    report = analyze(alg, digest(dump_algebra(alg).encode()), tol, seed)
    cert = verify_family_certificate(spec, strict=False, seed=seed, tol=tol.tol_alg)
    report.witnesses.append({"kind": "family_certificate", **cert.as_dict()})
    return report, cert.passed


def cmd_sweep(args) -> int:
    dims = _parse_range(args.dims)
    for d in dims:
        if d < 3:
            raise BadDimension(f"the family needs d >= 3, got {d}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    tol, seed = _tolerances(args), _seed(args)
    failed = []
    for d in dims:
        report, ok = sweep_one(d, tol, seed)
        write_atomic(out / f"report_d{d}.json", report.to_json() + "\n")
        if not ok:
            failed.append(d)
    if failed:
        print(f"certificate failed for d = {failed}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_transport(args) -> int:
    spec = ExampleSpec(args.dim)
    n = spec.n
    for name, idx in (("--v", args.v), ("--z", args.z)):
        if not 1 <= idx <= n:
            raise BadDimension(f"{name} must be a basis index in 1..{n}, got {idx}")
    try:
        ts = [float(x) for x in args.t.split(",") if x.strip()]
    except ValueError as exc:
        raise InputFormatError(f"--t expects comma-separated numbers, got {args.t!r}") from exc
    rep = transport_check(spec, args.v - 1, args.z - 1, ts, tol=_tolerances(args).tol_alg)
    _emit(dumps(rep.as_dict()))
    second_ok = rep.second_derivative_norm is None or rep.second_derivative_norm < 1e-5
    if rep.max_rel_error >= 1e-6 or not second_ok:
        print("transport check exceeded its tolerance", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="sets both tol-alg and tol-sub")
    common.add_argument("--tol-alg", type=float, default=None)
    common.add_argument("--tol-sub", type=float, default=None)
    common.add_argument("--tol-pd", type=float, default=TOL_PD)
    common.add_argument("--seed", type=int, default=None,
                        help=f"certification seed (default: ${SEED_ENV} or {DEFAULT_SEED})")

    parser = argparse.ArgumentParser(prog="nullitylab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the axioms of an algebra file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", parents=[common], help="full analysis report of an algebra file")
    p.add_argument("file")
    p.add_argument("--json", metavar="OUT", help="write the report here instead of stdout")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("example", parents=[common], help="emit an algebra of the example family")
    p.add_argument("--dim", type=int, required=True, help="d; the algebra has dimension d+1")
    p.add_argument("--emit", metavar="FILE")
    p.add_argument("--matrix", metavar="A.csv", help="custom d x d action matrix")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("certify", parents=[common], help="certify an example of the family")
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("sweep", parents=[common], help="one report per family dimension")
    p.add_argument("--dims", required=True, metavar="LO..HI")
    p.add_argument("--out", required=True, metavar="DIR")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("transport", parents=[common], help="linear growth of a Killing field along the nullity")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--v", type=int, required=True, help="1-based basis index of the nullity direction")
    p.add_argument("--z", type=int, required=True, help="1-based basis index of the Killing field")
    p.add_argument("--t", default="1,10,100", help="comma-separated sample times")
    p.set_defaults(func=cmd_transport)
    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (BadDimension, BadMode, InputFormatError, DimensionMismatch, NotInNullity,
            FileNotFoundError) as exc:
        print(f"nullitylab {args.command}: {exc}", file=sys.stderr)
        print(parser.format_usage().rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except CertificateFailure as exc:
        print(f"nullitylab {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except SingularMetric as exc:
        print(f"nullitylab {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except NumericalError as exc:
        print(f"nullitylab {args.command}: numerically inconclusive: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
