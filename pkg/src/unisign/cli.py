"""Command-line entry point: ``unisign {scalar-tables,sign,eig,selftest}``.

Exit codes: 0 on success, including runs where the chosen algorithm broke
down (that outcome is recorded in the report's ``error`` field); 1 when
``selftest`` finds a failing criterion; 2 for usage and I/O errors.
"""
import argparse
import sys
import time

import numpy as np

from . import gallery
from .eig import divide_and_conquer
from .exceptions import DomainError, UnisignError
from .linalg import UNIT_ROUNDOFF
from .report import ERROR_FIELDS, RunReport, dumps, reports_to_csv
from .sign import SIGN_METHODS, IterationConfig, backward_errors, run_sign
from .tables import TABLE_DEGREES, TABLE_GAPS, pade_table, zolo_table

__all__ = ["main", "build_parser"]

# MATLAB's eps, the size of the perturbation added by --perturb
MACHINE_EPS = 2.0 * UNIT_ROUNDOFF


def _emit(text, out):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


def _format_table(title, rows):
    head = "n   " + " ".join(f"{g:>6g}" for g in TABLE_GAPS)
    body = [f"{n:<3} " + " ".join(f"{k:>6d}" for k in row) for n, row in zip(TABLE_DEGREES, rows)]
    return "\n".join([title, "pi/2 - theta:", head, *body])


def cmd_scalar_tables(args):
    zolo, pade = zolo_table(args.delta), pade_table(args.delta)
    if args.format == "json":
        text = dumps({"delta": args.delta, "gaps": list(TABLE_GAPS),
                      "degrees": list(TABLE_DEGREES), "zolo": zolo, "pade": pade})
    elif args.format == "csv":
        lines = ["table,n," + ",".join(format(g, "g") for g in TABLE_GAPS)]
        for name, rows in (("zolo", zolo), ("pade", pade)):
            lines += [f"{name},{n}," + ",".join(map(str, row)) for n, row in zip(TABLE_DEGREES, rows)]
        text = "\n".join(lines)
    else:
        text = (_format_table("Bound-predicted iterations (zolo)", zolo) + "\n\n"
                + _format_table("Scalar Pade iterations", pade))
    _emit(text, args.out)
    return 0


def _matrix(args):
    a = gallery.build(args.matrix, args.m, args.seed)
    if args.perturb:
        gen = np.random.Generator(np.random.Philox(args.seed))
        a = a + MACHINE_EPS * gen.standard_normal((args.m, args.m))
    return a


def _base_report(args, command, algorithm):
    return RunReport(command=command, matrix_name=args.matrix, m=args.m, seed=args.seed,
                     algorithm=algorithm, n=args.n, delta=args.delta, perturb=args.perturb)


def _render(report, fmt):
    if fmt == "json":
        return report.to_json()
    if fmt == "csv":
        return reports_to_csv([report])
    lines = []
    for key, value in report.__dict__.items():
        if key == "eigenvalues" and value is not None:
            value = " ".join(f"{complex(re, im):.12g}" for re, im in value)
        elif isinstance(value, float):
            value = f"{value:.6e}"
        elif isinstance(value, list):
            value = "; ".join(value) if value else "-"
        lines.append(f"{key:>22}: {value}")
    return "\n".join(lines)


def _config(args):
    return IterationConfig(n=args.n, delta=args.delta)


def cmd_sign(args):
    a = _matrix(args)
    report = _base_report(args, "sign", args.alg)
    cfg = _config(args)
    if args.alg == "newton":
        report.warnings.append("newton: scaling off below relative step 1e-2, stop at 10*m*u")
    t0 = time.perf_counter()
    try:
        res = run_sign(args.alg, a, cfg)
    except UnisignError as exc:
        if isinstance(exc, DomainError):
            raise
        report.error = f"{type(exc).__name__}: {exc}"
        report.warnings.append("algorithm failed; the failure is the result of this run")
    else:
        err = backward_errors(a, res.s, res.n_factor)
        report.iterations = res.iterations
        for name in ERROR_FIELDS:
            setattr(report, name, getattr(err, name))
        report.raw_hermitian_defect = res.raw_hermitian_defect
        report.warnings.extend(res.warnings)
    report.wall_time_ms = 1e3 * (time.perf_counter() - t0)
    _emit(_render(report, args.format), args.out)
    return 0


def cmd_eig(args):
    a = _matrix(args)
    report = _base_report(args, "eig", args.alg)
    t0 = time.perf_counter()
    try:
        dec = divide_and_conquer(a, _config(args), args.alg)
    except UnisignError as exc:
        if isinstance(exc, DomainError):
            raise
        path = getattr(exc, "path", None)
        report.error = f"{type(exc).__name__}: {exc}" + (f" (block {path})" if path else "")
        report.warnings.append("algorithm failed; the failure is the result of this run")
    else:
        report.eig_residual, report.eig_orthogonality = dec.residuals(a)
        report.eigenvalues = [[float(z.real), float(z.imag)] for z in dec.lam]
        report.warnings.extend(dec.notes)
    report.wall_time_ms = 1e3 * (time.perf_counter() - t0)
    _emit(_render(report, args.format), args.out)
    return 0


def cmd_selftest(args):
    from .acceptance import run_all

    results = run_all()
    text = "\n".join(r.line(timing=args.timing) for r in results)
    passed = sum(r.passed for r in results)
    text += f"\n{passed}/{len(results)} criteria passed"
    _emit(text, args.out)
    return 0 if passed == len(results) else 1


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="unisign", description="Unitary sign decomposition and eigensolver experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("json", "csv", "text"), default="json"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", metavar="PATH", help="write to PATH instead of stdout")

    p = sub.add_parser("scalar-tables", help="predicted iteration counts for n = 1..8")
    p.add_argument("--delta", type=float, default=1e-16)
    common(p, default="text")
    p.set_defaults(func=cmd_scalar_tables)

    def experiment(p, alg_flags, alg_dest):
        p.add_argument("--matrix", choices=gallery.NAMES, required=True)
        p.add_argument("--m", type=_positive_int, default=100)
        p.add_argument("--seed", type=int, default=gallery.DEFAULT_SEED,
                       help="seed for the haar matrix and the perturbation")
        p.add_argument(*alg_flags, dest=alg_dest, choices=SIGN_METHODS, default="zolo")
        p.add_argument("--n", type=int, default=1, help="half-degree, iteration order 2n+1")
        p.add_argument("--delta", type=float, default=1e-16)
        p.add_argument("--perturb", action="store_true",
                       help="add eps * standard normal noise to the matrix")
        common(p)

    p = sub.add_parser("sign", help="one unitary sign decomposition with backward errors")
    experiment(p, ("--alg",), "alg")
    p.set_defaults(func=cmd_sign)

    p = sub.add_parser("eig", help="divide-and-conquer eigendecomposition")
    experiment(p, ("--sign-alg", "--alg"), "alg")
    p.set_defaults(func=cmd_eig)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--timing", action="store_true", help="append runtimes to each line")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, ValueError) as exc:
        parser.exit(2, f"unisign: error: {exc}\n")
    except OSError as exc:
        parser.exit(2, f"unisign: error: {exc}\n")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
