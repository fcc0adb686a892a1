"""Command-line front end.

Subcommands: `nonarch` (graph file or named fiber type to exact
invariants), `arch` (period-matrix file to the archimedean chain),
`table` (regenerate the seven-type table symbolically through the full
pipeline), `verify` (random exact agreement sweep between the pipeline
and the closed forms).

Exit codes are a stable contract:
  0 success, 2 parse/validation error, 3 genus != 2, 4 internal
  cross-check failure, 5 degenerate theta-null, 6 unstable quadrature,
  7 verify found a mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

import sympy

from .errors import (
    AdmissibilityFailureError,
    DegenerateThetaNullError,
    FormulaMismatchError,
    InvalidParamsError,
    NotPositiveDefiniteError,
    QuadratureUnstableError,
    TruncationOverflowError,
)
from .exact import simplify_exact
from .fiber_catalog import ARITY, FiberType, closed_form, graph_of_type
from .formats import (
    arch_to_dict,
    graph_to_dict,
    load_graph,
    load_tau,
    nonarch_to_dict,
    parse_rational,
)
from .pm_invariants import nonarch_report, total_genus
from .theta_surface import (
    DEFAULT_PRODUCT_TOL,
    DEFAULT_TARGET_STDERR,
    QuadratureConfig,
    arch_invariants,
)

TAGS = ("I", "II", "III", "IV", "V", "VI", "VII")


def _default_tolerance() -> float:
    raw = os.environ.get("G2INV_TOL")
    if raw is None:
        return DEFAULT_PRODUCT_TOL
    try:
        value = float(raw)
    except ValueError as exc:
        raise InvalidParamsError(f"G2INV_TOL is not a number: {raw!r}") from exc
    if value <= 0:
        raise InvalidParamsError(f"G2INV_TOL must be positive, got {raw!r}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="g2inv",
        description="Local invariants of genus-2 curves: exact reduction-graph "
        "invariants and numerical period-matrix invariants.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    na = sub.add_parser("nonarch", help="invariants of a reduction graph")
    na.add_argument("graph", nargs="?", help="path to a graph JSON file")
    na.add_argument("--type", dest="fiber_type", choices=TAGS, help="fiber type tag")
    na.add_argument(
        "--params",
        default="",
        help="comma-separated positive rationals, e.g. 1,3/2,2",
    )
    na.add_argument("--format", choices=("human", "structured"), default="human")

    ar = sub.add_parser("arch", help="archimedean invariants of a period matrix")
    ar.add_argument("tau", help="path to a period-matrix JSON file")
    ar.add_argument("--samples", type=int, default=100_000)
    ar.add_argument("--seed", type=int, default=0)
    ar.add_argument("--method", choices=("monte-carlo", "lattice-rule"), default="monte-carlo")
    ar.add_argument("--workers", type=int, default=1)
    ar.add_argument("--target-stderr", type=float, default=DEFAULT_TARGET_STDERR)
    ar.add_argument("--format", choices=("human", "structured"), default="human")

    tb = sub.add_parser("table", help="regenerate the seven-type invariant table symbolically")
    tb.add_argument("--format", choices=("human", "structured"), default="human")

    vf = sub.add_parser("verify", help="random exact sweep: pipeline vs closed forms")
    vf.add_argument("--samples", type=int, default=100)
    vf.add_argument("--seed", type=int, default=0)
    return parser


def _print_nonarch(report, fmt: str) -> None:
    doc = nonarch_to_dict(report)
    if fmt == "structured":
        print(json.dumps(doc, indent=2))
        return
    width = max(len(k) for k in doc)
    for key, value in doc.items():
        print(f"{key:<{width}}  {value}")


def _run_nonarch(args) -> int:
    if (args.graph is None) == (args.fiber_type is None):
        raise InvalidParamsError("give exactly one input: a graph file or --type")
    if args.fiber_type is not None:
        params = tuple(
            parse_rational(part) for part in args.params.split(",") if part
        )
        graph = graph_of_type(FiberType(args.fiber_type, params))
    else:
        graph = load_graph(args.graph)
    g = total_genus(graph)
    if g != 2:
        print(f"error: graph has total genus {g}, need 2", file=sys.stderr)
        return 3
    try:
        report = nonarch_report(graph)
    except (FormulaMismatchError, AdmissibilityFailureError) as exc:
        print(f"internal cross-check failed: {exc}", file=sys.stderr)
        print("offending graph:", file=sys.stderr)
        print(json.dumps(graph_to_dict(graph), indent=2), file=sys.stderr)
        return 4
    _print_nonarch(report, args.format)
    return 0


def _run_arch(args) -> int:
    tolerance = _default_tolerance()
    tau = load_tau(args.tau)
    config = QuadratureConfig(
        n_samples=args.samples,
        seed=args.seed,
        method=args.method,
        target_stderr=args.target_stderr,
    )
    try:
        report = arch_invariants(tau, config, tol=tolerance, workers=args.workers)
    except DegenerateThetaNullError as exc:
        print(f"degenerate surface: {exc}", file=sys.stderr)
        return 5
    except QuadratureUnstableError as exc:
        print(f"quadrature failed: {exc}", file=sys.stderr)
        return 6

    doc = arch_to_dict(report)
    doc.update(
        samples=args.samples,
        seed=args.seed,
        method=args.method,
        workers=args.workers,
        tolerance=tolerance,
        target_stderr=args.target_stderr,
    )
    if args.format == "structured":
        print(json.dumps(doc, indent=2))
        return 0
    width = max(len(k) for k in doc)
    for key, value in doc.items():
        if key == "log_h":
            print(f"{key:<{width}}  {value!r} +- {report.log_h_stderr!r}")
        elif key == "phi":
            print(f"{key:<{width}}  {value!r} +- {report.phi_stderr!r}")
        elif isinstance(value, float):
            print(f"{key:<{width}}  {value!r}")
        else:
            print(f"{key:<{width}}  {value}")
    return 0


def _symbolic_rows():
    symbols = sympy.symbols("a b c", positive=True)
    rows = []
    for tag in TAGS:
        fiber = FiberType(tag, symbols[: ARITY[tag]])
        computed = nonarch_report(graph_of_type(fiber))
        reference = closed_form(fiber)
        for field in ("delta0", "delta1", "r_kk", "epsilon", "phi", "lambda_"):
            diff = simplify_exact(
                sympy.sympify(getattr(computed, field))
                - sympy.sympify(getattr(reference, field))
            )
            if diff != 0:
                raise FormulaMismatchError(
                    f"symbolic table row {fiber}: {field} differs by {diff}"
                )
        rows.append(
            {
                "type": str(fiber),
                "delta0": str(reference.delta0),
                "delta1": str(reference.delta1),
                "rKK": str(simplify_exact(sympy.sympify(reference.r_kk))),
                "epsilon": str(simplify_exact(sympy.sympify(reference.epsilon))),
                "phi": str(simplify_exact(sympy.sympify(reference.phi))),
                "lambda": str(simplify_exact(sympy.sympify(reference.lambda_))),
            }
        )
    return rows


def _run_table(args) -> int:
    try:
        rows = _symbolic_rows()
    except FormulaMismatchError as exc:
        print(f"internal cross-check failed: {exc}", file=sys.stderr)
        return 4
    if args.format == "structured":
        print(json.dumps({"rows": rows}, indent=2))
        return 0
    columns = ("type", "delta0", "delta1", "rKK", "epsilon", "phi", "lambda")
    widths = {c: max(len(c), *(len(r[c]) for r in rows)) for c in columns}
    print("  ".join(c.ljust(widths[c]) for c in columns))
    for row in rows:
        print("  ".join(row[c].ljust(widths[c]) for c in columns))
    return 0


def _run_verify(args) -> int:
    if args.samples < 0:
        raise InvalidParamsError("--samples must be nonnegative")
    rng = random.Random(args.seed)
    mismatches = 0
    for tag in TAGS:
        passes = 0
        for _ in range(args.samples):
            params = tuple(
                Fraction(rng.randint(1, 1000), rng.randint(1, 1000))
                for _ in range(ARITY[tag])
            )
            fiber = FiberType(tag, params)
            computed = nonarch_report(graph_of_type(fiber))
            reference = closed_form(fiber)
            if computed == reference:
                passes += 1
            else:
                mismatches += 1
                print(f"MISMATCH {fiber}:")
                print(f"  pipeline:    {computed}")
                print(f"  closed form: {reference}")
        status = "pass" if passes == args.samples else "FAIL"
        print(f"{tag:>4}: {passes}/{args.samples} {status}")
    return 7 if mismatches else 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "nonarch":
            return _run_nonarch(args)
        if args.command == "arch":
            return _run_arch(args)
        if args.command == "table":
            return _run_table(args)
        return _run_verify(args)
    except (
        InvalidParamsError,
        NotPositiveDefiniteError,
        TruncationOverflowError,
        OSError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
