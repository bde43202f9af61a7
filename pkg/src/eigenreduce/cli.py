"""Command-line interface.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 resource or
numerical error.  Success writes one JSON document to stdout; anything else
writes a diagnostic to stderr and nothing to stdout.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .errors import NumericalError, ResourceError, UsageError
from .families import DEFAULT_CAP, build_halved_cube, build_hamming, build_johnson
from .graph import format_label
from .reduction import (ReductionContext, check_pair_structure, halved_cube_context, hamming_context,
                        johnson_context, reduce, theorem_check_all)
from .spectral import DEFAULT_TOL, eigendecompose, residual

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class CheckFailed(Exception):
    def __init__(self, report: dict):
        super().__init__(report.get("error", "check failed"))
        self.report = report


def _build_graph(args):
    if args.family == "hamming":
        return build_hamming(args.n, args.q, args.cap), {"n": args.n, "q": args.q}
    if args.family == "johnson":
        return build_johnson(args.n, args.k, args.cap), {"n": args.n, "k": args.k}
    return (build_halved_cube(args.n, args.parity, args.cap),
            {"n": args.n, "parity": args.parity})


def cmd_build(args) -> dict:
    G, params = _build_graph(args)
    io.write_graph(args.out, G)
    degrees = set(G.degrees())
    return {"family": args.family, "params": params, "out": str(args.out),
            "vertices": len(G), "edges": G.num_edges,
            "regular": len(degrees) == 1,
            "degree": degrees.pop() if len(degrees) == 1 else None}


def cmd_spectrum(args) -> list:
    G = io.read_graph(args.graph)
    return eigendecompose(G, args.cap).report()


def cmd_make_pair(args) -> dict:
    if args.family == "hamming":
        ctx = hamming_context(args.n, args.q, args.r, args.k, args.m, args.cap)
        params = {"n": args.n, "q": args.q, "r": args.r, "k": args.k, "m": args.m}
    elif args.family == "johnson":
        ctx = johnson_context(args.n, args.k, args.i, args.j, args.cap)
        params = {"n": args.n, "k": args.k, "i": args.i, "j": args.j}
    else:
        ctx = halved_cube_context(args.n, args.i, args.j, args.cap)
        params = {"n": args.n, "i": args.i, "j": args.j}
    g_path, g0_path = io.write_context(args.out, ctx)
    return {"family": args.family, "params": params, "out": str(args.out),
            "graph": str(g_path), "G0": str(g0_path),
            "sizes": {"V1": len(ctx.pair.V1), "V2": len(ctx.pair.V2), "V3": len(ctx.pair.V3),
                      "G": len(ctx.graph), "G0": len(ctx.G0)},
            "verified": ctx.report.ok}


def _labels(G, ids):
    return [format_label(G.vertices[i]) for i in ids]


def cmd_verify_pair(args) -> dict:
    obj = io.read_pair_or_context(args.ctx)
    pair = obj.pair if isinstance(obj, ReductionContext) else obj
    G = pair.graph
    report = pair.verify()
    conditions = {}
    for r in report.results:
        entry = {"status": "PASS" if r.ok else "FAIL"}
        if not r.ok:
            entry.update(witness=list(r.witness), witness_labels=_labels(G, r.witness),
                         detail=r.detail)
        conditions[r.name] = entry
    out: dict = {"conditions": conditions}
    failed = report.failed
    if failed is not None:
        raise CheckFailed({"status": "FAIL", "condition": failed.name,
                           "witness": list(failed.witness),
                           "witness_labels": _labels(G, failed.witness),
                           "detail": failed.detail, "conditions": conditions})

    rem = check_pair_structure(pair)
    out["structure"] = {"involutive": rem.involutive,
                      "phi_V1_to_V2_isomorphism": rem.v1_v2_isomorphic,
                      "union_is_product_with_K2": rem.product_isomorphic}
    if not rem.ok:
        raise CheckFailed({"status": "FAIL", "condition": "structure", **out})

    if isinstance(obj, ReductionContext):
        crep = obj.report
        out["maps"] = {"phi1": "PASS" if crep.phi1.ok else "FAIL",
                       "phi2": "PASS" if crep.phi2.ok else "FAIL",
                       "phi2_equals_phi1_after_phi": "PASS" if crep.compatible else "FAIL"}
        if not crep.ok:
            raise CheckFailed({"status": "FAIL", "condition": "maps",
                               "detail": crep.problem(), **out})
    out["status"] = "PASS"
    return out


def cmd_reduce(args) -> dict:
    ctx = io.read_context(args.ctx)
    ctx.require_valid()
    f = io.read_function(args.fn)
    if f.graph != ctx.graph:
        raise UsageError("function file is not defined on the context graph")
    lam = args.lam
    scale_in = max(1.0, f.max_abs())
    r_in = residual(ctx.graph, f, lam)
    if r_in > args.tol * scale_in:
        raise CheckFailed({"status": "FAIL", "error": "input is not a lambda-eigenfunction",
                           "lambda": lam, "input_residual": r_in,
                           "threshold": args.tol * scale_in})
    fp = reduce(f, ctx)
    r_out = residual(ctx.G0, fp, lam + 1)
    scale_out = max(1.0, fp.max_abs())
    report = {"lambda": lam, "target_lambda": lam + 1, "input_residual": r_in,
              "output_residual": r_out, "zero_output": fp.is_zero(args.tol * scale_in),
              "out": str(args.out), "format": args.format}
    if r_out > args.tol * scale_out:
        raise CheckFailed({"status": "FAIL", "error": "reduced function misses the eigenspace",
                           **report})
    if args.format == "csv":
        Path(args.out).write_text(io.function_to_csv(fp))
    else:
        io.write_json(args.out, io.function_to_dict(fp))
    return report


def cmd_check_theorem(args) -> dict:
    ctx = io.read_context(args.ctx)
    ctx.require_valid()
    results = theorem_check_all(ctx, args.trials, args.seed, args.tol)
    report = {"trials": args.trials, "seed": args.seed, "tol": args.tol,
              "results": [{"lambda": r.lam, "target_lambda": r.target,
                           "max_residual": r.max_residual, "max_output": r.max_output,
                           "target_is_eigenvalue": r.target_is_eigenvalue,
                           "passed": r.passed} for r in results],
              "passed": all(r.passed for r in results)}
    if not report["passed"]:
        raise CheckFailed({"status": "FAIL", **report})
    return report


def _family_parsers(sub, name, helptext, with_pair: bool):
    p = sub.add_parser(name, help=helptext)
    fam = p.add_subparsers(dest="family", required=True)
    h = fam.add_parser("hamming")
    h.add_argument("--n", type=int, required=True)
    h.add_argument("--q", type=int, required=True)
    j = fam.add_parser("johnson")
    j.add_argument("--n", type=int, required=True)
    j.add_argument("--k", type=int, required=True)
    c = fam.add_parser("halved-cube")
    c.add_argument("--n", type=int, required=True)
    if with_pair:
        h.add_argument("--r", type=int, required=True, help="1-based coordinate")
        h.add_argument("--k", type=int, required=True, help="letter sent to V1")
        h.add_argument("--m", type=int, required=True, help="letter sent to V2")
        for fp in (j, c):
            fp.add_argument("--i", type=int, required=True, help="1-based coordinate")
            fp.add_argument("--j", type=int, required=True, help="1-based coordinate, > i")
    else:
        c.add_argument("--parity", choices=("even", "odd"), default="even")
    for fp in (h, j, c):
        fp.add_argument("--out", type=Path, required=True)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eigenreduce",
        description="Build graphs, special pairs and check eigenfunction reduction.")
    parser.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="relative residual tolerance (default 1e-8)")
    parser.add_argument("--seed", type=int, default=0, help="base RNG seed (default 0)")
    parser.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="maximum vertex count (default 65536)")
    sub = parser.add_subparsers(dest="command", required=True)

    _family_parsers(sub, "build", "write a graph JSON file", False).set_defaults(func=cmd_build)

    p = sub.add_parser("spectrum", help="eigenvalues with multiplicities")
    p.add_argument("graph", type=Path)
    p.set_defaults(func=cmd_spectrum)

    _family_parsers(sub, "make-pair", "write a verified reduction context",
                    True).set_defaults(func=cmd_make_pair)

    p = sub.add_parser("verify-pair", help="check a pair or context file")
    p.add_argument("ctx", type=Path)
    p.set_defaults(func=cmd_verify_pair)

    p = sub.add_parser("reduce", help="reduce an eigenfunction onto G0")
    p.add_argument("ctx", type=Path)
    p.add_argument("fn", type=Path)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("check-theorem", help="sample eigenfunctions and check every eigenvalue")
    p.add_argument("ctx", type=Path)
    p.add_argument("--trials", type=int, default=5)
    p.set_defaults(func=cmd_check_theorem)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.tol <= 0 or args.cap < 1:
            raise UsageError("--tol must be positive and --cap at least 1")
        result = args.func(args)
    except CheckFailed as exc:
        sys.stderr.write(io.dumps(exc.report))
        return EXIT_FAIL
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ResourceError, NumericalError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RESOURCE
    sys.stdout.write(io.dumps(result))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
