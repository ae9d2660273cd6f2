"""Command-line front end.

Subcommands: ``count`` (oracle invariant counts for a configuration),
``basis`` (emit a generator list, optionally pruned), ``eval`` (evaluate
expressions on a system read from JSON), and ``verify`` (full basis report).
Identical arguments and seed produce byte-identical output; a disagreement
with a literature claim is reported but is not a failure.

Exit codes: 0 success, 1 malformed input data, 2 bad flags.
"""
from __future__ import annotations

import argparse
import json
import sys

from ._version import __version__
from .expressions import (
    evaluate_many,
    parse_expression,
    poincare_vector_potential_basis,
    render,
    theorem1_basis,
    theorem2_basis,
    theorem3_basis,
)
from .independence import claimed_count, discrepancy_note, greedy_prune, verify_basis
from .rotations import generic_rank
from .systems import MetricSignature, SystemSpec, TensorSystem, random_system

_THEOREM_CHOICES = ("1", "2", "3", "poincare")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--trials", type=int, default=20, help="random sample points (default 20)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--tol", type=float, default=1e-10, help="rank tolerance (default 1e-10)")
    p.add_argument(
        "--output", choices=("table", "json"), default="table", help="output format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotinv",
        description="Rotation and Lorentz invariants of vectors and rank-2 tensors",
    )
    parser.add_argument("--version", action="version", version=f"rotinv {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_count = sub.add_parser("count", help="count functionally independent invariants")
    p_count.add_argument("-n", "--dimension", type=int, required=True)
    p_count.add_argument("--metric", help="sign string, e.g. '+---' (default all '+')")
    p_count.add_argument("--vectors", type=int, default=0)
    p_count.add_argument("--symmetric", type=int, default=0)
    p_count.add_argument("--antisymmetric", type=int, default=0)
    p_count.add_argument("--general", type=int, default=0)
    _add_common(p_count)

    p_basis = sub.add_parser("basis", help="emit a generator list for a built-in basis")
    p_basis.add_argument("--theorem", choices=_THEOREM_CHOICES, required=True)
    p_basis.add_argument("-n", "--dimension", type=int)
    p_basis.add_argument("--metric")
    p_basis.add_argument("--prune", action="store_true", help="greedy-prune to a functional basis")
    _add_common(p_basis)

    p_eval = sub.add_parser("eval", help="evaluate expressions on a system from JSON")
    p_eval.add_argument("--data", required=True, help="tensor system JSON file")
    which = p_eval.add_mutually_exclusive_group(required=True)
    which.add_argument("--theorem", choices=_THEOREM_CHOICES)
    which.add_argument("--expr", help="a single expression, e.g. 'tr(s1^2 s2)'")
    _add_common(p_eval)

    p_verify = sub.add_parser("verify", help="verify a built-in basis against the rank oracle")
    p_verify.add_argument("--theorem", choices=_THEOREM_CHOICES, required=True)
    p_verify.add_argument("-n", "--dimension", type=int)
    p_verify.add_argument("--metric")
    _add_common(p_verify)

    return parser


def _metric_for(n: int, metric_arg: str | None, parser) -> MetricSignature:
    if metric_arg is None:
        return MetricSignature.euclidean(n)
    try:
        metric = MetricSignature.from_string(metric_arg)
    except ValueError as exc:
        parser.error(str(exc))
    if metric.n != n:
        parser.error(f"metric length {metric.n} does not match dimension {n}")
    return metric


def _theorem_setup(args, parser):
    """Spec, object names, and expression list for a theorem selector."""
    if args.theorem == "poincare":
        if getattr(args, "dimension", None) not in (None, 4):
            parser.error("the vector-potential basis is fixed at dimension 4")
        if getattr(args, "metric", None) not in (None, "+---"):
            parser.error("the vector-potential basis is fixed at metric '+---'")
        spec = SystemSpec(
            4, MetricSignature.minkowski(4), n_vectors=1, n_symmetric=1, n_antisymmetric=1
        )
        return spec, ("A", "B", "L"), poincare_vector_potential_basis()
    n = args.dimension if args.dimension is not None else 4
    if n < 2:
        parser.error("dimension must be >= 2")
    metric = _metric_for(n, args.metric, parser)
    if args.theorem == "1":
        spec = SystemSpec(n, metric, n_vectors=2, n_symmetric=2)
        return spec, ("u1", "u2", "s1", "s2"), theorem1_basis(n)
    if args.theorem == "2":
        spec = SystemSpec(n, metric, n_vectors=2, n_antisymmetric=2)
        return spec, ("u1", "u2", "a1", "a2"), theorem2_basis(n)
    spec = SystemSpec(n, metric, n_vectors=2, n_symmetric=2, n_antisymmetric=2)
    return spec, ("u1", "u2", "s1", "s2", "a1", "a2"), theorem3_basis(n)


def _emit_json(doc) -> None:
    print(json.dumps(doc, sort_keys=True, indent=2))


def _run_count(args, parser) -> int:
    for flag in ("vectors", "symmetric", "antisymmetric", "general"):
        if getattr(args, flag) < 0:
            parser.error(f"--{flag} must be nonnegative")
    if args.dimension < 2:
        parser.error("dimension must be >= 2")
    metric = _metric_for(args.dimension, args.metric, parser)
    spec = SystemSpec(
        args.dimension,
        metric,
        n_vectors=args.vectors,
        n_symmetric=args.symmetric,
        n_antisymmetric=args.antisymmetric,
        n_general=args.general,
    )
    rank = generic_rank(spec, trials=args.trials, seed=args.seed, tol=args.tol)
    count = spec.variable_count() - rank
    claim = claimed_count(spec)
    note = None
    if claim is None:
        status = "none"
    elif claim.value == count:
        status = "agrees"
    else:
        status = "DISCREPANCY"
        note = discrepancy_note(claim, count)
    if args.output == "json":
        _emit_json(
            {
                "variables": spec.variable_count(),
                "generic_rank": rank,
                "invariants": count,
                "claimed": None if claim is None else {"value": claim.value, "source": claim.source},
                "status": status,
                "note": note,
            }
        )
    else:
        print(f"variables     {spec.variable_count()}")
        print(f"generic rank  {rank}")
        print(f"invariants    {count}")
        if claim is None:
            print("claimed       none on record")
        else:
            print(f"claimed       {claim.value}  ({claim.source})")
        print(f"status        {status}")
        if note is not None:
            print(f"note          {note}")
    return 0


def _run_basis(args, parser) -> int:
    spec, names, exprs = _theorem_setup(args, parser)
    if args.prune:
        import numpy as np

        rng = np.random.default_rng(args.seed)
        systems = [random_system(spec, rng, names=names) for _ in range(args.trials)]
        exprs = greedy_prune(exprs, systems, tol=args.tol)
    rendered = [render(e) for e in exprs]
    if args.output == "json":
        _emit_json(rendered)
    else:
        for line in rendered:
            print(line)
    return 0


def _run_eval(args, parser) -> int:
    try:
        with open(args.data, "r", encoding="utf-8") as fh:
            system = TensorSystem.from_json(fh.read())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.expr is not None:
        try:
            exprs = [parse_expression(args.expr)]
        except ValueError as exc:
            parser.error(str(exc))
    elif args.theorem == "poincare":
        exprs = poincare_vector_potential_basis()
    elif args.theorem == "1":
        exprs = theorem1_basis(system.n)
    elif args.theorem == "2":
        exprs = theorem2_basis(system.n)
    else:
        exprs = theorem3_basis(system.n)
    try:
        values = evaluate_many(exprs, system)
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.output == "json":
        _emit_json({render(e): float(v) for e, v in zip(exprs, values)})
    else:
        for e, v in zip(exprs, values):
            print(f"{render(e)}\t{float(v)!r}")
    return 0


def _run_verify(args, parser) -> int:
    spec, names, exprs = _theorem_setup(args, parser)
    report = verify_basis(
        spec, exprs, trials=args.trials, seed=args.seed, tol=args.tol, names=names
    )
    if args.output == "json":
        print(report.to_json())
    else:
        claim = report.paper_claimed_count
        print(f"verdict        {report.verdict}")
        print(f"variables      {report.n_variables}")
        print(f"action rank    {report.action_rank}")
        print(f"expected       {report.expected_count}")
        print(f"candidates     {report.candidate_size}")
        print(f"jacobian rank  {report.jacobian_rank}")
        if claim is None:
            print("claimed        none on record")
        else:
            print(f"claimed        {claim.value}  ({claim.source})")
        print(f"pruned basis ({len(report.pruned_basis)}):")
        for line in report.pruned_basis:
            print(f"  {line}")
        if report.discrepancy_notes:
            print("notes:")
            for note in report.discrepancy_notes:
                print(f"  - {note}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand == "count":
        return _run_count(args, parser)
    if args.subcommand == "basis":
        return _run_basis(args, parser)
    if args.subcommand == "eval":
        return _run_eval(args, parser)
    return _run_verify(args, parser)


if __name__ == "__main__":
    sys.exit(main())
