"""Command-line surface.

Exit codes: 0 success, 2 invalid arguments/regime, 3 verification failure,
4 capacity error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import (
    BoundQuery,
    LiftPolicy,
    evaluate_bound,
    generate_table,
    min_q_for_theta,
)
from .constants import NormKind, kd_upper
from .errors import CapacityError, DomainError
from .harness import VerifyConfig, run_verification
from .measures import DiscreteMeasure, parse_norm
from .oracle import exact_transport_cost
from .partition import annulus_coupling, build_nested_partition, default_depth, hierarchical_coupling

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_VERIFY_FAIL = 3
EXIT_CAPACITY = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otbounds",
        description="Explicit bounds on E[T_p(mu_N, mu)] and their constructive verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bound", help="evaluate a theoretical bound")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--p", type=float, required=True)
    b.add_argument("--q", type=float, required=True)
    b.add_argument("--moment", type=float, required=True)
    b.add_argument("--norm", choices=["max", "euclid"], required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--refine-p", action="store_true")
    b.add_argument("--lift", choices=["auto", "native", "sqrtd"], default="auto")
    b.add_argument("--format", choices=["text", "json"], default="text")

    t = sub.add_parser("table", help="regenerate a numeric table")
    t.add_argument("--id", type=int, required=True)
    t.add_argument("--format", choices=["text", "csv", "json"], default="text")

    k = sub.add_parser("kd", help="covering constant bound K_d")
    k.add_argument("--d", type=int, required=True)

    tq = sub.add_parser("theta-q", help="minimum q with theta <= c")
    tq.add_argument("--d", type=int, required=True)
    tq.add_argument("--p", type=float, required=True)
    tq.add_argument("--c", type=float, required=True)
    tq.add_argument("--norm", choices=["max", "euclid"], required=True)
    tq.add_argument("--n", type=int, default=None)
    tq.add_argument("--root", action="store_true")

    c = sub.add_parser("couple", help="constructive hierarchical coupling")
    c.add_argument("--mu", type=Path, required=True)
    c.add_argument("--nu", type=Path, required=True)
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--norm", choices=["max", "euclid"], required=True)
    c.add_argument("--depth", type=int, default=None)
    c.add_argument("--a", type=float, default=None)
    c.add_argument("--emit-plan", type=Path, default=None)

    o = sub.add_parser("ot", help="exact optimal transport cost")
    o.add_argument("--mu", type=Path, required=True)
    o.add_argument("--nu", type=Path, required=True)
    o.add_argument("--p", type=float, required=True)
    o.add_argument("--norm", choices=["max", "euclid"], required=True)

    v = sub.add_parser("verify", help="Monte Carlo bound verification")
    v.add_argument("--config", type=Path, required=True)
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--replicas", type=int, default=None)
    v.add_argument("--format", choices=["text", "csv", "json"], default="text")
    return parser


def _cmd_bound(args) -> int:
    report = evaluate_bound(
        BoundQuery(
            d=args.d,
            p=args.p,
            q=args.q,
            moment=args.moment,
            norm=parse_norm(args.norm),
            n=args.n,
            refine_p=args.refine_p,
            lift_policy=LiftPolicy(args.lift),
        )
    )
    if args.format == "json":
        print(
            json.dumps(
                {
                    "value": report.value,
                    "regime": report.regime.value,
                    "rate_exponent": report.rate_exponent,
                    "kappa": report.kappa.value,
                    "chosen_r": report.kappa.chosen_r,
                    "chosen_a": report.kappa.chosen_a,
                    "theta": report.theta,
                    "chosen_p_prime": report.chosen_p_prime,
                    "route": report.route.value,
                    "formula": report.formula_text,
                }
            )
        )
    else:
        print(f"bound   {report.value:.10g}")
        print(f"regime  {report.regime.value}  (rate n^-{report.rate_exponent:g})")
        print(f"detail  {report.formula_text}")
    return EXIT_OK


def _cmd_table(args) -> int:
    table = generate_table(args.id)
    if args.format == "json":
        print(table.to_json())
    elif args.format == "csv":
        print(table.to_csv(), end="")
    else:
        print(table.to_text(), end="")
    return EXIT_OK


def _cmd_couple(args) -> int:
    mu = DiscreteMeasure.from_json(args.mu.read_text())
    nu = DiscreteMeasure.from_json(args.nu.read_text())
    norm = parse_norm(args.norm)
    import numpy as np

    if args.a is not None:
        plan, bound = annulus_coupling(
            mu, nu, a=args.a, p=args.p, depth=args.depth, norm=norm
        )
    else:
        r = 2.0 if norm == NormKind.MAX else 4.0
        depth = args.depth if args.depth is not None else default_depth(args.p, r)
        union = np.unique(np.vstack([mu.points, nu.points]), axis=0)
        tree = build_nested_partition(union, norm, depth, r)
        result = hierarchical_coupling(mu, nu, tree, args.p)
        plan, bound = result.plan, result.certified_bound
    print(f"plan cost        {plan.cost_p:.10g}")
    print(f"certified bound  {bound:.10g}")
    if args.emit_plan is not None:
        args.emit_plan.write_text(plan.to_json())
    return EXIT_OK


def _cmd_ot(args) -> int:
    mu = DiscreteMeasure.from_json(args.mu.read_text())
    nu = DiscreteMeasure.from_json(args.nu.read_text())
    cost, _ = exact_transport_cost(mu, nu, args.p, parse_norm(args.norm))
    print(f"{cost:.12g}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    config = VerifyConfig.from_json(args.config.read_text())
    config.seed = args.seed
    if args.replicas is not None:
        config.replicas = args.replicas
    report = run_verification(config)
    if args.format == "json":
        print(report.to_json())
    elif args.format == "csv":
        print(report.to_csv(), end="")
    else:
        print(report.to_text(), end="")
    return EXIT_OK if report.all_passed else EXIT_VERIFY_FAIL


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bound":
            return _cmd_bound(args)
        if args.command == "table":
            return _cmd_table(args)
        if args.command == "kd":
            print(f"{kd_upper(args.d):.10g}")
            return EXIT_OK
        if args.command == "theta-q":
            q = min_q_for_theta(
                args.d, args.p, args.c, parse_norm(args.norm), n=args.n, root=args.root
            )
            print(f"{q:.10g}")
            return EXIT_OK
        if args.command == "couple":
            return _cmd_couple(args)
        if args.command == "ot":
            return _cmd_ot(args)
        if args.command == "verify":
            return _cmd_verify(args)
        parser.error(f"unknown command {args.command}")
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DomainError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
