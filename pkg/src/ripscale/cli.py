"""Command line interface.

Subcommands: generate (point clouds), persist (diagrams from a cloud),
compare (distances between two diagram files), audit (scenario suites),
montecarlo (expected-bound experiments).

Exit codes: 0 when a run completes (audit FAILs are results, not errors),
1 on usage errors (bad arguments, malformed inputs, unwritable paths),
2 when an internal correctness oracle is violated.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback

from .geometry import (
    generate_circle,
    generate_hypercube,
    generate_random_cloud,
    load_point_cloud,
    save_point_cloud,
)
from .harness import (
    InternalInvariantError,
    case_study_suite,
    compare_diagram_lists,
    run_audit,
    run_montecarlo,
    run_scenario,
    scenarios_from_obj,
)
from .persistence import compute_persistence, load_diagrams, save_diagrams
from .reports import emit_report
from .rips import build_rips
from .geometry import distance_matrix


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); the contract wants 1
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ripscale", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a point cloud file")
    gen.add_argument("--kind", required=True, choices=("circle", "hypercube", "random"))
    gen.add_argument("--count", type=int, help="points for circle/random clouds")
    gen.add_argument("--dim", type=int, help="ambient dimension (hypercube/random)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--format", choices=("csv", "json"), default=None)
    gen.add_argument("--out", required=True)

    per = sub.add_parser("persist", help="compute persistence diagrams of a cloud")
    per.add_argument("--cloud", required=True, help="point cloud file (csv or json)")
    per.add_argument("--max-dim", type=int, default=2)
    per.add_argument("--eps-cap", type=float, default=None)
    per.add_argument("--format", choices=("csv", "json"), default=None)
    per.add_argument("--out", default=None)

    cmp_ = sub.add_parser("compare", help="distances between two diagram files")
    cmp_.add_argument("left")
    cmp_.add_argument("right")
    cmp_.add_argument("--format", choices=("json", "csv", "markdown"), default="json")
    cmp_.add_argument("--out", default=None)

    aud = sub.add_parser("audit", help="run a scenario suite and audit the bounds")
    group = aud.add_mutually_exclusive_group(required=True)
    group.add_argument("--suite", help="JSON file with scenarios")
    group.add_argument(
        "--case-studies",
        action="store_true",
        help="run the packaged demonstration scenarios",
    )
    aud.add_argument("--format", choices=("json", "csv", "markdown"), default="json")
    aud.add_argument("--out", default=None)

    mc = sub.add_parser("montecarlo", help="Monte Carlo audit of the expected bound")
    mc.add_argument("--count", type=int, default=10, help="points in the base cloud")
    mc.add_argument("--dim", type=int, default=3, help="ambient dimension")
    mc.add_argument("--cloud", default=None, help="base cloud file (overrides count/dim)")
    mc.add_argument("--a", type=float, required=True, help="lower factor bound")
    mc.add_argument("--b", type=float, required=True, help="upper factor bound")
    mc.add_argument("--trials", type=int, required=True)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--max-dim", type=int, default=2)
    mc.add_argument("--format", choices=("json", "csv", "markdown"), default="json")
    mc.add_argument("--out", default=None)
    return parser


def _emit(report: dict, fmt: str, out: str | None) -> None:
    text = emit_report(report, fmt, out)
    if out is None:
        sys.stdout.write(text)


def _cmd_generate(args) -> None:
    if args.kind == "circle":
        if args.count is None:
            raise UsageError("--count is required for circle clouds")
        cloud = generate_circle(args.count)
    elif args.kind == "hypercube":
        if args.dim is None:
            raise UsageError("--dim is required for hypercube clouds")
        cloud = generate_hypercube(args.dim)
    else:
        if args.count is None or args.dim is None:
            raise UsageError("--count and --dim are required for random clouds")
        cloud = generate_random_cloud(args.count, args.dim, args.seed)
    save_point_cloud(cloud, args.out, args.format)


def _cmd_persist(args) -> None:
    cloud = load_point_cloud(args.cloud)
    d = distance_matrix(cloud)
    fc = build_rips(d, args.max_dim, args.eps_cap)
    diagrams = compute_persistence(fc)
    if args.out is None:
        from .persistence import diagrams_to_csv, diagrams_to_json

        fmt = args.format or "json"
        text = diagrams_to_csv(diagrams) if fmt == "csv" else diagrams_to_json(diagrams)
        sys.stdout.write(text)
    else:
        save_diagrams(diagrams, args.out, args.format)


def _cmd_compare(args) -> None:
    left = load_diagrams(args.left)
    right = load_diagrams(args.right)
    report = compare_diagram_lists(left, right)
    report["left"] = args.left
    report["right"] = args.right
    _emit(report, args.format, args.out)


def _cmd_audit(args) -> None:
    if args.case_studies:
        scenarios = case_study_suite()
    else:
        try:
            with open(args.suite, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read suite {args.suite}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"suite {args.suite} is not valid JSON: {exc}") from exc
        scenarios = scenarios_from_obj(obj)
    report = run_audit(scenarios)
    _emit(report, args.format, args.out)


def _cmd_montecarlo(args) -> None:
    if args.cloud is not None:
        cloud_spec = {"kind": "file", "path": args.cloud}
    else:
        cloud_spec = {"kind": "random", "count": args.count, "dim": args.dim}
    report = run_montecarlo(
        cloud_spec,
        a=args.a,
        b=args.b,
        trials=args.trials,
        seed=args.seed,
        max_dim=args.max_dim,
    )
    _emit(report, args.format, args.out)


_COMMANDS = {
    "generate": _cmd_generate,
    "persist": _cmd_persist,
    "compare": _cmd_compare,
    "audit": _cmd_audit,
    "montecarlo": _cmd_montecarlo,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InternalInvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    except Exception:
        traceback.print_exc()
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
