"""Command-line front end.

Exit codes: 0 success, 2 invalid configuration, 3 resource-limit refusal.
Every report-producing run echoes its fully resolved configuration
(defaults included) as '#'-prefixed header lines; the CSV body below them
is byte-identical across reruns with the same seed and any thread count.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import sys

from . import __version__
from .analytic_limits import LimitSpace, mp_closed_form
from .errors import ConfigurationError, ResourceLimitError
from .experiments import (
    ALL_STATISTICS,
    SweepPlan,
    run_bivariate_moment_convergence,
    run_convergence_sweep,
    run_martingale_check,
    run_moment_convergence,
    write_aggregates_csv,
    write_moment_table_csv,
    write_report_csv,
)
from .gh_metrics import gh_exact_small, two_point_example_spaces
from .increments import SeedSpec, law_from_string, law_sigma
from .path_metrics import read_metric_space_csv
from .walk_engine import WalkConfig, simulate_decomposition, simulate_grid

_FMT = "{:.17g}"


def _parse_points(text: str, dim_required: bool = True) -> tuple[tuple[int, int], ...]:
    """Parse '100x100,400x400' sweep points; bare '100,1000' means d = 1."""
    points = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "x" in item:
            parts = item.split("x")
            if len(parts) != 2:
                raise ConfigurationError(f"malformed sweep point {item!r}; expected NxD")
            try:
                points.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise ConfigurationError(f"malformed sweep point {item!r}; expected NxD")
        elif dim_required:
            raise ConfigurationError(f"malformed sweep point {item!r}; expected NxD")
        else:
            try:
                points.append((int(item), 1))
            except ValueError:
                raise ConfigurationError(f"malformed point {item!r}; expected an integer")
    if not points:
        raise ConfigurationError("no sweep points given")
    return tuple(points)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lpwalk",
        description="High-dimensional random walks as finite l_p metric spaces: "
        "simulation, decomposition and convergence diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, *names):
        if "n" in names:
            sp.add_argument("--n", type=int, default=1000, help="number of walk steps")
        if "d" in names:
            sp.add_argument("--d", type=int, default=100, help="walk dimension")
        if "p" in names:
            sp.add_argument("--p", type=float, default=2.0, help="l_p exponent (>= 1)")
        if "law" in names:
            sp.add_argument(
                "--law",
                default="rademacher",
                help="increment law: rademacher | uniform | normal | cexp | rademacher:c=<real>",
            )
        if "seed" in names:
            sp.add_argument("--seed", type=int, default=0, help="master seed")
        if "m" in names:
            sp.add_argument("--m", type=int, default=None, help="grid size (default min(n, 512))")
        if "replicates" in names:
            sp.add_argument("--replicates", type=int, default=100, help="replicate count")
        if "threads" in names:
            sp.add_argument("--threads", type=int, default=1, help="worker threads")
        if "out" in names:
            sp.add_argument("--out", default=None, help="output path (default stdout)")
        if "format" in names:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("mp", help="print the standard-normal absolute moment M_p")
    add_common(sp, "p", "out")

    sp = sub.add_parser("simulate", help="simulate one walk and dump grid snapshots")
    add_common(sp, "n", "d", "p", "law", "seed", "m", "out", "format")

    sp = sub.add_parser("decompose", help="simulate one walk and dump the T/Q paths")
    add_common(sp, "n", "d", "p", "law", "seed", "out", "format")

    sp = sub.add_parser("converge", help="replicate sweep of convergence statistics")
    add_common(sp, "p", "law", "seed", "m", "replicates", "threads", "out", "format")
    sp.add_argument("--points", default="100x100,400x400,1600x1600", help="sweep points NxD,...")
    sp.add_argument("--p-list", default=None, help="comma-separated p values (overrides --p)")
    sp.add_argument(
        "--stats",
        default=",".join(ALL_STATISTICS),
        help=f"statistics to record, comma-separated from {ALL_STATISTICS}",
    )
    sp.add_argument("--plan", default=None, help="JSON plan file (overrides point flags)")
    sp.add_argument("--aggregates-out", default=None, help="aggregate CSV path")

    sp = sub.add_parser("moments", help="univariate moment-convergence table")
    add_common(sp, "p", "law", "seed", "replicates", "out", "format")
    sp.add_argument("--points", default="100,1000,10000", help="n values, comma-separated")

    sp = sub.add_parser("bimoments", help="bivariate moment-convergence table")
    add_common(sp, "p", "law", "seed", "replicates", "out", "format")
    sp.add_argument("--points", default="100,1000,10000", help="n values, comma-separated")
    sp.add_argument("--rho", type=float, default=0.5, help="pair correlation in [-1, 1]")

    sp = sub.add_parser("martingale", help="T/Q decomposition diagnostics")
    add_common(sp, "n", "d", "p", "law", "seed", "replicates", "threads", "out", "format")

    sp = sub.add_parser("gh", help="exact GH distance for small spaces")
    add_common(sp, "p", "out")
    sp.add_argument("--two-point-example", action="store_true", help="run the isometric two-point demo")
    sp.add_argument("--a", type=float, default=0.5, help="split parameter of the demo, in (0, 1)")
    sp.add_argument("--space-a", default=None, help="metric-space CSV for the first space")
    sp.add_argument("--space-b", default=None, help="metric-space CSV for the second space")

    return parser


@contextlib.contextmanager
def _open_out(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="ascii") as fh:
            yield fh


def _echo_dict(args: argparse.Namespace, **extra) -> dict:
    skip = {"command", "out", "aggregates_out", "plan"}
    resolved = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    resolved["version"] = __version__
    resolved.update(extra)
    return resolved


def _cmd_mp(args) -> int:
    value = mp_closed_form(args.p)
    with _open_out(args.out) as fh:
        fh.write(_FMT.format(value) + "\n")
    return 0


def _cmd_simulate(args) -> int:
    config = WalkConfig(
        n=args.n, d=args.d, p=args.p, law=law_from_string(args.law),
        seed=SeedSpec(args.seed), m=args.m,
    )
    snap = simulate_grid(config)
    echo = _echo_dict(args, m_resolved=config.m)
    with _open_out(args.out) as fh:
        if args.format == "json":
            fh.write(json.dumps({
                "config": {k: str(v) for k, v in echo.items()},
                "times": [float(_FMT.format(t)) for t in snap.times],
                "points": [[float(_FMT.format(v)) for v in row] for row in snap.points],
            }, indent=2) + "\n")
        else:
            for key in sorted(echo):
                fh.write(f"# {key}={echo[key]}\n")
            snap.to_csv(fh)
    return 0


def _cmd_decompose(args) -> int:
    config = WalkConfig(
        n=args.n, d=args.d, p=args.p, law=law_from_string(args.law),
        seed=SeedSpec(args.seed),
    )
    trace = simulate_decomposition(config)
    echo = _echo_dict(args, final_norm_pp=_FMT.format(trace.final_norm_pp))
    with _open_out(args.out) as fh:
        if args.format == "json":
            fh.write(json.dumps({
                "config": {k: str(v) for k, v in echo.items()},
                "T": [float(_FMT.format(v)) for v in trace.T],
                "Q": [float(_FMT.format(v)) for v in trace.Q],
                "final_norm_pp": trace.final_norm_pp,
            }, indent=2) + "\n")
        else:
            for key in sorted(echo):
                fh.write(f"# {key}={echo[key]}\n")
            fh.write("j,T,Q\n")
            for j, (t, q) in enumerate(zip(trace.T, trace.Q)):
                fh.write(f"{j},{_FMT.format(t)},{_FMT.format(q)}\n")
    return 0


def _cmd_converge(args) -> int:
    if args.plan is not None:
        with open(args.plan, "r", encoding="ascii") as fh:
            plan = SweepPlan.from_json(fh.read())
    else:
        p_list = (
            tuple(float(v) for v in args.p_list.split(",")) if args.p_list else (args.p,)
        )
        plan = SweepPlan(
            points=_parse_points(args.points),
            p_list=p_list,
            law=law_from_string(args.law),
            replicates=args.replicates,
            master_seed=args.seed,
            m=args.m,
            statistics=tuple(s.strip() for s in args.stats.split(",") if s.strip()),
        )
    report = run_convergence_sweep(plan, threads=args.threads)
    echo = _echo_dict(args, plan=plan.to_json().replace("\n", " "))
    for key, seconds in sorted(report.timings.items()):
        echo[f"seconds_n{key[0]}_d{key[1]}_p{key[2]:g}"] = f"{seconds:.3f}"

    if args.format == "json":
        doc = {
            "config": {k: str(v) for k, v in echo.items()},
            "rows": [vars(r) for r in report.rows],
            "aggregates": [vars(a) for a in report.aggregates],
        }
        with _open_out(args.out) as fh:
            fh.write(json.dumps(doc, indent=2) + "\n")
        return 0

    agg_path = args.aggregates_out
    if agg_path is None and args.out is not None:
        agg_path = (
            args.out[:-4] + "_aggregates.csv" if args.out.endswith(".csv")
            else args.out + "_aggregates"
        )
    with _open_out(args.out) as fh:
        write_report_csv(report, fh, echo=echo)
    with _open_out(agg_path) as fh:
        write_aggregates_csv(report, fh, echo=echo)
    return 0


def _cmd_moments(args) -> int:
    n_list = [n for n, _ in _parse_points(args.points, dim_required=False)]
    table = run_moment_convergence(
        law_from_string(args.law), args.p, n_list, args.replicates, args.seed
    )
    echo = _echo_dict(args, sigma=law_sigma(law_from_string(args.law)))
    return _write_table(args, table, echo)


def _cmd_bimoments(args) -> int:
    n_list = [n for n, _ in _parse_points(args.points, dim_required=False)]
    table = run_bivariate_moment_convergence(
        law_from_string(args.law), args.p, args.rho, n_list, args.replicates, args.seed
    )
    echo = _echo_dict(args)
    return _write_table(args, table, echo)


def _write_table(args, table, echo) -> int:
    with _open_out(args.out) as fh:
        if args.format == "json":
            fh.write(json.dumps({
                "config": {k: str(v) for k, v in echo.items()},
                "rows": [vars(r) for r in table.rows],
            }, indent=2) + "\n")
        else:
            write_moment_table_csv(table, fh, echo=echo)
    return 0


def _cmd_martingale(args) -> int:
    config = WalkConfig(
        n=args.n, d=args.d, p=args.p, law=law_from_string(args.law), seed=SeedSpec(args.seed)
    )
    diag = run_martingale_check(config, args.replicates, threads=args.threads)
    with _open_out(args.out) as fh:
        if args.format == "csv":
            echo = _echo_dict(args)
            for key in sorted(echo):
                fh.write(f"# {key}={echo[key]}\n")
            fh.write("key,value\n")
            payload = json.loads(diag.to_json())
            for key, value in payload.items():
                fh.write(f"{key},{json.dumps(value)}\n")
        else:
            fh.write(diag.to_json() + "\n")
    return 0


def _cmd_gh(args) -> int:
    if args.two_point_example:
        space_a, space_b = two_point_example_spaces(args.p, args.a)
    elif args.space_a and args.space_b:
        space_a = read_metric_space_csv(args.space_a)
        space_b = read_metric_space_csv(args.space_b)
    else:
        raise ConfigurationError(
            "gh requires either --two-point-example or both --space-a and --space-b"
        )
    value = gh_exact_small(space_a, space_b)
    with _open_out(args.out) as fh:
        fh.write(_FMT.format(value) + "\n")
    return 0


_HANDLERS = {
    "mp": _cmd_mp,
    "simulate": _cmd_simulate,
    "decompose": _cmd_decompose,
    "converge": _cmd_converge,
    "moments": _cmd_moments,
    "bimoments": _cmd_bimoments,
    "martingale": _cmd_martingale,
    "gh": _cmd_gh,
}


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ConfigurationError as exc:
        print(f"lpwalk: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"lpwalk: resource limit: {exc}", file=sys.stderr)
        return 3


def main(argv: list[str] | None = None) -> None:
    sys.exit(dispatch(argv))


if __name__ == "__main__":
    main()
