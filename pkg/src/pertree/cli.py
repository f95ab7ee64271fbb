"""Command-line interface: bounds, tables, predictions, walks, simulations, oracles.

One executable with subcommands.  Run parameters may come from a JSON
config file (``--config``); explicit flags win.  Every output file is
paired with a manifest recording the full parameter set, so any run can
be reproduced exactly.  Exit codes: 0 success, 1 usage, 2 numerical
failure, 3 capacity/limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

from . import __version__
from .bounds import (
    bounds_report,
    charpoly_perron,
    lambda1_upper,
    lambda2_asymptotic,
    lambda_ell_lower_period3,
)
from .degrees import PeriodicDegreeSequence
from .errors import (
    BracketFailure,
    CapacityExceeded,
    DegenerateLeadingCoefficient,
    InvalidShape,
    LimitExceeded,
    NonConvergence,
    NoPositiveSolution,
    NoRealSolution,
    SolveFailure,
    Subcritical,
    TooLarge,
)
from .oracle import enumerate_closed_walks, exact_contact_small, star_mean_absorption
from .sim import (
    SimConfig,
    StarState,
    run_replicas,
    run_star,
    survival_curve,
)
from .walks import m0_estimates

PERIOD3_TABLE_ROWS = [(2, 3, 4), (3, 4, 5), (4, 6, 8), (6, 8, 10)]

USAGE_EXIT = 1
NUMERICAL_EXIT = 2
CAPACITY_EXIT = 3

_CAPACITY_ERRORS = (CapacityExceeded, LimitExceeded, TooLarge)
_NUMERICAL_ERRORS = (NonConvergence, Subcritical, NoRealSolution,
                     NoPositiveSolution, InvalidShape, SolveFailure,
                     BracketFailure, DegenerateLeadingCoefficient)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(USAGE_EXIT)


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    seed: int | None
    version: str
    started: str
    finished: str = ""
    outputs: list[str] = field(default_factory=list)

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2)
            fh.write("\n")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _merge_config(args: argparse.Namespace, parser_defaults: dict) -> None:
    """Fill unset flags from the JSON config; explicit flags win."""
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        loaded = json.load(fh)
    for key, value in loaded.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)


def _require(args: argparse.Namespace, *attrs: str) -> None:
    missing = [a for a in attrs if getattr(args, a, None) is None]
    if missing:
        raise ValueError("missing required parameters: "
                         + ", ".join(a.replace("_", "-") for a in missing))


def _apply_defaults(args: argparse.Namespace, defaults: dict) -> None:
    for attr, value in defaults.items():
        if getattr(args, attr, None) is None:
            setattr(args, attr, value)


def _emit(text: str, out: str | None, manifest: RunManifest | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
        if manifest is not None:
            manifest.finished = _now()
            manifest.outputs.append(out)
            manifest.write(out + ".manifest.json")
    else:
        sys.stdout.write(text)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _parse_grid(text: str) -> list[float]:
    """start:stop:step grid, endpoint included up to float tolerance."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError as exc:
        raise SystemExit(USAGE_EXIT) from exc
    grid = []
    value = start
    while value <= stop + 1e-12 * max(1.0, abs(stop)):
        grid.append(round(value, 12))
        value += step
    return grid


# ---------------------------------------------------------------------------
# Subcommands


def cmd_bounds(args) -> int:
    seq = PeriodicDegreeSequence.parse(args.degrees)
    report = bounds_report(seq)
    lines = [f"{'quantity':<18} value"]
    table = [("lambda_g", report.lambda_g),
             ("lambda1_upper", report.lambda1_upper),
             ("lambda_ell_lower", report.lambda_ell_lower)]
    if report.x0 is not None:
        table.append(("x0", report.x0))
    if report.lambda2_prediction is not None:
        table.append(("c", report.lambda2_asymptotic_c))
        table.append(("prediction", report.lambda2_prediction))
    for name, value in table:
        shown = f"{value:.6f}" if value is not None else "unavailable"
        lines.append(f"{name:<18} {shown}")
    for note in report.notes:
        lines.append(f"note: {note}")
    text = "\n".join(lines) + "\n" + report.to_json() + "\n"
    _emit(text, args.out, _manifest(args))
    return 0


def cmd_table(args) -> int:
    rows = []
    if args.which == "period3_x0":
        header = ["a", "b", "c", "x0", "lambda_ell_lower"]
        for a, b, c in PERIOD3_TABLE_ROWS:
            x0, bound = lambda_ell_lower_period3(a, b, c)
            rows.append([a, b, c, f"{x0:.3f}", f"{bound:.4f}"])
    else:
        # lambda_g here is 1/(spectral radius of the residue matrix); the
        # printed historical values for this column disagree with that
        # definition, so the column is annotated rather than matched.
        header = ["a", "b", "c", "lambda_g_spectral", "lambda1_upper"]
        for a, b, c in PERIOD3_TABLE_ROWS:
            seq = PeriodicDegreeSequence((a, b, c))
            lam_g = 1.0 / charpoly_perron(seq)
            rows.append([a, b, c, f"{lam_g:.4f}", f"{lambda1_upper(seq):.4f}"])
    _emit(_csv_text(header, rows), args.out, _manifest(args))
    return 0


def cmd_predict(args) -> int:
    parts = args.degrees.split(",")
    if "n" not in parts:
        raise SystemExit(USAGE_EXIT)
    n_values = [int(v) for v in _parse_grid(args.n_range)]
    rows = []
    for n in n_values:
        degs = tuple(n if p == "n" else int(p) for p in parts)
        c, pred = lambda2_asymptotic(PeriodicDegreeSequence(degs), n_override=n)
        rows.append([n, repr(c), repr(pred)])
    _emit(_csv_text(["n", "c", "prediction"], rows), args.out, _manifest(args))
    return 0


def cmd_walks(args) -> int:
    seq = PeriodicDegreeSequence.parse(args.degrees)
    table = m0_estimates(seq, args.nmax, root_residue=args.residue)
    rows = []
    for n, (count, root, rmax) in enumerate(
            zip(table.counts, table.roots, table.running_max()), start=1):
        rows.append([n, str(count), repr(root), repr(rmax)])
    _emit(_csv_text(["n", "count", "root", "running_max"], rows),
          args.out, _manifest(args))
    return 0


def cmd_simulate(args) -> int:
    _require(args, "degrees", "lam", "horizon")
    seq = PeriodicDegreeSequence.parse(args.degrees)
    config = SimConfig(seq, args.lam, args.horizon, args.root_residue,
                       args.max_events, args.max_vertices, args.seed,
                       args.replicas, args.mode, args.brw_population_cap)
    rows = []
    survived_global = 0
    for i, outcome in enumerate(run_replicas(config)):
        if outcome.survived("global", args.horizon):
            survived_global += 1
        rows.append([
            i,
            int(outcome.extinct),
            "" if outcome.extinction_time is None else repr(outcome.extinction_time),
            len(outcome.root_visit_times),
            outcome.peak_infected,
            outcome.events,
            int(outcome.truncated),
        ])
    header = ["seed_index", "extinct", "extinction_time", "root_visits",
              "peak", "events", "truncated"]
    summary = {"degrees": str(seq), "lambda": args.lam, "horizon": args.horizon,
               "replicas": args.replicas, "seed": args.seed, "mode": args.mode,
               "survived_global": survived_global}
    _emit(_csv_text(header, rows), args.out, _manifest(args))
    if args.out:
        with open(args.out + ".summary.json", "w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    else:
        sys.stdout.write(json.dumps(summary) + "\n")
    return 0


def cmd_star(args) -> int:
    init = StarState(args.n, args.j, args.center)
    rows = []
    for i in range(args.replicas):
        result = run_star(args.n, args.lam, init, stop=args.stop,
                          level=args.level, horizon=args.horizon,
                          seed=args.seed, replica=i)
        rows.append([i, result.hit, repr(result.time), result.path_peak,
                     repr(result.time_avg_leaves)])
    _emit(_csv_text(["replica", "hit", "time", "peak", "time_avg_leaves"], rows),
          args.out, _manifest(args))
    return 0


def cmd_sweep(args) -> int:
    _require(args, "degrees", "lambda_grid", "horizon")
    seq = PeriodicDegreeSequence.parse(args.degrees)
    rows = []
    for lam in _parse_grid(args.lambda_grid):
        est = survival_curve(seq, lam, args.horizon, args.replicas, args.seed,
                             criterion=args.criterion, mode=args.mode,
                             root_residue=args.root_residue,
                             max_events=args.max_events,
                             max_vertices=args.max_vertices,
                             brw_population_cap=args.brw_population_cap)
        rows.append([repr(est.lam), repr(est.probability), repr(est.ci_low),
                     repr(est.ci_high), est.replicas])
    header = ["lambda", "probability", "ci_low", "ci_high", "replicas"]
    _emit(_csv_text(header, rows), args.out, _manifest(args))
    return 0


def cmd_oracle(args) -> int:
    if args.star_n is not None:
        _require(args, "lam")
        solve = star_mean_absorption(args.star_n, args.lam)
        payload = {"n": args.star_n, "lambda": args.lam,
                   "expected_time_from_center": solve.expected_time[(0, 1)],
                   "solve_residual": solve.solve_residual}
    elif args.edges is not None:
        _require(args, "lam")
        neighbors: dict[int, list[int]] = {}
        for part in args.edges.split(","):
            a, b = (int(x) for x in part.split("-"))
            neighbors.setdefault(a, []).append(b)
            neighbors.setdefault(b, []).append(a)
        mean_time, mean_visits = exact_contact_small(neighbors, args.lam, args.root)
        payload = {"edges": args.edges, "lambda": args.lam, "root": args.root,
                   "mean_extinction_time": mean_time,
                   "mean_root_visits": mean_visits}
    elif args.enumerate_degrees is not None:
        seq = PeriodicDegreeSequence.parse(args.enumerate_degrees)
        count = enumerate_closed_walks(seq, args.residue, args.two_n)
        payload = {"degrees": str(seq), "residue": args.residue,
                   "two_n": args.two_n, "count": count}
    else:
        raise SystemExit(USAGE_EXIT)
    _emit(json.dumps(payload, indent=2) + "\n", args.out, _manifest(args))
    return 0


def _manifest(args) -> RunManifest:
    params = {k: v for k, v in vars(args).items()
              if k not in ("func", "defaults") and not k.startswith("_")}
    return RunManifest(args.subcommand, params, getattr(args, "seed", None),
                       __version__, _now())


# ---------------------------------------------------------------------------
# Argument wiring


def _add_common(sub, *, config=True):
    sub.add_argument("--out", default=None, help="write output (and a manifest) here")
    if config:
        sub.add_argument("--config", default=None,
                         help="JSON file with defaults; flags win")


def build_parser() -> _Parser:
    parser = _Parser(prog="pertree")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    defaults: dict[str, dict] = {}

    p = subs.add_parser("bounds", parents=[], help="closed-form bounds")
    p.add_argument("--degrees", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_bounds)
    defaults["bounds"] = {}

    p = subs.add_parser("table", help="regenerate the period-3 reference tables")
    p.add_argument("--which", choices=["period3_x0", "period3_lambda1"],
                   required=True)
    _add_common(p)
    p.set_defaults(func=cmd_table)
    defaults["table"] = {}

    p = subs.add_parser("predict", help="asymptotic lambda_2 predictions")
    p.add_argument("--degrees", required=True,
                   help="comma list with literal 'n' as the dominant slot, e.g. 1,n")
    p.add_argument("--n-range", required=True, help="start:stop:step")
    _add_common(p)
    p.set_defaults(func=cmd_predict)
    defaults["predict"] = {}

    p = subs.add_parser("walks", help="closed-walk counts and growth roots")
    p.add_argument("--degrees", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--residue", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_walks)
    defaults["walks"] = {}

    sim_defaults = dict(root_residue=0, max_events=1_000_000,
                        max_vertices=500_000, brw_population_cap=1_000_000,
                        seed=0, replicas=1, mode="contact")

    p = subs.add_parser("simulate", help="per-replica simulation records")
    p.add_argument("--degrees")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--horizon", type=float)
    p.add_argument("--replicas", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=["contact", "brw"])
    p.add_argument("--root-residue", type=int)
    p.add_argument("--max-events", type=int)
    p.add_argument("--max-vertices", type=int)
    p.add_argument("--brw-population-cap", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_simulate)
    defaults["simulate"] = dict(sim_defaults)

    p = subs.add_parser("star", help="star-graph chain runs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--j", type=int, default=0)
    p.add_argument("--center", type=int, default=1)
    p.add_argument("--stop", choices=["absorb", "reach", "horizon"],
                   default="absorb")
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--horizon", type=float, default=None)
    p.add_argument("--replicas", type=int)
    p.add_argument("--seed", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_star)
    defaults["star"] = dict(seed=0, replicas=1)

    p = subs.add_parser("sweep", help="survival curve over a lambda grid")
    p.add_argument("--degrees")
    p.add_argument("--lambda-grid", help="start:stop:step")
    p.add_argument("--horizon", type=float)
    p.add_argument("--replicas", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--criterion", choices=["global", "local"])
    p.add_argument("--mode", choices=["contact", "brw"])
    p.add_argument("--root-residue", type=int)
    p.add_argument("--max-events", type=int)
    p.add_argument("--max-vertices", type=int)
    p.add_argument("--brw-population-cap", type=int)
    _add_common(p)
    p.set_defaults(func=cmd_sweep)
    defaults["sweep"] = dict(sim_defaults, criterion="global", replicas=100)

    p = subs.add_parser("oracle", help="exact small-instance solves")
    p.add_argument("--star-n", type=int, default=None)
    p.add_argument("--edges", default=None, help="comma list of v-w pairs")
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--enumerate-degrees", default=None)
    p.add_argument("--residue", type=int, default=0)
    p.add_argument("--two-n", type=int, default=4)
    _add_common(p)
    p.set_defaults(func=cmd_oracle)
    defaults["oracle"] = {}

    parser.set_defaults(_defaults_map=defaults)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    defaults = args._defaults_map.get(args.subcommand, {})
    try:
        _merge_config(args, defaults)
        _apply_defaults(args, defaults)
        return args.func(args)
    except _CAPACITY_ERRORS as exc:
        sys.stderr.write(f"capacity error: {exc}\n")
        return CAPACITY_EXIT
    except _NUMERICAL_ERRORS as exc:
        sys.stderr.write(f"numerical error: {exc}\n")
        return NUMERICAL_EXIT
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return USAGE_EXIT


if __name__ == "__main__":
    sys.exit(main())
