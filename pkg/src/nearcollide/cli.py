"""Command-line interface.

Exit codes: 0 on success, 1 on usage errors, 2 on data errors (unreadable
or malformed files, invalid parameter combinations). Single-shot results
print as JSON, parameter sweeps as CSV with the configuration echoed in
comment lines.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from . import attack as attack_mod
from . import bounds as bounds_mod
from .core import (
    DatabaseFormatError,
    Template,
    TemplateDatabase,
    parse_database,
    random_database,
    write_database,
)
from .cover import (
    DEFAULT_MAX_ITERS,
    CoolingSchedule,
    build_reduced_system,
    solve_exact,
    solve_sann,
)
from .experiments import (
    ExperimentConfig,
    config_comments,
    rows_to_csv,
    run_cooling_bench,
    run_partition_bench,
    run_sann_bench,
)
from .partition import (
    add_user,
    parse_mts,
    partition_database,
    partition_greedy,
    remove_user,
    write_mts,
)

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; remap to 1 so that 2 stays
    # reserved for data errors
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _resolve_epsilon(raw: str, n: int) -> int:
    raw = raw.strip()
    if raw.endswith("%"):
        return bounds_mod.epsilon_from_percent(n, float(raw[:-1]))
    return int(raw)


def _int_list(raw: str) -> tuple[int, ...]:
    return tuple(int(part) for part in raw.split(","))


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _load_db(path: str) -> TemplateDatabase:
    return parse_database(_read_text(path))


def _json_default(value):
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return dataclasses.asdict(value)
    if isinstance(value, Template):
        return value.to_string()
    raise TypeError(f"not JSON serializable: {type(value)!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nearcollide", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random template database")
    p.add_argument("--n", type=int, required=True, help="template dimension")
    p.add_argument("--clients", type=int, required=True, help="number of templates")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("partition", help="cover a database with master templates")
    p.add_argument("db", help="database file")
    p.add_argument("--epsilon", required=True, help="threshold, int or P%%")
    p.add_argument("--solver", choices=("exact", "sann"), default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p.add_argument("--out", default=None, help="master-set output path")

    p = sub.add_parser("greedy", help="greedy baseline covering")
    p.add_argument("db")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("cover", help="search one cover template for a whole database")
    p.add_argument("db")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--solver", choices=("exact", "sann"), default="exact")
    p.add_argument("--schedule", choices=("additive", "linear-mult", "exponential", "logarithmic"), default="additive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p.add_argument("--all", action="store_true", help="enumerate every cover template")
    p.add_argument("--out", default=None)

    p = sub.add_parser("bench", help="partitioning vs greedy over a parameter grid")
    p.add_argument("--n", required=True, help="comma-separated dimensions")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--clients", required=True, help="comma-separated client counts")
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--solver", choices=("exact", "sann"), default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p.add_argument("--out", default=None)

    p = sub.add_parser("sann-bench", help="annealing miss rate on planted instances")
    p.add_argument("--n", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--clients", required=True)
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--schedule", choices=("additive", "linear-mult", "exponential", "logarithmic"), default="additive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p.add_argument("--out", default=None)

    p = sub.add_parser("cooling-bench", help="sann-bench across all four schedules")
    p.add_argument("--n", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--clients", required=True)
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p.add_argument("--out", default=None)

    p = sub.add_parser("bounds", help="capacity report for one configuration")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--clients", type=int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("curves", help="safe-size curve data as CSV")
    p.add_argument("--panel", choices=("a", "b"), required=True,
                   help="a: vary n at fixed epsilon%%; b: vary epsilon%% at fixed n")
    p.add_argument("--n", default=None, help="panel a: comma list; panel b: single value")
    p.add_argument("--epsilon-percent", default=None,
                   help="panel a: single value; panel b: comma list")
    p.add_argument("--out", default=None)

    p = sub.add_parser("attack", help="master-feature-set or masterkey-set attack")
    p.add_argument("leak", help="leak file: '<id> <known half> <template>' lines")
    p.add_argument("--kind", choices=("master-feature", "masterkey"), required=True)
    p.add_argument("--epsilon", required=True, help="verification threshold")
    p.add_argument("--no-partition", action="store_true",
                   help="skip clustering; one item per distinct recovered value")
    p.add_argument("--solver", choices=("exact", "sann"), default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("add-user", help="enroll one template into a master set")
    p.add_argument("mts", help="master-set file")
    p.add_argument("db", help="database file")
    p.add_argument("bits", help="new template bitstring")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--id", default=None, help="user id (default: next free)")
    p.add_argument("--out-mts", default=None)
    p.add_argument("--out-db", default=None)

    p = sub.add_parser("remove-user", help="revoke one enrolled template")
    p.add_argument("db")
    p.add_argument("user", help="user id or template bitstring")
    p.add_argument("--epsilon", required=True)
    p.add_argument("--removed-before", type=int, default=0,
                   help="how many users were removed earlier")
    p.add_argument("--out", default=None, help="path for the updated database")

    return parser


def _cmd_gen(args) -> int:
    db = random_database(args.n, args.clients, args.seed)
    _emit(write_database(db), args.out)
    return 0


def _cmd_partition(args) -> int:
    db = _load_db(args.db)
    epsilon = _resolve_epsilon(args.epsilon, db.dim)
    t0 = time.perf_counter()
    if args.command == "greedy":
        mts = partition_greedy(db, epsilon, seed=args.seed)
    else:
        mts = partition_database(
            db, epsilon, solver=args.solver, seed=args.seed, max_iters=args.max_iters
        )
    elapsed = time.perf_counter() - t0
    _emit(write_mts(mts, db), args.out)
    print(f"entries={mts.size} wall_ms={elapsed * 1000:.2f}", file=sys.stderr)
    return 0


def _cmd_cover(args) -> int:
    db = _load_db(args.db)
    epsilon = _resolve_epsilon(args.epsilon, db.dim)
    system = build_reduced_system(list(db.members), epsilon)
    if args.all:
        covers = solve_exact(system, enumerate_all=True)
        payload = {
            "status": "found" if covers else "not-found",
            "count": len(covers),
            "covers": [c.to_string() for c in covers],
        }
    else:
        if args.solver == "exact":
            result = solve_exact(system)
        else:
            result = solve_sann(
                system,
                schedule=CoolingSchedule(args.schedule),
                max_iters=args.max_iters,
                seed=args.seed,
            )
        payload = {
            "status": result.status,
            "center": result.center.to_string() if result.center else None,
            "solver": result.solver,
            "iterations": result.iterations,
            "wall_ms": round(result.wall_time * 1000, 3),
        }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _make_config(args, solver: str = "exact", schedule: str = "additive") -> ExperimentConfig:
    n_values = _int_list(args.n)
    if args.epsilon.strip().endswith("%") and len(set(n_values)) > 1:
        raise ValueError("percent epsilon needs a single --n value")
    epsilon = _resolve_epsilon(args.epsilon, n_values[0])
    return ExperimentConfig(
        n_values=n_values,
        epsilon=epsilon,
        clients=_int_list(args.clients),
        replications=args.reps,
        solver=solver,
        schedule=schedule,
        seed=args.seed,
        max_iters=args.max_iters,
    )


def _cmd_bench(args) -> int:
    config = _make_config(args, solver=args.solver)
    rows = run_partition_bench(config)
    _emit(rows_to_csv(rows, config_comments(config)), args.out)
    return 0


def _cmd_sann_bench(args) -> int:
    config = _make_config(args, solver="sann", schedule=args.schedule)
    rows = run_sann_bench(config)
    _emit(rows_to_csv(rows, config_comments(config)), args.out)
    return 0


def _cmd_cooling_bench(args) -> int:
    config = _make_config(args, solver="sann")
    rows = run_cooling_bench(config)
    _emit(rows_to_csv(rows, config_comments(config)), args.out)
    return 0


def _cmd_bounds(args) -> int:
    epsilon = _resolve_epsilon(args.epsilon, args.n)
    report = bounds_mod.capacity_report(args.n, epsilon, args.clients)
    _emit(json.dumps(dataclasses.asdict(report), indent=2) + "\n", args.out)
    return 0


def _cmd_curves(args) -> int:
    if args.panel == "a":
        if args.n is None or args.epsilon_percent is None:
            raise ValueError("panel a needs --n (comma list) and --epsilon-percent")
        percent = float(args.epsilon_percent)
        points = bounds_mod.curve_fixed_epsilon_percent(percent, _int_list(args.n))
        comments = [f"panel=a epsilon_percent={percent}"]
    else:
        if args.n is None or args.epsilon_percent is None:
            raise ValueError("panel b needs --n (single) and --epsilon-percent (comma list)")
        n = int(args.n)
        percents = [float(p) for p in args.epsilon_percent.split(",")]
        points = bounds_mod.curve_fixed_n(n, percents)
        comments = [f"panel=b n={n}"]
    _emit(bounds_mod.curves_csv(points, comments), args.out)
    return 0


def _cmd_attack(args) -> int:
    rows = attack_mod.parse_leak(_read_text(args.leak))
    n = rows[0][1].n
    tau = _resolve_epsilon(args.epsilon, n)
    leak = [(known, tpl) for _, known, tpl in rows]
    if args.kind == "master-feature":
        result = attack_mod.master_feature_attack(
            leak, tau, use_partition=not args.no_partition,
            solver=args.solver, seed=args.seed,
        )
    else:
        result = attack_mod.masterkey_attack(
            leak, tau, use_partition=not args.no_partition,
            solver=args.solver, seed=args.seed,
        )
    payload = {
        "kind": result.kind,
        "items": [t.to_string() for t in result.items],
        "item_count": len(result.items),
        "inversion_calls": result.inversion_calls,
        "coverage": result.coverage,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _cmd_add_user(args) -> int:
    db = _load_db(args.db)
    epsilon = _resolve_epsilon(args.epsilon, db.dim)
    mts = parse_mts(_read_text(args.mts), db, epsilon)
    template = Template.from_string(args.bits)
    new_mts, new_db = add_user(mts, db, template, epsilon, user_id=args.id)
    _emit(write_mts(new_mts, new_db), args.out_mts)
    if args.out_db:
        Path(args.out_db).write_text(write_database(new_db), encoding="utf-8")
    attached = new_mts.size == mts.size
    print(
        f"{'attached to existing entry' if attached else 'added singleton entry'};"
        f" entries={new_mts.size}",
        file=sys.stderr,
    )
    return 0


def _cmd_remove_user(args) -> int:
    db = _load_db(args.db)
    epsilon = _resolve_epsilon(args.epsilon, db.dim)
    if set(args.user) <= {"0", "1"} and len(args.user) == db.dim:
        template = Template.from_string(args.user)
    else:
        if args.user not in db.ids:
            raise ValueError(f"unknown user {args.user!r}")
        template = db.members[db.ids.index(args.user)]
    report = remove_user(db, template, epsilon, removed_before=args.removed_before)
    payload = {
        "removed_id": report.removed_id,
        "affected": [dataclasses.asdict(a) for a in report.affected],
        "ball_volume": report.ball_volume,
        "removed_count": report.removed_count,
        "enrolled_count": report.enrolled_count,
        "capacity_breached": report.capacity_breached,
    }
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    if args.out:
        if report.database is None:
            raise ValueError("database is empty after removal; nothing to write")
        Path(args.out).write_text(write_database(report.database), encoding="utf-8")
    return 0


_HANDLERS = {
    "gen": _cmd_gen,
    "partition": _cmd_partition,
    "greedy": _cmd_partition,
    "cover": _cmd_cover,
    "bench": _cmd_bench,
    "sann-bench": _cmd_sann_bench,
    "cooling-bench": _cmd_cooling_bench,
    "bounds": _cmd_bounds,
    "curves": _cmd_curves,
    "attack": _cmd_attack,
    "add-user": _cmd_add_user,
    "remove-user": _cmd_remove_user,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (ValueError, DatabaseFormatError, OSError) as exc:
        print(f"nearcollide: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
