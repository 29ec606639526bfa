"""Seeded benchmark harness behind the CLI's bench subcommands.

Every replication derives its RNG from the run seed plus its grid
coordinates, so any CSV can be regenerated bit-for-bit (timing columns
aside) from the parameters echoed in its header comments.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Template, TemplateDatabase, random_database, random_in_ball, random_template
from .cover import DEFAULT_MAX_ITERS, CoolingSchedule, build_reduced_system, solve_sann
from .partition import partition_database, partition_greedy

__all__ = [
    "ExperimentConfig",
    "planted_group",
    "run_partition_bench",
    "run_sann_bench",
    "run_cooling_bench",
    "rows_to_csv",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid and budget for one benchmark run; echoed into CSV output."""

    n_values: tuple[int, ...]
    epsilon: int
    clients: tuple[int, ...]
    replications: int = 200
    solver: str = "exact"
    schedule: str = "additive"
    seed: int = 0
    max_iters: int = DEFAULT_MAX_ITERS

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise ValueError("replications must be >= 1")
        if not self.n_values:
            raise ValueError("at least one n value required")
        if not self.clients:
            raise ValueError("at least one client count required")


def _rep_rng(seed: int, *coords: object) -> random.Random:
    return random.Random(f"{seed}/" + "/".join(str(c) for c in coords))


def planted_group(
    n: int, epsilon: int, k: int, rng: random.Random
) -> tuple[Template, TemplateDatabase]:
    """A database of k distinct templates drawn inside one epsilon-ball.

    The hidden ball center witnesses that a cover exists, so any solver
    miss on such an instance is a genuine search failure.
    """
    center = random_template(n, rng)
    seen: set[int] = set()
    members: list[Template] = []
    while len(members) < k:
        t = random_in_ball(center, epsilon, rng)
        if t.bits not in seen:
            seen.add(t.bits)
            members.append(t)
    db = TemplateDatabase(
        n, tuple(members), tuple(f"u{i + 1}" for i in range(k))
    )
    return center, db


def run_partition_bench(config: ExperimentConfig) -> list[dict]:
    """Mean master-set sizes for the partitioning algorithm vs the greedy baseline."""
    rows = []
    for n in config.n_values:
        for k in config.clients:
            algo_total = 0
            greedy_total = 0
            algo_time = 0.0
            greedy_time = 0.0
            for rep in range(config.replications):
                rng = _rep_rng(config.seed, "bench", n, k, rep)
                db = random_database(n, k, rng.getrandbits(48))
                t0 = time.perf_counter()
                mts = partition_database(
                    db,
                    config.epsilon,
                    solver=config.solver,
                    seed=rng.getrandbits(32),
                    max_iters=config.max_iters,
                )
                algo_time += time.perf_counter() - t0
                t0 = time.perf_counter()
                greedy = partition_greedy(db, config.epsilon, seed=rng.getrandbits(32))
                greedy_time += time.perf_counter() - t0
                algo_total += mts.size
                greedy_total += greedy.size
            reps = config.replications
            algo_mean = algo_total / reps
            greedy_mean = greedy_total / reps
            rows.append(
                {
                    "n": n,
                    "epsilon": config.epsilon,
                    "clients": k,
                    "clust_mean": round(algo_mean, 4),
                    "clust_greedy_mean": round(greedy_mean, 4),
                    "efficiency": round(greedy_mean / algo_mean, 4),
                    "time_ms": round(algo_time / reps * 1000, 3),
                    "time_greedy_ms": round(greedy_time / reps * 1000, 3),
                }
            )
    return rows


def _sann_error_rate(
    n: int,
    epsilon: int,
    k: int,
    reps: int,
    schedule: CoolingSchedule,
    max_iters: int,
    seed: int,
    label: str,
) -> tuple[float, float]:
    misses = 0
    elapsed = 0.0
    for rep in range(reps):
        rng = _rep_rng(seed, label, schedule.kind, n, k, rep)
        _, db = planted_group(n, epsilon, k, rng)
        system = build_reduced_system(list(db.members), epsilon)
        t0 = time.perf_counter()
        result = solve_sann(
            system, schedule=schedule, max_iters=max_iters, seed=rng.getrandbits(32)
        )
        elapsed += time.perf_counter() - t0
        if not result.found:
            misses += 1
    return 100.0 * misses / reps, elapsed / reps * 1000


def run_sann_bench(config: ExperimentConfig) -> list[dict]:
    """Annealing miss rate on planted instances (a cover always exists)."""
    schedule = CoolingSchedule(config.schedule)
    rows = []
    for n in config.n_values:
        for k in config.clients:
            error_pct, mean_ms = _sann_error_rate(
                n,
                config.epsilon,
                k,
                config.replications,
                schedule,
                config.max_iters,
                config.seed,
                "sann",
            )
            rows.append(
                {
                    "n": n,
                    "epsilon": config.epsilon,
                    "clients": k,
                    "error_pct": round(error_pct, 4),
                    "time_ms": round(mean_ms, 4),
                }
            )
    return rows


def run_cooling_bench(config: ExperimentConfig) -> list[dict]:
    """run_sann_bench repeated across all four cooling schedules."""
    rows = []
    for kind in ("additive", "linear-mult", "exponential", "logarithmic"):
        schedule = CoolingSchedule(kind)
        for n in config.n_values:
            for k in config.clients:
                error_pct, mean_ms = _sann_error_rate(
                    n,
                    config.epsilon,
                    k,
                    config.replications,
                    schedule,
                    config.max_iters,
                    config.seed,
                    "cooling",
                )
                rows.append(
                    {
                        "schedule": kind,
                        "n": n,
                        "epsilon": config.epsilon,
                        "clients": k,
                        "error_pct": round(error_pct, 4),
                        "time_ms": round(mean_ms, 4),
                    }
                )
    return rows


def rows_to_csv(rows: Sequence[dict], comments: Iterable[str] = ()) -> str:
    """Render result rows as CSV with '#' comment lines echoing the config."""
    if not rows:
        raise ValueError("no rows to render")
    lines = [f"# {c}" for c in comments]
    header = list(rows[0].keys())
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(row[h]) for h in header))
    return "\n".join(lines) + "\n"


def config_comments(config: ExperimentConfig) -> list[str]:
    return [
        f"n={','.join(str(v) for v in config.n_values)}",
        f"epsilon={config.epsilon}",
        f"clients={','.join(str(v) for v in config.clients)}",
        f"replications={config.replications}",
        f"solver={config.solver}",
        f"schedule={config.schedule}",
        f"seed={config.seed}",
        f"max_iters={config.max_iters}",
    ]
