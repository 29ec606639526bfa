"""Capacity analysis for template databases in Hamming space.

Exact big-integer ball volumes feed two database-size limits: the
pigeonhole count beyond which overlapping acceptance balls are
unavoidable, and the birthday-style size at which a near-collision
appears with roughly even odds. Curve generators tabulate how that safe
size moves with the space dimension and the decision threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

__all__ = [
    "CapacityReport",
    "CurvePoint",
    "ball_volume",
    "dirichlet_bound",
    "birthday_bound",
    "log2_birthday_bound",
    "first_collision_bound",
    "expected_near_collisions",
    "epsilon_from_percent",
    "safe_parameters",
    "capacity_report",
    "curve_fixed_epsilon_percent",
    "curve_fixed_n",
    "curves_csv",
]

# conservative working point for a production database: at least 512-bit
# templates with a decision threshold of at most 51 bits (about 10%)
RECOMMENDED_MIN_N = 512
RECOMMENDED_MAX_EPSILON = 51


def _check(n: int, epsilon: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= epsilon <= n:
        raise ValueError(f"epsilon must lie in [0, {n}]")


def ball_volume(n: int, epsilon: int) -> int:
    """Exact number of templates within distance epsilon of a fixed one."""
    _check(n, epsilon)
    return sum(math.comb(n, i) for i in range(epsilon + 1))


def dirichlet_bound(n: int, epsilon: int) -> int:
    """Database size that forces two members into one acceptance ball.

    Covering the space with disjoint balls of radius epsilon leaves at
    most ceil(2^n / volume) cells, so enrolling that many templates
    pigeonholes some pair into a shared cell.
    """
    _check(n, epsilon)
    vol = ball_volume(n, epsilon)
    return -((1 << n) // -vol)


def log2_birthday_bound(n: int, epsilon: int) -> float:
    """log2 of the database size giving about a 50% near-collision chance."""
    _check(n, epsilon)
    return n / 2.0 - math.log2(ball_volume(n, epsilon)) / 2.0


def birthday_bound(n: int, epsilon: int) -> float:
    """Database size at which a near-collision appears with ~50% probability."""
    return 2.0 ** log2_birthday_bound(n, epsilon)


def first_collision_bound(n: int, epsilon: int) -> float:
    """Expected database size at which the first near-collision shows up.

    A factor sqrt(2) above birthday_bound: the expectation of the first
    collision time rather than the even-odds size.
    """
    return 2.0 ** (log2_birthday_bound(n, epsilon) + 0.5)


def expected_near_collisions(n: int, epsilon: int, k: int) -> float:
    """Expected number of near-colliding pairs among k uniform templates.

    Computed in log space as pairs * volume / 2^n so huge dimensions do
    not overflow intermediate products.
    """
    _check(n, epsilon)
    if k < 2:
        raise ValueError("k must be >= 2")
    log2_value = (
        math.log2(math.comb(k, 2)) + math.log2(ball_volume(n, epsilon)) - n
    )
    try:
        return 2.0 ** log2_value
    except OverflowError:
        return math.inf


def epsilon_from_percent(n: int, percent: float) -> int:
    """Threshold as a percentage of the dimension, rounded down."""
    if percent < 0 or percent > 100:
        raise ValueError("percent must lie in [0, 100]")
    return int(n * percent // 100)


def safe_parameters(n: int, epsilon: int) -> bool:
    """Whether (n, epsilon) meets the conservative working point."""
    return n >= RECOMMENDED_MIN_N and epsilon <= RECOMMENDED_MAX_EPSILON


@dataclass(frozen=True)
class CapacityReport:
    """Capacity summary for one (n, epsilon) configuration.

    dirichlet_k is the pigeonhole limit, birthday_k the even-odds
    near-collision size (log2 form included since the plain value
    overflows quickly), and expected_collisions the expected number of
    near-colliding pairs for the supplied client count, when given.
    """

    n: int
    epsilon: int
    ball_volume: int
    dirichlet_k: int
    birthday_k: float
    log2_birthday_k: float
    first_collision_k: float
    safe: bool
    clients: Optional[int] = None
    expected_collisions: Optional[float] = None
    exceeds_birthday_bound: Optional[bool] = None


def capacity_report(n: int, epsilon: int, clients: Optional[int] = None) -> CapacityReport:
    _check(n, epsilon)
    log2_k = log2_birthday_bound(n, epsilon)
    expected = None
    exceeds = None
    if clients is not None:
        if clients < 2:
            raise ValueError("clients must be >= 2")
        expected = expected_near_collisions(n, epsilon, clients)
        exceeds = math.log2(clients) >= log2_k
    return CapacityReport(
        n=n,
        epsilon=epsilon,
        ball_volume=ball_volume(n, epsilon),
        dirichlet_k=dirichlet_bound(n, epsilon),
        birthday_k=birthday_bound(n, epsilon),
        log2_birthday_k=log2_k,
        first_collision_k=first_collision_bound(n, epsilon),
        safe=safe_parameters(n, epsilon),
        clients=clients,
        expected_collisions=expected,
        exceeds_birthday_bound=exceeds,
    )


class CurvePoint(NamedTuple):
    n: int
    epsilon: int
    log2_k: float


def curve_fixed_epsilon_percent(
    percent: float, n_values: Sequence[int]
) -> list[CurvePoint]:
    """Safe-size curve across dimensions at a fixed threshold percentage."""
    out = []
    for n in n_values:
        eps = epsilon_from_percent(n, percent)
        out.append(CurvePoint(n, eps, log2_birthday_bound(n, eps)))
    return out


def curve_fixed_n(n: int, percents: Sequence[float]) -> list[CurvePoint]:
    """Safe-size curve across threshold percentages at a fixed dimension."""
    out = []
    for percent in percents:
        eps = epsilon_from_percent(n, percent)
        out.append(CurvePoint(n, eps, log2_birthday_bound(n, eps)))
    return out


def curves_csv(points: Sequence[CurvePoint], comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append("n,epsilon,log2_k")
    for p in points:
        lines.append(f"{p.n},{p.epsilon},{p.log2_k:.6f}")
    return "\n".join(lines) + "\n"
