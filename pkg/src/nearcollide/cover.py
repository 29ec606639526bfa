"""Cover-template search for a group of templates.

A cover template of a group lies within Hamming distance epsilon of
every group member. The search space is first reduced by grouping bit
positions into column classes: two positions belong to the same class
when their columns, read across the group, are identical or exactly
complementary. Distances from any candidate to every member then depend
only on how many bits the candidate flips inside each class, never on
which bits, so the search runs over small per-class flip-count vectors
instead of the full n-bit space.

For a flip-count vector N and reference member v, candidate-to-member
distances are d(v_i) + sum_j sign[i][j] * N[j], where sign[i][j] is +1
when member i agrees with v on class j and -1 when it is opposite. N is
feasible exactly when every such distance is <= epsilon. Two solvers are
provided: an exhaustive depth-first search with per-prefix pruning, and
a simulated-annealing search whose energy is zero exactly on feasible
vectors.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

import numpy as np
from numba import njit

from .core import Template, hamming

__all__ = [
    "IndexPartition",
    "ReducedSystem",
    "CoverResult",
    "CoolingSchedule",
    "SCHEDULE_KINDS",
    "index_partition",
    "build_reduced_system",
    "decode",
    "feasible",
    "energy",
    "solve_exact",
    "solve_sann",
    "cooling_temperature",
    "temperature_profile",
]

FOUND = "found"
NOT_FOUND = "not-found"
UNKNOWN = "unknown"

SCHEDULE_KINDS = ("additive", "linear-mult", "exponential", "logarithmic")

# Probability of proposing the direction that raises the energy.
UPHILL_PROPOSAL_P = 0.75

DEFAULT_MAX_ITERS = 200_000


@dataclass(frozen=True, eq=False)
class IndexPartition:
    """Coarsest grouping of bit positions into identical-or-opposite columns.

    classes are disjoint, cover positions 0..n-1, and are ordered by
    smallest position. signs has one row per group member and one column
    per class: +1 where the member agrees with the reference on that
    class, -1 where it is opposite.
    """

    classes: tuple[tuple[int, ...], ...]
    reference: Template
    signs: np.ndarray

    @property
    def n(self) -> int:
        return self.reference.n


@dataclass(frozen=True, eq=False)
class ReducedSystem:
    """Per-class flip-count constraint system for one group and threshold.

    A vector N with 0 <= N[j] <= bounds[j] is feasible iff
    signs @ N <= epsilon - dist_to_ref, row by row.
    """

    partition: IndexPartition
    epsilon: int
    dist_to_ref: np.ndarray
    bounds: tuple[int, ...]

    @property
    def signs(self) -> np.ndarray:
        return self.partition.signs

    @property
    def rhs(self) -> np.ndarray:
        return self.epsilon - self.dist_to_ref

    @property
    def search_space_size(self) -> int:
        size = 1
        for b in self.bounds:
            size *= b + 1
        return size


@dataclass(frozen=True)
class CoverResult:
    """Outcome of a cover search.

    status is "found" with a center template, "not-found" when the
    search space was exhausted, or "unknown" when an incomplete solver
    ran out of budget without a witness either way.
    """

    status: str
    center: Optional[Template]
    solver: str
    iterations: int
    wall_time: float

    @property
    def found(self) -> bool:
        return self.status == FOUND


def index_partition(
    group: Sequence[Template], reference_index: int = 0
) -> IndexPartition:
    """Group bit positions whose columns across the group match or mirror.

    The result is the coarsest partition such that, inside any class,
    every pair of group members is either identical or fully opposite.
    It is never empty: single positions always qualify.
    """
    if not group:
        raise ValueError("group must contain at least one template")
    n = group[0].n
    for t in group:
        if t.n != n:
            raise ValueError(f"dimension mismatch inside group: {t.n} != {n}")
    if not 0 <= reference_index < len(group):
        raise ValueError("reference index out of range")
    k = len(group)
    full = (1 << k) - 1
    # canonical column pattern: bits of the column across members, normalized
    # so the first member's bit reads 0; identical and complementary columns
    # then share one key
    by_pattern: dict[int, list[int]] = {}
    for p in range(n):
        pat = 0
        for i, t in enumerate(group):
            if (t.bits >> p) & 1:
                pat |= 1 << i
        if pat & 1:
            pat ^= full
        by_pattern.setdefault(pat, []).append(p)
    classes = tuple(tuple(v) for v in by_pattern.values())
    reference = group[reference_index]
    signs = np.empty((k, len(classes)), dtype=np.int64)
    for j, cls in enumerate(classes):
        p0 = cls[0]
        ref_bit = reference.bit(p0)
        for i, t in enumerate(group):
            signs[i, j] = 1 if t.bit(p0) == ref_bit else -1
    signs.setflags(write=False)
    return IndexPartition(classes, reference, signs)


def build_reduced_system(
    group: Sequence[Template], epsilon: int, reference_index: int = 0
) -> ReducedSystem:
    """Build the flip-count constraint system for a group and threshold."""
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    part = index_partition(group, reference_index)
    dist = np.array([hamming(t, part.reference) for t in group], dtype=np.int64)
    dist.setflags(write=False)
    bounds = tuple(min(epsilon, len(cls)) for cls in part.classes)
    return ReducedSystem(part, epsilon, dist, bounds)


def feasible(N: Sequence[int], sys: ReducedSystem) -> bool:
    vec = np.asarray(N, dtype=np.int64)
    if vec.shape != (len(sys.bounds),):
        raise ValueError("flip-count vector has wrong length")
    if np.any(vec < 0) or np.any(vec > np.array(sys.bounds)):
        return False
    return bool(np.all(sys.signs @ vec <= sys.rhs))


def energy(N: Sequence[int], sys: ReducedSystem) -> int:
    """Sum of negative constraint slacks; always <= 0, and 0 iff N is feasible."""
    vec = np.asarray(N, dtype=np.int64)
    slack = sys.rhs - sys.signs @ vec
    return int(np.minimum(slack, 0).sum())


def decode(N: Sequence[int], sys: ReducedSystem) -> Template:
    """Turn a feasible flip-count vector into a concrete cover template.

    The lowest-indexed N[j] positions of each class are flipped on the
    reference. Any other choice of positions inside a class would give
    the same distance to every member, so one deterministic
    representative suffices.
    """
    if not feasible(N, sys):
        raise ValueError("flip-count vector is not feasible for this system")
    positions: list[int] = []
    for count, cls in zip(N, sys.partition.classes):
        positions.extend(cls[: int(count)])
    return sys.partition.reference.flip(positions)


def _feasible_vectors(
    sys: ReducedSystem, stats: Optional[dict] = None
) -> Iterator[np.ndarray]:
    """Depth-first search over flip-count vectors with per-prefix pruning.

    Columns are explored in order of decreasing bound so high-impact
    choices are fixed early; each prefix is cut as soon as some
    constraint row cannot be satisfied even by the most favorable
    completion of the remaining columns. The visited node count is
    written into stats["nodes"] as the search progresses.
    """
    m = len(sys.bounds)
    k = sys.signs.shape[0]
    order = sorted(range(m), key=lambda j: -sys.bounds[j])
    signs = np.ascontiguousarray(sys.signs[:, order])
    bounds = [sys.bounds[j] for j in order]
    rhs = sys.rhs
    if stats is None:
        stats = {}
    stats["nodes"] = 0
    # best_rest[j][i]: most negative contribution columns j.. can still add to row i
    best_rest = np.zeros((m + 1, k), dtype=np.int64)
    for j in range(m - 1, -1, -1):
        best_rest[j] = best_rest[j + 1] + np.minimum(signs[:, j], 0) * bounds[j]

    vec = np.zeros(m, dtype=np.int64)

    def rec(j: int, partial: np.ndarray) -> Iterator[np.ndarray]:
        stats["nodes"] += 1
        if np.any(partial + best_rest[j] > rhs):
            return
        if j == m:
            out = np.zeros(m, dtype=np.int64)
            out[order] = vec
            yield out
            return
        col = signs[:, j]
        for v in range(bounds[j] + 1):
            vec[j] = v
            yield from rec(j + 1, partial + v * col)
        vec[j] = 0

    yield from rec(0, np.zeros(k, dtype=np.int64))


def _expand_vector(N: np.ndarray, sys: ReducedSystem) -> Iterator[Template]:
    """All cover templates realizing one flip-count vector.

    Every way of choosing N[j] positions inside class j yields a valid
    cover, so the full cover set is the union of these expansions.
    """
    ref = sys.partition.reference
    per_class = [
        itertools.combinations(cls, int(count))
        for count, cls in zip(N, sys.partition.classes)
    ]
    for choice in itertools.product(*per_class):
        yield ref.flip(p for subset in choice for p in subset)


def solve_exact(
    sys: ReducedSystem, enumerate_all: bool = False
) -> Union[CoverResult, list[Template]]:
    """Exhaustive cover search.

    With enumerate_all=False, returns a CoverResult holding the first
    cover found or a definitive not-found. With enumerate_all=True,
    returns every cover template of the group (the full cover set,
    expanded over all equivalent position choices inside each class).
    """
    start = time.perf_counter()
    if enumerate_all:
        out: list[Template] = []
        for vec in _feasible_vectors(sys):
            out.extend(_expand_vector(vec, sys))
        return out
    stats: dict = {}
    for vec in _feasible_vectors(sys, stats):
        return CoverResult(
            FOUND, decode(vec, sys), "exact", stats["nodes"], time.perf_counter() - start
        )
    return CoverResult(
        NOT_FOUND, None, "exact", stats["nodes"], time.perf_counter() - start
    )


@dataclass(frozen=True)
class CoolingSchedule:
    """Temperature decay rule for the annealing solver.

    kind selects the decay family. alpha scales the two hyperbolic
    families. beta is the exponential decay factor; when None it is
    chosen so the final temperature is one thousandth of the start.
    """

    kind: str = "additive"
    alpha: float = 1.0
    beta: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind not in SCHEDULE_KINDS:
            raise ValueError(f"unknown schedule {self.kind!r}; use one of {SCHEDULE_KINDS}")
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        if self.beta is not None and not 0 < self.beta < 1:
            raise ValueError("beta must lie in (0, 1)")

    def resolved_beta(self, max_steps: int) -> float:
        if self.beta is not None:
            return self.beta
        return 1e-3 ** (1.0 / max(max_steps, 1))


def cooling_temperature(
    schedule: CoolingSchedule, t0: float, step: int, max_steps: int
) -> float:
    """Temperature after `step` of `max_steps` annealing iterations."""
    if t0 <= 0:
        raise ValueError("t0 must be > 0")
    if not 0 <= step <= max_steps:
        raise ValueError("step must lie in [0, max_steps]")
    if schedule.kind == "additive":
        return t0 * (1.0 - step / max_steps)
    if schedule.kind == "linear-mult":
        return t0 / (1.0 + schedule.alpha * step)
    if schedule.kind == "exponential":
        return t0 * schedule.resolved_beta(max_steps) ** step
    return t0 / (1.0 + schedule.alpha * math.log1p(step))


def temperature_profile(
    schedule: CoolingSchedule, t0: float, max_steps: int
) -> np.ndarray:
    """Vectorized cooling_temperature over steps 0..max_steps-1."""
    if t0 <= 0:
        raise ValueError("t0 must be > 0")
    steps = np.arange(max_steps, dtype=np.float64)
    if schedule.kind == "additive":
        return t0 * (1.0 - steps / max_steps)
    if schedule.kind == "linear-mult":
        return t0 / (1.0 + schedule.alpha * steps)
    if schedule.kind == "exponential":
        return t0 * schedule.resolved_beta(max_steps) ** steps
    return t0 / (1.0 + schedule.alpha * np.log1p(steps))


@njit(cache=True)
def _anneal_kernel(signs, rhs, bounds, temps, max_iters, seed, uphill_p):  # pragma: no cover
    np.random.seed(seed)
    k, m = signs.shape
    N = np.zeros(m, dtype=np.int64)
    slack = rhs.copy()
    E = 0
    for i in range(k):
        if slack[i] < 0:
            E += slack[i]
    if E == 0:
        return 1, 0, N
    movable = False
    for j in range(m):
        if bounds[j] > 0:
            movable = True
            break
    if not movable:
        return 0, 0, N
    for it in range(max_iters):
        j = np.random.randint(0, m)
        if bounds[j] == 0:
            continue
        e_up = 0
        e_dn = 0
        for i in range(k):
            a = slack[i] - signs[i, j]
            if a < 0:
                e_up += a
            b = slack[i] + signs[i, j]
            if b < 0:
                e_dn += b
        can_up = N[j] < bounds[j]
        can_dn = N[j] > 0
        if can_up and can_dn:
            if np.random.random() < uphill_p:
                if e_up >= e_dn:
                    delta, e_new = 1, e_up
                else:
                    delta, e_new = -1, e_dn
            else:
                if e_up >= e_dn:
                    delta, e_new = -1, e_dn
                else:
                    delta, e_new = 1, e_up
        elif can_up:
            delta, e_new = 1, e_up
        else:
            delta, e_new = -1, e_dn
        diff = e_new - E
        if diff >= 0:
            accept = True
        else:
            t = temps[it]
            accept = t > 0.0 and np.random.random() < np.exp(diff / t)
        if accept:
            N[j] += delta
            for i in range(k):
                slack[i] -= delta * signs[i, j]
            E = e_new
            if E == 0:
                return 1, it + 1, N
    return 0, max_iters, N


def solve_sann(
    sys: ReducedSystem,
    schedule: Optional[CoolingSchedule] = None,
    max_iters: int = DEFAULT_MAX_ITERS,
    seed: int = 0,
) -> CoverResult:
    """Simulated-annealing cover search.

    The walk runs over flip-count vectors, starting from the reference
    (all zeros). Moves change one coordinate by +-1; the direction that
    raises the energy is proposed with probability 0.75 and moves are
    accepted by the Metropolis rule under the cooling schedule. The
    starting temperature equals the group size, the largest possible
    single-move energy change, so every initial move is acceptable.
    Returns found as soon as the energy reaches zero, otherwise unknown:
    a miss does not prove that no cover exists.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if schedule is None:
        schedule = CoolingSchedule()
    start = time.perf_counter()
    t0 = float(sys.signs.shape[0])
    temps = temperature_profile(schedule, t0, max_iters)
    ok, iters, N = _anneal_kernel(
        np.ascontiguousarray(sys.signs),
        np.ascontiguousarray(sys.rhs),
        np.asarray(sys.bounds, dtype=np.int64),
        temps,
        max_iters,
        seed & 0xFFFFFFFF,
        UPHILL_PROPOSAL_P,
    )
    elapsed = time.perf_counter() - start
    if ok:
        return CoverResult(FOUND, decode(N, sys), "sann", int(iters), elapsed)
    return CoverResult(UNKNOWN, None, "sann", int(iters), elapsed)
