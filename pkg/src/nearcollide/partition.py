"""Partition a template database into a master-template set.

A master-template set covers every database member: each member lies
within epsilon of at least one set entry. The main algorithm interleaves
complete-link clustering with cover-template searches, starting from a
generous cluster diameter of twice epsilon and tightening it by one per
pass until everything is covered; a uniformly random greedy baseline and
incremental add/remove operations are provided alongside.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import ball_volume, birthday_bound
from .clustering import merge_clusters_by_diameter
from .core import Template, TemplateDatabase, dissimilarity_matrix, hamming
from .cover import DEFAULT_MAX_ITERS, build_reduced_system, solve_exact, solve_sann

__all__ = [
    "MtsEntry",
    "MasterTemplateSet",
    "AffectedUser",
    "RemovalReport",
    "partition_database",
    "partition_greedy",
    "add_user",
    "remove_user",
    "ball_intersection",
    "write_mts",
    "parse_mts",
]


@dataclass(frozen=True)
class MtsEntry:
    """One master template and the database member indices it covers."""

    center: Template
    covered: tuple[int, ...]


@dataclass(frozen=True)
class MasterTemplateSet:
    """A covering of a database: entries whose covered sets partition its indices."""

    epsilon: int
    entries: tuple[MtsEntry, ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def covered_indices(self) -> set[int]:
        out: set[int] = set()
        for e in self.entries:
            out.update(e.covered)
        return out


def partition_database(
    db: TemplateDatabase,
    epsilon: int,
    solver: str = "exact",
    seed: int = 0,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> MasterTemplateSet:
    """Cover the database with few master templates via cluster-then-search.

    Each pass clusters the still-uncovered members under the current
    diameter bound s (starting at 2 * epsilon), searches a cover
    template for every cluster, and retires the clusters whose search
    succeeded. s then shrinks by one, floored at zero, where clusters
    degenerate to singletons covered by themselves, so the loop always
    terminates. With the annealing solver a budget-exhausted search
    counts as a miss for that pass; the affected members simply stay in
    play for tighter passes.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if solver not in ("exact", "sann"):
        raise ValueError(f"unknown solver {solver!r}; use 'exact' or 'sann'")
    rng = random.Random(seed)
    matrix = dissimilarity_matrix(db)
    remaining = list(range(db.size))
    entries: list[MtsEntry] = []
    s = 2 * epsilon
    while remaining:
        sub = matrix[np.ix_(remaining, remaining)]
        clusters = merge_clusters_by_diameter(sub, s)
        retired: set[int] = set()
        for local in clusters:
            member_idx = [remaining[x] for x in local]
            group = [db.members[i] for i in member_idx]
            system = build_reduced_system(group, epsilon)
            if solver == "exact":
                result = solve_exact(system)
            else:
                result = solve_sann(
                    system, max_iters=max_iters, seed=rng.getrandbits(32)
                )
            if result.found:
                entries.append(MtsEntry(result.center, tuple(member_idx)))
                retired.update(member_idx)
        remaining = [i for i in remaining if i not in retired]
        s = max(s - 1, 0)
    return MasterTemplateSet(epsilon, tuple(entries))


def partition_greedy(
    db: TemplateDatabase, epsilon: int, seed: int = 0
) -> MasterTemplateSet:
    """Cover the database by repeatedly picking a random member as a center.

    The picked template and every remaining template within epsilon of
    it are retired together; picked templates become the entry centers.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    rng = random.Random(seed)
    remaining = list(range(db.size))
    entries: list[MtsEntry] = []
    while remaining:
        center_idx = remaining[rng.randrange(len(remaining))]
        center = db.members[center_idx]
        covered = [i for i in remaining if hamming(db.members[i], center) <= epsilon]
        entries.append(MtsEntry(center, tuple(covered)))
        covered_set = set(covered)
        remaining = [i for i in remaining if i not in covered_set]
    return MasterTemplateSet(epsilon, tuple(entries))


def add_user(
    mts: MasterTemplateSet,
    db: TemplateDatabase,
    t: Template,
    epsilon: int,
    user_id: Optional[str] = None,
) -> tuple[MasterTemplateSet, TemplateDatabase]:
    """Enroll a new template incrementally.

    If some existing center lies within epsilon, the template is
    attached to the nearest one (ties to the lowest entry index);
    otherwise it becomes a new singleton entry. Returns the updated
    (master template set, database) pair.
    """
    if t.n != db.dim:
        raise ValueError(f"dimension mismatch: {t.n} != {db.dim}")
    if any(m == t for m in db.members):
        raise ValueError("template is already enrolled")
    if user_id is None:
        i = db.size + 1
        while f"u{i}" in db.ids:
            i += 1
        user_id = f"u{i}"
    new_index = db.size
    new_db = db.with_member(user_id, t)
    best: Optional[int] = None
    best_dist = epsilon + 1
    for pos, entry in enumerate(mts.entries):
        d = hamming(entry.center, t)
        if d < best_dist:
            best = pos
            best_dist = d
    if best is None:
        new_entries = mts.entries + (MtsEntry(t, (new_index,)),)
    else:
        updated = MtsEntry(
            mts.entries[best].center, mts.entries[best].covered + (new_index,)
        )
        new_entries = mts.entries[:best] + (updated,) + mts.entries[best + 1 :]
    return MasterTemplateSet(mts.epsilon, new_entries), new_db


@dataclass(frozen=True)
class AffectedUser:
    """A neighbor whose acceptance ball overlaps the revoked one."""

    user_id: str
    distance: int
    shared_volume: int


@dataclass(frozen=True)
class RemovalReport:
    """Outcome of revoking one enrolled template.

    Neighbors within twice epsilon are listed with the exact number of
    templates their acceptance ball shares with the revoked ball (a
    proxy for the false-rejection impact of blacklisting that ball).
    Each removal permanently retires one full ball volume from the
    usable space; once removed plus enrolled counts reach the birthday
    bound, the report flags the capacity breach.
    """

    database: Optional[TemplateDatabase]
    removed_id: str
    affected: tuple[AffectedUser, ...]
    ball_volume: int
    removed_count: int
    enrolled_count: int
    capacity_breached: bool


def remove_user(
    db: TemplateDatabase, t: Template, epsilon: int, removed_before: int = 0
) -> RemovalReport:
    """Revoke an enrolled template and report the blast radius."""
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    index = db.index_of(t)
    removed_id = db.ids[index]
    affected = []
    for i, m in enumerate(db.members):
        if i == index:
            continue
        d = hamming(m, t)
        if d <= 2 * epsilon:
            affected.append(
                AffectedUser(db.ids[i], d, ball_intersection(d, db.dim, epsilon))
            )
    new_db = db.without_index(index) if db.size > 1 else None
    removed_count = removed_before + 1
    enrolled_count = db.size - 1
    breached = removed_count + enrolled_count >= birthday_bound(db.dim, epsilon)
    return RemovalReport(
        new_db,
        removed_id,
        tuple(affected),
        ball_volume(db.dim, epsilon),
        removed_count,
        enrolled_count,
        breached,
    )


def ball_intersection(d: int, n: int, epsilon: int) -> int:
    """Exact size of the overlap of two radius-epsilon balls at distance d.

    Splitting positions into the d where the centers differ and the
    n - d where they agree, a template flipping i of the former and j of
    the latter relative to the first center sits at distance i + j from
    it and (d - i) + j from the other; both must stay within epsilon.
    """
    if not 0 <= d <= n:
        raise ValueError(f"d must lie in [0, {n}]")
    if not 0 <= epsilon <= n:
        raise ValueError(f"epsilon must lie in [0, {n}]")
    total = 0
    for i in range(d + 1):
        j_max = min(epsilon - i, epsilon - (d - i), n - d)
        if j_max < 0:
            continue
        c_di = math.comb(d, i)
        total += c_di * sum(math.comb(n - d, j) for j in range(j_max + 1))
    return total


def write_mts(mts: MasterTemplateSet, db: TemplateDatabase) -> str:
    """Serialize entries as "<center bitstring> <comma-separated covered ids>"."""
    lines = []
    for entry in mts.entries:
        ids = ",".join(db.ids[i] for i in entry.covered)
        lines.append(f"{entry.center.to_string()} {ids}")
    return "\n".join(lines) + "\n"


def parse_mts(text: str, db: TemplateDatabase, epsilon: int) -> MasterTemplateSet:
    """Parse write_mts output against its database and validate coverage."""
    id_to_index = {uid: i for i, uid in enumerate(db.ids)}
    entries: list[MtsEntry] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected '<bitstring> <id,id,...>'")
        center = Template.from_string(parts[0])
        indices = []
        for uid in parts[1].split(","):
            if uid not in id_to_index:
                raise ValueError(f"line {lineno}: unknown user id {uid!r}")
            indices.append(id_to_index[uid])
        entries.append(MtsEntry(center, tuple(indices)))
    mts = MasterTemplateSet(epsilon, tuple(entries))
    validate_mts(mts, db)
    return mts


def validate_mts(mts: MasterTemplateSet, db: TemplateDatabase) -> None:
    """Check the covering invariants; raises ValueError on violation."""
    seen: set[int] = set()
    for entry in mts.entries:
        for i in entry.covered:
            if i in seen:
                raise ValueError(f"member index {i} covered twice")
            seen.add(i)
            if hamming(entry.center, db.members[i]) > mts.epsilon:
                raise ValueError(
                    f"member {db.ids[i]} lies farther than epsilon from its center"
                )
    if seen != set(range(db.size)):
        raise ValueError("covered sets do not partition the database")
