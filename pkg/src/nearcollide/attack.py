"""Master-feature-set and masterkey-set attacks on leaked template data.

The demonstration instantiates the protecting transform as XOR with an
n-bit per-user token, the minimal salting scheme whose two inversion
functions (recover the token from feature and template, or the feature
from token and template) are exact and closed-form. With XOR the
transform is a Hamming isometry, so covering the recovered hidden
values with few centers immediately covers the leaked templates, and
partitioning shrinks the attack output from one value per record to one
value per cluster.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .core import Template, TemplateDatabase, hamming, random_template
from .partition import partition_database

__all__ = [
    "EnrolledRecord",
    "AttackResult",
    "transform",
    "invert_token",
    "invert_feature",
    "enroll_random",
    "master_feature_attack",
    "masterkey_attack",
    "parse_leak",
    "write_leak",
]

MASTER_FEATURE_SET = "master-feature-set"
MASTERKEY_SET = "masterkey-set"


def transform(feature: Template, token: Template) -> Template:
    """Protect a feature vector with a per-user token (XOR salting)."""
    return feature ^ token


def invert_token(feature: Template, template: Template) -> Template:
    """Token P with transform(feature, P) == template."""
    return feature ^ template


def invert_feature(token: Template, template: Template) -> Template:
    """Feature F with transform(F, token) == template."""
    return token ^ template


@dataclass(frozen=True)
class EnrolledRecord:
    """One user's enrollment: the stored template plus the secrets behind it.

    The feature and token exist only inside the simulation; an attacker
    sees whichever half leaks together with the template.
    """

    user_id: str
    token: Template
    feature: Template
    template: Template

    def __post_init__(self) -> None:
        if transform(self.feature, self.token) != self.template:
            raise ValueError("template does not match transform(feature, token)")


def enroll_random(n: int, k: int, seed: int) -> tuple[EnrolledRecord, ...]:
    """Simulate k enrollments with uniform features and uniform tokens."""
    rng = random.Random(seed)
    records = []
    for i in range(k):
        feature = random_template(n, rng)
        token = random_template(n, rng)
        records.append(
            EnrolledRecord(f"u{i + 1}", token, feature, transform(feature, token))
        )
    return tuple(records)


@dataclass(frozen=True)
class AttackResult:
    """Attack output: the covering set, its cost, and its verified reach.

    inversion_calls counts transform inversions performed (one per
    record); coverage is the fraction of records matched by at least one
    item under the verification threshold.
    """

    kind: str
    items: tuple[Template, ...]
    inversion_calls: int
    coverage: float


def _cover_recovered(
    recovered: Sequence[Template],
    tau: int,
    use_partition: bool,
    solver: str,
    seed: int,
) -> tuple[Template, ...]:
    if use_partition:
        unique: list[Template] = []
        seen: set[int] = set()
        for t in recovered:
            if t.bits not in seen:
                seen.add(t.bits)
                unique.append(t)
        db = TemplateDatabase(
            unique[0].n,
            tuple(unique),
            tuple(f"r{i + 1}" for i in range(len(unique))),
        )
        mts = partition_database(db, tau, solver=solver, seed=seed)
        return tuple(entry.center for entry in mts.entries)
    out: list[Template] = []
    seen = set()
    for t in recovered:
        if t.bits not in seen:
            seen.add(t.bits)
            out.append(t)
    return tuple(out)


def master_feature_attack(
    leak: Sequence[tuple[Template, Template]],
    tau: int,
    use_partition: bool = True,
    solver: str = "exact",
    seed: int = 0,
) -> AttackResult:
    """Build a master-feature set from leaked (token, template) pairs.

    Each record's hidden feature is recovered with one inversion call;
    with partitioning the result is one feature per cluster instead of
    one per record. Coverage is verified record by record: some item m
    must satisfy hamming(transform(m, token), template) <= tau.
    """
    if not leak:
        raise ValueError("leak must contain at least one record")
    recovered = [invert_feature(token, tpl) for token, tpl in leak]
    items = _cover_recovered(recovered, tau, use_partition, solver, seed)
    matched = 0
    for token, tpl in leak:
        if any(hamming(transform(m, token), tpl) <= tau for m in items):
            matched += 1
    return AttackResult(MASTER_FEATURE_SET, items, len(leak), matched / len(leak))


def masterkey_attack(
    leak: Sequence[tuple[Template, Template]],
    tau: int,
    use_partition: bool = True,
    solver: str = "exact",
    seed: int = 0,
) -> AttackResult:
    """Build a masterkey set from leaked (feature, template) pairs.

    Mirror image of the master-feature attack with token and feature
    roles swapped: tokens are recovered, covered, and each item k must
    satisfy hamming(transform(feature, k), template) <= tau for the
    records it covers.
    """
    if not leak:
        raise ValueError("leak must contain at least one record")
    recovered = [invert_token(feature, tpl) for feature, tpl in leak]
    items = _cover_recovered(recovered, tau, use_partition, solver, seed)
    matched = 0
    for feature, tpl in leak:
        if any(hamming(transform(feature, m), tpl) <= tau for m in items):
            matched += 1
    return AttackResult(MASTERKEY_SET, items, len(leak), matched / len(leak))


def parse_leak(text: str) -> list[tuple[str, Template, Template]]:
    """Parse "<id> <known-half bits> <template bits>" leak lines."""
    rows: list[tuple[str, Template, Template]] = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected '<id> <bits> <bits>'")
        uid, known, tpl = parts
        a = Template.from_string(known)
        b = Template.from_string(tpl)
        if a.n != b.n:
            raise ValueError(f"line {lineno}: widths differ")
        if width is None:
            width = a.n
        elif a.n != width:
            raise ValueError(f"line {lineno}: width {a.n} differs from {width}")
        rows.append((uid, a, b))
    if not rows:
        raise ValueError("no leak records found")
    return rows


def write_leak(rows: Sequence[tuple[str, Template, Template]]) -> str:
    lines = [f"{uid} {a.to_string()} {b.to_string()}" for uid, a, b in rows]
    return "\n".join(lines) + "\n"
