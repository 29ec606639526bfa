"""Binary templates, template databases, and Hamming-space primitives.

Templates are fixed-length bit vectors packed into Python integers, so
pairwise operations reduce to XOR plus popcount and dimensions of a
thousand bits and more stay cheap. Position 0 of a template is the
leftmost character of its bitstring form and the least significant bit
of the packed integer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "Template",
    "TemplateDatabase",
    "DatabaseFormatError",
    "hamming",
    "dissimilarity_matrix",
    "random_database",
    "random_template",
    "random_in_ball",
    "parse_database",
    "write_database",
]


class DatabaseFormatError(ValueError):
    """Raised when template database text cannot be parsed."""


@dataclass(frozen=True)
class Template:
    """An immutable n-bit vector, packed into an arbitrary-precision int."""

    bits: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"template dimension must be >= 1, got {self.n}")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bit pattern out of range for dimension {self.n}")

    @classmethod
    def from_string(cls, bitstring: str) -> "Template":
        """Build a template from a left-to-right bitstring such as "0110"."""
        if not bitstring or any(c not in "01" for c in bitstring):
            raise ValueError(f"not a bitstring: {bitstring!r}")
        bits = 0
        for i, c in enumerate(bitstring):
            if c == "1":
                bits |= 1 << i
        return cls(bits, len(bitstring))

    def to_string(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))

    def bit(self, position: int) -> int:
        if not 0 <= position < self.n:
            raise IndexError(f"position {position} out of range for n={self.n}")
        return (self.bits >> position) & 1

    def flip(self, positions: Iterable[int]) -> "Template":
        """Return a copy with the given bit positions inverted."""
        mask = 0
        for p in positions:
            if not 0 <= p < self.n:
                raise IndexError(f"position {p} out of range for n={self.n}")
            mask |= 1 << p
        return Template(self.bits ^ mask, self.n)

    def __xor__(self, other: "Template") -> "Template":
        if self.n != other.n:
            raise ValueError(f"dimension mismatch: {self.n} != {other.n}")
        return Template(self.bits ^ other.bits, self.n)

    def __str__(self) -> str:
        return self.to_string()

    def __repr__(self) -> str:
        return f"Template({self.to_string()!r})"


def hamming(a: Template, b: Template) -> int:
    """Number of bit positions where a and b differ."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} != {b.n}")
    return (a.bits ^ b.bits).bit_count()


@dataclass(frozen=True)
class TemplateDatabase:
    """An ordered collection of distinct templates with stable user ids.

    The collection must be a non-empty proper subset of the template
    space, members must be pairwise distinct, and ids must be unique and
    aligned one-to-one with members. Instances are immutable; updates
    return new databases.
    """

    dim: int
    members: tuple[Template, ...]
    ids: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("database must contain at least one template")
        if len(self.ids) != len(self.members):
            raise ValueError("ids and members must have equal length")
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("duplicate user ids")
        for t in self.members:
            if t.n != self.dim:
                raise ValueError(
                    f"member dimension {t.n} does not match database dimension {self.dim}"
                )
        if len({t.bits for t in self.members}) != len(self.members):
            raise ValueError("duplicate templates in database")
        if len(self.members) >= (1 << self.dim):
            raise ValueError("database may not cover the entire template space")

    @classmethod
    def from_strings(
        cls, bitstrings: Sequence[str], ids: Optional[Sequence[str]] = None
    ) -> "TemplateDatabase":
        members = tuple(Template.from_string(s) for s in bitstrings)
        if ids is None:
            ids = tuple(f"u{i + 1}" for i in range(len(members)))
        return cls(members[0].n, members, tuple(ids))

    @property
    def size(self) -> int:
        return len(self.members)

    def index_of(self, t: Template) -> int:
        for i, m in enumerate(self.members):
            if m == t:
                return i
        raise ValueError(f"template {t} is not enrolled")

    def with_member(self, user_id: str, t: Template) -> "TemplateDatabase":
        """Return a new database with one more member appended."""
        return TemplateDatabase(self.dim, self.members + (t,), self.ids + (user_id,))

    def without_index(self, index: int) -> "TemplateDatabase":
        members = self.members[:index] + self.members[index + 1 :]
        ids = self.ids[:index] + self.ids[index + 1 :]
        return TemplateDatabase(self.dim, members, ids)


def dissimilarity_matrix(db: TemplateDatabase) -> np.ndarray:
    """Symmetric matrix of pairwise Hamming distances with a zero diagonal."""
    k = db.size
    out = np.zeros((k, k), dtype=np.int64)
    bits = [t.bits for t in db.members]
    for i in range(k):
        bi = bits[i]
        for j in range(i + 1, k):
            d = (bi ^ bits[j]).bit_count()
            out[i, j] = d
            out[j, i] = d
    return out


def random_template(n: int, rng: random.Random) -> Template:
    return Template(rng.getrandbits(n), n)


def random_database(
    n: int, k: int, seed: int, id_prefix: str = "u"
) -> TemplateDatabase:
    """Draw k distinct uniform templates from the n-bit space, reproducibly."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    if k >= (1 << n):
        raise ValueError(f"cannot draw {k} distinct templates from a space of 2^{n}")
    rng = random.Random(seed)
    if n <= 20:
        # dense small spaces: sample without replacement directly
        chosen = rng.sample(range(1 << n), k)
    else:
        seen: set[int] = set()
        chosen = []
        while len(chosen) < k:
            v = rng.getrandbits(n)
            if v not in seen:
                seen.add(v)
                chosen.append(v)
    members = tuple(Template(v, n) for v in chosen)
    ids = tuple(f"{id_prefix}{i + 1}" for i in range(k))
    return TemplateDatabase(n, members, ids)


def random_in_ball(center: Template, radius: int, rng: random.Random) -> Template:
    """Draw a template uniformly from the Hamming ball around center."""
    import math

    n = center.n
    if not 0 <= radius <= n:
        raise ValueError(f"radius must lie in [0, {n}]")
    weights = [float(math.comb(n, r)) for r in range(radius + 1)]
    r = rng.choices(range(radius + 1), weights=weights)[0]
    if r == 0:
        return center
    return center.flip(rng.sample(range(n), r))


def parse_database(text: str) -> TemplateDatabase:
    """Parse the one-record-per-line "<id> <bitstring>" database format.

    Blank lines and lines starting with '#' are ignored. The dimension
    is inferred from the first record; later records must match it.
    """
    members: list[Template] = []
    ids: list[str] = []
    dim: Optional[int] = None
    seen_ids: set[str] = set()
    seen_bits: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise DatabaseFormatError(f"line {lineno}: expected '<id> <bitstring>'")
        user_id, bitstring = parts
        try:
            t = Template.from_string(bitstring)
        except ValueError as exc:
            raise DatabaseFormatError(f"line {lineno}: {exc}") from exc
        if dim is None:
            dim = t.n
        elif t.n != dim:
            raise DatabaseFormatError(
                f"line {lineno}: width {t.n} differs from first record width {dim}"
            )
        if user_id in seen_ids:
            raise DatabaseFormatError(f"line {lineno}: duplicate id {user_id!r}")
        if t.bits in seen_bits:
            raise DatabaseFormatError(f"line {lineno}: duplicate template {bitstring}")
        seen_ids.add(user_id)
        seen_bits.add(t.bits)
        ids.append(user_id)
        members.append(t)
    if dim is None:
        raise DatabaseFormatError("no records found")
    return TemplateDatabase(dim, tuple(members), tuple(ids))


def write_database(db: TemplateDatabase) -> str:
    """Serialize a database to the format accepted by parse_database."""
    lines = [f"{uid} {t.to_string()}" for uid, t in zip(db.ids, db.members)]
    return "\n".join(lines) + "\n"
