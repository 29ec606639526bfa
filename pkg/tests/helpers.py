"""Independent oracles shared by the test modules.

Everything here works by exhaustive enumeration or direct simulation on
raw integers, deliberately avoiding the library's reduced-system code
paths so the two sides of every comparison stay independent.
"""

from __future__ import annotations

import numpy as np

# acceptance verdict lines, echoed by the terminal-summary hook in conftest
ACCEPTANCE_LINES: list[str] = []

if hasattr(np, "bitwise_count"):
    def popcount_array(arr: np.ndarray) -> np.ndarray:
        return np.bitwise_count(arr)
else:  # numpy < 2.0
    _LUT = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)

    def popcount_array(arr: np.ndarray) -> np.ndarray:
        a = arr.astype(np.uint64)
        out = np.zeros(a.shape, dtype=np.int64)
        for shift in (0, 16, 32, 48):
            out += _LUT[(a >> np.uint64(shift)) & np.uint64(0xFFFF)]
        return out


def brute_force_cover_bits(member_bits: list[int], n: int, epsilon: int) -> set[int]:
    """All templates within epsilon of every member, by scanning 2^n."""
    space = np.arange(1 << n, dtype=np.uint32)
    mask = np.ones(1 << n, dtype=bool)
    for m in member_bits:
        mask &= popcount_array(space ^ np.uint32(m)) <= epsilon
    return set(int(x) for x in space[mask])


def brute_force_ball_intersection(n: int, epsilon: int, d: int) -> int:
    """|B(a, eps) & B(b, eps)| for centers at distance d, by scanning 2^n."""
    a = 0
    b = (1 << d) - 1  # flip the first d bits
    space = np.arange(1 << n, dtype=np.uint32)
    da = popcount_array(space ^ np.uint32(a))
    db = popcount_array(space ^ np.uint32(b))
    return int(np.count_nonzero((da <= epsilon) & (db <= epsilon)))


def count_near_collision_pairs(bits: np.ndarray, epsilon: int) -> int:
    """Number of pairs within epsilon among the given packed templates."""
    x = bits[:, None] ^ bits[None, :]
    d = popcount_array(x)
    iu = np.triu_indices(len(bits), k=1)
    return int(np.count_nonzero(d[iu] <= epsilon))
