"""Complete-link agglomerative clustering with an inner diameter bound.

Starting from singletons, the pair of clusters with the smallest
complete-link distance (largest cross-pair Hamming distance) is merged
repeatedly. Merging stops as soon as the best remaining merge would
exceed the diameter bound s, so every produced cluster satisfies
max pairwise distance <= s.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TemplateDatabase, dissimilarity_matrix

__all__ = ["Clustering", "cluster_complete_link"]

_SENTINEL = np.iinfo(np.int64).max


@dataclass(frozen=True)
class Clustering:
    """A partition of member indices into clusters of diameter <= diameter_bound."""

    clusters: tuple[tuple[int, ...], ...]
    diameter_bound: int


def merge_clusters_by_diameter(matrix: np.ndarray, s: int) -> list[list[int]]:
    """Cluster indices 0..k-1 of a dissimilarity matrix, diameter bound s.

    Ties between candidate merges are broken toward the lexicographically
    smallest (smaller label, larger label) pair, where a cluster's label
    is its smallest member index. This makes the outcome deterministic.
    """
    k = matrix.shape[0]
    if k == 1:
        return [[0]]
    dist = matrix.astype(np.int64, copy=True)
    np.fill_diagonal(dist, _SENTINEL)
    clusters: dict[int, list[int]] = {i: [i] for i in range(k)}
    while len(clusters) > 1:
        flat = int(np.argmin(dist))
        i, j = divmod(flat, k)
        if dist[i, j] > s:
            break
        if j < i:
            i, j = j, i
        clusters[i].extend(clusters.pop(j))
        # complete link: distance to the merged cluster is the max of the parts
        merged = np.maximum(dist[i], dist[j])
        dist[i, :] = merged
        dist[:, i] = merged
        dist[i, i] = _SENTINEL
        dist[j, :] = _SENTINEL
        dist[:, j] = _SENTINEL
    return [sorted(members) for _, members in sorted(clusters.items())]


def cluster_complete_link(db: TemplateDatabase, s: int) -> Clustering:
    """Partition database members into clusters of Hamming diameter <= s."""
    if s < 0:
        raise ValueError("diameter bound must be >= 0")
    groups = merge_clusters_by_diameter(dissimilarity_matrix(db), s)
    return Clustering(tuple(tuple(g) for g in groups), s)
