"""Tests for complete-link clustering under a diameter bound."""

import itertools
import random

import pytest

from nearcollide.clustering import cluster_complete_link
from nearcollide.core import TemplateDatabase, hamming, random_database

EXAMPLE_DB = TemplateDatabase.from_strings(["000", "011", "101", "110"])


def cluster_diameter(db, cluster):
    if len(cluster) < 2:
        return 0
    return max(
        hamming(db.members[i], db.members[j])
        for i, j in itertools.combinations(cluster, 2)
    )


class TestKnownCases:
    def test_example_db_merges_fully_at_two(self):
        c = cluster_complete_link(EXAMPLE_DB, 2)
        assert c.clusters == ((0, 1, 2, 3),)

    def test_example_db_stays_singletons_at_one(self):
        c = cluster_complete_link(EXAMPLE_DB, 1)
        assert c.clusters == ((0,), (1,), (2,), (3,))

    def test_bound_at_least_n_gives_single_cluster(self):
        db = random_database(10, 25, seed=0)
        c = cluster_complete_link(db, 10)
        assert len(c.clusters) == 1

    def test_negative_bound_rejected(self):
        with pytest.raises(ValueError):
            cluster_complete_link(EXAMPLE_DB, -1)

    def test_singleton_db(self):
        db = TemplateDatabase.from_strings(["0101"])
        assert cluster_complete_link(db, 2).clusters == ((0,),)


class TestInvariants:
    def test_partition_and_diameter_bound(self):
        rng = random.Random(1)
        for _ in range(50):
            n = rng.randint(4, 16)
            k = rng.randint(2, min(20, (1 << n) - 1))
            s = rng.randint(0, n)
            db = random_database(n, k, seed=rng.getrandbits(32))
            c = cluster_complete_link(db, s)
            seen = sorted(i for cl in c.clusters for i in cl)
            assert seen == list(range(k))
            for cl in c.clusters:
                assert cluster_diameter(db, cl) <= s

    def test_cluster_count_non_increasing_in_s(self):
        rng = random.Random(2)
        for _ in range(100):
            n = rng.randint(4, 16)
            k = rng.randint(2, 15)
            s = rng.randint(0, n - 1)
            db = random_database(n, k, seed=rng.getrandbits(32))
            a = cluster_complete_link(db, s)
            b = cluster_complete_link(db, s + 1)
            assert len(b.clusters) <= len(a.clusters)

    def test_no_further_merge_possible(self):
        # the best remaining merge would break the diameter bound
        rng = random.Random(3)
        for _ in range(30):
            n = rng.randint(4, 12)
            k = rng.randint(3, 12)
            s = rng.randint(1, n - 1)
            db = random_database(n, k, seed=rng.getrandbits(32))
            c = cluster_complete_link(db, s)
            if len(c.clusters) < 2:
                continue
            best = min(
                max(
                    hamming(db.members[i], db.members[j])
                    for i in ca
                    for j in cb
                )
                for ca, cb in itertools.combinations(c.clusters, 2)
            )
            assert best > s

    def test_deterministic(self):
        db = random_database(8, 12, seed=4)
        assert (
            cluster_complete_link(db, 4).clusters
            == cluster_complete_link(db, 4).clusters
        )
