"""Tests for the cover-template search: reduction, exact solver, annealing."""

import itertools
import random

import numpy as np
import pytest

from nearcollide.core import Template, hamming, random_database, random_in_ball
from nearcollide.cover import (
    CoolingSchedule,
    IndexPartition,
    build_reduced_system,
    cooling_temperature,
    decode,
    energy,
    feasible,
    index_partition,
    solve_exact,
    solve_sann,
    temperature_profile,
    _feasible_vectors,
)

from helpers import brute_force_cover_bits

COLUMN_CLASS_DB = [
    Template.from_string(s)
    for s in ("1011011", "1001011", "1011111", "1001110")
]

EXAMPLE_FULL = [Template.from_string(s) for s in ("000", "011", "101", "110")]
EXAMPLE_WITHOUT_FIRST = EXAMPLE_FULL[1:]


def random_group(rng, n_max=12, k_max=8):
    n = rng.randint(1, n_max)
    k = rng.randint(1, min(k_max, (1 << n) - 1))
    db = random_database(n, k, seed=rng.getrandbits(32))
    return list(db.members)


def holds_identical_or_opposite(group, positions):
    for u, v in itertools.combinations(group, 2):
        d = sum(u.bit(p) != v.bit(p) for p in positions)
        if d not in (0, len(positions)):
            return False
    return True


class TestIndexPartition:
    def test_four_template_seven_column_example(self):
        part = index_partition(COLUMN_CLASS_DB)
        assert part.classes == ((0, 1, 3, 5), (2,), (4,), (6,))

    def test_identical_templates_collapse_to_one_class(self):
        t = Template.from_string("0110100101")
        part = index_partition([t, t, t])
        assert part.classes == (tuple(range(10)),)

    def test_singleton_group_single_class(self):
        part = index_partition([Template.from_string("10110")])
        assert part.classes == (tuple(range(5)),)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            index_partition([Template.from_string("01"), Template.from_string("011")])

    def test_classes_partition_positions(self):
        rng = random.Random(0)
        for _ in range(100):
            group = random_group(rng)
            part = index_partition(group)
            n = group[0].n
            positions = sorted(p for cls in part.classes for p in cls)
            assert positions == list(range(n))
            assert len(part.classes) <= n

    def test_each_class_satisfies_identical_or_opposite(self):
        rng = random.Random(1)
        for _ in range(100):
            group = random_group(rng)
            part = index_partition(group)
            for cls in part.classes:
                assert holds_identical_or_opposite(group, cls)

    def test_partition_is_coarsest(self):
        # merging any two classes breaks the identical-or-opposite property
        rng = random.Random(2)
        checked = 0
        while checked < 200:
            group = random_group(rng)
            if len(group) < 2:
                continue
            part = index_partition(group)
            if len(part.classes) < 2:
                continue
            checked += 1
            for a, b in itertools.combinations(part.classes, 2):
                assert not holds_identical_or_opposite(group, a + b)

    def test_signs_match_agreement_with_reference(self):
        rng = random.Random(3)
        for _ in range(50):
            group = random_group(rng)
            part = index_partition(group)
            ref = part.reference
            for i, t in enumerate(group):
                for j, cls in enumerate(part.classes):
                    d = sum(t.bit(p) != ref.bit(p) for p in cls)
                    assert d in (0, len(cls))
                    expected = 1 if d == 0 else -1
                    assert part.signs[i, j] == expected


class TestReducedSystem:
    def test_example_bounds(self):
        sys_ = build_reduced_system(COLUMN_CLASS_DB, 2)
        assert len(sys_.partition.classes) == 4
        assert sys_.bounds == (2, 1, 1, 1)

    def test_singleton_group(self):
        sys_ = build_reduced_system([Template.from_string("10110")], 3)
        assert sys_.signs.shape == (1, 1)
        assert sys_.bounds == (3,)
        assert feasible([3], sys_)
        assert not feasible([4], sys_)

    def test_reference_row_reduces_to_budget(self):
        rng = random.Random(4)
        for _ in range(30):
            group = random_group(rng)
            eps = rng.randint(0, group[0].n)
            sys_ = build_reduced_system(group, eps)
            assert np.all(sys_.signs[0] == 1)
            assert sys_.rhs[0] == eps

    def test_feasible_set_matches_ball_intersection(self):
        rng = random.Random(5)
        for _ in range(60):
            group = random_group(rng)
            n = group[0].n
            eps = rng.randint(0, n)
            sys_ = build_reduced_system(group, eps)
            got = {t.bits for t in solve_exact(sys_, enumerate_all=True)}
            want = brute_force_cover_bits([t.bits for t in group], n, eps)
            assert got == want

    def test_every_brute_force_cover_has_feasible_counts(self):
        rng = random.Random(6)
        for _ in range(40):
            group = random_group(rng, n_max=10, k_max=6)
            n = group[0].n
            eps = rng.randint(0, n)
            sys_ = build_reduced_system(group, eps)
            ref = sys_.partition.reference
            for bits in brute_force_cover_bits([t.bits for t in group], n, eps):
                cover = Template(bits, n)
                counts = [
                    sum(cover.bit(p) != ref.bit(p) for p in cls)
                    for cls in sys_.partition.classes
                ]
                assert feasible(counts, sys_)


class TestDecode:
    def test_zero_vector_decodes_to_reference(self):
        sys_ = build_reduced_system(EXAMPLE_WITHOUT_FIRST, 2)
        zeros = [0] * len(sys_.bounds)
        assert decode(zeros, sys_) == sys_.partition.reference

    def test_unique_solution_of_reduced_example(self):
        sys_ = build_reduced_system(EXAMPLE_WITHOUT_FIRST, 1)
        vectors = list(_feasible_vectors(sys_))
        assert len(vectors) == 1
        assert decode(vectors[0], sys_) == Template.from_string("111")

    def test_infeasible_vector_rejected(self):
        sys_ = build_reduced_system(EXAMPLE_WITHOUT_FIRST, 1)
        bad = [b for b in sys_.bounds]
        if feasible(bad, sys_):
            pytest.skip("upper corner unexpectedly feasible")
        with pytest.raises(ValueError):
            decode(bad, sys_)

    def test_decoded_template_lies_in_intersection(self):
        rng = random.Random(7)
        for _ in range(40):
            group = random_group(rng)
            n = group[0].n
            eps = rng.randint(0, n)
            sys_ = build_reduced_system(group, eps)
            want = brute_force_cover_bits([t.bits for t in group], n, eps)
            for vec in _feasible_vectors(sys_):
                assert decode(vec, sys_).bits in want

    def test_soundness_at_large_n(self):
        # decoded covers stay within epsilon of every member, n too big to enumerate
        rng = random.Random(8)
        for _ in range(20):
            n = 60
            center = Template(rng.getrandbits(n), n)
            group = [random_in_ball(center, 12, rng) for _ in range(8)]
            sys_ = build_reduced_system(group, 12)
            res = solve_exact(sys_)
            assert res.found
            for t in group:
                assert hamming(res.center, t) <= 12


class TestSolveExact:
    def test_example_full_db_has_no_cover(self):
        sys_ = build_reduced_system(EXAMPLE_FULL, 1)
        res = solve_exact(sys_)
        assert res.status == "not-found"
        assert res.center is None

    def test_example_without_first_member(self):
        sys_ = build_reduced_system(EXAMPLE_WITHOUT_FIRST, 1)
        res = solve_exact(sys_)
        assert res.found
        assert res.center == Template.from_string("111")

    def test_existence_matches_brute_force(self):
        rng = random.Random(9)
        for _ in range(60):
            group = random_group(rng)
            n = group[0].n
            eps = rng.randint(0, n)
            sys_ = build_reduced_system(group, eps)
            res = solve_exact(sys_)
            want = brute_force_cover_bits([t.bits for t in group], n, eps)
            assert res.found == bool(want)
            if res.found:
                assert res.center.bits in want

    def test_pair_cover_exists_iff_distance_at_most_two_eps(self):
        rng = random.Random(10)
        for _ in range(50):
            n = rng.randint(2, 24)
            a = Template(rng.getrandbits(n), n)
            b = Template(rng.getrandbits(n), n)
            if a == b:
                continue
            eps = rng.randint(0, n)
            sys_ = build_reduced_system([a, b], eps)
            assert solve_exact(sys_).found == (hamming(a, b) <= 2 * eps)

    def test_min_radius_via_repeated_decision_calls(self):
        # the smallest threshold whose decision search succeeds equals the
        # true minimum covering radius, found here by full enumeration
        rng = random.Random(21)
        for _ in range(25):
            group = random_group(rng, n_max=10, k_max=6)
            n = group[0].n
            best = min(
                max((x ^ t.bits).bit_count() for t in group)
                for x in range(1 << n)
            )
            found_at = next(
                eps
                for eps in range(n + 1)
                if solve_exact(build_reduced_system(group, eps)).found
            )
            assert found_at == best


class TestEnergy:
    def test_zero_iff_feasible(self):
        rng = random.Random(11)
        for _ in range(40):
            group = random_group(rng, n_max=8, k_max=5)
            eps = rng.randint(0, group[0].n)
            sys_ = build_reduced_system(group, eps)
            for vec in itertools.product(*(range(b + 1) for b in sys_.bounds)):
                e = energy(vec, sys_)
                assert e <= 0
                assert (e == 0) == feasible(vec, sys_)

    def test_distance_depends_only_on_flip_counts(self):
        # flipping any positions inside a class leaves all distances unchanged
        rng = random.Random(12)
        for _ in range(30):
            group = random_group(rng, n_max=10, k_max=4)
            sys_ = build_reduced_system(group, group[0].n)
            ref = sys_.partition.reference
            for cls in sys_.partition.classes:
                if len(cls) < 2:
                    continue
                count = rng.randint(1, len(cls) - 1)
                first = ref.flip(cls[:count])
                other = ref.flip(rng.sample(cls, count))
                for t in group:
                    assert hamming(first, t) == hamming(other, t)


class TestSolveSann:
    def test_reference_cover_found_at_iteration_zero(self):
        center = Template.from_string("0" * 20)
        rng = random.Random(13)
        group = [center] + [random_in_ball(center, 4, rng) for _ in range(6)]
        sys_ = build_reduced_system(group, 4)
        res = solve_sann(sys_, seed=0)
        assert res.found
        assert res.iterations == 0
        assert res.center == center

    def test_never_claims_cover_when_none_exists(self):
        sys_ = build_reduced_system(EXAMPLE_FULL, 1)
        for seed in range(20):
            res = solve_sann(sys_, max_iters=5000, seed=seed)
            assert res.status == "unknown"

    def test_found_centers_are_valid(self):
        rng = random.Random(14)
        for _ in range(30):
            n = rng.randint(8, 30)
            center = Template(rng.getrandbits(n), n)
            eps = rng.randint(2, max(2, n // 3))
            group = [random_in_ball(center, eps, rng) for _ in range(10)]
            sys_ = build_reduced_system(group, eps)
            res = solve_sann(sys_, max_iters=50_000, seed=rng.getrandbits(32))
            if res.found:
                for t in group:
                    assert hamming(res.center, t) <= eps

    def test_exact_confirms_sann_finds(self):
        rng = random.Random(15)
        for _ in range(30):
            group = random_group(rng, n_max=10, k_max=6)
            eps = rng.randint(0, group[0].n)
            sys_ = build_reduced_system(group, eps)
            sann = solve_sann(sys_, max_iters=20_000, seed=rng.getrandbits(32))
            if sann.found:
                assert solve_exact(sys_).found

    def test_deterministic_per_seed(self):
        rng = random.Random(16)
        center = Template(rng.getrandbits(25), 25)
        group = [random_in_ball(center, 8, rng) for _ in range(12)]
        sys_ = build_reduced_system(group, 8)
        a = solve_sann(sys_, seed=42)
        b = solve_sann(sys_, seed=42)
        assert a.center == b.center
        assert a.iterations == b.iterations

    def test_invalid_budget_rejected(self):
        sys_ = build_reduced_system(EXAMPLE_FULL, 1)
        with pytest.raises(ValueError):
            solve_sann(sys_, max_iters=0)


class TestCooling:
    ALL = [CoolingSchedule(k) for k in ("additive", "linear-mult", "exponential", "logarithmic")]

    @pytest.mark.parametrize("schedule", ALL, ids=lambda s: s.kind)
    def test_step_zero_gives_t0(self, schedule):
        assert cooling_temperature(schedule, 7.0, 0, 1000) == pytest.approx(7.0)

    def test_additive_reaches_zero_at_final_step(self):
        sched = CoolingSchedule("additive")
        assert cooling_temperature(sched, 5.0, 1000, 1000) == pytest.approx(0.0)

    @pytest.mark.parametrize("schedule", ALL, ids=lambda s: s.kind)
    def test_monotone_non_increasing_and_positive(self, schedule):
        prev = None
        for step in range(0, 1000, 7):
            t = cooling_temperature(schedule, 10.0, step, 1000)
            assert t > 0
            if prev is not None:
                assert t <= prev + 1e-12
            prev = t

    def test_exponential_default_beta_hits_floor(self):
        sched = CoolingSchedule("exponential")
        t_end = cooling_temperature(sched, 1.0, 1000, 1000)
        assert t_end == pytest.approx(1e-3, rel=1e-6)

    @pytest.mark.parametrize("schedule", ALL, ids=lambda s: s.kind)
    def test_profile_matches_scalar(self, schedule):
        profile = temperature_profile(schedule, 3.0, 500)
        for step in (0, 1, 17, 250, 499):
            assert profile[step] == pytest.approx(
                cooling_temperature(schedule, 3.0, step, 500)
            )

    def test_invalid_constants_rejected(self):
        with pytest.raises(ValueError):
            CoolingSchedule("additive", alpha=0.0)
        with pytest.raises(ValueError):
            CoolingSchedule("exponential", beta=1.5)
        with pytest.raises(ValueError):
            CoolingSchedule("nope")
        with pytest.raises(ValueError):
            cooling_temperature(CoolingSchedule(), 0.0, 0, 10)
        with pytest.raises(ValueError):
            cooling_temperature(CoolingSchedule(), 1.0, 11, 10)
