"""Tests for ball volumes, capacity bounds, and curve generation."""

import math
import random

import numpy as np
import pytest

from nearcollide.bounds import (
    ball_volume,
    birthday_bound,
    capacity_report,
    curve_fixed_epsilon_percent,
    curve_fixed_n,
    curves_csv,
    dirichlet_bound,
    epsilon_from_percent,
    expected_near_collisions,
    first_collision_bound,
    log2_birthday_bound,
    safe_parameters,
)

from helpers import count_near_collision_pairs


def log2_ball_volume_via_lgamma(n: int, eps: int) -> float:
    # independent high-precision route: logsumexp over log-gamma binomials
    logs = [
        math.lgamma(n + 1) - math.lgamma(i + 1) - math.lgamma(n - i + 1)
        for i in range(eps + 1)
    ]
    top = max(logs)
    sigma = sum(math.exp(v - top) for v in logs)
    return (top + math.log(sigma)) / math.log(2.0)


class TestBallVolume:
    def test_small_known_value(self):
        assert ball_volume(3, 1) == 4

    def test_full_radius_covers_space(self):
        for n in (1, 5, 16, 64):
            assert ball_volume(n, n) == 1 << n

    def test_monotone_in_epsilon(self):
        for eps in range(16):
            assert ball_volume(16, eps) < ball_volume(16, eps + 1)

    def test_large_instance_matches_lgamma_estimate(self):
        exact = ball_volume(512, 51)
        assert exact > 0
        approx = log2_ball_volume_via_lgamma(512, 51)
        assert math.log2(exact) == pytest.approx(approx, abs=1e-6)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            ball_volume(4, 5)
        with pytest.raises(ValueError):
            ball_volume(4, -1)


class TestDirichletBound:
    def test_small_known_value(self):
        assert dirichlet_bound(3, 1) == 2

    def test_full_radius(self):
        assert dirichlet_bound(12, 12) == 1

    def test_two_clients_already_exceed_it_at_15_10(self):
        assert dirichlet_bound(15, 10) == 2

    def test_exact_integer_arithmetic(self):
        # ceil division on big integers, no floats involved
        n, eps = 256, 20
        vol = ball_volume(n, eps)
        k = dirichlet_bound(n, eps)
        assert (k - 1) * vol < (1 << n) <= k * vol


class TestBirthdayBound:
    def test_zero_threshold_is_classic_birthday(self):
        for n in (8, 16, 64, 512):
            assert log2_birthday_bound(n, 0) == pytest.approx(n / 2)

    def test_recommended_configuration_is_finite(self):
        v = log2_birthday_bound(512, 51)
        assert 0 < v < 256
        assert birthday_bound(512, 51) == pytest.approx(2.0 ** v)

    def test_first_collision_is_sqrt2_larger(self):
        assert first_collision_bound(20, 3) == pytest.approx(
            birthday_bound(20, 3) * math.sqrt(2)
        )

    def test_dirichlet_dominates_birthday_below_half_n(self):
        for n in (10, 16, 24, 40, 64):
            for eps in range(0, n // 2):
                assert dirichlet_bound(n, eps) >= math.ceil(birthday_bound(n, eps))


class TestExpectedNearCollisions:
    def test_single_pair_full_radius(self):
        assert expected_near_collisions(16, 16, 2) == pytest.approx(1.0)

    def test_matches_monte_carlo(self):
        n, eps, k = 16, 3, 64
        expected = expected_near_collisions(n, eps, k)
        rng = np.random.default_rng(0)
        total = 0
        trials = 10_000
        for _ in range(trials):
            bits = rng.integers(0, 1 << n, size=k, dtype=np.uint32)
            total += count_near_collision_pairs(bits, eps)
        empirical = total / trials
        assert abs(empirical - expected) / expected < 0.05

    def test_expected_half_collision_at_birthday_bound(self):
        for n, eps in ((16, 2), (20, 3), (24, 4)):
            k = round(birthday_bound(n, eps))
            value = expected_near_collisions(n, eps, k)
            assert 0.35 < value < 0.65

    def test_requires_at_least_two(self):
        with pytest.raises(ValueError):
            expected_near_collisions(16, 3, 1)


class TestSafeParameters:
    def test_recommended_point_is_safe(self):
        assert safe_parameters(512, 51)

    def test_smaller_dimension_unsafe(self):
        assert not safe_parameters(511, 51)

    def test_larger_threshold_unsafe(self):
        assert not safe_parameters(512, 52)


class TestCapacityReport:
    def test_fields_consistent(self):
        rep = capacity_report(24, 4, clients=40)
        assert rep.ball_volume == ball_volume(24, 4)
        assert rep.dirichlet_k == dirichlet_bound(24, 4)
        assert rep.log2_birthday_k == pytest.approx(log2_birthday_bound(24, 4))
        assert rep.expected_collisions == pytest.approx(
            expected_near_collisions(24, 4, 40)
        )
        assert rep.exceeds_birthday_bound == (40 >= birthday_bound(24, 4))

    def test_without_clients(self):
        rep = capacity_report(16, 2)
        assert rep.clients is None
        assert rep.expected_collisions is None


class TestEpsilonFromPercent:
    def test_rounds_down(self):
        assert epsilon_from_percent(15, 10) == 1
        assert epsilon_from_percent(512, 10) == 51
        assert epsilon_from_percent(128, 0) == 0

    def test_range_validated(self):
        with pytest.raises(ValueError):
            epsilon_from_percent(10, -1)
        with pytest.raises(ValueError):
            epsilon_from_percent(10, 101)


class TestCurves:
    def test_fixed_n_strictly_decreasing_in_percent(self):
        points = curve_fixed_n(128, [0, 5, 10, 20, 30, 40, 50])
        values = [p.log2_k for p in points]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_fixed_percent_increasing_in_n(self):
        points = curve_fixed_epsilon_percent(10, [64, 128, 256, 512])
        values = [p.log2_k for p in points]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_zero_percent_column_is_half_n(self):
        for p in curve_fixed_epsilon_percent(0, [16, 64, 256]):
            assert p.log2_k == pytest.approx(p.n / 2)

    def test_curve_point_matches_direct_recomputation(self):
        (point,) = curve_fixed_epsilon_percent(10, [128])
        assert point.epsilon == 12
        assert point.log2_k == pytest.approx(log2_birthday_bound(128, 12))

    def test_csv_shape(self):
        text = curves_csv(curve_fixed_n(64, [0, 10, 20]), comments=["panel=b n=64"])
        lines = text.strip().splitlines()
        assert lines[0] == "# panel=b n=64"
        assert lines[1] == "n,epsilon,log2_k"
        assert len(lines) == 5
