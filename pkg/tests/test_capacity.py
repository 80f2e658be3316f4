from fractions import Fraction

import numpy as np
import pytest

from sandnet import (
    CapacityConfig,
    CapacityError,
    Graph,
    capacities,
    feasible_min_capacity,
    min_capacity_bound,
    random_graph,
    validate_capacities,
)

G_TENTH = Fraction(1, 10)


class TestCapacities:
    def test_triangle_symmetry_forces_equal_shares(self, triangle):
        for P in (-2, -1, 0, 1, 2):
            assert capacities(triangle, 9, P, exact=True) == [Fraction(3)] * 3

    def test_star_p2(self, star4):
        assert capacities(star4, 24, 2, exact=True) == [Fraction(18), 2, 2, 2]

    def test_star_p_minus_1_exact_rational(self, star4):
        # independent evaluation: shares 1/3 : 1 : 1 : 1 over total 10/3
        assert capacities(star4, 10, -1, exact=True) == [Fraction(1), 3, 3, 3]

    def test_double_matches_exact(self, star4):
        k = capacities(star4, 10.0, -1)
        assert np.allclose(k, [1.0, 3.0, 3.0, 3.0], rtol=1e-14)

    def test_p0_uniform(self):
        g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)])
        k = capacities(g, 7, 0, exact=True)
        assert all(v == Fraction(7, 5) for v in k)

    def test_sum_is_K(self):
        for seed in range(20):
            g = random_graph(9, 0.5, seed, require_connected=True)
            for P in (-2, -1, 0, 1, 2):
                exact = capacities(g, 880, P, exact=True)
                assert sum(exact) == 880
                dbl = capacities(g, 880.0, P)
                assert abs(dbl.sum() - 880.0) <= 1e-12 * 880.0

    def test_monotone_in_degree(self, star4):
        k_pos = capacities(star4, 24, 2, exact=True)
        assert k_pos[0] >= max(k_pos[1:])
        k_neg = capacities(star4, 24, -2, exact=True)
        assert k_neg[0] <= min(k_neg[1:])

    def test_rejects_isolated_node(self):
        with pytest.raises(CapacityError, match="isolated"):
            capacities(Graph(3, [(0, 1)]), 10, 1)

    def test_rejects_nonpositive_K(self, triangle):
        with pytest.raises(CapacityError, match="positive"):
            capacities(triangle, 0, 1)
        with pytest.raises(CapacityError, match="positive"):
            capacities(triangle, -3, 1, exact=True)

    def test_exact_mode_rejects_float_inputs(self, triangle):
        with pytest.raises(CapacityError, match="float"):
            capacities(triangle, 9.5, 1, exact=True)
        with pytest.raises(CapacityError, match="integer exponent"):
            capacities(triangle, 9, 1.5, exact=True)

    def test_real_exponent_in_double_mode(self, star4):
        k = capacities(star4, 10.0, 0.5)
        assert k[0] > k[1] and np.isclose(k.sum(), 10.0)


class TestMinCapacityBound:
    def test_triangle_p1(self, triangle):
        assert min_capacity_bound(triangle, 1, G_TENTH) == Fraction(63, 10)  # 6.3

    def test_star_p0(self, star4):
        assert min_capacity_bound(star4, 0, G_TENTH) == Fraction(22, 5)  # 4.4

    def test_star_p_minus_1(self, star4):
        assert min_capacity_bound(star4, -1, G_TENTH) == Fraction(11, 9)  # ~1.2222

    def test_float_flavor(self, star4):
        assert min_capacity_bound(star4, -1, 0.1) == pytest.approx(11 / 9, rel=1e-12)


class TestValidate:
    def test_star_k24_p2_passes(self, star4):
        k = capacities(star4, 24, 2, exact=True)
        report = validate_capacities(star4, k, G_TENTH)
        assert report.ok and report.violations == ()

    def test_star_k10_pm1_fails_at_center(self, star4):
        k = capacities(star4, 10, -1, exact=True)
        report = validate_capacities(star4, k, G_TENTH)
        assert not report.ok
        (viol,) = report.violations
        assert viol.node == 0
        assert viol.capacity == 1 and viol.required == Fraction(31, 10)

    def test_printed_bound_is_not_sufficient_star_pm1(self, star4):
        # the advisory bound admits a K whose induced shares starve the hub
        K = min_capacity_bound(star4, -1, G_TENTH)
        k = capacities(star4, K, -1, exact=True)
        report = validate_capacities(star4, k, G_TENTH)
        assert not report.ok
        assert report.violations[0].node == 0
        assert k[0] == Fraction(11, 90)  # ~0.1222, far under 3.1

    def test_feasible_min_is_sharp(self, star4):
        for P in (-2, -1, 0, 1, 2):
            K = feasible_min_capacity(star4, P, G_TENTH)
            ok = validate_capacities(star4, capacities(star4, K, P, exact=True), G_TENTH)
            assert ok.ok
            shrunk = K * Fraction(999, 1000)
            bad = validate_capacities(star4, capacities(star4, shrunk, P, exact=True), G_TENTH)
            assert not bad.ok

    def test_length_mismatch(self, triangle):
        with pytest.raises(CapacityError):
            validate_capacities(triangle, [1, 2], G_TENTH)

    def test_describe_mentions_labels(self):
        g = Graph(2, [(0, 1)], labels=("A1", "B1"))
        report = validate_capacities(g, [0, 5], G_TENTH)
        assert "A1" in report.describe(g.labels)


class TestCapacityConfig:
    def test_bundle_round_trip(self, star4):
        cc = CapacityConfig.for_graph(star4, 24, 2, G_TENTH, exact=True)
        assert sum(cc.k) == 24
        assert cc.validate(star4).ok

    def test_classroom_configuration_always_validates(self):
        # FAN-shaped synthetic networks at the headline operating point
        from sandnet import build_fan, synthetic_roster

        for seed in (1, 2, 3):
            fan = build_fan(synthetic_roster(53, 13, 3, seed=seed))
            for P in (-2, -1, 0, 1, 2):
                k = capacities(fan, 880, P, exact=True)
                assert validate_capacities(fan, k, G_TENTH).ok, (seed, P)
