"""Slant-pair placement formula tests.

The 69 mm / 45 deg case is the hand-checkable reference: H = 69*cos45 =
48.79 mm, S = 138*sin45 = 97.58 mm, and the printed-convention PLF at
the matched angle pair evaluates to cos(22.5 deg) = 0.9239.
"""

import math

import pytest
from hypothesis import given, strategies as st

from lpmimo import placement


class TestDims:
    def test_reference_case(self):
        p = placement.placement_dims(69.0, 45.0)
        assert p.height_mm == pytest.approx(48.79, abs=0.1)
        assert p.spread_mm == pytest.approx(97.58, abs=0.1)

    def test_pythagorean_identity(self):
        for alpha in (10.0, 30.0, 45.0, 60.0, 89.0, 120.0):
            p = placement.placement_dims(83.0, alpha)
            assert p.height_mm**2 + (p.spread_mm / 2.0) ** 2 == pytest.approx(
                83.0**2, abs=1e-9
            )

    def test_right_angle_flattens(self):
        p = placement.placement_dims(100.0, 90.0)
        assert p.height_mm == pytest.approx(0.0, abs=1e-9)
        assert p.spread_mm == pytest.approx(200.0, abs=1e-9)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            placement.placement_dims(0.0, 45.0)
        with pytest.raises(ValueError):
            placement.placement_dims(69.0, 0.0)
        with pytest.raises(ValueError):
            placement.placement_dims(69.0, 180.0)


class TestPlf:
    def test_matched_angles(self):
        assert placement.plf(90.0) == pytest.approx(1.0, abs=1e-15)
        assert placement.plf(90.0, "recentered") == pytest.approx(1.0, abs=1e-15)

    def test_quarter_turn_offsets(self):
        expected = math.cos(math.radians(22.5))
        assert placement.plf(45.0) == pytest.approx(expected, abs=1e-12)
        assert placement.plf(135.0) == pytest.approx(expected, abs=1e-12)
        assert placement.plf(45.0, "recentered") == pytest.approx(
            math.cos(math.radians(45.0)), abs=1e-12
        )

    def test_monotone_on_approach(self):
        values = [placement.plf(a) for a in range(45, 91)]
        assert all(b > a for a, b in zip(values, values[1:]))

    @given(alpha=st.floats(min_value=1.0, max_value=89.0))
    def test_symmetry_about_matched_angle(self, alpha):
        lo = placement.plf(90.0 - alpha)
        hi = placement.plf(90.0 + alpha)
        assert lo == pytest.approx(hi, abs=1e-12)

    def test_db_conversion(self):
        assert placement.plf_db(1.0) == 0.0
        assert placement.plf_db(0.5) == pytest.approx(-6.0206, abs=1e-3)
        assert placement.plf_db(0.0) == -math.inf

    def test_unknown_convention(self):
        with pytest.raises(ValueError):
            placement.plf(45.0, "diagonal")


class TestFeasible:
    def test_reference_interval(self):
        constraints = placement.PlacementConstraints(
            min_height_mm=48.7, min_spread_mm=97.5
        )
        interval = placement.feasible_angles(176.0, constraints)
        assert interval is not None
        lo, hi = interval
        assert lo == pytest.approx(16.1, abs=0.2)
        assert hi == pytest.approx(73.9, abs=0.2)

    def test_endpoints_satisfy_constraints(self):
        constraints = placement.PlacementConstraints(
            min_height_mm=48.7, min_spread_mm=97.5
        )
        lo, hi = placement.feasible_angles(176.0, constraints)
        at_lo = placement.placement_dims(176.0, lo)
        at_hi = placement.placement_dims(176.0, hi)
        assert at_lo.spread_mm == pytest.approx(97.5, abs=0.01)
        assert at_hi.height_mm == pytest.approx(48.7, abs=0.01)
        assert at_lo.height_mm >= 48.7 - 0.01
        assert at_hi.spread_mm >= 97.5 - 0.01

    def test_unconstrained_covers_quadrant(self):
        lo, hi = placement.feasible_angles(100.0, placement.PlacementConstraints())
        assert lo == 0.0
        assert hi == 90.0

    def test_empty_when_height_unreachable(self):
        constraints = placement.PlacementConstraints(min_height_mm=101.0)
        assert placement.feasible_angles(100.0, constraints) is None

    def test_empty_when_bounds_cross(self):
        constraints = placement.PlacementConstraints(
            min_height_mm=90.0, min_spread_mm=190.0
        )
        assert placement.feasible_angles(100.0, constraints) is None

    def test_negative_constraints_rejected(self):
        with pytest.raises(ValueError):
            placement.PlacementConstraints(min_height_mm=-1.0)


class TestSweep:
    def test_tradeoffs_are_monotone(self):
        rows = placement.tradeoff_sweep(69.0, 45.0, 90.0, 1.0)
        heights = [r.height_mm for r in rows]
        spreads = [r.spread_mm for r in rows]
        plfs = [r.plf_linear for r in rows]
        assert all(b < a for a, b in zip(heights, heights[1:]))
        assert all(b > a for a, b in zip(spreads, spreads[1:]))
        assert all(b > a for a, b in zip(plfs, plfs[1:]))

    def test_skips_degenerate_samples(self):
        rows = placement.tradeoff_sweep(69.0, 0.0, 90.0, 1.0)
        assert len(rows) == 90
        assert rows[0].incline_angle_deg == 1.0
        assert rows[-1].incline_angle_deg == 90.0

    def test_rejects_bad_step(self):
        with pytest.raises(ValueError):
            placement.tradeoff_sweep(69.0, 0.0, 90.0, 0.0)
