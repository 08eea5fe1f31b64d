"""Geometry: oriented boxes, collision testing, coordinate transforms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formtab.geometry import (Aabb, ObjectShape, OrientedBox, Pose,
                              TableFrame, aabb_of, overlap, to_oriented_box,
                              wrap_angle)


def rasterized_overlap(a: OrientedBox, b: OrientedBox, step: float = 1e-3) -> bool:
    """Brute-force oracle: sample a dense grid over one box's footprint."""
    bounds = aabb_of(a)
    xs = np.arange(bounds.left + step / 2, bounds.right, step)
    ys = np.arange(bounds.bottom + step / 2, bounds.top, step)
    for x in xs:
        for y in ys:
            if a.contains_point(x, y, tol=0.0) and b.contains_point(x, y, tol=0.0):
                return True
    return False


def separation_margin(a: OrientedBox, b: OrientedBox) -> float:
    """Largest projection gap over the SAT axes; negative means no gap.

    A value near zero means the pair is close to tangency, where any
    finite-resolution oracle may disagree with the exact test.
    """
    margins = []
    for box in (a, b):
        c, s = math.cos(box.theta), math.sin(box.theta)
        for ax in (np.array([c, s]), np.array([-s, c])):
            pa = a.corners() @ ax
            pb = b.corners() @ ax
            margins.append(max(pb.min() - pa.max(), pa.min() - pb.max()))
    return max(margins)


class TestWrapAngle:
    def test_identity_inside_range(self):
        assert wrap_angle(0.7) == pytest.approx(0.7)

    def test_wraps_down(self):
        assert wrap_angle(math.pi + 0.1) == pytest.approx(-math.pi + 0.1)

    def test_pi_maps_to_pi(self):
        assert wrap_angle(math.pi) == pytest.approx(math.pi)
        assert wrap_angle(-math.pi) == pytest.approx(math.pi)

    @given(st.floats(-50.0, 50.0))
    def test_range_and_equivalence(self, theta):
        w = wrap_angle(theta)
        assert -math.pi < w <= math.pi + 1e-12
        assert math.isclose(math.cos(w), math.cos(theta), abs_tol=1e-9)
        assert math.isclose(math.sin(w), math.sin(theta), abs_tol=1e-9)


class TestTypes:
    def test_table_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            TableFrame(0.0, 1.0)
        with pytest.raises(ValueError):
            TableFrame(1.0, -2.0)

    def test_shape_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            ObjectShape(1.0, 0.0)

    def test_pose_wraps_theta(self):
        assert Pose(0.5, 0.5, 3 * math.pi).theta == pytest.approx(math.pi)

    def test_pose_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            Pose(float("nan"), 0.5, 0.0)
        with pytest.raises(ValueError):
            Pose(0.5, float("inf"), 0.0)

    def test_box_rejects_nonpositive_extents(self):
        with pytest.raises(ValueError):
            OrientedBox(0.5, 0.5, 0.0, 0.1)

    def test_corners_average_to_center(self):
        box = OrientedBox(0.3, 0.7, 0.2, 0.1, 0.9)
        assert np.allclose(box.corners().mean(axis=0), [0.3, 0.7])


class TestToOrientedBox:
    def test_axis_aligned_scaling(self):
        box = to_oriented_box(ObjectShape(1.0, 0.5), Pose(0.5, 0.5, 0.0),
                              TableFrame(2.0, 2.0))
        assert (box.cx, box.cy) == (0.5, 0.5)
        assert box.hx == pytest.approx(0.25)
        assert box.hy == pytest.approx(0.125)

    def test_quarter_turn_swaps_extents(self):
        shape, table = ObjectShape(1.0, 0.5), TableFrame(2.0, 2.0)
        straight = aabb_of(to_oriented_box(shape, Pose(0.5, 0.5, 0.0), table))
        turned = aabb_of(to_oriented_box(shape, Pose(0.5, 0.5, math.pi / 2), table))
        assert turned.width == pytest.approx(straight.height)
        assert turned.height == pytest.approx(straight.width)

    def test_square_diagonal_aabb(self):
        table = TableFrame(2.0, 2.0)
        box = to_oriented_box(ObjectShape(1.0, 1.0), Pose(0.5, 0.5, math.pi / 4),
                              table)
        bounds = aabb_of(box)
        assert bounds.width == pytest.approx(math.sqrt(2) * 0.5)
        assert bounds.height == pytest.approx(math.sqrt(2) * 0.5)

    def test_without_table_shape_is_normalized(self):
        box = to_oriented_box(ObjectShape(0.2, 0.1), Pose(0.5, 0.5, 0.0))
        assert box.hx == pytest.approx(0.1)
        assert box.hy == pytest.approx(0.05)


class TestAabbOf:
    def test_zero_theta_equals_extents(self):
        bounds = aabb_of(OrientedBox(0.5, 0.4, 0.2, 0.1, 0.0))
        assert bounds.left == pytest.approx(0.3)
        assert bounds.right == pytest.approx(0.7)
        assert bounds.bottom == pytest.approx(0.3)
        assert bounds.top == pytest.approx(0.5)

    def test_half_turn_matches_zero(self):
        a = aabb_of(OrientedBox(0.5, 0.4, 0.2, 0.1, 0.0))
        b = aabb_of(OrientedBox(0.5, 0.4, 0.2, 0.1, math.pi))
        assert a.left == pytest.approx(b.left)
        assert a.right == pytest.approx(b.right)
        assert a.bottom == pytest.approx(b.bottom)
        assert a.top == pytest.approx(b.top)

    def test_hand_enumerated_corners(self):
        theta, hx, hy = 0.3, 0.2, 0.1
        c, s = math.cos(theta), math.sin(theta)
        xs, ys = [], []
        for sx in (-hx, hx):
            for sy in (-hy, hy):
                xs.append(0.5 + c * sx - s * sy)
                ys.append(0.5 + s * sx + c * sy)
        bounds = aabb_of(OrientedBox(0.5, 0.5, hx, hy, theta))
        assert bounds.left == pytest.approx(min(xs))
        assert bounds.right == pytest.approx(max(xs))
        assert bounds.bottom == pytest.approx(min(ys))
        assert bounds.top == pytest.approx(max(ys))

    @given(st.floats(-3.0, 3.0), st.floats(0.05, 0.4), st.floats(0.05, 0.4))
    @settings(max_examples=60)
    def test_contains_corners_tightly(self, theta, hx, hy):
        box = OrientedBox(0.5, 0.5, hx, hy, theta)
        bounds = aabb_of(box)
        for x, y in box.corners():
            assert bounds.left - 1e-12 <= x <= bounds.right + 1e-12
            assert bounds.bottom - 1e-12 <= y <= bounds.top + 1e-12
        pts = box.corners()
        assert pts[:, 0].min() == pytest.approx(bounds.left)
        assert pts[:, 0].max() == pytest.approx(bounds.right)


class TestOverlap:
    def test_identical_boxes(self):
        box = OrientedBox(0.5, 0.5, 0.1, 0.1, 0.4)
        assert overlap(box, box)

    def test_far_apart(self):
        a = OrientedBox(0.0, 0.0, 0.2, 0.2)
        b = OrientedBox(1.0, 0.0, 0.2, 0.2)
        assert not overlap(a, b)

    def test_touching_edges_do_not_overlap(self):
        a = OrientedBox(0.3, 0.5, 0.1, 0.1)
        b = OrientedBox(0.5, 0.5, 0.1, 0.1)
        assert not overlap(a, b)

    def test_rotated_pair_matches_rasterization(self):
        a = OrientedBox(0.5, 0.5, 0.1, 0.1, 0.0)
        b = OrientedBox(0.76, 0.5, 0.1, 0.1, math.pi / 4)
        assert overlap(a, b) == rasterized_overlap(a, b)

    def test_rotated_diamond_separated_where_aabbs_touch(self):
        # the diamond's corner reaches sqrt(2)*0.1 ~ 0.1414 toward a
        a = OrientedBox(0.5, 0.5, 0.1, 0.1, 0.0)
        b = OrientedBox(0.5 + 0.1 + 0.15, 0.5, 0.1, 0.1, math.pi / 4)
        assert not overlap(a, b)
        assert overlap(a, OrientedBox(0.5 + 0.1 + 0.13, 0.5, 0.1, 0.1,
                                      math.pi / 4))

    def test_symmetry_random_pairs(self):
        rng = np.random.default_rng(0)
        for _ in range(300):
            a = OrientedBox(*rng.uniform(0.2, 0.8, 2),
                            *rng.uniform(0.05, 0.25, 2), rng.uniform(-3, 3))
            b = OrientedBox(*rng.uniform(0.2, 0.8, 2),
                            *rng.uniform(0.05, 0.25, 2), rng.uniform(-3, 3))
            assert overlap(a, b) == overlap(b, a)

    def test_agrees_with_rasterization_oracle(self):
        # disagreements are allowed only within grid resolution of tangency
        rng = np.random.default_rng(7)
        for _ in range(200):
            a = OrientedBox(*rng.uniform(0.3, 0.7, 2),
                            *rng.uniform(0.05, 0.2, 2), rng.uniform(-3, 3))
            b = OrientedBox(*rng.uniform(0.3, 0.7, 2),
                            *rng.uniform(0.05, 0.2, 2), rng.uniform(-3, 3))
            if overlap(a, b) != rasterized_overlap(a, b, step=2e-3):
                assert abs(separation_margin(a, b)) < 4e-3

    def test_oracle_agreement_away_from_tangency(self):
        rng = np.random.default_rng(11)
        checked = 0
        while checked < 100:
            a = OrientedBox(*rng.uniform(0.3, 0.7, 2),
                            *rng.uniform(0.05, 0.2, 2), rng.uniform(-3, 3))
            b = OrientedBox(*rng.uniform(0.3, 0.7, 2),
                            *rng.uniform(0.05, 0.2, 2), rng.uniform(-3, 3))
            if abs(separation_margin(a, b)) < 5e-3:
                continue
            assert overlap(a, b) == rasterized_overlap(a, b, step=2e-3)
            checked += 1


class TestNormalizeDenormalize:
    def test_midpoint(self):
        table = TableFrame(3.0, 2.0)
        assert table.normalize(1.5, 1.0) == pytest.approx((0.5, 0.5))

    def test_origin_fixed_point(self):
        for table in (TableFrame(3.0, 2.0), TableFrame(1.2, 0.8)):
            assert table.normalize(0.0, 0.0) == (0.0, 0.0)
            assert table.denormalize(0.0, 0.0) == (0.0, 0.0)

    def test_round_trip_exact(self):
        table = TableFrame(2.7, 1.3)
        rng = np.random.default_rng(1)
        for _ in range(100):
            x, y = rng.uniform(-5, 5, 2)
            nx, ny = table.normalize(x, y)
            bx, by = table.denormalize(nx, ny)
            assert abs(bx - x) < 1e-12
            assert abs(by - y) < 1e-12
