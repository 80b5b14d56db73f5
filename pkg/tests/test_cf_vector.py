import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfrefine import CFVector, cf_add, centroid, diameter, radius

from oracles import cf_oracle, diameter_oracle, radius_oracle


def cf_of(*points):
    return CFVector.from_points(np.atleast_2d(np.asarray(points, dtype=float)))


class TestConstruction:
    def test_from_points_matches_direct_sums(self):
        pts = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
        cf = CFVector.from_points(pts)
        assert cf.n == 3
        np.testing.assert_allclose(cf.ls, [9.0, 12.0])
        np.testing.assert_allclose(cf.ss, [35.0, 56.0])

    def test_empty_feature_must_have_zero_sums(self):
        with pytest.raises(ValueError):
            CFVector(0, np.array([1.0]), np.array([0.0]))

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            CFVector(-1, np.array([0.0]), np.array([0.0]))

    def test_mismatched_sum_shapes_rejected(self):
        with pytest.raises(ValueError):
            CFVector(1, np.array([1.0, 2.0]), np.array([1.0]))


class TestAdd:
    def test_componentwise_sums(self):
        a = CFVector(2, np.array([2.0, 2.0]), np.array([2.0, 2.0]))
        b = CFVector(1, np.array([1.0, 1.0]), np.array([1.0, 1.0]))
        out = cf_add(a, b)
        assert out.n == 3
        np.testing.assert_array_equal(out.ls, [3.0, 3.0])
        np.testing.assert_array_equal(out.ss, [3.0, 3.0])

    def test_zero_is_identity(self):
        cf = cf_of([1.5, -2.0], [0.5, 4.0])
        out = cf_add(cf, CFVector(0, np.zeros(2), np.zeros(2)))
        assert out.n == cf.n
        np.testing.assert_array_equal(out.ls, cf.ls)
        np.testing.assert_array_equal(out.ss, cf.ss)

    def test_twenty_points_split_in_halves(self, rng):
        pts = rng.normal(size=(20, 3))
        merged = cf_add(CFVector.from_points(pts[:10]), CFVector.from_points(pts[10:]))
        n, ls, ss = cf_oracle(pts)
        assert merged.n == n
        np.testing.assert_allclose(merged.ls, ls, rtol=1e-9)
        np.testing.assert_allclose(merged.ss, ss, rtol=1e-9)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            cf_add(cf_of([1.0]), cf_of([1.0, 2.0]))


class TestCentroid:
    def test_ls_over_n(self):
        cf = CFVector(2, np.array([4.0, 6.0]), np.array([10.0, 20.0]))
        np.testing.assert_allclose(centroid(cf), [2.0, 3.0])

    def test_single_point_is_identity(self):
        np.testing.assert_allclose(centroid(cf_of([3.0, -1.0])), [3.0, -1.0])

    def test_two_point_average(self):
        np.testing.assert_allclose(centroid(cf_of([0.0], [2.0])), [1.0])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            centroid(CFVector(0, np.zeros(1), np.zeros(1)))


class TestRadius:
    def test_two_points(self):
        assert radius(cf_of([0.0], [2.0])) == pytest.approx(1.0)

    def test_single_point_is_zero(self):
        assert radius(cf_of([5.0, 5.0])) == 0.0

    def test_three_point_line(self):
        assert radius(cf_of([0.0], [1.0], [2.0])) == pytest.approx(math.sqrt(2.0 / 3.0))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            radius(CFVector(0, np.zeros(1), np.zeros(1)))

    def test_tight_cluster_clamps_to_zero(self):
        # identical points far from the origin: the radicand is pure
        # cancellation noise and must clamp instead of going NaN
        pts = np.full((50, 3), 1e8)
        assert radius(CFVector.from_points(pts)) == 0.0


class TestDiameter:
    def test_two_points(self):
        assert diameter(cf_of([0.0], [2.0])) == pytest.approx(2.0)

    def test_single_point_is_zero_by_convention(self):
        assert diameter(cf_of([7.0])) == 0.0

    def test_three_point_line(self):
        assert diameter(cf_of([0.0], [1.0], [2.0])) == pytest.approx(math.sqrt(2.0))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            diameter(CFVector(0, np.zeros(1), np.zeros(1)))

    def test_tight_cluster_clamps_to_zero(self):
        pts = np.full((50, 3), 1e8)
        assert diameter(CFVector.from_points(pts)) == 0.0


finite_coord = st.floats(min_value=-1e3, max_value=1e3,
                         allow_nan=False, allow_infinity=False)


@st.composite
def point_sets(draw, min_points=1, max_points=40):
    dim = draw(st.integers(min_value=1, max_value=6))
    n = draw(st.integers(min_value=min_points, max_value=max_points))
    rows = draw(st.lists(st.lists(finite_coord, min_size=dim, max_size=dim),
                         min_size=n, max_size=n))
    return np.array(rows, dtype=np.float64)


class TestProperties:
    @given(pts=point_sets(min_points=2), data=st.data())
    @settings(max_examples=60, deadline=None)
    def test_any_two_way_partition_adds_up(self, pts, data):
        cut = data.draw(st.integers(min_value=1, max_value=pts.shape[0] - 1))
        perm = data.draw(st.permutations(range(pts.shape[0])))
        shuffled = pts[np.array(perm)]
        merged = cf_add(CFVector.from_points(shuffled[:cut]),
                        CFVector.from_points(shuffled[cut:]))
        n, ls, ss = cf_oracle(pts)
        assert merged.n == n
        np.testing.assert_allclose(merged.ls, ls, rtol=1e-9, atol=1e-9)
        np.testing.assert_allclose(merged.ss, ss, rtol=1e-9, atol=1e-9)

    @given(pts=point_sets())
    @settings(max_examples=60, deadline=None)
    def test_radius_and_diameter_match_raw_points(self, pts):
        cf = CFVector.from_points(pts)
        # near-zero spread at large coordinates cancels catastrophically in
        # the summary-statistics route; the floor scales with the data
        floor = 1e-6 * (1.0 + float(np.abs(pts).max()))
        assert radius(cf) == pytest.approx(radius_oracle(pts), rel=1e-6, abs=floor)
        assert diameter(cf) == pytest.approx(diameter_oracle(pts), rel=1e-6, abs=floor)

    @given(pts=point_sets())
    @settings(max_examples=60, deadline=None)
    def test_cauchy_schwarz_per_dimension(self, pts):
        cf = CFVector.from_points(pts)
        slack = 1e-9 * np.maximum(np.abs(cf.ss), 1.0)
        assert (cf.ss + slack >= cf.ls ** 2 / cf.n).all()
