import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from ncqsi.integration.exceptions import InvalidPartitionError, RefinementError
from ncqsi.integration.partition import DyadicPartition, Partition


def test_dyadic_refinement_of_endpoints():
    assert_allclose(Partition([0.0, 2.0]).refine_dyadic().points, [0.0, 1.0, 2.0])
    assert_allclose(Partition([0.0, 2.0]).refine("dyadic").refine().points, [0.0, 0.5, 1.0, 1.5, 2.0])


@pytest.mark.parametrize("points", [[1.0], [0.0, 0.0], [0.0, 2.0, 1.0], [0.0, np.inf]])
def test_invalid_partitions(points):
    with pytest.raises(InvalidPartitionError):
        Partition(points)


def test_partition_geometry():
    theta = Partition([0.0, 0.5, 1.5, 2.0])
    assert theta.n_points == 4
    assert theta.n_intervals == 3
    assert theta.mesh == 1.0
    assert list(theta.subintervals()) == [(0.0, 0.5), (0.5, 1.5), (1.5, 2.0)]
    assert theta.bracket(0.5) == 1
    assert theta.bracket(1.0) == 2
    assert theta.bracket(2.0) == 3
    with pytest.raises(InvalidPartitionError):
        theta.bracket(0.0)


def test_level_crossings(flt):
    theta = Partition([0.0, 0.5, 1.0, 1.5, 2.0])
    assert theta.level_crossings(flt.schedule) == [(0.5, 1.0), (1.5, 2.0)]
    assert Partition([0.0, 2.0]).level_crossings(flt.schedule) == [(0.0, 2.0)]
    assert Partition([1.0, 1.5]).level_crossings(flt.schedule) == []


def test_one_point_refinement():
    theta = Partition([0.0, 1.0, 2.0])
    refined = theta.refine_one_point(0.25)
    assert_allclose(refined.points, [0.0, 0.25, 1.0, 2.0])
    assert refined.is_refinement_of(theta)
    assert not theta.is_refinement_of(refined)
    assert_allclose(theta.refine("one_point", 1.5).points, [0.0, 1.0, 1.5, 2.0])


@pytest.mark.parametrize("t", [0.0, 1.0, 2.0, 2.5])
def test_one_point_refinement_rejects_existing_or_outside(t):
    with pytest.raises(RefinementError):
        Partition([0.0, 1.0, 2.0]).refine_one_point(t)


def test_refine_modes():
    with pytest.raises(RefinementError):
        Partition([0.0, 2.0]).refine("one_point")
    with pytest.raises(ValueError):
        Partition([0.0, 2.0]).refine("trisect")


def test_union():
    union = Partition([0.0, 0.5, 2.0]).union(Partition([0.0, 1.0, 2.0]))
    assert_allclose(union.points, [0.0, 0.5, 1.0, 2.0])
    with pytest.raises(InvalidPartitionError):
        Partition([0.0, 2.0]).union(Partition([0.0, 1.0]))


def test_dyadic_partition_is_lazy():
    theta = DyadicPartition(0.0, 2.0, 30)
    assert theta.n_points == 2**30 + 1
    assert theta.mesh == pytest.approx(2.0 / 2**30)
    assert theta.point(2**29) == 1.0
    assert theta.bracket(1.0) == 2**29
    assert theta.contains(1.0)
    assert not theta.contains(1.0 + 1e-12)
    assert theta._points is None


def test_dyadic_partition_points():
    theta = DyadicPartition(0.0, 2.0, 3)
    assert_allclose(theta.points, np.linspace(0.0, 2.0, 9))
    assert theta.refine_dyadic().depth == 4
    with pytest.raises(InvalidPartitionError):
        DyadicPartition(1.0, 1.0)
    with pytest.raises(InvalidPartitionError):
        DyadicPartition(0.0, 1.0, -1)


@settings(max_examples=200, deadline=None)
@given(
    depth=st.integers(min_value=0, max_value=12),
    s=st.floats(min_value=0.0, max_value=2.0, exclude_min=True, allow_nan=False),
)
def test_dyadic_bracket_matches_materialized_partition(depth, s):
    lazy = DyadicPartition(0.0, 2.0, depth)
    eager = Partition(lazy.points)
    assert lazy.bracket(s) == eager.bracket(s)
    assert lazy.contains(s) == eager.contains(s)
