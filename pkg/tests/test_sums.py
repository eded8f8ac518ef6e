import pytest
from numpy.testing import assert_allclose

from ncqsi.algebra.chain import ChainShape, Element
from ncqsi.algebra.exceptions import ShapeMismatchError, TimeOutOfRangeError
from ncqsi.algebra.filtration import build_filtration
from ncqsi.algebra.process import Constant, MartingaleFromTerminal
from ncqsi.integration.partition import DyadicPartition, Partition
from ncqsi.integration.sums import contributing_intervals, left_sum, right_sum, sigma_operator
from ncqsi.verify.fixtures import (
    drifting_integrator,
    linear_integrand,
    ramp_monotone,
    spectral_step_integrand,
)
from ncqsi.verify.random_instances import make_rng, random_element, random_partition


def test_right_sum_on_endpoints_vanishes_at_zero(flt, X, shape):
    f = linear_integrand(flt)
    assert right_sum(Partition([0.0, 2.0]), f, X).allclose(Element.zeros(shape))


def test_right_sum_with_constant_integrand(flt, X, shape):
    c = Constant(flt, 3 * Element.identity(shape))
    theta = random_partition(make_rng(1), 0.0, 2.0)
    assert right_sum(theta, c, X).allclose(3 * X.terminal)
    assert left_sum(theta, c, X).allclose(3 * X.terminal)


def test_sums_on_a_grid_through_the_jumps(flt, X, shape):
    f = linear_integrand(flt)
    theta = Partition([0.0, 0.5, 1.0, 1.5, 2.0])
    # f(0.5) M_1 + f(1.5) M_2
    expected = 0.5 * X.eval(1.0) + 1.5 * (X.terminal - X.eval(1.0))
    assert right_sum(theta, f, X).allclose(expected)


def test_left_and_right_sums_differ_for_noncommuting_values(product_flt):
    rng = make_rng(9)
    X = MartingaleFromTerminal(product_flt, random_element(rng, product_flt.shape))
    f = MartingaleFromTerminal(product_flt, random_element(rng, product_flt.shape))
    theta = Partition([0.0, 1.0, 1.5, 2.0])
    right = right_sum(theta, f, X)
    left = left_sum(theta, f, X)
    assert right.max_abs_diff(left) > 1e-3


def test_only_level_crossings_contribute(flt, X):
    theta = DyadicPartition(0.0, 2.0, 20)
    assert list(contributing_intervals(theta, X)) == theta.level_crossings(flt.schedule)
    small = Partition([0.0, 0.5, 1.0, 2.0])
    assert list(contributing_intervals(small, drifting_integrator(flt))) == list(small.subintervals())


def test_deep_dyadic_sum_matches_shallow_grid(flt, X):
    f = spectral_step_integrand(flt)
    deep = right_sum(DyadicPartition(0.0, 2.0, 24), f, X)
    shallow = right_sum(Partition([0.0, 0.5, 1.0, 1.9, 2.0]), f, X)
    assert deep.allclose(shallow)


def test_sigma_operator_reproduces_the_sum(flt, X):
    f = ramp_monotone(flt)
    gns = flt.gns
    for seed in range(5):
        theta = random_partition(make_rng(seed), 0.0, 2.0)
        sigma = sigma_operator(theta, f)
        assert_allclose(sigma @ gns.coords(X.terminal), gns.coords(right_sum(theta, f, X)), atol=1e-10)
        assert_allclose(sigma, sigma.conj().T, atol=1e-10)


def test_sigma_operator_on_product_state(product_flt, product_X):
    f = spectral_step_integrand(product_flt)
    gns = product_flt.gns
    theta = Partition([0.0, 0.7, 1.3, 1.8, 2.0])
    sigma = sigma_operator(theta, f)
    assert_allclose(
        sigma @ gns.coords(product_X.terminal),
        gns.coords(right_sum(theta, f, product_X)),
        atol=1e-10,
    )


def test_sum_operand_checks(flt, X):
    f = linear_integrand(flt)
    with pytest.raises(TimeOutOfRangeError):
        right_sum(Partition([0.0, 3.0]), f, X)

    wide = build_filtration((2, 3), (1.0, 2.0), 2.0)
    foreign = Constant(wide, Element.identity(ChainShape((2, 3))))
    with pytest.raises(ShapeMismatchError):
        right_sum(Partition([0.0, 2.0]), foreign, X)
