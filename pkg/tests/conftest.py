import pytest

from ncqsi.algebra.chain import ChainShape, Element
from ncqsi.algebra.process import Increment, MonotoneAdapted
from ncqsi.algebra.ramps import RampTable
from ncqsi.config import Tolerances
from ncqsi.verify.fixtures import (
    PRODUCT_DENSITIES,
    QUBIT_PAIR_DIMS,
    qubit_pair_filtration,
    qubit_pair_martingale,
)
from ncqsi.verify.random_instances import make_rng, random_product_densities


@pytest.fixture
def shape():
    return ChainShape(QUBIT_PAIR_DIMS)


@pytest.fixture
def flt():
    return qubit_pair_filtration()


@pytest.fixture
def product_flt():
    return qubit_pair_filtration(PRODUCT_DENSITIES)


@pytest.fixture(params=[0, 1, 2])
def random_product_flt(request):
    densities = random_product_densities(make_rng(request.param), ChainShape(QUBIT_PAIR_DIMS))
    return qubit_pair_filtration(densities)


@pytest.fixture
def X(flt):
    return qubit_pair_martingale(flt)


@pytest.fixture
def product_X(product_flt):
    return qubit_pair_martingale(product_flt)


@pytest.fixture
def tol():
    return Tolerances()


@pytest.fixture
def late_ramp(flt):
    """Zero up to 1.6, then the identity switched on by 1.9."""
    shape = flt.shape
    return MonotoneAdapted(
        flt,
        Element.zeros(shape),
        [Increment(0.0, Element.identity(shape), RampTable.linear(1.6, 1.9))],
    )
