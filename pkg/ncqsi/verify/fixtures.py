"""Built-in fixtures: the two-qubit chain and its negative controls."""

# standard imports
from typing import Optional, Sequence

# third party imports
import numpy as np
import scipy.linalg

# ncqsi imports
from ncqsi.algebra.chain import ChainShape, Element, embed_factor, kron_all
from ncqsi.algebra.constants import PAULI, StateKind
from ncqsi.algebra.filtration import Filtration, FiltrationSchedule, build_filtration
from ncqsi.algebra.process import (
    Increment,
    MartingaleFromTerminal,
    MonotoneAdapted,
    NormContinuousAdapted,
    SpectralStep,
    Term,
)
from ncqsi.algebra.ramps import RampTable
from ncqsi.algebra.state import ChainModel, StateSpec

QUBIT_PAIR_DIMS = (2, 2)
QUBIT_PAIR_JUMPS = (1.0, 2.0)
QUBIT_PAIR_HORIZON = 2.0

# Well-conditioned faithful qubit densities for the product-state variant.
PRODUCT_DENSITIES = (
    np.array([[0.6, 0.1 - 0.05j], [0.1 + 0.05j, 0.4]]),
    np.array([[0.7, 0.2j], [-0.2j, 0.3]]),
)


def qubit_pair_filtration(densities: Optional[Sequence[np.ndarray]] = None) -> Filtration:
    return build_filtration(QUBIT_PAIR_DIMS, QUBIT_PAIR_JUMPS, QUBIT_PAIR_HORIZON, densities)


def non_faithful_filtration() -> Filtration:
    """Product state whose second density has a zero eigenvalue."""
    shape = ChainShape(QUBIT_PAIR_DIMS)
    state = StateSpec(
        StateKind.PRODUCT_DENSITIES,
        (PRODUCT_DENSITIES[0], np.array([[1.0, 0.0], [0.0, 0.0]])),
    )
    return Filtration(
        ChainModel(shape, state), FiltrationSchedule(QUBIT_PAIR_JUMPS, QUBIT_PAIR_HORIZON)
    )


def qubit_pair_terminal(shape: ChainShape) -> Element:
    """sigma_x (x) 1 + sigma_z (x) sigma_x."""
    return embed_factor(PAULI["X"], 1, shape) + Element(shape, kron_all([PAULI["Z"], PAULI["X"]]))


def qubit_pair_martingale(flt: Filtration) -> MartingaleFromTerminal:
    return MartingaleFromTerminal(flt, qubit_pair_terminal(flt.shape))


def linear_integrand(flt: Filtration, slope: float = 1.0) -> NormContinuousAdapted:
    """f(t) = slope * t * 1."""
    T = flt.horizon
    profile = RampTable.linear(0.0, T, 0.0, slope * T)
    return NormContinuousAdapted(flt, [Term(0.0, Element.identity(flt.shape), profile)])


def ramp_monotone(flt: Filtration) -> MonotoneAdapted:
    """1/2 + a scalar ramp on (0.25, 0.75) and a first-factor projection ramp on (1.25, 1.75)."""
    shape = flt.shape
    s1 = flt.jump_times[0]
    projection = embed_factor((PAULI["I"] + PAULI["X"]) / 2, 1, shape)
    return MonotoneAdapted(
        flt,
        0.5 * Element.identity(shape),
        [
            Increment(0.0, 0.5 * Element.identity(shape), RampTable.linear(0.25 * s1, 0.75 * s1)),
            Increment(s1, projection, RampTable.linear(1.25 * s1, 1.75 * s1)),
        ],
    )


def decreasing_integrand(flt: Filtration) -> NormContinuousAdapted:
    """f(t) = -t * 1: hermitian and adapted, but decreasing."""
    T = flt.horizon
    return NormContinuousAdapted(
        flt, [Term(0.0, Element.identity(flt.shape), RampTable.linear(0.0, T, 0.0, -T))]
    )


def step_profile_integrand(flt: Filtration, width: float = 1e-9) -> NormContinuousAdapted:
    """A unit step just below the first jump, declared with Lipschitz constant 1."""
    s1 = flt.jump_times[0]
    start = s1 - 1e-3 * s1
    profile = RampTable.linear(start, start + width)
    return NormContinuousAdapted(
        flt, [Term(0.0, Element.identity(flt.shape), profile, lipschitz=1.0)]
    )


def drifting_integrator(flt: Filtration) -> NormContinuousAdapted:
    """X(t) = t * 1, adapted but not a martingale."""
    return linear_integrand(flt, 1.0)


def first_factor_generator(shape: ChainShape) -> Element:
    """sigma_z on the first factor: two eigenvalues, +-1."""
    return embed_factor(PAULI["Z"], 1, shape)


def default_threshold(flt: Filtration, generator: Element) -> RampTable:
    """Below the spectrum up to s_1, then rising linearly past it at T."""
    eigenvalues = scipy.linalg.eigvalsh(generator.entries)
    low = float(eigenvalues[0]) - 1.0
    high = float(eigenvalues[-1]) + 1.0
    s1 = flt.jump_times[0]
    if s1 >= flt.horizon:
        return RampTable((0.0, s1), (low, low))
    return RampTable((0.0, s1, flt.horizon), (low, low, high))


def spectral_step_integrand(
    flt: Filtration,
    generator: Optional[Element] = None,
    threshold: Optional[RampTable] = None,
) -> SpectralStep:
    generator = first_factor_generator(flt.shape) if generator is None else generator
    threshold = default_threshold(flt, generator) if threshold is None else threshold
    return SpectralStep(flt, generator, threshold)
