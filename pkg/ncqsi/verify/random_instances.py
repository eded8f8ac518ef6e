"""Seeded random algebra elements, processes and partitions.

Matrix entries are drawn uniformly from the complex unit square; hermitian
matrices are g + g*, positive ones g* g, and densities the normalized
g* g + 1e-3 I, so every random state is faithful.
"""

# standard imports
from typing import Optional

# third party imports
import numpy as np

# ncqsi imports
from ncqsi.algebra.chain import ChainShape, Element, Matrix, embed_head, operator_norm
from ncqsi.algebra.constants import COMPLEX
from ncqsi.algebra.filtration import Filtration
from ncqsi.algebra.process import Increment, MartingaleFromTerminal, MonotoneAdapted
from ncqsi.algebra.ramps import RampTable
from ncqsi.integration.partition import Partition

DENSITY_FLOOR = 1e-3


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_matrix(rng: np.random.Generator, n: int) -> Matrix:
    return (rng.uniform(0, 1, (n, n)) + 1j * rng.uniform(0, 1, (n, n))).astype(COMPLEX)


def random_hermitian(rng: np.random.Generator, n: int) -> Matrix:
    g = random_matrix(rng, n)
    return g + g.conj().T


def random_psd(rng: np.random.Generator, n: int) -> Matrix:
    g = random_matrix(rng, n)
    return g.conj().T @ g


def random_density(rng: np.random.Generator, n: int, floor: float = DENSITY_FLOOR) -> Matrix:
    rho = random_psd(rng, n) + floor * np.eye(n, dtype=COMPLEX)
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_product_densities(rng: np.random.Generator, shape: ChainShape) -> tuple[Matrix, ...]:
    return tuple(random_density(rng, d) for d in shape.factor_dims)


def random_element(rng: np.random.Generator, shape: ChainShape) -> Element:
    return Element(shape, random_matrix(rng, shape.acting_dim))


def random_level_element(rng: np.random.Generator, shape: ChainShape, level: int) -> Element:
    """A random member of A_level = (first ``level`` factors) (x) 1."""
    return embed_head(random_matrix(rng, shape.head_dim(level)), level, shape)


def random_martingale(rng: np.random.Generator, flt: Filtration) -> MartingaleFromTerminal:
    return MartingaleFromTerminal(flt, random_element(rng, flt.shape))


def random_monotone(rng: np.random.Generator, flt: Filtration) -> MonotoneAdapted:
    """base + sum_j h_j g_j with one unit-norm PSD increment per level.

    Each ramp rises and settles strictly inside the gap between consecutive
    jump times, so f is constant on a left neighbourhood of every jump.
    """
    shape = flt.shape
    starts = (0.0, *flt.jump_times)
    ends = (*flt.jump_times, flt.horizon)

    increments = []
    for level, (start, end) in enumerate(zip(starts, ends)):
        width = end - start
        if width <= 0:
            continue
        g = random_psd(rng, shape.head_dim(level))
        g = g / operator_norm(g)
        ramp = RampTable.linear(
            start + width * rng.uniform(0.05, 0.4),
            start + width * rng.uniform(0.6, 0.95),
        )
        increments.append(Increment(start, embed_head(g, level, shape), ramp))

    base = float(rng.uniform(-1, 1)) * Element.identity(shape)
    return MonotoneAdapted(flt, base, increments)


def random_partition(
    rng: np.random.Generator, a: float, b: float, max_inner: int = 8
) -> Partition:
    k = int(rng.integers(1, max_inner + 1))
    inner = np.unique(rng.uniform(a, b, k))
    inner = inner[(inner > a) & (inner < b)]
    return Partition([a, *inner, b])


def random_fine_partition(
    rng: np.random.Generator, a: float, b: float, mesh_below: float
) -> Partition:
    """A jittered grid whose mesh is strictly below ``mesh_below``."""
    spacing = min(mesh_below, b - a) / 2
    m = int(np.ceil((b - a) / spacing))
    step = (b - a) / m
    inner = a + step * (np.arange(1, m) + rng.uniform(-0.25, 0.25, m - 1))
    return Partition([a, *inner, b])


def random_new_point(rng: np.random.Generator, theta: Partition) -> float:
    """A uniform point of (a, b) not already in theta."""
    while True:
        t = float(rng.uniform(theta.a, theta.b))
        if theta.a < t < theta.b and not theta.contains(t):
            return t


def random_times(
    rng: np.random.Generator, flt: Filtration, k: int, jump_share: Optional[float] = 0.3
) -> list[float]:
    """k times in [0, T]; roughly ``jump_share`` of them land exactly on jump times."""
    times = []
    for _ in range(k):
        if jump_share and rng.uniform() < jump_share:
            times.append(float(rng.choice(flt.jump_times)))
        else:
            times.append(float(rng.uniform(0, flt.horizon)))
    return times
