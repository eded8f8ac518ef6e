# standard imports
from dataclasses import dataclass, field
from typing import Optional, Sequence

# third party imports
import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike

# ncqsi imports
from ncqsi.algebra.chain import (
    ChainShape,
    Element,
    Matrix,
    kron_all,
)
from ncqsi.algebra.constants import COMPLEX, TOL_EQ, StateKind
from ncqsi.algebra.exceptions import (
    InvalidStateError,
    NonFaithfulStateError,
    ShapeMismatchError,
)


@dataclass(frozen=True, eq=False)
class StateSpec:
    """The state omega: normalized trace, or a product of faithful densities.

    Construction checks shapes, hermiticity and unit trace. Faithfulness is
    checked separately (``check_faithful``) so that a corrupted density can be
    carried to a suite and reported there.
    """

    kind: StateKind
    densities: tuple[Matrix, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind is StateKind.TRACE:
            if self.densities:
                raise InvalidStateError("trace state takes no densities")
            return

        densities = []
        for i, rho in enumerate(self.densities, start=1):
            rho = np.array(rho, dtype=COMPLEX)
            if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
                raise InvalidStateError(f"density {i} is not square: {rho.shape}")
            if np.max(np.abs(rho - rho.conj().T)) > TOL_EQ:
                raise InvalidStateError(f"density {i} is not hermitian")
            if abs(np.trace(rho) - 1) > TOL_EQ:
                raise InvalidStateError(
                    f"density {i} has trace {np.trace(rho).real:.6g}, expected 1"
                )
            rho.setflags(write=False)
            densities.append(rho)
        if not densities:
            raise InvalidStateError("product state needs one density per factor")
        object.__setattr__(self, "densities", tuple(densities))

    @classmethod
    def trace(cls) -> "StateSpec":
        return cls(StateKind.TRACE)

    @classmethod
    def product(cls, densities: Sequence[ArrayLike]) -> "StateSpec":
        state = cls(StateKind.PRODUCT_DENSITIES, tuple(densities))
        state.check_faithful()
        return state

    @property
    def is_tracial(self) -> bool:
        return self.kind is StateKind.TRACE

    def faithfulness_margin(self) -> float:
        """Smallest eigenvalue over all densities (infinite for the trace state)."""
        if self.is_tracial:
            return np.inf
        return min(float(scipy.linalg.eigvalsh(rho)[0]) for rho in self.densities)

    def check_faithful(self):
        for i, rho in enumerate(self.densities, start=1):
            lowest = float(scipy.linalg.eigvalsh(rho)[0])
            if lowest <= 0:
                raise NonFaithfulStateError(i, lowest)

    def check_shape(self, shape: ChainShape):
        if self.is_tracial:
            return
        dims = tuple(rho.shape[0] for rho in self.densities)
        if dims != shape.factor_dims:
            raise ShapeMismatchError(shape.factor_dims, dims)

    def tail_density(self, shape: ChainShape, level: int) -> Matrix:
        """Density of omega restricted to factors level+1..n (normalized trace for TRACE)."""
        d_tail = shape.tail_dim(level)
        if self.is_tracial:
            return np.eye(d_tail, dtype=COMPLEX) / d_tail
        if level >= len(self.densities):
            return np.ones((1, 1), dtype=COMPLEX)
        return kron_all(self.densities[level:])

    def density(self, shape: ChainShape) -> Matrix:
        return self.tail_density(shape, 0)


@dataclass(frozen=True, eq=False)
class ChainModel:
    """Factor dimensions plus the state omega; Omega is the identity Element."""

    shape: ChainShape
    state: StateSpec

    def __post_init__(self):
        self.state.check_shape(self.shape)

    @classmethod
    def build(
        cls, factor_dims: Sequence[int], densities: Optional[Sequence[ArrayLike]] = None
    ) -> "ChainModel":
        shape = ChainShape(tuple(factor_dims))
        state = StateSpec.trace() if densities is None else StateSpec.product(densities)
        return cls(shape, state)

    @property
    def omega_vector(self) -> Element:
        return Element.identity(self.shape)


def state_value(x: Element, state: StateSpec) -> complex:
    """omega(x) = Tr(rho x), with rho = 1/N for the trace state."""
    state.check_shape(x.shape)
    if state.is_tracial:
        return complex(np.trace(x.entries)) / x.dim
    return complex(np.trace(state.density(x.shape) @ x.entries))


def gns_inner(x: Element, y: Element, state: StateSpec) -> complex:
    """<x, y>_omega = omega(y* x)."""
    if x.shape != y.shape:
        raise ShapeMismatchError(x.shape.factor_dims, y.shape.factor_dims)
    return state_value(y.adjoint() @ x, state)


def gns_norm(x: Element, state: StateSpec) -> float:
    """||x Omega||_H, which is ||x||_2 = omega(x* x)^{1/2}."""
    return float(np.sqrt(max(gns_inner(x, x, state).real, 0.0)))


l2_norm = gns_norm
