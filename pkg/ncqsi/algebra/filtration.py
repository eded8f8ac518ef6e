"""The filtration {A_t}, its conditional expectations E_t and GNS projections P_t.

A_t is (first level(t) factors) (x) 1. E_t is the slice map contracting the
remaining factors against the state's densities, and P_t(x Omega) = (E_t x) Omega.
"""

# standard imports
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

# third party imports
import numpy as np
import scipy.linalg
from loguru import logger
from numpy.typing import NDArray

# ncqsi imports
from ncqsi.algebra.chain import ChainShape, Element, Matrix
from ncqsi.algebra.constants import COMPLEX, TOL_EQ
from ncqsi.algebra.exceptions import (
    InvalidScheduleError,
    ShapeMismatchError,
    TimeOutOfRangeError,
)
from ncqsi.algebra.state import ChainModel, StateSpec

# Matrix of an operator on the GNS space in the fixed orthonormal basis.
GnsOperator = NDArray[np.complex128]


@dataclass(frozen=True)
class FiltrationSchedule:
    jump_times: tuple[float, ...]
    horizon: float

    def __post_init__(self):
        times = tuple(float(s) for s in self.jump_times)
        horizon = float(self.horizon)
        if not times:
            raise InvalidScheduleError("at least one jump time is required")
        if times[0] <= 0:
            raise InvalidScheduleError(f"first jump time {times[0]} must be > 0")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InvalidScheduleError(f"jump times {list(times)} are not strictly increasing")
        if horizon < times[-1]:
            raise InvalidScheduleError(f"horizon {horizon} is before the last jump {times[-1]}")
        object.__setattr__(self, "jump_times", times)
        object.__setattr__(self, "horizon", horizon)

    @property
    def n_levels(self) -> int:
        return len(self.jump_times)

    def check_time(self, t: float):
        if not 0 <= t <= self.horizon:
            raise TimeOutOfRangeError(t, 0, self.horizon)

    def level_of(self, t: float) -> int:
        """#{j : s_j <= t}; s_j itself already belongs to level j."""
        self.check_time(t)
        return int(np.searchsorted(self.jump_times, t, side="right"))

    def level_before(self, t: float) -> int:
        """Level seen just before t, i.e. #{j : s_j < t}."""
        self.check_time(t)
        return int(np.searchsorted(self.jump_times, t, side="left"))

    def jumps_in(self, a: float, b: float) -> list[int]:
        """1-based indices j with s_j in (a, b]."""
        return [j for j, s in enumerate(self.jump_times, start=1) if a < s <= b]


class GnsSpace:
    """The GNS space of (A, omega) with a fixed orthonormal basis.

    Vectors x Omega are vectorized row-major. The basis is Gram-Schmidt over the
    matrix units in <.,.>_omega order, computed as the upper Cholesky factor R of
    the Gram matrix: orthonormal coordinates of x Omega are R vec(x).
    """

    def __init__(self, model: ChainModel):
        self.model = model
        self.shape = model.shape
        n = self.shape.acting_dim
        self.dim = n * n

        # <e_b, e_a>_omega = omega(e_a* e_b) = delta_ik rho_lj for a=(i,j), b=(k,l)
        rho = model.state.density(self.shape)
        gram = np.kron(np.eye(n, dtype=COMPLEX), rho.T)
        self._chol = scipy.linalg.cholesky(gram, lower=False)
        self._chol_inv = scipy.linalg.solve_triangular(
            self._chol, np.eye(self.dim, dtype=COMPLEX), lower=False
        )
        logger.debug(f"GnsSpace.__init__: built orthonormal basis of dimension {self.dim}")

    def coords(self, x: Element) -> NDArray[np.complex128]:
        if x.shape != self.shape:
            raise ShapeMismatchError(self.shape.factor_dims, x.shape.factor_dims)
        return self._chol @ x.entries.reshape(-1)

    def element(self, c: NDArray[np.complex128]) -> Element:
        n = self.shape.acting_dim
        return Element(self.shape, (self._chol_inv @ c).reshape(n, n))

    def from_vec_operator(self, t_vec: Matrix) -> GnsOperator:
        """Change a linear map on row-major vec(x) into orthonormal coordinates."""
        return self._chol @ t_vec @ self._chol_inv

    def left_mult(self, x: Element) -> GnsOperator:
        """L_x : y Omega -> x y Omega."""
        n = self.shape.acting_dim
        return self.from_vec_operator(np.kron(x.entries, np.eye(n, dtype=COMPLEX)))

    def right_mult(self, y: Element) -> GnsOperator:
        """R_y : z Omega -> z y Omega; in the tracial case these realize A'."""
        n = self.shape.acting_dim
        return self.from_vec_operator(np.kron(np.eye(n, dtype=COMPLEX), y.entries.T))


@dataclass(frozen=True, eq=False)
class Filtration:
    model: ChainModel
    schedule: FiltrationSchedule

    def __post_init__(self):
        if self.schedule.n_levels != self.model.shape.n_factors:
            raise InvalidScheduleError(
                f"{self.schedule.n_levels} jump times for {self.model.shape.n_factors} factors"
            )

    @property
    def shape(self) -> ChainShape:
        return self.model.shape

    @property
    def state(self) -> StateSpec:
        return self.model.state

    @property
    def horizon(self) -> float:
        return self.schedule.horizon

    @property
    def jump_times(self) -> tuple[float, ...]:
        return self.schedule.jump_times

    def level_of(self, t: float) -> int:
        return self.schedule.level_of(t)

    def cond_expect_level(self, x: Element, level: int) -> Element:
        """Slice map onto A_level: Tr_tail((1 (x) rho_tail) x) (x) 1_tail."""
        if x.shape != self.shape:
            raise ShapeMismatchError(self.shape.factor_dims, x.shape.factor_dims)
        d_head = self.shape.head_dim(level)
        d_tail = self.shape.tail_dim(level)
        rho_tail = self.state.tail_density(self.shape, level)

        blocks = x.entries.reshape(d_head, d_tail, d_head, d_tail)
        reduced = np.einsum("iujv,vu->ij", blocks, rho_tail)
        return Element(self.shape, np.kron(reduced, np.eye(d_tail, dtype=COMPLEX)))

    def cond_expect(self, x: Element, t: float) -> Element:
        return self.cond_expect_level(x, self.level_of(t))

    def gns_project(self, v: Element, t: float) -> Element:
        """P_t(v Omega) = (E_t v) Omega."""
        return self.cond_expect(v, t)

    def adaptedness_defect(self, x: Element, level: int) -> float:
        return x.max_abs_diff(self.cond_expect_level(x, level))

    def is_in_level(self, x: Element, level: int, tol: float = TOL_EQ) -> bool:
        return self.adaptedness_defect(x, level) <= tol * x.scale()

    @cached_property
    def gns(self) -> GnsSpace:
        self.state.check_faithful()
        return GnsSpace(self.model)

    def _slice_map_matrix(self, level: int) -> Matrix:
        """Matrix of E_level acting on row-major vec(x)."""
        n = self.shape.acting_dim
        d_head = self.shape.head_dim(level)
        d_tail = self.shape.tail_dim(level)
        rho_tail = self.state.tail_density(self.shape, level)

        units = np.eye(n * n, dtype=COMPLEX).reshape(n * n, d_head, d_tail, d_head, d_tail)
        reduced = np.einsum("kiujv,vu->kij", units, rho_tail)
        images = np.einsum("kij,uv->kiujv", reduced, np.eye(d_tail, dtype=COMPLEX))
        return images.reshape(n * n, n * n).T

    @cached_property
    def _projections(self) -> tuple[GnsOperator, ...]:
        gns = self.gns
        return tuple(
            gns.from_vec_operator(self._slice_map_matrix(level))
            for level in range(self.shape.n_factors + 1)
        )

    def projection_matrix_level(self, level: int) -> GnsOperator:
        return self._projections[level]

    def projection_matrix(self, t: float) -> GnsOperator:
        return self.projection_matrix_level(self.level_of(t))

    def projection_increment(self, s: float, t: float) -> GnsOperator:
        """P_t - P_s."""
        return self.projection_matrix(t) - self.projection_matrix(s)


def build_filtration(
    factor_dims: Sequence[int],
    jump_times: Sequence[float],
    horizon: float,
    densities=None,
) -> Filtration:
    model = ChainModel.build(factor_dims, densities)
    return Filtration(model, FiltrationSchedule(tuple(jump_times), horizon))
