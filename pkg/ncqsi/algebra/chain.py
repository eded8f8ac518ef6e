"""Tensor-chain matrix algebras.

The algebra A is the full matrix algebra M_{d_1} (x) ... (x) M_{d_n} acting on
C^N, N = d_1 ... d_n. Every algebra member, GNS vector and martingale value is
an ``Element``: a dense N x N complex matrix tagged with its chain shape.
"""

# standard imports
from dataclasses import dataclass
from functools import reduce
from numbers import Number
from typing import Sequence, Union

# third party imports
import numpy as np
import scipy.linalg
from numpy.typing import ArrayLike, NDArray

# ncqsi imports
from ncqsi.algebra.constants import COMPLEX, TOL_EQ, TOL_PSD
from ncqsi.algebra.exceptions import (
    FactorIndexError,
    InvalidShapeError,
    NotHermitianError,
    ShapeMismatchError,
)

Matrix = NDArray[np.complex128]


@dataclass(frozen=True)
class ChainShape:
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if len(dims) == 0 or any(d < 2 for d in dims):
            raise InvalidShapeError(dims)
        object.__setattr__(self, "factor_dims", dims)

    @property
    def n_factors(self) -> int:
        return len(self.factor_dims)

    @property
    def acting_dim(self) -> int:
        return int(np.prod(self.factor_dims))

    def head_dim(self, level: int) -> int:
        """Dimension of the first ``level`` factors (1 for level 0)."""
        return int(np.prod(self.factor_dims[:level], dtype=int))

    def tail_dim(self, level: int) -> int:
        return int(np.prod(self.factor_dims[level:], dtype=int))


@dataclass(frozen=True, eq=False)
class Element:
    shape: ChainShape
    entries: Matrix

    def __post_init__(self):
        entries = np.array(self.entries, dtype=COMPLEX)
        n = self.shape.acting_dim
        if entries.shape != (n, n):
            raise ShapeMismatchError((n, n), entries.shape)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def identity(cls, shape: ChainShape) -> "Element":
        return cls(shape, np.eye(shape.acting_dim, dtype=COMPLEX))

    @classmethod
    def zeros(cls, shape: ChainShape) -> "Element":
        n = shape.acting_dim
        return cls(shape, np.zeros((n, n), dtype=COMPLEX))

    @property
    def dim(self) -> int:
        return self.shape.acting_dim

    def adjoint(self) -> "Element":
        return Element(self.shape, self.entries.conj().T)

    @property
    def dag(self) -> "Element":
        return self.adjoint()

    def scale(self) -> float:
        """Matrix scale used by relative tolerances: max(1, max|x_ij|)."""
        return max(1.0, float(np.max(np.abs(self.entries))))

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def is_hermitian(self, tol: float = TOL_EQ) -> bool:
        return self.hermitian_defect() <= tol * self.scale()

    def max_abs_diff(self, other: "Element") -> float:
        self._check_same_shape(other)
        return float(np.max(np.abs(self.entries - other.entries)))

    def allclose(self, other: "Element", tol: float = TOL_EQ) -> bool:
        return self.max_abs_diff(other) <= tol * max(self.scale(), other.scale())

    def _check_same_shape(self, other: "Element"):
        if other.shape != self.shape:
            raise ShapeMismatchError(self.shape.factor_dims, other.shape.factor_dims)

    def __add__(self, other: "Element") -> "Element":
        self._check_same_shape(other)
        return Element(self.shape, self.entries + other.entries)

    def __sub__(self, other: "Element") -> "Element":
        self._check_same_shape(other)
        return Element(self.shape, self.entries - other.entries)

    def __neg__(self) -> "Element":
        return Element(self.shape, -self.entries)

    def __mul__(self, scalar: Number) -> "Element":
        if not isinstance(scalar, Number):
            return NotImplemented
        return Element(self.shape, self.entries * complex(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other: "Element") -> "Element":
        self._check_same_shape(other)
        return Element(self.shape, self.entries @ other.entries)

    def __repr__(self) -> str:
        return f"Element(shape={list(self.shape.factor_dims)}, entries=\n{self.entries})"


def kron_all(factors: Sequence[ArrayLike]) -> Matrix:
    return reduce(np.kron, [np.asarray(f, dtype=COMPLEX) for f in factors])


def embed_factor(a: ArrayLike, k: int, shape: ChainShape) -> Element:
    """Return 1 (x) ... (x) a (x) ... (x) 1 with ``a`` in slot ``k`` (1-based)."""
    if not 1 <= k <= shape.n_factors:
        raise FactorIndexError(k, shape.n_factors)

    a = np.asarray(a, dtype=COMPLEX)
    d_k = shape.factor_dims[k - 1]
    if a.shape != (d_k, d_k):
        raise ShapeMismatchError((d_k, d_k), a.shape)

    factors = [np.eye(d, dtype=COMPLEX) for d in shape.factor_dims]
    factors[k - 1] = a
    return Element(shape, kron_all(factors))


def embed_head(a: ArrayLike, level: int, shape: ChainShape) -> Element:
    """Return a (x) 1 where ``a`` acts on the first ``level`` factors."""
    a = np.asarray(a, dtype=COMPLEX)
    d_head = shape.head_dim(level)
    if a.shape != (d_head, d_head):
        raise ShapeMismatchError((d_head, d_head), a.shape)
    return Element(shape, np.kron(a, np.eye(shape.tail_dim(level), dtype=COMPLEX)))


def _as_matrix(x: Union[Element, ArrayLike]) -> Matrix:
    if isinstance(x, Element):
        return x.entries
    return np.asarray(x, dtype=COMPLEX)


def operator_norm(x: Union[Element, ArrayLike], tol: float = TOL_EQ) -> float:
    """Largest singular value; hermitian input goes through a Hermitian eigensolver."""
    m = _as_matrix(x)
    if m.size == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(m))))
    if float(np.max(np.abs(m - m.conj().T))) <= tol * scale:
        hermitian = (m + m.conj().T) / 2
        return float(np.max(np.abs(scipy.linalg.eigvalsh(hermitian))))

    gram = m.conj().T @ m
    top = float(scipy.linalg.eigvalsh((gram + gram.conj().T) / 2)[-1])
    return float(np.sqrt(max(top, 0.0)))


def min_eigenvalue(x: Union[Element, ArrayLike]) -> float:
    m = _as_matrix(x)
    return float(scipy.linalg.eigvalsh((m + m.conj().T) / 2)[0])


def psd_check(x: Union[Element, ArrayLike], tol: float = TOL_PSD) -> bool:
    """True iff min eigenvalue >= -tol * max(1, ||x||)."""
    m = _as_matrix(x)
    scale = max(1.0, float(np.max(np.abs(m))))
    defect = float(np.max(np.abs(m - m.conj().T)))
    if defect > tol * scale:
        raise NotHermitianError(defect, tol * scale)
    return min_eigenvalue(m) >= -tol * max(1.0, operator_norm(m))


def matrix_to_json(a: Union[Element, ArrayLike]) -> list[list[list[float]]]:
    """Row-major array of [re, im] pairs."""
    m = _as_matrix(a)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data) -> Matrix:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(
            f"Expected a square row-major array of [re, im] pairs, got shape {arr.shape}"
        )
    return (arr[..., 0] + 1j * arr[..., 1]).astype(COMPLEX)
