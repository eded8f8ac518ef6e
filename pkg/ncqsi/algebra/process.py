"""Adapted processes f and martingales X on a finite filtration.

Every process is an immutable description evaluated exactly: martingales are
generated from a terminal element, monotone and norm-continuous processes are
built from piecewise-linear ramps, and the spectral step process is the
projection-valued family of a hermitian generator.
"""

# standard imports
import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence

# third party imports
import numpy as np
import scipy.linalg
from loguru import logger

# ncqsi imports
from ncqsi.algebra.chain import Element, min_eigenvalue, operator_norm, psd_check
from ncqsi.algebra.constants import TOL_EQ, TOL_PSD, ProcessKind
from ncqsi.algebra.exceptions import (
    InvalidRampError,
    NotAdaptedError,
    NotHermitianError,
    NotPositiveError,
    ProcessKindError,
    ShapeMismatchError,
    TimeOutOfRangeError,
)
from ncqsi.algebra.filtration import Filtration
from ncqsi.algebra.ramps import RampTable


class Process(ABC):
    kind: ProcessKind

    def __init__(self, filtration: Filtration):
        self.filtration = filtration

    @property
    def shape(self):
        return self.filtration.shape

    @property
    def horizon(self) -> float:
        return self.filtration.horizon

    @property
    def is_level_constant(self) -> bool:
        """True when the value depends on t only through level(t)."""
        return False

    @abstractmethod
    def _value(self, t: float) -> Element: ...

    def _left_value(self, t: float) -> Element:
        return self._value(t)

    @abstractmethod
    def adjoint(self) -> "Process": ...

    def eval(self, t: float) -> Element:
        self.filtration.schedule.check_time(t)
        return self._value(t)

    def left_limit(self, t: float) -> Element:
        """lim_{u -> t-} eval(u), computed analytically."""
        if not 0 < t <= self.horizon:
            raise TimeOutOfRangeError(t, "0 (exclusive)", self.horizon)
        return self._left_value(t)

    def _check_in_level(self, x: Element, t: float, what: str):
        level = self.filtration.level_of(t)
        if not self.filtration.is_in_level(x, level):
            raise NotAdaptedError(what, level, self.filtration.adaptedness_defect(x, level))


class MartingaleFromTerminal(Process):
    """X(t) = E_t(X_T)."""

    kind = ProcessKind.MARTINGALE_FROM_TERMINAL

    def __init__(self, filtration: Filtration, terminal: Element):
        super().__init__(filtration)
        if terminal.shape != filtration.shape:
            raise ShapeMismatchError(filtration.shape.factor_dims, terminal.shape.factor_dims)
        self.terminal = terminal
        self._by_level = tuple(
            filtration.cond_expect_level(terminal, level)
            for level in range(filtration.shape.n_factors + 1)
        )

    @property
    def is_level_constant(self) -> bool:
        return True

    def _value(self, t: float) -> Element:
        return self._by_level[self.filtration.level_of(t)]

    def _left_value(self, t: float) -> Element:
        return self._by_level[self.filtration.schedule.level_before(t)]

    def adjoint(self) -> "MartingaleFromTerminal":
        return MartingaleFromTerminal(self.filtration, self.terminal.adjoint())


class Constant(Process):
    kind = ProcessKind.CONSTANT

    def __init__(self, filtration: Filtration, c: Element):
        super().__init__(filtration)
        self._check_in_level(c, 0.0, "constant")
        self.c = c

    @property
    def is_level_constant(self) -> bool:
        return True

    def _value(self, t: float) -> Element:
        return self.c

    def adjoint(self) -> "Constant":
        return Constant(self.filtration, self.c.adjoint())


@dataclass(frozen=True, eq=False)
class Increment:
    """A PSD increment g switched on by a nondecreasing [0, 1] ramp after ``time``."""

    time: float
    g: Element
    ramp: RampTable


class MonotoneAdapted(Process):
    """f(t) = base + sum_j h_j(t) g_j, increasing in the operator order."""

    kind = ProcessKind.MONOTONE_ADAPTED

    def __init__(
        self,
        filtration: Filtration,
        base: Element,
        increments: Sequence[Increment],
        tol: float = TOL_PSD,
    ):
        super().__init__(filtration)
        if not base.is_hermitian(tol):
            raise NotHermitianError(base.hermitian_defect(), tol)
        self._check_in_level(base, 0.0, "base")

        for inc in increments:
            if not inc.ramp.is_nondecreasing():
                raise InvalidRampError(f"ramp after {inc.time} is not nondecreasing")
            if min(inc.ramp.values) < 0 or max(inc.ramp.values) > 1:
                raise InvalidRampError(f"ramp after {inc.time} leaves [0, 1]")
            if not inc.ramp.vanishes_until(inc.time):
                raise InvalidRampError(f"ramp does not vanish up to {inc.time}")
            if not psd_check(inc.g, tol):
                raise NotPositiveError(f"increment at {inc.time}", min_eigenvalue(inc.g))
            self._check_in_level(inc.g, inc.time, f"increment at {inc.time}")

        self.base = base
        self.increments = tuple(increments)

    def _value(self, t: float) -> Element:
        value = self.base
        for inc in self.increments:
            weight = inc.ramp(t)
            if weight != 0.0:
                value = value + weight * inc.g
        return value

    def adjoint(self) -> "MonotoneAdapted":
        return self


@dataclass(frozen=True, eq=False)
class Term:
    """a * h(t) with h Lipschitz and h(t) = 0 for t <= time.

    ``lipschitz`` is the declared constant; when omitted the exact constant of
    the profile table is used.
    """

    time: float
    a: Element
    profile: RampTable
    lipschitz: Optional[float] = None

    @property
    def lipschitz_constant(self) -> float:
        return self.profile.lipschitz if self.lipschitz is None else float(self.lipschitz)


class NormContinuousAdapted(Process):
    """f(t) = sum_j h_j(t) a_j."""

    kind = ProcessKind.NORM_CONTINUOUS_ADAPTED

    def __init__(self, filtration: Filtration, terms: Sequence[Term]):
        super().__init__(filtration)
        for term in terms:
            if not term.profile.vanishes_until(term.time):
                raise InvalidRampError(f"profile does not vanish up to {term.time}")
            self._check_in_level(term.a, term.time, f"term at {term.time}")
            if term.lipschitz is not None and term.lipschitz < term.profile.lipschitz:
                logger.warning(
                    f"NormContinuousAdapted.__init__: term at {term.time} declares Lipschitz "
                    f"constant {term.lipschitz:.6g} below its profile slope "
                    f"{term.profile.lipschitz:.6g}; modulus_delta will not bound the increments"
                )
        self.terms = tuple(terms)

    def _value(self, t: float) -> Element:
        value = Element.zeros(self.shape)
        for term in self.terms:
            weight = term.profile(t)
            if weight != 0.0:
                value = value + weight * term.a
        return value

    def modulus_delta(self, eps: float) -> float:
        """delta with ||f(t') - f(t'')|| <= eps whenever |t' - t''| <= delta."""
        if eps <= 0:
            raise ValueError(f"eps must be positive, got {eps}")
        bound = sum(term.lipschitz_constant * operator_norm(term.a) for term in self.terms)
        if bound == 0:
            return np.inf
        return eps / bound

    def adjoint(self) -> "NormContinuousAdapted":
        return NormContinuousAdapted(
            self.filtration,
            [Term(t.time, t.a.adjoint(), t.profile, t.lipschitz) for t in self.terms],
        )


def modulus_delta(p: Process, eps: float) -> float:
    if not isinstance(p, NormContinuousAdapted):
        raise ProcessKindError("modulus_delta", p.kind.value)
    return p.modulus_delta(eps)


@dataclass(frozen=True, eq=False)
class SpectralCluster:
    eigenvalue: float
    projection: Element
    jump_time: Optional[float]  # -inf: present from the start; None: never reached


class SpectralStep(Process):
    """f(t) = sum of spectral projections of the generator with eigenvalue <= phi(t).

    Eigenvalues within ``tol`` of a knot value of phi are snapped to it, so a
    jump lands exactly on that knot's time.
    """

    kind = ProcessKind.SPECTRAL_STEP

    def __init__(
        self,
        filtration: Filtration,
        generator: Element,
        threshold: RampTable,
        tol: float = TOL_EQ,
    ):
        super().__init__(filtration)
        if not generator.is_hermitian(tol):
            raise NotHermitianError(generator.hermitian_defect(), tol)
        if not threshold.is_nondecreasing():
            raise InvalidRampError("threshold map is not nondecreasing")

        self.generator = generator
        self.threshold = threshold
        self.clusters = self._cluster(generator, threshold, tol)

        for when in [0.0, *self.spectral_jump_times()]:
            self._check_in_level(self._value(when), when, f"spectral step value at {when}")

    @staticmethod
    def _cluster(generator: Element, threshold: RampTable, tol: float) -> tuple[SpectralCluster, ...]:
        h = generator.entries
        eigenvalues, vectors = scipy.linalg.eigh((h + h.conj().T) / 2)
        scale = max(1.0, float(np.max(np.abs(eigenvalues))))

        groups: list[list[int]] = []
        for i, lam in enumerate(eigenvalues):
            if groups and abs(lam - eigenvalues[groups[-1][-1]]) <= tol * scale:
                groups[-1].append(i)
            else:
                groups.append([i])

        clusters = []
        for idx in groups:
            lam = float(np.mean(eigenvalues[idx]))
            for knot in threshold.values:
                if abs(lam - knot) <= tol * scale:
                    lam = knot
                    break
            v = vectors[:, idx]
            projection = Element(generator.shape, v @ v.conj().T)
            clusters.append(SpectralCluster(lam, projection, threshold.first_reach(lam)))
        return tuple(clusters)

    def spectral_jump_times(self) -> list[float]:
        """Times in (0, T] at which a new spectral projection switches on."""
        return sorted(
            {
                c.jump_time
                for c in self.clusters
                if c.jump_time is not None and 0 < c.jump_time <= self.horizon
            }
        )

    def _sum(self, include) -> Element:
        value = Element.zeros(self.shape)
        for c in self.clusters:
            if c.jump_time is not None and include(c.jump_time):
                value = value + c.projection
        return value

    def _value(self, t: float) -> Element:
        return self._sum(lambda tau: tau <= t)

    def _left_value(self, t: float) -> Element:
        return self._sum(lambda tau: tau < t)

    def adjoint(self) -> "SpectralStep":
        return self


@dataclass
class ProcessCertificate:
    adapted: bool
    hermitian: bool
    monotone: bool
    martingale: bool
    adapted_defect: float = 0.0
    hermitian_defect: float = 0.0
    monotone_defect: float = 0.0
    martingale_defect: float = 0.0


def certify(p: Process, grid: Sequence[float], tol: float = TOL_EQ) -> ProcessCertificate:
    """Check adaptedness, hermiticity, monotonicity and the martingale property on a grid."""
    flt = p.filtration
    times = sorted(set(float(t) for t in grid))
    values = {t: p.eval(t) for t in times}

    adapted_defect = 0.0
    hermitian_defect = 0.0
    for t, x in values.items():
        adapted_defect = max(
            adapted_defect, flt.adaptedness_defect(x, flt.level_of(t)) / x.scale()
        )
        hermitian_defect = max(hermitian_defect, x.hermitian_defect() / x.scale())

    monotone = True
    monotone_defect = 0.0
    martingale_defect = 0.0
    for s, t in itertools.combinations(times, 2):
        diff = values[t] - values[s]
        try:
            if not psd_check(diff, tol):
                monotone = False
                monotone_defect = max(monotone_defect, -min_eigenvalue(diff))
        except NotHermitianError:
            monotone = False
            monotone_defect = max(monotone_defect, diff.hermitian_defect())

        projected = flt.cond_expect(values[t], s)
        martingale_defect = max(
            martingale_defect, projected.max_abs_diff(values[s]) / values[t].scale()
        )

    certificate = ProcessCertificate(
        adapted=adapted_defect <= tol,
        hermitian=hermitian_defect <= tol,
        monotone=monotone,
        martingale=martingale_defect <= tol,
        adapted_defect=adapted_defect,
        hermitian_defect=hermitian_defect,
        monotone_defect=monotone_defect,
        martingale_defect=martingale_defect,
    )
    logger.debug(f"certify: {p.kind.value} on {len(times)} grid points -> {certificate}")
    return certificate
