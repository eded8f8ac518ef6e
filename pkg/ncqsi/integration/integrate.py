"""Refinement engines for the left and right stochastic integrals.

``integrate`` follows the mesh limit along dyadic partitions, ``integrate_net``
follows the refinement net by one-point refinements of the jump-carrying
subintervals, and ``oracle_integral`` is the closed form on a finite chain:
sum over jump times s_j in (a, b] of f(s_j-) M_j (right) or M_j f(s_j-) (left),
with M_j = X(s_j) - X(s_j-).
"""

# standard imports
import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

# third party imports
import numpy as np
from loguru import logger

# ncqsi imports
from ncqsi.algebra.chain import Element
from ncqsi.algebra.constants import TOL_EQ
from ncqsi.algebra.exceptions import TimeOutOfRangeError
from ncqsi.algebra.process import Process, certify
from ncqsi.algebra.state import gns_norm, state_value
from ncqsi.integration.constants import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_TOL_CONV,
    DIAGNOSTICS_HEADER,
    Side,
)
from ncqsi.integration.exceptions import InvalidPartitionError, MartingaleDefectError
from ncqsi.integration.partition import DyadicPartition, Partition
from ncqsi.integration.sums import integral_sum


@dataclass
class DiagnosticRow:
    depth: int
    mesh: float
    points: int
    successive_gap_H: float
    gap_to_oracle_H: float

    def as_csv_row(self) -> list[str]:
        return [
            str(self.depth),
            format(self.mesh, ".17g"),
            str(self.points),
            format(self.successive_gap_H, ".17g"),
            format(self.gap_to_oracle_H, ".17g"),
        ]


@dataclass
class IntegralResult:
    """Value of int_a^b f dX (right) or int_a^b dX f (left) with its convergence table.

    Row j describes theta_j; its successive gap is ||(S_{theta_{j+1}} - S_{theta_j}) Omega||_H.
    Convergence is declared on the first row whose successive gap is within
    ``tol_conv`` and whose following sum is within ``tol_conv`` of the closed form.
    ``value`` is the sum over the partition following the last row and
    ``oracle_gap`` its distance to the closed form.
    """

    value: Element
    side: Side
    interval: tuple[float, float]
    diagnostics: list[DiagnosticRow] = field(default_factory=list)
    converged: bool = False
    tol_conv: float = DEFAULT_TOL_CONV
    oracle_gap: float = np.nan

    @property
    def last_successive_gap(self) -> float:
        return self.diagnostics[-1].successive_gap_H if self.diagnostics else np.nan

    def write_csv(self, path: Path):
        write_diagnostics_csv(self.diagnostics, path)


def write_diagnostics_csv(rows: Sequence[DiagnosticRow], path: Path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(DIAGNOSTICS_HEADER)
        for row in rows:
            writer.writerow(row.as_csv_row())


def h_gap(x: Element, y: Element, X: Process) -> float:
    """||(x - y) Omega||_H."""
    return gns_norm(x - y, X.filtration.state)


def _check_interval(X: Process, a: float, b: float):
    if not 0 <= a <= b <= X.horizon:
        raise TimeOutOfRangeError(f"[{a}, {b}]", 0, X.horizon)


def jump_increment(X: Process, s: float) -> Element:
    """M = X(s) - X(s-)."""
    return X.eval(s) - X.left_limit(s)


def oracle_integral(f: Process, X: Process, a: float, b: float, side: Side = Side.RIGHT) -> Element:
    _check_interval(X, a, b)
    total = Element.zeros(X.shape)
    for j in X.filtration.schedule.jumps_in(a, b):
        s = X.filtration.jump_times[j - 1]
        f_before = f.left_limit(s)
        m = jump_increment(X, s)
        total = total + (f_before @ m if side is Side.RIGHT else m @ f_before)
    return total


def _precheck(f: Process, X: Process, a: float, b: float):
    jumps = [s for s in X.filtration.jump_times if a <= s <= b]
    grid = sorted({a, b, (a + b) / 2, *jumps})
    x_cert = certify(X, grid)
    if not x_cert.martingale:
        logger.warning(
            f"integrate: integrator {X.kind.value} failed martingale certification "
            f"(defect {x_cert.martingale_defect:.3e})"
        )
    f_cert = certify(f, grid)
    if not f_cert.adapted:
        logger.warning(
            f"integrate: integrand {f.kind.value} failed adaptedness certification "
            f"(defect {f_cert.adapted_defect:.3e})"
        )


def _run_engine(
    partitions,
    f: Process,
    X: Process,
    a: float,
    b: float,
    side: Side,
    tol_conv: float,
    max_depth: int,
) -> IntegralResult:
    oracle = oracle_integral(f, X, a, b, side)
    theta = next(partitions)
    current = integral_sum(theta, f, X, side)
    rows: list[DiagnosticRow] = []
    converged = False

    for depth in range(max_depth + 1):
        finer = next(partitions)
        following = integral_sum(finer, f, X, side)
        row = DiagnosticRow(
            depth=depth,
            mesh=theta.mesh,
            points=theta.n_points,
            successive_gap_H=h_gap(following, current, X),
            gap_to_oracle_H=h_gap(current, oracle, X),
        )
        rows.append(row)
        logger.debug(
            f"integrate: depth={row.depth} mesh={row.mesh:.3e} points={row.points} "
            f"successive={row.successive_gap_H:.3e} oracle={row.gap_to_oracle_H:.3e}"
        )
        theta, current = finer, following
        # a zero gap only means f did not move between the two partitions
        if row.successive_gap_H <= tol_conv and h_gap(current, oracle, X) <= tol_conv:
            converged = True
            break

    result = IntegralResult(
        value=current,
        side=side,
        interval=(a, b),
        diagnostics=rows,
        converged=converged,
        tol_conv=tol_conv,
        oracle_gap=h_gap(current, oracle, X),
    )
    if not converged:
        logger.warning(
            f"integrate: no convergence on [{a}, {b}] ({side.value}) within depth {max_depth}; "
            f"last successive gap {result.last_successive_gap:.3e} > {tol_conv:.1e}"
        )
    return result


def integrate(
    f: Process,
    X: Process,
    a: float,
    b: float,
    side: Side = Side.RIGHT,
    tol_conv: float = DEFAULT_TOL_CONV,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> IntegralResult:
    """Dyadic mesh limit lim_{||theta|| -> 0} S_theta starting from {a, b}."""
    _check_interval(X, a, b)
    if a == b:
        raise InvalidPartitionError(f"empty interval [{a}, {b}]")
    _precheck(f, X, a, b)

    def dyadic():
        theta = DyadicPartition(a, b, 0)
        while True:
            yield theta
            theta = theta.refine_dyadic()

    return _run_engine(dyadic(), f, X, a, b, side, tol_conv, max_depth)


def integrate_net(
    f: Process,
    X: Process,
    a: float,
    b: float,
    side: Side = Side.RIGHT,
    tol_conv: float = DEFAULT_TOL_CONV,
    max_rounds: int = DEFAULT_MAX_DEPTH,
) -> IntegralResult:
    """Refinement-net limit: each round one-point refines every jump-carrying subinterval."""
    _check_interval(X, a, b)
    if a == b:
        raise InvalidPartitionError(f"empty interval [{a}, {b}]")
    _precheck(f, X, a, b)
    schedule = X.filtration.schedule

    def net():
        theta = Partition([a, b])
        while True:
            yield theta
            for lo, hi in theta.level_crossings(schedule):
                theta = theta.refine_one_point((lo + hi) / 2)

    return _run_engine(net(), f, X, a, b, side, tol_conv, max_rounds)


def integral_process(
    f: Process, X: Process, side: Side, grid: Sequence[float]
) -> list[tuple[float, Element]]:
    """Y(t) = int_0^t dX f (left) or Z(t) = int_0^t f dX (right) on the grid."""
    return [(float(t), oracle_integral(f, X, 0.0, float(t), side)) for t in grid]


def mu_increment(X: Process, a: float, b: float, tol: float = TOL_EQ) -> float:
    """mu((a, b]) = omega(|X(b) - X(a)|^2) = omega(|X(b)|^2) - omega(|X(a)|^2)."""
    _check_interval(X, a, b)
    state = X.filtration.state
    xa, xb = X.eval(a), X.eval(b)
    d = xb - xa
    increment_form = state_value(d.adjoint() @ d, state).real
    difference_form = (
        state_value(xb.adjoint() @ xb, state).real - state_value(xa.adjoint() @ xa, state).real
    )
    scale = max(1.0, abs(increment_form), abs(difference_form))
    if abs(increment_form - difference_form) > tol * scale:
        raise MartingaleDefectError(a, b, increment_form, difference_form)
    return difference_form


@dataclass
class CauchyGap:
    between: float
    first_to_union: float
    second_to_union: float


def cauchy_pair_gap(
    theta_1: Partition, theta_2: Partition, f: Process, X: Process, side: Side = Side.RIGHT
) -> CauchyGap:
    """||(S_1 - S_2) Omega||_H and the two gaps against theta_1 u theta_2."""
    union = theta_1.union(theta_2)
    s1 = integral_sum(theta_1, f, X, side)
    s2 = integral_sum(theta_2, f, X, side)
    su = integral_sum(union, f, X, side)
    return CauchyGap(
        between=h_gap(s1, s2, X),
        first_to_union=h_gap(su, s1, X),
        second_to_union=h_gap(su, s2, X),
    )


def commutant_action(S: Element, y: Element) -> Element:
    """Action of S on the commutant vector x' Omega with x' = R_y: S y Omega."""
    return S @ y
