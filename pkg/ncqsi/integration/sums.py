"""Integral sums S_theta^r, S_theta^l and the operator sum sigma_theta^r.

A martingale on a finite chain is constant between jump times, so for level
constant integrators only the subintervals crossing a jump contribute; the sums
below visit exactly those and are therefore exact for any depth of partition.
"""

# standard imports
from typing import Iterable

# third party imports
import numpy as np
from loguru import logger

# ncqsi imports
from ncqsi.algebra.chain import Element
from ncqsi.algebra.exceptions import ShapeMismatchError, TimeOutOfRangeError
from ncqsi.algebra.filtration import GnsOperator
from ncqsi.algebra.process import Process
from ncqsi.integration.constants import Side
from ncqsi.integration.partition import Partition


def _check_operands(theta: Partition, f: Process, X: Process):
    if f.shape != X.shape:
        raise ShapeMismatchError(X.shape.factor_dims, f.shape.factor_dims)
    if theta.a < 0 or theta.b > X.horizon:
        raise TimeOutOfRangeError(f"[{theta.a}, {theta.b}]", 0, X.horizon)


def contributing_intervals(theta: Partition, X: Process) -> Iterable[tuple[float, float]]:
    if X.is_level_constant:
        return theta.level_crossings(X.filtration.schedule)
    logger.warning(
        f"contributing_intervals: integrator of kind {X.kind.value} is not a certified "
        f"martingale; summing all {theta.n_intervals} subintervals"
    )
    return theta.subintervals()


def integral_sum(theta: Partition, f: Process, X: Process, side: Side) -> Element:
    _check_operands(theta, f, X)
    total = Element.zeros(X.shape)
    for lo, hi in contributing_intervals(theta, X):
        dx = X.eval(hi) - X.eval(lo)
        if side is Side.RIGHT:
            total = total + f.eval(lo) @ dx
        else:
            total = total + dx @ f.eval(lo)
    return total


def right_sum(theta: Partition, f: Process, X: Process) -> Element:
    """S_theta^r = sum_k f(t_{k-1}) [X(t_k) - X(t_{k-1})]."""
    return integral_sum(theta, f, X, Side.RIGHT)


def left_sum(theta: Partition, f: Process, X: Process) -> Element:
    """S_theta^l = sum_k [X(t_k) - X(t_{k-1})] f(t_{k-1})."""
    return integral_sum(theta, f, X, Side.LEFT)


def sigma_operator(theta: Partition, f: Process) -> GnsOperator:
    """sigma_theta^r = sum_k f(t_{k-1}) (P_{t_k} - P_{t_{k-1}}) on the GNS space."""
    flt = f.filtration
    gns = flt.gns
    total = np.zeros((gns.dim, gns.dim), dtype=complex)
    for lo, hi in theta.level_crossings(flt.schedule):
        total = total + gns.left_mult(f.eval(lo)) @ flt.projection_increment(lo, hi)
    return total
