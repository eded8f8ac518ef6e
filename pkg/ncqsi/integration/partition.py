# standard imports
from typing import Iterator, Sequence, Union

# third party imports
import numpy as np

# ncqsi imports
from ncqsi.algebra.filtration import FiltrationSchedule
from ncqsi.integration.exceptions import InvalidPartitionError, RefinementError


class Partition:
    """theta = {a = t_0 < t_1 < ... < t_m = b}."""

    def __init__(self, points: Sequence[float]):
        pts = np.array(points, dtype=float)
        if pts.ndim != 1 or pts.size < 2:
            raise InvalidPartitionError("need at least the two endpoints")
        if not np.all(np.isfinite(pts)):
            raise InvalidPartitionError("points must be finite")
        if np.any(np.diff(pts) <= 0):
            raise InvalidPartitionError("points are not strictly increasing")
        pts.setflags(write=False)
        self._points = pts

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def a(self) -> float:
        return float(self.points[0])

    @property
    def b(self) -> float:
        return float(self.points[-1])

    @property
    def n_points(self) -> int:
        return int(self.points.size)

    @property
    def n_intervals(self) -> int:
        return self.n_points - 1

    @property
    def mesh(self) -> float:
        return float(np.max(np.diff(self.points)))

    def point(self, k: int) -> float:
        return float(self.points[k])

    def bracket(self, s: float) -> int:
        """Index k of the subinterval (t_{k-1}, t_k] containing s in (a, b]."""
        if not self.a < s <= self.b:
            raise InvalidPartitionError(f"{s} is not in ({self.a}, {self.b}]")
        return int(np.searchsorted(self.points, s, side="left"))

    def subintervals(self) -> Iterator[tuple[float, float]]:
        pts = self.points
        for k in range(1, pts.size):
            yield float(pts[k - 1]), float(pts[k])

    def level_crossings(self, schedule: FiltrationSchedule) -> list[tuple[float, float]]:
        """Subintervals (t_{k-1}, t_k] whose endpoints sit in different filtration levels."""
        ks = sorted({self.bracket(s) for s in schedule.jump_times if self.a < s <= self.b})
        return [(self.point(k - 1), self.point(k)) for k in ks]

    def contains(self, t: float) -> bool:
        k = int(np.searchsorted(self.points, t))
        return k < self.n_points and self.points[k] == t

    def refine_dyadic(self) -> "Partition":
        pts = self.points
        refined = np.empty(2 * pts.size - 1)
        refined[::2] = pts
        refined[1::2] = (pts[:-1] + pts[1:]) / 2
        return Partition(refined)

    def refine_one_point(self, t: float) -> "Partition":
        if not self.a < t < self.b or self.contains(t):
            raise RefinementError(t, self.a, self.b)
        return Partition(np.insert(self.points, np.searchsorted(self.points, t), t))

    def refine(self, mode: str = "dyadic", t: Union[float, None] = None) -> "Partition":
        if mode == "dyadic":
            return self.refine_dyadic()
        if mode == "one_point":
            if t is None:
                raise RefinementError(t, self.a, self.b)
            return self.refine_one_point(t)
        raise ValueError(f"Unknown refinement mode: {mode}")

    def union(self, other: "Partition") -> "Partition":
        if (self.a, self.b) != (other.a, other.b):
            raise InvalidPartitionError("partitions of different intervals")
        return Partition(np.union1d(self.points, other.points))

    def is_refinement_of(self, other: "Partition") -> bool:
        return bool(np.all(np.isin(other.points, self.points)))

    def __repr__(self) -> str:
        return f"Partition([{self.a}, {self.b}], points={self.n_points}, mesh={self.mesh:.3g})"


class DyadicPartition(Partition):
    """The depth-d dyadic partition of [a, b], with points computed on demand.

    Deep partitions have 2^d + 1 points; sums over martingale integrators only
    touch the subintervals that cross a jump time, so the points array is only
    materialized when explicitly requested.
    """

    def __init__(self, a: float, b: float, depth: int = 0):
        if not b > a:
            raise InvalidPartitionError(f"empty interval [{a}, {b}]")
        if depth < 0:
            raise InvalidPartitionError(f"negative depth {depth}")
        self._a = float(a)
        self._b = float(b)
        self.depth = int(depth)
        self._m = 2**self.depth
        self._points = None

    @property
    def points(self) -> np.ndarray:
        if self._points is None:
            pts = self._a + np.arange(self._m + 1) * (self._b - self._a) / self._m
            pts[-1] = self._b
            pts.setflags(write=False)
            self._points = pts
        return self._points

    @property
    def a(self) -> float:
        return self._a

    @property
    def b(self) -> float:
        return self._b

    @property
    def n_points(self) -> int:
        return self._m + 1

    @property
    def mesh(self) -> float:
        return (self._b - self._a) / self._m

    def point(self, k: int) -> float:
        if k == self._m:
            return self._b
        return self._a + k * (self._b - self._a) / self._m

    def bracket(self, s: float) -> int:
        if not self._a < s <= self._b:
            raise InvalidPartitionError(f"{s} is not in ({self._a}, {self._b}]")
        k = int(np.ceil((s - self._a) / self.mesh))
        k = min(max(k, 1), self._m)
        while k > 1 and self.point(k - 1) >= s:
            k -= 1
        while k < self._m and self.point(k) < s:
            k += 1
        return k

    def contains(self, t: float) -> bool:
        if not self._a <= t <= self._b:
            return False
        if t == self._a:
            return True
        return self.point(self.bracket(t)) == t

    def refine_dyadic(self) -> "DyadicPartition":
        return DyadicPartition(self._a, self._b, self.depth + 1)

    def __repr__(self) -> str:
        return f"DyadicPartition([{self._a}, {self._b}], depth={self.depth})"
