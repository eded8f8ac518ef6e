# standard imports
from dataclasses import dataclass
from typing import Optional, Sequence

# third party imports
import numpy as np

# ncqsi imports
from ncqsi.algebra.exceptions import InvalidRampError


@dataclass(frozen=True, eq=False)
class RampTable:
    """Piecewise-linear function given by knots [(t, value)], constant outside the knots."""

    times: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        values = tuple(float(v) for v in self.values)
        if len(times) == 0 or len(times) != len(values):
            raise InvalidRampError("need a non-empty table with one value per knot")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InvalidRampError(f"knot times {list(times)} are not strictly increasing")
        if not all(np.isfinite(times)) or not all(np.isfinite(values)):
            raise InvalidRampError("knots must be finite")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "RampTable":
        if len(pairs) == 0:
            raise InvalidRampError("empty table")
        times, values = zip(*((p[0], p[1]) for p in pairs))
        return cls(tuple(times), tuple(values))

    @classmethod
    def linear(cls, start: float, end: float, low: float = 0.0, high: float = 1.0) -> "RampTable":
        return cls((start, end), (low, high))

    def __call__(self, t: float) -> float:
        return float(np.interp(t, self.times, self.values))

    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.times)

    @property
    def lipschitz(self) -> float:
        """Exact Lipschitz constant: the largest absolute segment slope."""
        if len(self.times) < 2:
            return 0.0
        return float(np.max(np.abs(self.slopes())))

    def is_nondecreasing(self) -> bool:
        return all(b >= a for a, b in zip(self.values, self.values[1:]))

    def vanishes_until(self, s: float) -> bool:
        """h(t) = 0 for every t <= s."""
        knots_before = [v for t, v in zip(self.times, self.values) if t <= s]
        return all(v == 0.0 for v in knots_before) and self(s) == 0.0

    def first_reach(self, level: float) -> Optional[float]:
        """Smallest t with h(t) >= level for a nondecreasing table.

        Returns -inf when the level is already reached before the first knot and
        None when it is never reached.
        """
        if self.values[0] >= level:
            return -np.inf
        for (t0, v0), (t1, v1) in zip(
            zip(self.times, self.values), zip(self.times[1:], self.values[1:])
        ):
            if v1 == level:
                return t1
            if v1 >= level:
                return t0 + (level - v0) * (t1 - t0) / (v1 - v0)
        return None
