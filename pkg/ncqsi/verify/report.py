# standard imports
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence


@dataclass
class Measurement:
    """One checked quantity; it fails when ``residual > tolerance``."""

    quantity: str
    residual: float
    tolerance: float

    @property
    def excess(self) -> float:
        return self.residual - self.tolerance

    @property
    def failed(self) -> bool:
        return not self.residual <= self.tolerance


@dataclass
class Failure:
    seed: int
    quantity: str
    magnitude: float
    tolerance: float

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "quantity": self.quantity,
            "magnitude": float(self.magnitude),
            "tolerance": float(self.tolerance),
        }


@dataclass
class CheckReport:
    """Outcome of one suite.

    ``worst_violation`` is the largest ``residual - tolerance`` over every
    measurement taken, so it is positive exactly when something failed.
    """

    name: str
    trials: int
    failures: list[Failure] = field(default_factory=list)
    worst_violation: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    @classmethod
    def from_measurements(
        cls,
        name: str,
        trials: int,
        seeded: Iterable[tuple[int, Sequence[Measurement]]],
    ) -> "CheckReport":
        failures = []
        worst = None
        for seed, measurements in sorted(seeded, key=lambda item: item[0]):
            for m in measurements:
                excess = float("inf") if math.isnan(m.excess) else m.excess
                worst = excess if worst is None else max(worst, excess)
                if m.failed:
                    failures.append(Failure(seed, m.quantity, m.residual, m.tolerance))
        return cls(
            name=name,
            trials=trials,
            failures=failures,
            worst_violation=0.0 if worst is None else float(worst),
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "passed": self.passed,
            "worst_violation": self.worst_violation,
            "failures": [f.to_json() for f in self.failures],
        }


def dumps_reports(reports: Sequence[CheckReport]) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2, sort_keys=True) + "\n"


def write_reports(reports: Sequence[CheckReport], path: Path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_reports(reports))
