"""JSON experiment configs: pydantic schema and the builder that turns a config
into a filtration, named processes and the requested runs.

Matrices are row-major arrays of [re, im] pairs, or for qubit chains
``{"pauli": {"XZ": [re, im], ...}}`` with one letter per factor.
"""

# standard imports
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

# third party imports
import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, ValidationError, model_validator

# ncqsi imports
from ncqsi.algebra.chain import ChainShape, Element, Matrix, kron_all, matrix_from_json
from ncqsi.algebra.constants import COMPLEX, PAULI, ProcessKind, StateKind
from ncqsi.algebra.exceptions import (
    FactorIndexError,
    InvalidRampError,
    InvalidScheduleError,
    InvalidShapeError,
    InvalidStateError,
    NotAdaptedError,
    NotHermitianError,
    NotPositiveError,
    ProcessKindError,
    ShapeMismatchError,
    TimeOutOfRangeError,
)
from ncqsi.algebra.filtration import Filtration, FiltrationSchedule
from ncqsi.algebra.process import (
    Constant,
    Increment,
    MartingaleFromTerminal,
    MonotoneAdapted,
    NormContinuousAdapted,
    Process,
    SpectralStep,
    Term,
)
from ncqsi.algebra.ramps import RampTable
from ncqsi.algebra.state import ChainModel, StateSpec
from ncqsi.cli.exceptions import ConfigError
from ncqsi.config import Tolerances
from ncqsi.integration.exceptions import InvalidPartitionError
from ncqsi.verify.fixtures import spectral_step_integrand

BUILD_ERRORS = (
    ValueError,
    FactorIndexError,
    InvalidPartitionError,
    InvalidRampError,
    InvalidScheduleError,
    InvalidShapeError,
    InvalidStateError,
    NotAdaptedError,
    NotHermitianError,
    NotPositiveError,
    ProcessKindError,
    ShapeMismatchError,
    TimeOutOfRangeError,
)


class Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class PauliMatrix(Strict):
    pauli: dict[str, tuple[float, float]]


MatrixSpec = Union[list[list[tuple[float, float]]], PauliMatrix]
RampSpec = list[tuple[float, float]]


#########################################
# Chain and state
#########################################


class ChainConfig(Strict):
    factor_dims: list[int] = Field(min_length=1)
    jump_times: list[float] = Field(min_length=1)
    horizon: float


class StateConfig(Strict):
    kind: Literal["trace", "product"]
    densities: Optional[list[MatrixSpec]] = None

    @model_validator(mode="after")
    def _densities_match_kind(self) -> "StateConfig":
        if self.kind == StateKind.TRACE.value and self.densities is not None:
            raise ValueError("the trace state takes no densities")
        if self.kind == StateKind.PRODUCT_DENSITIES.value and not self.densities:
            raise ValueError("a product state needs one density per factor")
        return self


#########################################
# Processes
#########################################


class MartingaleConfig(Strict):
    kind: Literal["martingale"]
    terminal: MatrixSpec


class IncrementConfig(Strict):
    time: float
    g: MatrixSpec
    ramp: RampSpec


class MonotoneConfig(Strict):
    kind: Literal["monotone"]
    base: MatrixSpec
    increments: list[IncrementConfig] = Field(default_factory=list)


class TermConfig(Strict):
    time: float
    a: MatrixSpec
    profile: RampSpec
    lipschitz: Optional[float] = Field(default=None, ge=0)


class NormContinuousConfig(Strict):
    kind: Literal["norm_continuous"]
    terms: list[TermConfig]


class SpectralStepConfig(Strict):
    kind: Literal["spectral_step"]
    generator: MatrixSpec
    threshold: RampSpec


class ConstantConfig(Strict):
    kind: Literal["constant"]
    c: MatrixSpec


ProcessConfig = Annotated[
    Union[MartingaleConfig, MonotoneConfig, NormContinuousConfig, SpectralStepConfig, ConstantConfig],
    Field(discriminator="kind"),
]


#########################################
# Experiments
#########################################


class ProjectionFamilySuite(Strict):
    name: Literal["projection_family"]
    trials: int = Field(default=100, ge=1)


class ThmMonotoneSuite(Strict):
    name: Literal["thm_monotone"]
    f: str
    X: str
    trials: int = Field(default=100, ge=1)


class ThmContinuousSuite(Strict):
    name: Literal["thm_continuous"]
    f: str
    X: str
    eps: list[PositiveFloat] = Field(default_factory=lambda: [0.3, 0.1, 0.03], min_length=1)
    trials: int = Field(default=100, ge=1)


class ThmTracialSuite(Strict):
    name: Literal["thm_tracial"]
    f: str
    X: str
    grid: Optional[list[float]] = None
    trials: int = Field(default=100, ge=1)


class Remark2Suite(Strict):
    name: Literal["remark2"]
    X: str
    generator: Optional[MatrixSpec] = None
    threshold: Optional[RampSpec] = None
    trials: int = Field(default=100, ge=1)


SuiteConfig = Annotated[
    Union[ProjectionFamilySuite, ThmMonotoneSuite, ThmContinuousSuite, ThmTracialSuite, Remark2Suite],
    Field(discriminator="name"),
]


class ConvergeConfig(Strict):
    f: str
    X: str
    interval: tuple[float, float]
    side: Literal["right", "left"] = "right"
    engine: Literal["dyadic", "net"] = "dyadic"
    tol_conv: Optional[PositiveFloat] = None
    max_depth: Optional[int] = Field(default=None, ge=0, le=40)


class ExperimentSection(Strict):
    suites: list[SuiteConfig] = Field(default_factory=list)
    converge: Optional[ConvergeConfig] = None


class ExperimentConfig(Strict):
    chain: ChainConfig
    state: StateConfig
    processes: dict[str, ProcessConfig] = Field(default_factory=dict)
    experiment: ExperimentSection = Field(default_factory=ExperimentSection)
    seed: int = 0
    tolerances: Tolerances = Field(default_factory=Tolerances)


#########################################
# Building
#########################################


def build_matrix(spec: MatrixSpec, dims: tuple[int, ...]) -> Matrix:
    """Dense matrix acting on factors of dimensions ``dims``."""
    if not isinstance(spec, PauliMatrix):
        return matrix_from_json(spec)

    if any(d != 2 for d in dims):
        raise ValueError(f"the pauli form needs qubit factors, got dimensions {list(dims)}")
    n = int(np.prod(dims))
    total = np.zeros((n, n), dtype=COMPLEX)
    for word, (re, im) in sorted(spec.pauli.items()):
        if len(word) != len(dims) or any(letter not in PAULI for letter in word):
            raise ValueError(f"pauli word {word!r} must have {len(dims)} letters from IXYZ")
        total = total + complex(re, im) * kron_all([PAULI[letter] for letter in word])
    return total


def build_ramp(pairs: RampSpec) -> RampTable:
    return RampTable.from_pairs(pairs)


def build_filtration(config: ExperimentConfig) -> Filtration:
    shape = ChainShape(tuple(config.chain.factor_dims))
    if config.state.kind == StateKind.TRACE.value:
        state = StateSpec.trace()
    else:
        if len(config.state.densities) != shape.n_factors:
            raise InvalidStateError(
                f"{len(config.state.densities)} densities for {shape.n_factors} factors"
            )
        densities = tuple(
            build_matrix(rho, (d,)) for rho, d in zip(config.state.densities, shape.factor_dims)
        )
        # faithfulness is a suite precondition, not a load-time check
        state = StateSpec(StateKind.PRODUCT_DENSITIES, densities)
    schedule = FiltrationSchedule(tuple(config.chain.jump_times), config.chain.horizon)
    return Filtration(ChainModel(shape, state), schedule)


def build_process(spec: ProcessConfig, flt: Filtration) -> Process:
    shape = flt.shape

    def element(m: MatrixSpec) -> Element:
        return Element(shape, build_matrix(m, shape.factor_dims))

    if isinstance(spec, MartingaleConfig):
        return MartingaleFromTerminal(flt, element(spec.terminal))
    if isinstance(spec, MonotoneConfig):
        increments = [Increment(i.time, element(i.g), build_ramp(i.ramp)) for i in spec.increments]
        return MonotoneAdapted(flt, element(spec.base), increments)
    if isinstance(spec, NormContinuousConfig):
        terms = [
            Term(t.time, element(t.a), build_ramp(t.profile), t.lipschitz) for t in spec.terms
        ]
        return NormContinuousAdapted(flt, terms)
    if isinstance(spec, SpectralStepConfig):
        return SpectralStep(flt, element(spec.generator), build_ramp(spec.threshold))
    return Constant(flt, element(spec.c))


@dataclass
class Experiment:
    config: ExperimentConfig
    filtration: Filtration
    processes: dict[str, Process]

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def tolerances(self) -> Tolerances:
        return self.config.tolerances

    def process(self, name: str) -> Process:
        return self.processes[name]

    def remark2_inputs(self, suite: Remark2Suite) -> tuple[Optional[Element], Optional[RampTable]]:
        shape = self.filtration.shape
        generator = (
            None
            if suite.generator is None
            else Element(shape, build_matrix(suite.generator, shape.factor_dims))
        )
        threshold = None if suite.threshold is None else build_ramp(suite.threshold)
        return generator, threshold


def _check_references(experiment: Experiment):
    config = experiment.config
    names = set(experiment.processes)
    T = experiment.filtration.horizon

    wanted = []
    for suite in config.experiment.suites:
        wanted += [getattr(suite, key) for key in ("f", "X") if hasattr(suite, key)]
        if isinstance(suite, ThmContinuousSuite):
            f = experiment.processes.get(suite.f)
            if f is not None and f.kind is not ProcessKind.NORM_CONTINUOUS_ADAPTED:
                raise ProcessKindError("thm_continuous", f.kind.value)
        if isinstance(suite, ThmTracialSuite) and suite.grid is not None:
            for t in suite.grid:
                experiment.filtration.schedule.check_time(t)
        if isinstance(suite, Remark2Suite):
            generator, threshold = experiment.remark2_inputs(suite)
            spectral_step_integrand(experiment.filtration, generator, threshold)

    converge = config.experiment.converge
    if converge is not None:
        wanted += [converge.f, converge.X]
        a, b = converge.interval
        if not 0 <= a < b <= T:
            raise InvalidPartitionError(f"converge interval [{a}, {b}] must satisfy 0 <= a < b <= {T}")

    missing = sorted(set(wanted) - names)
    if missing:
        raise ValueError(f"unknown process names {missing}; defined: {sorted(names)}")


def build_experiment(config: ExperimentConfig) -> Experiment:
    flt = build_filtration(config)
    processes = {name: build_process(spec, flt) for name, spec in sorted(config.processes.items())}
    experiment = Experiment(config, flt, processes)
    _check_references(experiment)
    return experiment


def load_experiment(path: Union[str, Path]) -> Experiment:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(path, "file not found")
    except OSError as e:
        raise ConfigError(path, f"cannot read file ({e.strerror})")
    except json.JSONDecodeError as e:
        raise ConfigError(path, f"not valid JSON ({e})")

    try:
        config = ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(path, str(e))

    try:
        experiment = build_experiment(config)
    except BUILD_ERRORS as e:
        raise ConfigError(path, str(e)) from e

    logger.info(
        f"load_experiment: {path.name}: chain {config.chain.factor_dims}, "
        f"state {config.state.kind}, processes {sorted(experiment.processes)}"
    )
    return experiment
