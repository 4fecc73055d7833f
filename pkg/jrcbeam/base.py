import logging
import math
from abc import ABC, abstractmethod
from collections.abc import Mapping
from dataclasses import asdict, dataclass, field
from typing import Any, ClassVar, Dict, Iterator, List, Literal, Tuple, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from jrcbeam.context import Context
from jrcbeam.exceptions import ConfigurationError
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.helpers.decorators import timeit

logger = logging.getLogger(LOGGER_NAME)

METHODS: Tuple[str, ...] = (
    "proposed",
    "no_interference",
    "with_interference",
    "svd_nulling",
    "beamspace_nulling",
)

SweepAxis = Literal["snr_db", "n_antennas", "rho"]

ModelT = TypeVar("ModelT", bound=BaseModel)


def validated(model_cls: Type[ModelT], **fields: Any) -> ModelT:
    """
    Builds a pydantic model and turns validation failures into a ConfigurationError naming every bad field.

    Args:
        model_cls (Type[BaseModel]): The model to build.
        **fields (Any): Field values.

    Returns:
        BaseModel: The validated instance.

    Raises:
        ConfigurationError: If any field is invalid.
    """
    try:
        return model_cls(**fields)
    except ValidationError as e:
        names = sorted(
            {".".join(str(part) for part in err["loc"]) or "<model>" for err in e.errors()}
        )
        raise ConfigurationError(
            f"invalid {model_cls.__name__} field(s) {', '.join(names)}: {e}"
        ) from e


def selection_cardinality(rho: float, n: int) -> int:
    """Number of RF chains given to communications, ceil(rho * N), robust to float noise in rho * N."""
    return int(math.ceil(round(rho * n, 9)))


# ---------------------------------------------------
# Data Model - Configuration
# ---------------------------------------------------


class Scenario(BaseModel):
    """
    Full configuration of one JRC experiment point.

    Attributes:
        n_antennas (int): Array size N (transmitter and receiver).
        n_users (int): Communication users K, one path each.
        n_targets (int): Radar targets, one path each.
        rho (float): Weighting factor in [0, 1]; rho -> 1 favours communications.
        snr_db (float): SNR = 1 / noise_power, in dB.
        antenna_spacing_over_wavelength (float): d / lambda of the ULA.
        angle_range_deg (Tuple[float, float]): Interval in which users and targets are placed.
        seed (int): Root seed of all random streams.
        trials (int): Monte-Carlo draws per sweep point.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_antennas: int = Field(default=32, ge=2)
    n_users: int = Field(default=1, ge=0)
    n_targets: int = Field(default=1, ge=0)
    rho: float = Field(default=0.5, ge=0.0, le=1.0)
    snr_db: float = 10.0
    antenna_spacing_over_wavelength: float = Field(default=0.5, gt=0.0)
    angle_range_deg: Tuple[float, float] = (-60.0, 60.0)
    seed: int = 0
    trials: int = Field(default=500, ge=1)

    @field_validator("angle_range_deg")
    @classmethod
    def _check_angle_range(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        lo, hi = value
        if not -90.0 <= lo < hi <= 90.0:
            raise ValueError(f"angle range must satisfy -90 <= lo < hi <= 90, got {value}")
        return value

    @model_validator(mode="after")
    def _check_population(self) -> "Scenario":
        if self.n_users + self.n_targets < 1:
            raise ValueError("n_users + n_targets must be at least 1")
        return self

    @property
    def noise_power(self) -> float:
        """sigma_n^2 = 10^(-snr_db / 10)."""
        return 10.0 ** (-self.snr_db / 10.0)

    @property
    def comms_beams(self) -> int:
        return selection_cardinality(self.rho, self.n_antennas)

    @property
    def radar_beams(self) -> int:
        return self.n_antennas - self.comms_beams


class SweepSpec(BaseModel):
    """
    A Monte-Carlo sweep over one scenario field.

    Attributes:
        axis (str): Swept field, one of snr_db, n_antennas, rho.
        values (List[float]): Strictly increasing axis values.
        methods (List[str]): Method tags to evaluate.
        scenario (Scenario): Defaults for every non-swept field.
        trials (int): Draws per axis value.
        output_path (str): Where the results go.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    axis: SweepAxis = "snr_db"
    values: List[float] = Field(min_length=1)
    methods: List[str] = Field(min_length=1)
    scenario: Scenario = Field(default_factory=Scenario)
    trials: int = Field(default=500, ge=1)
    output_path: str = ""

    @field_validator("values")
    @classmethod
    def _check_increasing(cls, values: List[float]) -> List[float]:
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError(f"axis values must be strictly increasing, got {values}")
        return values

    @field_validator("methods")
    @classmethod
    def _check_methods(cls, methods: List[str]) -> List[str]:
        unknown = [m for m in methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown method tag(s) {unknown}; choose from {list(METHODS)}")
        if len(set(methods)) != len(methods):
            raise ValueError(f"duplicate method tags in {methods}")
        return methods

    @model_validator(mode="after")
    def _check_axis_values(self) -> "SweepSpec":
        for value in self.values:
            self.scenario_at(value)
        return self

    def scenario_at(self, value: float) -> Scenario:
        """The scenario with the swept field set to ``value``, validated like any other scenario."""
        if self.axis == "n_antennas":
            if float(value) != int(value):
                raise ValueError(f"n_antennas values must be integers, got {value}")
            value = int(value)
        fields = {**self.scenario.model_dump(), self.axis: value, "trials": self.trials}
        return Scenario(**fields)


# ---------------------------------------------------
# Data Model - Results
# ---------------------------------------------------


@dataclass
class ObjectUtilitiesContainer(ABC, Mapping):
    """Abstract base class that allows for dict-like access to result records."""

    def to_dict(self) -> Dict[str, Any]:
        """
        Converts the dataclass to a dictionary, excluding fields that are None.

        Returns:
            Dict[str, Any]: A dictionary representation of the instance.
        """
        return {k: v for k, v in asdict(self).items() if v is not None}

    def get(self, attr: str, default: Any = None) -> Any:
        return getattr(self, attr, default)

    def __getitem__(self, key: str) -> Any:
        try:
            return getattr(self, key)
        except AttributeError:
            raise KeyError(f"{key} not found in {self.__class__.__name__}")

    def __iter__(self) -> Iterator[str]:
        return iter(self.to_dict())

    def __len__(self) -> int:
        return len(self.to_dict())

    def keys(self):
        return self.to_dict().keys()


@dataclass
class SweepRow(ObjectUtilitiesContainer):
    """One (method, axis value) point of a sweep; means and std over ``trials`` draws."""

    method: str
    axis_value: float
    mean_mui: float
    std_mui: float
    mean_sigma_r_sq: float
    mean_sigma_c_sq: float
    trials: int


@dataclass
class SweepResult:
    """Averaged metric rows of a sweep, ordered by method then axis value."""

    axis: str
    rows: List[SweepRow] = field(default_factory=list)

    columns: ClassVar[Tuple[str, ...]] = (
        "method",
        "axis_value",
        "mean_mui",
        "std_mui",
        "mean_sigma_r_sq",
        "mean_sigma_c_sq",
        "trials",
    )

    def to_records(self) -> List[Dict[str, Any]]:
        return [dict(row) for row in self.rows]

    def row(self, method: str, axis_value: float) -> SweepRow:
        """Looks up the row of ``method`` at ``axis_value``."""
        for row in self.rows:
            if row.method == method and row.axis_value == axis_value:
                return row
        raise KeyError(f"no row for ({method}, {axis_value})")

    def series(self, method: str) -> List[float]:
        """Mean MUI of ``method`` along the axis."""
        return [row.mean_mui for row in self.rows if row.method == method]


# ---------------------------------------------------
# Experiments - Abstract class providing shared functionalities to the experiment steps.
# ---------------------------------------------------


class BaseExperiment(ABC):
    """
    Class that provides core functionality for all experiment steps:
        - enforces an apply_step function that is used uniformly as the entry point to a step.
        - provides a method to store the results (CSV or JSON) on the filesystem.
    """

    _step_counter = 0

    def __init__(self, context: Context) -> None:
        self._entity_name = self.__class__.__qualname__
        self.context = context
        BaseExperiment._step_counter += 1

    def store_results(self, results: Any, path: str, fmt: str = "csv") -> str:
        """
        Writes the results of the step.

        Args:
            results (Any): A SweepResult or a Beampattern.
            path (str): Target file.
            fmt (str): "csv" or "json".

        Returns:
            str: The path written.
        """
        from jrcbeam.helpers.utils_io import emit_results

        emit_results(results, path, fmt)
        return path

    @abstractmethod
    def apply_step(self, *args: Any, **kwargs: Any) -> Any:
        """Enforces the apply_step method, leaves the implementation up for the children classes"""
        pass

    @timeit
    def apply(self, *args: Any, **kwargs: Any) -> Any:
        logger.info(f"Executing step {BaseExperiment._step_counter}: {self._entity_name}")
        results = self.apply_step(*args, **kwargs)
        self.context.status = self._entity_name + " successful"
        return results
