import json
import logging
import os
from typing import Any, Callable, Dict, List, Optional, Union

import pandas as pd

from jrcbeam.base import METHODS, Scenario, SweepResult, SweepSpec, validated
from jrcbeam.exceptions import ConfigurationError, ResultsIOError
from jrcbeam.helpers import LOGGER_NAME
from jrcbeam.settings import Settings

logger = logging.getLogger(LOGGER_NAME)

FLOAT_FORMAT = "%.9g"

DEFAULT_AXIS_VALUES: Dict[str, List[float]] = {
    "snr_db": [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0],
    "n_antennas": [16, 32, 64],
    "rho": [0.0, 0.25, 0.5, 0.75, 1.0],
}


def _floats(raw: str) -> List[float]:
    return [float(item) for item in raw.split(",") if item.strip()]


def _ints(raw: str) -> List[int]:
    return [int(item) for item in raw.split(",") if item.strip()]


def _strings(raw: str) -> List[str]:
    return [item.strip() for item in raw.split(",") if item.strip()]


# config key -> parser of its raw value
CONFIG_KEYS: Dict[str, Callable[[str], Any]] = {
    "n_antennas": int,
    "n_users": int,
    "n_targets": int,
    "rho": float,
    "snr_db": float,
    "snr_db_list": _floats,
    "n_antennas_list": _ints,
    "rho_list": _floats,
    "axis": str.strip,
    "trials": int,
    "seed": int,
    "methods": _strings,
    "output": str.strip,
    "angle_range": _floats,
    "spacing": float,
    "target_angles": _floats,
    "grid_step": float,
    "beampattern_method": str.strip,
    "energy_fraction": float,
    "covariance": str.strip,
}

AXIS_LIST_KEYS = {"snr_db": "snr_db_list", "n_antennas": "n_antennas_list", "rho": "rho_list"}


# io
def create_directory(directory: str) -> None:
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
        logger.debug(f"Created directory {directory}")


def parse_config(path: str) -> Dict[str, Any]:
    """
    Reads a flat ``key = value`` experiment config.

    Blank lines and everything after ``#`` are ignored, list values are comma-separated.

    Args:
        path (str): UTF-8 text file.

    Returns:
        Dict[str, Any]: Parsed values keyed by config key.

    Raises:
        ConfigurationError: On an unreadable file, a malformed line, an unknown or repeated key,
            or a value that does not parse.
    """
    try:
        with open(path, "r", encoding="utf-8") as file:
            lines = file.read().splitlines()
    except OSError as e:
        raise ConfigurationError(f"cannot read config file '{path}': {e}") from e

    config: Dict[str, Any] = {}
    for number, line in enumerate(lines, start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        key, sep, raw = content.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigurationError(f"{path}:{number}: expected 'key = value', got '{line}'")
        if key not in CONFIG_KEYS:
            raise ConfigurationError(
                f"{path}:{number}: unknown key '{key}'; known keys are {', '.join(CONFIG_KEYS)}"
            )
        if key in config:
            raise ConfigurationError(f"{path}:{number}: key '{key}' given twice")
        try:
            config[key] = CONFIG_KEYS[key](raw.strip())
        except ValueError as e:
            raise ConfigurationError(f"{path}:{number}: bad value for '{key}': {e}") from e

    logger.debug(f"Parsed config {path}: {config}")
    return config


def resolve_seed(config: Dict[str, Any], settings: Settings, seed: Optional[int] = None) -> int:
    """Seed precedence: explicit argument, then JRC_SEED, then the config file, then 0."""
    for candidate in (seed, settings.seed, config.get("seed")):
        if candidate is not None:
            return int(candidate)
    return 0


def scenario_from_config(
    config: Dict[str, Any], settings: Settings, seed: Optional[int] = None
) -> Scenario:
    """
    Builds the base scenario of a config.

    Raises:
        ConfigurationError: If any field is invalid, naming the field.
    """
    fields: Dict[str, Any] = {"seed": resolve_seed(config, settings, seed)}
    for key in ("n_antennas", "n_users", "n_targets", "rho", "snr_db"):
        if key in config:
            fields[key] = config[key]
    fields["trials"] = config.get("trials", settings.harness.trials)
    if "spacing" in config:
        fields["antenna_spacing_over_wavelength"] = config["spacing"]
    if "angle_range" in config:
        if len(config["angle_range"]) != 2:
            raise ConfigurationError(
                f"angle_range needs exactly two values, got {config['angle_range']}"
            )
        fields["angle_range_deg"] = tuple(config["angle_range"])
    return validated(Scenario, **fields)


def sweep_spec_from_config(
    config: Dict[str, Any], settings: Settings, seed: Optional[int] = None
) -> SweepSpec:
    """
    Builds a fully validated sweep from a parsed config.

    The axis defaults to snr_db; its values come from the matching ``*_list`` key or, when
    absent, from DEFAULT_AXIS_VALUES. Methods default to every known method.

    Raises:
        ConfigurationError: Before any computation, naming the offending field.
    """
    scenario = scenario_from_config(config, settings, seed)
    axis = config.get("axis", "snr_db")
    if axis not in AXIS_LIST_KEYS:
        raise ConfigurationError(f"axis must be one of {list(AXIS_LIST_KEYS)}, got '{axis}'")
    for other_axis, key in AXIS_LIST_KEYS.items():
        if other_axis != axis and key in config:
            logger.warning(f"Ignoring '{key}': the sweep runs over {axis}")

    return validated(
        SweepSpec,
        axis=axis,
        values=config.get(AXIS_LIST_KEYS[axis], DEFAULT_AXIS_VALUES[axis]),
        methods=config.get("methods", list(METHODS)),
        scenario=scenario,
        trials=scenario.trials,
        output_path=config.get("output", ""),
    )


def settings_from_config(config: Dict[str, Any], settings: Settings) -> Settings:
    """Settings with the harness options a config file may override applied."""
    overrides = {
        name: config[key]
        for key, name in (
            ("energy_fraction", "energy_fraction"),
            ("covariance", "covariance"),
            ("grid_step", "grid_step_deg"),
        )
        if key in config
    }
    if not overrides:
        return settings
    harness = validated(
        type(settings.harness), **{**settings.harness.model_dump(), **overrides}
    )
    return settings.model_copy(update={"harness": harness})


def emit_results(result: Any, path: str, fmt: str = "csv") -> None:
    """
    Writes a SweepResult or a Beampattern.

    CSV carries a header naming every column, 9 significant digits and LF line endings;
    JSON is an array of row objects rounded the same way. Row order is the result's own
    (method, then axis value for sweeps).

    Args:
        result (Any): Object exposing ``columns`` and ``to_records()``.
        path (str): Target file; missing parent directories are created.
        fmt (str): "csv" or "json".

    Raises:
        ResultsIOError: If the file cannot be written (message contains the path).
    """
    if fmt not in ("csv", "json"):
        raise ConfigurationError(f"unknown output format '{fmt}', choose csv or json")
    records = result.to_records()
    columns = list(result.columns)

    try:
        create_directory(os.path.dirname(path))
        if fmt == "csv":
            pd.DataFrame(records, columns=columns).to_csv(
                path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n"
            )
        else:
            rows = [{k: _round(record[k]) for k in columns} for record in records]
            with open(path, "w", encoding="utf-8", newline="\n") as file:
                json.dump(rows, file, indent=4)
                file.write("\n")
    except OSError as e:
        raise ResultsIOError(f"cannot write results to '{path}': {e}") from e

    logger.info(f"Successfully saved {len(records)} row(s) to {path}")


def _round(value: Any) -> Any:
    if isinstance(value, float):
        return float(FLOAT_FORMAT % value)
    return value


def read_results(path: str) -> pd.DataFrame:
    """
    Reads an emitted CSV or JSON result file back into a DataFrame.

    Raises:
        ResultsIOError: If the file cannot be read or parsed.
    """
    try:
        if path.endswith(".json"):
            with open(path, "r", encoding="utf-8") as file:
                return pd.DataFrame(json.load(file))
        return pd.read_csv(path)
    except (OSError, ValueError) as e:
        raise ResultsIOError(f"cannot read results from '{path}': {e}") from e


def result_path(
    explicit: Optional[str], configured: Union[str, None], default: str
) -> str:
    """First non-empty of the CLI path, the config path and the default."""
    return explicit or configured or default
