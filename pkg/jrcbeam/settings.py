from typing import Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class NumericsSettings(BaseSettings):
    """
    Tolerances of the linear-algebra primitives.

    Attributes:
        rank_tolerance (float): Singular values below rank_tolerance * sigma_max count as zero.
        model_config (SettingsConfigDict): Configuration dictionary to define environment variable prefixes.
    """

    rank_tolerance: float = 1e-8
    model_config: SettingsConfigDict = SettingsConfigDict(env_prefix="jrc_numerics_")


class SolverSettings(BaseSettings):
    """
    Configuration of the Dinkelbach RF-chain selection.

    Attributes:
        max_iterations (int): Iteration cap I_max.
        kappa_tolerance (float): Stop once both ratio parameters move less than this.
        disjoint (bool): An RF chain serves either communications or radar, never both.
        mode (str): "covariance" scores beams with second-order statistics, "instantaneous" with channel draws.
        model_config (SettingsConfigDict): Configuration dictionary to define environment variable prefixes.
    """

    max_iterations: int = 50
    kappa_tolerance: float = 1e-6
    disjoint: bool = True
    mode: Literal["covariance", "instantaneous"] = "covariance"
    model_config: SettingsConfigDict = SettingsConfigDict(env_prefix="jrc_solver_")


class HarnessSettings(BaseSettings):
    """
    Defaults of the experiment runner. Config files and CLI flags override them.

    Attributes:
        trials (int): Monte-Carlo draws per sweep point.
        jobs (int): Worker processes.
        energy_fraction (float): Beamspace energy kept by the nulling masks.
        grid_step_deg (float): Angle step of the beampattern probe.
        covariance (str): "analytic" closed-form statistics or "sampled" Monte-Carlo estimates.
        covariance_draws (int): Draws used when covariance = "sampled".
        output_path (str): Directory for result files without an explicit path.
        model_config (SettingsConfigDict): Configuration dictionary to define environment variable prefixes.
    """

    trials: int = Field(default=500, ge=1)
    jobs: int = Field(default=1, ge=1)
    energy_fraction: float = Field(default=0.95, gt=0.0, le=1.0)
    grid_step_deg: float = Field(default=0.5, gt=0.0, le=1.0)
    covariance: Literal["analytic", "sampled"] = "analytic"
    covariance_draws: int = Field(default=2000, ge=1)
    output_path: str = "./data/output"
    model_config: SettingsConfigDict = SettingsConfigDict(env_prefix="jrc_harness_")


class Settings(BaseSettings):
    """
    Centralized application settings combining the configuration groups.

    Attributes:
        seed (Optional[int]): Read from JRC_SEED; overrides the seed of a config file.
        numerics (NumericsSettings): Linear-algebra tolerances.
        solver (SolverSettings): RF-chain selection options.
        harness (HarnessSettings): Experiment runner defaults.
    """

    seed: Optional[int] = None
    numerics: NumericsSettings = Field(default_factory=NumericsSettings)
    solver: SolverSettings = Field(default_factory=SolverSettings)
    harness: HarnessSettings = Field(default_factory=HarnessSettings)
    model_config: SettingsConfigDict = SettingsConfigDict(env_prefix="jrc_")
