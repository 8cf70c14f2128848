from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv
from pydantic import ConfigDict, field_validator
from pydantic_settings import BaseSettings

load_dotenv(dotenv_path=".env")


class EnvironmentVariables(BaseSettings):
    """
    EnvironmentVariables loads the application settings from the environment
    (and from a `.env` file when present) using Pydantic's BaseSettings.

    Attributes:
        APP_NAME (str): Service name attached to every structured log line.
        APP_ENVIRONMENT (str): Environment the solver runs in (e.g. local, ci).
        APP_DEBUG (bool): Flag to enable or disable debug mode.
        LOG_LEVEL (str): The logging level (e.g., DEBUG, INFO, WARNING, ERROR).
        LOG_CHANNEL (str): The logging channel to use (console or file).
        LOG_FILE (str): The file path for logging output.
        NEWTON_TOL (float): Default Newton tolerance for residual and step tests.
        NEWTON_MAX_ITER (int): Default Newton iteration budget.
        NEWTON_MAX_DAMPING (int): Default number of step halvings per Newton step.
        NEWTON_GROWTH_LIMIT (float): Residual growth a full Newton step may cause
            before it is halved.
        MOMENT_VALIDATION (bool): Check every modified-moment vector against the oracle.
        BIE_RHS_NODES (int): Auxiliary rule size used for the boundary right-hand side.
        BENCH_SEED (int): Default seed for the interior sample points.
        BENCH_REF_M (int): Rule order of the self-reference solution.
        INTERIOR_POINTS (int): Number of interior points used for the domain error.
        INTERIOR_BAND (float): Minimal distance of interior points to the boundary.
        POTENTIAL_UPSAMPLE (int): Auxiliary rule size for interior potential evaluation
            in the benchmark (0 keeps the plain m-term sums).

    Methods:
        check_log_channel(cls, v): Validates the logging channel.
    """

    APP_NAME: str = "nystrom-bench"
    APP_ENVIRONMENT: str = "local"
    APP_DEBUG: bool = False
    LOG_LEVEL: str = "INFO"
    LOG_CHANNEL: str = "console"
    LOG_FILE: str = "storage/logs/bench.log"
    NEWTON_TOL: float = 1e-14
    NEWTON_MAX_ITER: int = 100
    NEWTON_MAX_DAMPING: int = 30
    NEWTON_GROWTH_LIMIT: float = 1e4
    MOMENT_VALIDATION: bool = True
    BIE_RHS_NODES: int = 2048
    BENCH_SEED: int = 42
    BENCH_REF_M: int = 512
    INTERIOR_POINTS: int = 600
    INTERIOR_BAND: float = 0.3
    POTENTIAL_UPSAMPLE: int = 0

    model_config = ConfigDict(
        env_file=".env", env_file_encoding="utf-8", extra="ignore"
    )

    @field_validator("LOG_CHANNEL", mode="before")
    def check_log_channel(cls, v):
        if v not in ("console", "file"):
            raise ValueError("LOG_CHANNEL must be 'console' or 'file'")
        return v


@lru_cache()
def env(var_name: Optional[str] = None):
    """
    Create and return an instance of EnvironmentVariables or a specific setting.

    Args:
        var_name (Optional[str]): The name of the setting to retrieve. Defaults to None.

    Returns:
        EnvironmentVariables or the value of the requested setting.
    """
    env_vars = EnvironmentVariables()
    if var_name:
        return getattr(env_vars, var_name, None)
    return env_vars
