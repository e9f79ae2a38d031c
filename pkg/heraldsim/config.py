"""
Run configuration for heraldsim.

Settings are resolved in the order command-line flag, environment (optionally
loaded from a ``.env`` file) and finally the defaults defined here.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import dotenv
import numpy as np

from heraldsim.exceptions import InvalidParameterException

logging.basicConfig(level=logging.INFO)

DEFAULT_REL_TOL = 1e-6
DEFAULT_D_MAX = 512
DEFAULT_THREADS = 1

ENV_VARS: List[str] = ["HERALDSIM_THREADS", "HERALDSIM_REL_TOL", "HERALDSIM_D_MAX"]
OUTPUT_FORMATS = ("csv", "json")


@dataclass
class RunConfig:
    """
    Options shared by the command-line subcommands.

    Attributes
    ----------
    subcommand : str
        the subcommand being executed
    input_path : Optional[str]
        circuit or matrix file, None when a preset is used
    output_path : Optional[str]
        where to write results, None for standard output
    rel_tol : float
        relative tolerance of the adaptive cutoff
    d_max : int
        largest cutoff the adaptive loop may reach
    eta1_grid, eta2_grid : List[float]
        transmission values swept by ``sweep``
    threads : int
        number of workers for sweeps
    output_format : str
        one of ``csv`` or ``json``
    """

    subcommand: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    rel_tol: float = DEFAULT_REL_TOL
    d_max: int = DEFAULT_D_MAX
    eta1_grid: List[float] = field(default_factory=lambda: [1.0])
    eta2_grid: List[float] = field(default_factory=lambda: [1.0])
    threads: int = DEFAULT_THREADS
    output_format: str = "json"

    def __post_init__(self):
        """Validate the configuration."""
        if not 0.0 < self.rel_tol < 1.0:
            raise InvalidParameterException(
                f"rel_tol must lie in (0, 1), got {self.rel_tol}"
            )
        if self.threads < 1:
            raise InvalidParameterException(
                f"thread count must be at least 1, got {self.threads}"
            )
        if self.d_max < 1:
            raise InvalidParameterException(f"d_max must be positive, got {self.d_max}")
        if self.output_format not in OUTPUT_FORMATS:
            raise InvalidParameterException(
                f"output format must be one of {OUTPUT_FORMATS}"
            )


def load_env_config(file_path: Optional[str] = None) -> Dict[str, str]:
    """
    Load ``HERALDSIM_*`` variables, reading ``file_path`` first when it exists.

    Parameters
    ----------
    file_path : Optional[str], optional
        Path to the .env file. If None, defaults to .env in the current directory,
        by default None

    Returns
    -------
    env_variables : Dict[str, str]
        the recognised variables that are set
    """
    if file_path is None:
        file_path = ".env"

    if os.path.exists(file_path):
        logging.info(f"Loading environment variables from {file_path}")
        dotenv.load_dotenv(file_path)

    env_variables: Dict[str, str] = {
        var: os.environ[var] for var in ENV_VARS if os.getenv(var) is not None
    }
    return env_variables


def parse_grid(text: str) -> List[float]:
    """
    Parse a scalar (``"0.9"``) or an inclusive range (``"0.5:1:11"``).

    Parameters
    ----------
    text : str
        the grid description

    Returns
    -------
    List[float]
        the grid values

    Raises
    ------
    InvalidParameterException
        if the text is not a number or an ``a:b:n`` triple with n >= 1
    """
    parts = text.split(":")
    if len(parts) not in (1, 3):
        raise InvalidParameterException(f"grid {text!r} must be 'value' or 'a:b:n'")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        raise InvalidParameterException(f"cannot parse grid {text!r}: {e}")
    if num < 1:
        raise InvalidParameterException(f"grid {text!r} has no points")
    return [float(v) for v in np.linspace(start, stop, num)]
