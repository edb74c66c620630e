"""Config utilities."""
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import yamale
import yaml
from loguru import logger

from delaunaylab.bifurcation.crossing import ALPHA_SAMPLES, POLISH_MODES, ROOT_FTOLERANCE, ROOT_TOLERANCE
from delaunaylab.core.period import QUADRATURE_TOLERANCE
from delaunaylab.core.profile import DEFAULT_SAMPLES, ODE_TOLERANCE, SPECTRAL_SAMPLES
from delaunaylab.spectral.bands import DEFAULT_KMAX
from delaunaylab.spectral.galerkin import DEFAULT_MODES, EIGEN_TOLERANCE
from delaunaylab.spectral.operator import DEFAULT_COEFFS
from delaunaylab.surface.curvature import CURVATURE_STEP
from delaunaylab.surface.mesh import RES_T, RES_THETA

ROOT_DIR = Path(__file__).resolve().parents[2]
SCHEMA_FILE = ROOT_DIR / 'schema.yml'
DEFAULT_CONFIG_FILE = 'user_data/config.yml'
OUTPUT_DIR_ENV = 'DELAUNAYLAB_OUTPUT_DIR'


@dataclass(frozen=True)
class RunConfig:
    """Tolerances, resolutions and output location shared by every command."""

    ode_tolerance: float = ODE_TOLERANCE
    quadrature_tolerance: float = QUADRATURE_TOLERANCE
    eigen_tolerance: float = EIGEN_TOLERANCE
    root_tolerance: float = ROOT_TOLERANCE
    root_ftolerance: float = ROOT_FTOLERANCE
    samples_per_period: int = DEFAULT_SAMPLES
    spectral_samples: int = SPECTRAL_SAMPLES
    n_modes: int = DEFAULT_MODES
    polish_modes: int = POLISH_MODES
    n_coeffs: int = DEFAULT_COEFFS
    k_max: int = DEFAULT_KMAX
    alpha_samples: int = ALPHA_SAMPLES
    mesh_res_t: int = RES_T
    mesh_res_theta: int = RES_THETA
    curvature_step: float = CURVATURE_STEP
    workers: int = 1
    output_dir: str = 'output'
    config_file: Optional[str] = None

    def __post_init__(self):
        for name in ('ode_tolerance', 'quadrature_tolerance', 'eigen_tolerance', 'root_tolerance', 'root_ftolerance'):
            if not getattr(self, name) > 0:
                raise ValueError(f'{name} must be positive, got {getattr(self, name)}')
        if self.n_coeffs > self.spectral_samples // 2:
            raise ValueError(f'n_coeffs={self.n_coeffs} needs at least {2 * self.n_coeffs} spectral samples')

    @property
    def seedless(self) -> bool:
        # nothing in the pipeline draws random numbers
        return True

    @property
    def output_path(self) -> Path:
        return Path(self.output_dir)

    def metadata(self) -> Dict[str, Any]:
        data = asdict(self)
        data.pop('config_file')
        data['seedless'] = self.seedless
        return data


def parse_config_file(path: Path) -> Dict[str, Any]:
    with path.open('r') as f:
        conf = yaml.safe_load(f) or {}
    conf['config_file'] = str(path)
    return conf


def read_config(config_file: Optional[str] = None, **overrides: Any) -> RunConfig:
    """Build the run configuration from defaults, the optional config file, the environment and flags.

    Later sources win: file values override defaults, ``DELAUNAYLAB_OUTPUT_DIR`` overrides the file, and
    non-None ``overrides`` (the command-line flags) override everything.
    """
    conf: Dict[str, Any] = {}
    path = Path(config_file) if config_file else Path(DEFAULT_CONFIG_FILE)
    if path.is_file():
        schema = yamale.make_schema(SCHEMA_FILE)
        data = yamale.make_data(path)
        try:
            yamale.validate(schema, data)
        except ValueError:
            logger.exception('Config file validation failed')
            sys.exit(2)
        conf.update(parse_config_file(path))
        logger.debug(f'Loaded config file {path.resolve()}')
    elif config_file:
        logger.error(f'Config file does not exist at {path.resolve()}')
        sys.exit(2)
    env_dir = os.environ.get(OUTPUT_DIR_ENV)
    if env_dir:
        conf['output_dir'] = env_dir
    conf.update({key: val for key, val in overrides.items() if val is not None})
    try:
        return RunConfig(**conf)
    except ValueError as e:
        logger.error(f'Invalid configuration: {e}')
        sys.exit(2)
