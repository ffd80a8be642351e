"""
Configuration for hypergeom
Modify these settings (or the matching environment variables) to customize
sweep bounds, parallelism and logging.
"""

import logging
import os

logger = logging.getLogger(__name__)


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default


def _env_flag(name: str, default: bool = False) -> bool:
    raw = os.getenv(name)
    if raw is None:
        return default
    return raw.strip().lower() in {"1", "true", "yes", "on"}


# Flag manifold bounds
MIN_N = 2
MAX_N = _env_int('HYPERGEOM_MAX_N', 6)

# Worker pool: HYPERGEOM_JOBS is read per run and validated with the run config
JOBS_ENV_VAR = 'HYPERGEOM_JOBS'
DEFAULT_JOBS = os.cpu_count() or 1

# Sweep defaults
DEFAULT_DELTA_MAX = 2
DEFAULT_ZETA_ORDER = 2
DEFAULT_MAX_DEGREE = 2

# Working truncation floor for alpha-expansions in the mirror transform
ALPHA_FLOOR = -4

# Normalization target: deg_alpha A_d <= ALPHA_DEGREE_TARGET for d > 0
ALPHA_DEGREE_TARGET = -2

# Logging Configuration
LOG_LEVEL = os.getenv('HYPERGEOM_LOG_LEVEL', 'INFO')
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_JSON = _env_flag('HYPERGEOM_LOG_JSON')

# Report schema version written into every report
REPORT_SCHEMA_VERSION = 1
