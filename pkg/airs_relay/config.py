"""
Configuration settings for the AIRS relay planner
"""

import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

# Scenario defaults (altitude, radio budget and array sizes of the reference setup)
SCENARIO = {
    'H': 100.0,  # m
    'tx_power_dbm': 20.0,
    'noise_dbm': -110.0,
    'beta0_db': -40.0,  # channel power at 1 m
    'M': 64,  # source antennas
    'Nx': 256,
    'Ny': 1,
    'dx_bar': 0.1,  # spacing / wavelength
    'dy_bar': 0.1,
    'carrier_ghz': 2.4,
    'area_center_x': 1000.0,  # m
    'area_length': 1000.0,  # m
    'area_width': 600.0,  # m
    'beam_alignment': 'center',
}

# Placement search settings
SEARCH = {
    'q_min_altitudes': -5.0,  # q_min = -5H unless given
    'step': 1.0,  # m
}

# Area evaluation grid
GRID = {
    'nx_pts': 101,
    'ny_pts': 61,
}

# Geometry / numerics
GEOMETRY = {
    'samples_per_edge': 256,
    'sinc_eps': 1e-12,  # removable singularity threshold in s(delta)
    'ceil_guard': 1e-9,  # absorbs rounding in ceil(sqrt(...))
    'phase_atol': 1e-9,  # rad
}

SPEED_OF_LIGHT = 299792458.0  # m/s

# Logging configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '%(asctime)s [%(levelname)s] %(name)s: %(message)s'
        },
    },
    'handlers': {
        'default': {
            'level': 'DEBUG',
            'formatter': 'standard',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
        },
    },
    'loggers': {
        'airs_relay': {
            'handlers': ['default'],
            'level': 'INFO',
            'propagate': False
        }
    }
}


@dataclass(frozen=True)
class Settings:
    threads: int
    log_level: str
    log_file: Optional[str]


def load_settings(env_path: Optional[str] = None) -> Settings:
    """Read runtime settings from the environment (seeded from .env when present)."""
    load_dotenv(env_path)
    raw_threads = os.getenv('AIRS_THREADS', '0').strip()
    try:
        threads = int(raw_threads)
    except ValueError:
        threads = 0
    if threads <= 0:
        threads = os.cpu_count() or 1
    return Settings(
        threads=threads,
        log_level=os.getenv('AIRS_LOG_LEVEL', 'INFO').upper(),
        log_file=os.getenv('AIRS_LOG_FILE') or None,
    )


def logging_config(level: str = 'INFO', log_file: Optional[str] = None) -> dict:
    """LOGGING with the requested level and an optional file handler."""
    cfg = {
        **LOGGING,
        'handlers': dict(LOGGING['handlers']),
        'loggers': {name: dict(spec) for name, spec in LOGGING['loggers'].items()},
    }
    cfg['loggers']['airs_relay']['level'] = level
    if log_file:
        cfg['handlers']['file'] = {
            'level': 'DEBUG',
            'formatter': 'standard',
            'class': 'logging.FileHandler',
            'filename': log_file,
            'mode': 'a',
        }
        cfg['loggers']['airs_relay']['handlers'] = ['default', 'file']
    return cfg
