import sys
from pathlib import Path

import pytest

# Make the package importable without installation
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from airs_relay.channel import ArrayGeometry, RadioParams  # noqa: E402
from airs_relay.schemas import ScenarioConfig  # noqa: E402


@pytest.fixture
def cfg():
    return ScenarioConfig()


@pytest.fixture
def rp(cfg):
    return cfg.radio_params()


@pytest.fixture
def ula256():
    return ArrayGeometry(256, 1, 64)


@pytest.fixture
def unit_rp():
    """Unit power budget, handy when only gains matter."""
    return RadioParams(tx_power=1.0, noise_power=1.0, ref_gain=1.0)
