import numpy as np
import pytest

from radarpose.config import RadarConfig


@pytest.fixture
def small_config():
    """4 samples, 2 chirps, 2x2 MIMO: the smallest interesting geometry."""
    return RadarConfig(
        num_adc_samples=4,
        num_chirps=2,
        num_tx=2,
        num_rx=2,
        sample_rate=1e7,
        chirp_slope=3e13,
        carrier_freq=7.7e10,
    )


@pytest.fixture
def sim_config():
    """Simulator-scale config: 64 samples, 16 chirps, 8 virtual antennas."""
    return RadarConfig(
        num_adc_samples=64,
        num_chirps=16,
        num_tx=2,
        num_rx=4,
        sample_rate=1e7,
        chirp_slope=3e13,
        carrier_freq=7.7e10,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
