import pytest

from radarpose.config import ConfigError, RadarConfig, config_text, load_config, parse_config_text

GOOD = """
# test rig
num_adc_samples = 64
num_chirps = 16
num_tx = 2
num_rx = 4
sample_rate = 1e7
chirp_slope = 3e13
carrier_freq = 7.7e10
frame_rate = 10
"""


def test_parse_good():
    cfg = parse_config_text(GOOD)
    assert cfg.num_adc_samples == 64
    assert cfg.num_virtual == 8
    assert cfg.array_shape == (8, 1)
    assert cfg.antenna_spacing == 0.5


def test_round_trip(tmp_path):
    cfg = parse_config_text(GOOD)
    path = tmp_path / "radar.cfg"
    path.write_text(config_text(cfg))
    assert load_config(path) == cfg


@pytest.mark.parametrize("line", [
    "bogus_key = 3",
    "num_tx = 0",
    "sample_rate = -1",
    "num_chirps = oops",
    "no equals sign here",
])
def test_bad_lines(line):
    with pytest.raises(ConfigError):
        parse_config_text(GOOD + line + "\n")


def test_missing_required():
    with pytest.raises(ConfigError, match="missing"):
        parse_config_text("num_adc_samples = 4\n")


def test_geometry_must_cover_virtual_array():
    with pytest.raises(ConfigError, match="geometry"):
        parse_config_text(GOOD + "azimuth_antennas = 3\nelevation_antennas = 2\n")


def test_chirp_interval_default():
    cfg = parse_config_text(GOOD)
    # 10 fps * 16 chirps * 2 tx firings
    assert cfg.chirp_interval == pytest.approx(1.0 / 320.0)
    explicit = parse_config_text(GOOD + "chirp_period = 1e-4\n")
    assert explicit.chirp_interval == 1e-4
