"""Radar acquisition configuration and key=value config file loading."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path


class ConfigError(ValueError):
    """Raised for invalid or missing configuration values."""


@dataclass(frozen=True)
class RadarConfig:
    """Static acquisition parameters for one radar sensor.

    ``azimuth_antennas`` x ``elevation_antennas`` describes how the virtual
    channels are arranged geometrically; the default is a uniform linear
    array in azimuth (all virtual channels on the horizontal axis).
    """

    num_adc_samples: int
    num_chirps: int
    num_tx: int
    num_rx: int
    sample_rate: float        # Hz
    chirp_slope: float        # Hz/s
    carrier_freq: float       # Hz
    frame_rate: float = 10.0  # frames/s
    antenna_spacing: float = 0.5  # in wavelengths
    azimuth_antennas: int = 0     # 0 -> num_virtual
    elevation_antennas: int = 1
    chirp_period: float = 0.0     # s; 0 -> derived from frame timing

    def __post_init__(self):
        for name in ("num_adc_samples", "num_chirps", "num_tx", "num_rx"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ConfigError(f"{name} must be an integer >= 1, got {v!r}")
        for name in ("sample_rate", "chirp_slope", "carrier_freq", "frame_rate"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if self.antenna_spacing <= 0:
            raise ConfigError("antenna_spacing must be > 0")
        az = self.azimuth_antennas or self.num_virtual
        if az * self.elevation_antennas != self.num_virtual:
            raise ConfigError(
                f"antenna geometry {az}x{self.elevation_antennas} does not match "
                f"{self.num_virtual} virtual channels"
            )

    @property
    def num_virtual(self) -> int:
        return self.num_tx * self.num_rx

    @property
    def array_shape(self) -> tuple[int, int]:
        """(horizontal count P, vertical count Q) of the virtual array."""
        az = self.azimuth_antennas or self.num_virtual
        return az, self.elevation_antennas

    @property
    def chirp_interval(self) -> float:
        """Chirp repetition interval in seconds (slow-time step)."""
        if self.chirp_period > 0:
            return self.chirp_period
        return 1.0 / (self.frame_rate * self.num_chirps * self.num_tx)


_INT_FIELDS = {
    "num_adc_samples", "num_chirps", "num_tx", "num_rx",
    "azimuth_antennas", "elevation_antennas",
}
_REQUIRED = {
    "num_adc_samples", "num_chirps", "num_tx", "num_rx",
    "sample_rate", "chirp_slope", "carrier_freq", "frame_rate",
}


def parse_config_text(text: str) -> RadarConfig:
    """Parse a ``key = value`` config document into a RadarConfig.

    Blank lines and lines starting with '#' are ignored. Unknown keys and
    missing required keys are errors.
    """
    known = {f.name for f in dataclasses.fields(RadarConfig)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = int(val) if key in _INT_FIELDS else float(val)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {val!r}") from exc
    missing = _REQUIRED - values.keys()
    if missing:
        raise ConfigError(f"missing required keys: {sorted(missing)}")
    return RadarConfig(**values)


def load_config(path: str | Path) -> RadarConfig:
    return parse_config_text(Path(path).read_text())


def config_text(cfg: RadarConfig) -> str:
    """Serialize a RadarConfig back to the key=value format."""
    lines = [f"{f.name} = {getattr(cfg, f.name)}" for f in dataclasses.fields(cfg)]
    return "\n".join(lines) + "\n"
