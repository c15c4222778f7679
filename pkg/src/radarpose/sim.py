"""Synthetic FMCW point-scatterer simulator with closed-form expected bins.

Idealized stop-and-hop model: per target the sample at (n, chirp m, virtual
antenna v) receives

    A * exp(j*2*pi * (f_b*n/f_s + f_d*m*T_c + spacing*(p*sin(a1) + q*sin(a2))))

with beat frequency f_b = 2*slope*range/c, Doppler f_d = 2*v_r*f_c/c, slow
time step T_c, and (p, q) the virtual antenna's position in the array grid.
a1 is the angle along the radar's primary array axis (azimuth for the
horizontal radar, elevation for the vertical one); a2 is the other angle.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .adc import HORIZONTAL, VERTICAL, RadarCube
from .config import RadarConfig

SPEED_OF_LIGHT = 299_792_458.0


class SimError(ValueError):
    pass


@dataclass(frozen=True)
class Target:
    range_m: float
    radial_velocity: float = 0.0
    azimuth: float = 0.0    # radians
    elevation: float = 0.0  # radians
    rcs_amplitude: float = 1.0

    def __post_init__(self):
        if self.range_m <= 0:
            raise SimError(f"range must be > 0, got {self.range_m}")
        if not (abs(self.azimuth) < math.pi / 2 and abs(self.elevation) < math.pi / 2):
            raise SimError("azimuth and elevation must be within (-pi/2, pi/2)")


@dataclass(frozen=True)
class SceneSpec:
    targets: tuple[Target, ...] = ()
    snr_db: float | None = None  # None disables noise
    noise_seed: int = 0

    @staticmethod
    def from_json(text: str) -> "SceneSpec":
        doc = json.loads(text)
        targets = tuple(
            Target(
                range_m=t["range"],
                radial_velocity=t.get("radial_velocity", 0.0),
                azimuth=t.get("azimuth", 0.0),
                elevation=t.get("elevation", 0.0),
                rcs_amplitude=t.get("rcs_amplitude", 1.0),
            )
            for t in doc.get("targets", [])
        )
        return SceneSpec(
            targets=targets,
            snr_db=doc.get("snr_db"),
            noise_seed=int(doc.get("noise_seed", 0)),
        )

    @staticmethod
    def load(path: str | Path) -> "SceneSpec":
        return SceneSpec.from_json(Path(path).read_text())


def _beat_freq(t: Target, config: RadarConfig) -> float:
    return 2.0 * config.chirp_slope * t.range_m / SPEED_OF_LIGHT


def _doppler_freq(t: Target, config: RadarConfig) -> float:
    return 2.0 * t.radial_velocity * config.carrier_freq / SPEED_OF_LIGHT


def _slow_time_step(config: RadarConfig) -> float:
    # one chirp index step spans all TX firings
    return config.chirp_interval * config.num_tx


def _array_angles(t: Target, radar_id: str) -> tuple[float, float]:
    if radar_id == HORIZONTAL:
        return t.azimuth, t.elevation
    if radar_id == VERTICAL:
        return t.elevation, t.azimuth
    raise SimError(f"bad radar_id {radar_id!r}")


def synth_frame(
    scene: SceneSpec,
    config: RadarConfig,
    radar_id: str = HORIZONTAL,
    frame_index: int = 0,
) -> RadarCube:
    """Generate one noisy frame; deterministic given (scene, config, seed).

    The noise RNG is seeded per (noise_seed, frame_index, radar) so every
    frame and radar draws an independent but reproducible stream.
    """
    n = np.arange(config.num_adc_samples)[:, None, None]
    m = np.arange(config.num_chirps)[None, :, None]
    v = np.arange(config.num_virtual)[None, None, :]
    p_count, q_count = config.array_shape
    p = v // q_count
    q = v % q_count
    data = np.zeros(
        (config.num_adc_samples, config.num_chirps, config.num_virtual),
        dtype=np.complex128,
    )
    warnings = []
    t_c = _slow_time_step(config)
    for idx, tgt in enumerate(scene.targets):
        f_b = _beat_freq(tgt, config)
        f_d = _doppler_freq(tgt, config)
        if f_b >= config.sample_rate:
            warnings.append(f"target {idx}: beat frequency aliases (range too large)")
        if abs(f_d * t_c) >= 0.5:
            warnings.append(f"target {idx}: Doppler aliases (velocity too large)")
        a1, a2 = _array_angles(tgt, radar_id)
        phase = (
            f_b * n / config.sample_rate
            + f_d * t_c * m
            + config.antenna_spacing * (p * math.sin(a1) + q * math.sin(a2))
        )
        data += tgt.rcs_amplitude * np.exp(2j * np.pi * phase)
    if scene.snr_db is not None:
        amp_ref = max((t.rcs_amplitude for t in scene.targets), default=1.0)
        noise_power = amp_ref ** 2 / 10.0 ** (scene.snr_db / 10.0)
        rng = np.random.default_rng(
            [scene.noise_seed, frame_index, 0 if radar_id == HORIZONTAL else 1]
        )
        sigma = math.sqrt(noise_power / 2.0)
        data += sigma * (rng.standard_normal(data.shape) + 1j * rng.standard_normal(data.shape))
    return RadarCube(
        data=data, frame_index=frame_index, radar_id=radar_id, warnings=tuple(warnings)
    )


def expected_bins(
    t: Target, config: RadarConfig, fft_lengths: tuple[int, int, int, int]
) -> tuple[int, int, int, int]:
    """Closed-form (range, Doppler, azimuth, elevation) peak bin indices.

    ``fft_lengths`` = (range FFT, Doppler FFT, azimuth FFT, elevation FFT).
    The Doppler index uses the zero-centered convention; angle bins wrap
    modulo their FFT length.
    """
    n_fft, m_fft, a_fft, e_fft = fft_lengths
    range_bin = round(_beat_freq(t, config) * n_fft / config.sample_rate) % n_fft
    doppler_raw = round(_doppler_freq(t, config) * _slow_time_step(config) * m_fft)
    doppler_bin = (m_fft // 2 + doppler_raw) % m_fft
    az_bin = round(a_fft * config.antenna_spacing * math.sin(t.azimuth)) % a_fft
    el_bin = round(e_fft * config.antenna_spacing * math.sin(t.elevation)) % e_fft
    return range_bin, doppler_bin, az_bin, el_bin
