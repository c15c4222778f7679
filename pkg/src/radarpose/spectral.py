"""Frequency-domain transforms: 4-D FFT, elevation averaging, Doppler
chirp sampling, and the range-Doppler FFT.

Conventions fixed project-wide: unnormalized forward transforms (no 1/N
scaling), FFT lengths default to the next power of two >= the data length
(zero padded, recorded on the output), and Doppler centering places zero
velocity at bin M // 2 via a half-length rotation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .adc import HORIZONTAL, RadarCube
from .config import RadarConfig

AZIMUTH = "azimuth"
ELEVATION = "elevation"


class SpectralError(ValueError):
    pass


def next_pow2(n: int) -> int:
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


def _resolve_pad(pad, dims) -> tuple[int, ...]:
    if pad is None:
        return tuple(next_pow2(d) for d in dims)
    pad = tuple(int(p) for p in pad)
    if len(pad) != len(dims):
        raise SpectralError(f"expected {len(dims)} pad lengths, got {len(pad)}")
    for p, d in zip(pad, dims):
        if p < d:
            raise SpectralError(f"pad length {p} is smaller than data length {d}")
    return pad


@dataclass(frozen=True)
class Spectrum4D:
    """FFT output indexed (range h, Doppler i, azimuth j, elevation k)."""

    data: np.ndarray
    fft_lengths: tuple[int, int, int, int]
    doppler_centered: bool = False
    radar_id: str = HORIZONTAL


@dataclass(frozen=True)
class RangeDopplerAngleMap:
    """Elevation-averaged spectrum indexed (range, Doppler, angle)."""

    data: np.ndarray
    fft_lengths: tuple[int, int, int]
    angle_kind: str
    doppler_centered: bool = False


@dataclass(frozen=True)
class RangeDopplerMap:
    """Per-antenna maps indexed (range, Doppler, virtual antenna).

    The Doppler axis is always stored centered (zero velocity at M // 2).
    """

    data: np.ndarray
    fft_lengths: tuple[int, int]
    is_magnitude: bool = False


def fft4d(cube: RadarCube, config: RadarConfig, pad=None) -> Spectrum4D:
    """Four-axis forward DFT of a radar cube.

    The virtual antenna axis is reshaped to the (P, Q) array geometry
    declared in the config before transforming.
    """
    p_count, q_count = config.array_shape
    n, m, v = cube.data.shape
    if v != p_count * q_count:
        raise SpectralError(f"cube has {v} antennas, geometry needs {p_count * q_count}")
    grid = cube.data.reshape(n, m, p_count, q_count)
    lengths = _resolve_pad(pad, grid.shape)
    out = np.fft.fftn(grid, s=lengths, axes=(0, 1, 2, 3))
    return Spectrum4D(data=out, fft_lengths=lengths, radar_id=cube.radar_id)


def center_doppler(spec):
    """Rotate the Doppler axis so zero velocity sits at the center bin."""
    if spec.doppler_centered:
        return spec
    return replace(spec, data=np.fft.fftshift(spec.data, axes=1), doppler_centered=True)


def average_elevation(spec: Spectrum4D) -> RangeDopplerAngleMap:
    """Complex mean over the elevation axis (the last angular axis)."""
    if spec.data.ndim != 4:
        raise SpectralError(f"expected a 4-D spectrum, got shape {spec.data.shape}")
    angle_kind = AZIMUTH if spec.radar_id == HORIZONTAL else ELEVATION
    return RangeDopplerAngleMap(
        data=spec.data.mean(axis=3),
        fft_lengths=spec.fft_lengths[:3],
        angle_kind=angle_kind,
        doppler_centered=spec.doppler_centered,
    )


def doppler_sample_indices(m: int, keep: int, velocity_window: float) -> np.ndarray:
    """Indices (centered convention) of the retained Doppler bins.

    The window covers ``round(velocity_window * m)`` bins around the center;
    ``keep`` bins are taken at uniform step window//keep, placed symmetrically
    about zero velocity.
    """
    if not 0 < velocity_window <= 1:
        raise SpectralError(f"velocity_window must be in (0, 1], got {velocity_window}")
    window = int(round(velocity_window * m))
    window = max(1, min(window, m))
    if keep < 1 or keep > window:
        raise SpectralError(f"keep={keep} exceeds window size {window}")
    center = m // 2
    step = window // keep
    start = center - (keep * step) // 2 + step // 2
    return start + step * np.arange(keep)


def sample_doppler(spec, keep: int, velocity_window: float = 0.5):
    """Uniformly sample Doppler bins around zero velocity.

    Accepts a Spectrum4D or RangeDopplerAngleMap; returns the reduced object
    (Doppler-centered) plus the selected bin indices in the centered
    convention. Values are selected, never synthesized.
    """
    spec = center_doppler(spec)
    idx = doppler_sample_indices(spec.data.shape[1], keep, velocity_window)
    return replace(spec, data=spec.data[:, idx]), idx


def range_doppler_map(cube: RadarCube, pad=None) -> RangeDopplerMap:
    """2-D FFT over fast time then slow time, per virtual antenna.

    Output Doppler axis is centered.
    """
    n, m, _ = cube.data.shape
    lengths = _resolve_pad(pad, (n, m))
    out = np.fft.fft(cube.data, n=lengths[0], axis=0)
    out = np.fft.fft(out, n=lengths[1], axis=1)
    out = np.fft.fftshift(out, axes=1)
    return RangeDopplerMap(data=out, fft_lengths=lengths)


def magnitude_map(rd: RangeDopplerMap) -> np.ndarray:
    """Antenna-summed magnitude map, the CFAR detection input."""
    if rd.is_magnitude:
        return rd.data.sum(axis=2)
    return np.abs(rd.data).sum(axis=2)
