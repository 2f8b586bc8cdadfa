"""Clustered multipath channel and sectored-antenna received energy.

One realization places a user on a ring around the base station, draws per
path an angle of arrival, a LOS/NLOS state, log-normal shadowing and Rayleigh
small-scale fading, and keeps the result static for the whole alignment run.
Scanning a beam yields |sqrt(P_tx) * sum_in-beam sqrt(N_a) h_m + w|^2 under
the sectored model: flat power gain N_a inside a width-2*pi/N_a sector, zero
outside. Only the additive noise w is redrawn per scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codebook import TWO_PI, AngularCodebook, IntervalSet, interval_of

__all__ = ["ChannelConfig", "GroundTruth", "draw_channel", "beamform_energy"]

# dB triples: (intercept a, slope b, shadowing sigma); PL = a + b*log10(d) + N(0, sigma^2)
_DEFAULT_LOS = (61.4, 20.0, 5.8)
_DEFAULT_NLOS = (72.0, 29.2, 8.7)


@dataclass(frozen=True)
class ChannelConfig:
    """mmWave single-cell uplink parameters. Powers in dBm, distances in m."""

    carrier_freq_hz: float = 28e9
    bandwidth_hz: float = 57.6e6
    n_rx_antennas: int = 64
    tx_power_dbm: float = 20.0
    noise_psd_dbm_per_hz: float = -174.0
    bs_height_m: float = 10.0
    ue_height_m: float = 2.0
    radius_min_m: float = 10.0
    radius_max_m: float = 200.0
    los_decay_per_m: float = 0.0149
    pathloss_los: tuple[float, float, float] = _DEFAULT_LOS
    pathloss_nlos: tuple[float, float, float] = _DEFAULT_NLOS

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tx_power_dbm) and math.isfinite(self.noise_psd_dbm_per_hz)):
            raise ValueError("powers must be finite")
        if self.bandwidth_hz <= 0 or self.carrier_freq_hz <= 0:
            raise ValueError("bandwidth and carrier frequency must be positive")
        if self.n_rx_antennas < 1:
            raise ValueError("n_rx_antennas must be >= 1")
        if not 0 < self.radius_min_m <= self.radius_max_m:
            raise ValueError("need 0 < radius_min_m <= radius_max_m")
        if self.los_decay_per_m < 0:
            raise ValueError("los_decay_per_m must be >= 0")
        for triple in (self.pathloss_los, self.pathloss_nlos):
            if len(triple) != 3 or triple[2] < 0:
                raise ValueError("path-loss triples are (intercept, slope, sigma>=0)")

    @property
    def tx_power_mw(self) -> float:
        return 10.0 ** (self.tx_power_dbm / 10.0)

    @property
    def noise_power_mw(self) -> float:
        """Additive noise power per scan: PSD * bandwidth, in mW."""
        return 10.0 ** (self.noise_psd_dbm_per_hz / 10.0) * self.bandwidth_hz


@dataclass(frozen=True)
class GroundTruth:
    """The M path directions, complex gains and their interval indices."""

    aoas: tuple[float, ...]
    gains: tuple[complex, ...]
    interval_indices: tuple[int, ...]

    def __post_init__(self) -> None:
        if not (len(self.aoas) == len(self.gains) == len(self.interval_indices) >= 1):
            raise ValueError("aoas, gains and interval_indices must have equal length >= 1")
        for psi in self.aoas:
            if not 0.0 <= psi < TWO_PI:
                raise ValueError(f"AoA {psi} outside [0, 2*pi)")

    @property
    def m_paths(self) -> int:
        return len(self.aoas)


def draw_channel(
    config: ChannelConfig,
    m_paths: int,
    codebook: AngularCodebook,
    rng: np.random.Generator,
    *,
    distinct_intervals: bool = False,
) -> GroundTruth:
    """Draw one static channel realization.

    The user distance is area-uniform on the ring (CDF proportional to
    d^2 - r_min^2). Each path is LOS with probability exp(-decay * d); its
    amplitude gain is 10^(-PL_dB/20) times unit-mean complex Gaussian fading.
    With distinct_intervals the AoAs are rejection-sampled so that no two
    paths share an angular interval. Deterministic given the rng stream.
    """
    if m_paths < 1:
        raise ValueError("m_paths must be >= 1")
    if distinct_intervals and m_paths > codebook.n_intervals:
        raise ValueError(
            f"cannot place {m_paths} paths in {codebook.n_intervals} distinct intervals"
        )
    rmin2 = config.radius_min_m**2
    rmax2 = config.radius_max_m**2
    distance = math.sqrt(rmin2 + rng.random() * (rmax2 - rmin2))
    p_los = math.exp(-config.los_decay_per_m * distance)

    aoas: list[float] = []
    gains: list[complex] = []
    indices: list[int] = []
    occupied: set[int] = set()
    for _ in range(m_paths):
        while True:
            psi = rng.uniform(0.0, TWO_PI)
            idx = interval_of(codebook, psi)
            if not distinct_intervals or idx not in occupied:
                break
        occupied.add(idx)
        is_los = rng.random() < p_los
        intercept, slope, sigma = config.pathloss_los if is_los else config.pathloss_nlos
        pl_db = intercept + slope * math.log10(distance) + sigma * rng.standard_normal()
        fading = complex(rng.standard_normal(), rng.standard_normal()) / math.sqrt(2.0)
        aoas.append(float(psi))
        gains.append(10.0 ** (-pl_db / 20.0) * fading)
        indices.append(idx)
    return GroundTruth(tuple(aoas), tuple(gains), tuple(indices))


def beamform_energy(
    truth: GroundTruth,
    beam: IntervalSet,
    codebook: AngularCodebook,
    config: ChannelConfig,
    rng: np.random.Generator,
) -> tuple[float, int]:
    """Received energy for one scan of `beam` and the active antenna count.

    N_a is the smallest antenna count whose sector 2*pi/N_a covers the beam,
    clamped to [1, n_rx_antennas]; with the codebook's equal-width intervals
    that is ceil(N / |beam|). Paths outside the beam contribute nothing; the
    in-beam paths add coherently with their own phases.
    """
    if len(beam) == 0:
        raise ValueError("cannot beamform an empty beam")
    if beam.indices[-1] >= codebook.n_intervals:
        raise ValueError("beam contains indices outside the codebook")
    n_active = max(1, min(config.n_rx_antennas, -(-codebook.n_intervals // len(beam))))
    signal = 0j
    for idx, gain in zip(truth.interval_indices, truth.gains):
        if idx in beam:
            signal += gain
    signal *= math.sqrt(config.tx_power_mw * n_active)
    noise_scale = math.sqrt(config.noise_power_mw / 2.0)
    noise = complex(rng.standard_normal(), rng.standard_normal()) * noise_scale
    received = signal + noise
    return abs(received) ** 2, n_active
