"""Scan oracles: does this beam contain at least one path?

Three interchangeable back-ends behind one `scan(beam) -> Verdict` surface:
an ideal oracle, a Bernoulli-corrupted one (independent misdetection /
false-alarm flips per scan), and an energy detector over the clustered
channel (ACK iff P_RX / N_a >= threshold).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelConfig, GroundTruth, beamform_energy
from .codebook import AngularCodebook, IntervalSet

__all__ = [
    "ORACLE_KINDS",
    "Verdict",
    "OracleSpec",
    "Oracle",
    "NoiselessOracle",
    "BernoulliOracle",
    "EnergyOracle",
    "make_oracle",
]

ORACLE_KINDS = ("noiseless", "bernoulli", "energy")


class Verdict(enum.Enum):
    ACK = "ACK"
    NACK = "NACK"


@dataclass(frozen=True)
class OracleSpec:
    """Configuration-level oracle selector.

    kind 'bernoulli' uses (p_md, p_fa); kind 'energy' uses threshold_db
    (dBm scale, compared against P_RX / N_a in mW).
    """

    kind: str = "noiseless"
    p_md: float = 0.0
    p_fa: float = 0.0
    threshold_db: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ORACLE_KINDS:
            raise ValueError(f"oracle kind must be one of {ORACLE_KINDS}, got {self.kind!r}")
        if not (0.0 <= self.p_md <= 1.0 and 0.0 <= self.p_fa <= 1.0):
            raise ValueError("p_md and p_fa must lie in [0, 1]")
        if not math.isfinite(self.threshold_db):
            raise ValueError("threshold_db must be finite")

    @property
    def is_exact(self) -> bool:
        """Whether every verdict is guaranteed truthful."""
        if self.kind == "noiseless":
            return True
        if self.kind == "bernoulli":
            return self.p_md == 0.0 and self.p_fa == 0.0
        return False

    def describe(self) -> str:
        if self.kind == "bernoulli":
            return f"bernoulli:{self.p_md}:{self.p_fa}"
        if self.kind == "energy":
            return f"energy:{self.threshold_db}"
        return "noiseless"


class Oracle:
    """One oracle instance per channel realization; counts every scan issued."""

    kind = "abstract"

    def __init__(self, truth: GroundTruth, codebook: AngularCodebook) -> None:
        self.truth = truth
        self.codebook = codebook
        self._true_intervals = frozenset(truth.interval_indices)
        self._scan_count = 0

    @property
    def scan_count(self) -> int:
        return self._scan_count

    def scan(self, beam: IntervalSet) -> Verdict:
        if len(beam) == 0:
            raise ValueError("cannot scan an empty beam")
        if beam.indices[-1] >= self.codebook.n_intervals:
            raise ValueError("beam contains indices outside the codebook")
        self._scan_count += 1
        return self._verdict(beam)

    def _verdict(self, beam: IntervalSet) -> Verdict:
        raise NotImplementedError

    def _beam_hits_path(self, beam: IntervalSet) -> bool:
        return not self._true_intervals.isdisjoint(beam.members)


class NoiselessOracle(Oracle):
    kind = "noiseless"

    def _verdict(self, beam: IntervalSet) -> Verdict:
        return Verdict.ACK if self._beam_hits_path(beam) else Verdict.NACK


class BernoulliOracle(Oracle):
    """Ideal verdict flipped i.i.d. per scan: ACK->NACK w.p. p_md, NACK->ACK w.p. p_fa."""

    kind = "bernoulli"

    def __init__(
        self,
        truth: GroundTruth,
        codebook: AngularCodebook,
        p_md: float,
        p_fa: float,
        rng: np.random.Generator,
    ) -> None:
        super().__init__(truth, codebook)
        if not (0.0 <= p_md <= 1.0 and 0.0 <= p_fa <= 1.0):
            raise ValueError("p_md and p_fa must lie in [0, 1]")
        self.p_md = p_md
        self.p_fa = p_fa
        self._rng = rng

    def _verdict(self, beam: IntervalSet) -> Verdict:
        if self._beam_hits_path(beam):
            # draw only when a flip is possible so that (0, 0) is scan-for-scan
            # identical to the noiseless oracle
            if self.p_md > 0.0 and self._rng.random() < self.p_md:
                return Verdict.NACK
            return Verdict.ACK
        if self.p_fa > 0.0 and self._rng.random() < self.p_fa:
            return Verdict.ACK
        return Verdict.NACK


class EnergyOracle(Oracle):
    """ACK iff the gain-normalized received energy reaches the threshold."""

    kind = "energy"

    def __init__(
        self,
        truth: GroundTruth,
        codebook: AngularCodebook,
        threshold_db: float,
        channel_config: ChannelConfig,
        rng: np.random.Generator,
    ) -> None:
        super().__init__(truth, codebook)
        if not math.isfinite(threshold_db):
            raise ValueError("threshold_db must be finite")
        self.threshold_db = threshold_db
        self._threshold_mw = 10.0 ** (threshold_db / 10.0)
        self.channel_config = channel_config
        self._rng = rng

    def _verdict(self, beam: IntervalSet) -> Verdict:
        p_rx, n_active = beamform_energy(self.truth, beam, self.codebook, self.channel_config, self._rng)
        return Verdict.ACK if p_rx / n_active >= self._threshold_mw else Verdict.NACK


def make_oracle(
    spec: OracleSpec,
    truth: GroundTruth,
    codebook: AngularCodebook,
    channel_config: ChannelConfig,
    rng: np.random.Generator,
) -> Oracle:
    if spec.kind == "noiseless":
        return NoiselessOracle(truth, codebook)
    if spec.kind == "bernoulli":
        return BernoulliOracle(truth, codebook, spec.p_md, spec.p_fa, rng)
    if spec.kind == "energy":
        return EnergyOracle(truth, codebook, spec.threshold_db, channel_config, rng)
    raise ValueError(f"unknown oracle kind {spec.kind!r}")
