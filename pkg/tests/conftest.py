import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gtba import GroundTruth, NoiselessOracle, build_codebook


def truth_at(n_intervals: int, placement) -> GroundTruth:
    """Synthetic ground truth with paths at the given interval midpoints."""
    codebook = build_codebook(n_intervals)
    aoas = tuple((i + 0.5) * codebook.beamwidth for i in placement)
    gains = (complex(1.0, 0.0),) * len(placement)
    return GroundTruth(aoas, gains, tuple(placement))


def noiseless_oracle(n_intervals: int, placement) -> NoiselessOracle:
    return NoiselessOracle(truth_at(n_intervals, placement), build_codebook(n_intervals))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def validate_outcome(outcome, n_intervals: int, n_rf: int, m: int) -> None:
    """Structural legality: slot sizes, intra-slot disjointness, cap, counts."""
    assert outcome.duration_slots == len(outcome.trace)
    assert outcome.duration_slots <= 2 * n_intervals
    assert len(outcome.declared_intervals) <= m
    for record in outcome.trace:
        assert 1 <= len(record.scans) <= n_rf
        seen: set[int] = set()
        for beam, _ in record.scans:
            assert len(beam) >= 1
            assert beam.indices[-1] < n_intervals
            assert seen.isdisjoint(beam.members)
            seen.update(beam.members)
