"""Group-testing based beam alignment.

A base station searches its angular space for the directions of a sparse
set of channel paths using ACK/NACK scanning beams. This package provides
the angular codebook, a clustered multipath channel with an energy-detection
front end, the analog (one RF chain) and hybrid (two RF chains) interactive
search strategies plus exhaustive baselines, and a Monte-Carlo experiment
engine with reproducible seeding.
"""

from .algorithms import (
    ALGORITHM_NAMES,
    BAOutcome,
    BisectionResult,
    DurationCapExceeded,
    MagtbaResult,
    SlotRecord,
    agtba,
    alpha,
    bisection_search,
    exhaustive,
    format_trace,
    hgtba1,
    hgtba2,
    hgtba3,
    magtba,
    run_algorithm,
)
from .channel import ChannelConfig, GroundTruth, beamform_energy, draw_channel
from .codebook import (
    TWO_PI,
    AngularCodebook,
    IntervalSet,
    build_codebook,
    interval_of,
    take_prefix,
)
from .montecarlo import (
    DEFAULT_THRESHOLD_GRID_DB,
    ExperimentConfig,
    MetricsSummary,
    enumerate_exact,
    iter_enumeration,
    run_experiment,
    run_sweep,
    simulate_trial_outcome,
    threshold_sweep,
)
from .oracle import (
    ORACLE_KINDS,
    BernoulliOracle,
    EnergyOracle,
    NoiselessOracle,
    Oracle,
    OracleSpec,
    Verdict,
    make_oracle,
)

__version__ = "0.1.0"
