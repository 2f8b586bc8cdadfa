"""Monte-Carlo experiment engine and exact small-instance enumeration.

Each trial derives an independent rng stream from (seed, trial index), draws
one static channel realization, runs the chosen strategy against the chosen
oracle, and records duration, detected paths and outage. Aggregation is a
fold over integer tallies, so results are bit-identical regardless of trial
order or worker count.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from .algorithms import ALGORITHM_NAMES, BAOutcome, run_algorithm
from .channel import ChannelConfig, GroundTruth, draw_channel
from .codebook import build_codebook
from .oracle import NoiselessOracle, OracleSpec, make_oracle

__all__ = [
    "SWEEP_PARAMS",
    "DEFAULT_THRESHOLD_GRID_DB",
    "CSV_HEADER",
    "ExperimentConfig",
    "MetricsSummary",
    "simulate_trial_outcome",
    "run_experiment",
    "run_sweep",
    "threshold_sweep",
    "iter_enumeration",
    "enumerate_exact",
    "csv_row",
]

SWEEP_PARAMS = ("N", "threshold_db")

# 15 points straddling the noise floor (~ -96 dBm, ~ -114 dBm after /N_a) and
# the strongest plausible received level (~ -61 dBm at the inner ring radius)
DEFAULT_THRESHOLD_GRID_DB = tuple(float(-130 + 5 * i) for i in range(15))


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment point or sweep: geometry, strategy, oracle, trial plan."""

    n_intervals: int
    m_paths: int
    algorithm: str
    oracle: OracleSpec = OracleSpec()
    n_trials: int = 10_000
    seed: int = 0
    distinct_intervals: bool | None = None
    sweep: tuple[str, tuple[float, ...]] | None = None
    channel: ChannelConfig = ChannelConfig()

    def __post_init__(self) -> None:
        if self.n_intervals < 1:
            raise ValueError("n_intervals must be >= 1")
        if self.m_paths < 1:
            raise ValueError("m_paths must be >= 1")
        if self.algorithm not in ALGORITHM_NAMES:
            raise ValueError(
                f"algorithm must be one of {ALGORITHM_NAMES}, got {self.algorithm!r}"
            )
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.distinct_resolved and self.m_paths > self.n_intervals:
            raise ValueError("m_paths exceeds n_intervals with distinct_intervals")
        if self.sweep is not None:
            param, values = self.sweep
            if param not in SWEEP_PARAMS:
                raise ValueError(f"sweep_param must be one of {SWEEP_PARAMS}, got {param!r}")
            if len(values) == 0:
                raise ValueError("sweep_values must be nonempty")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ValueError("sweep_values must be strictly increasing")
            if param == "threshold_db" and self.oracle.kind != "energy":
                raise ValueError("threshold_db sweep requires the energy oracle")
            if param == "N" and any(v != int(v) or v < 1 for v in values):
                raise ValueError("N sweep values must be positive integers")

    @property
    def distinct_resolved(self) -> bool:
        """Distinct-interval sampling; defaults off only for the 5G energy oracle."""
        if self.distinct_intervals is not None:
            return self.distinct_intervals
        return self.oracle.kind != "energy"

    @property
    def exact_mode(self) -> bool:
        """Pigeonhole deduction is sound only for truthful oracles on distinct paths."""
        return self.distinct_resolved and self.oracle.is_exact


@dataclass(frozen=True)
class MetricsSummary:
    """Aggregated run metrics; the CI half-width uses the 95% normal approximation."""

    mean_duration: float
    mean_detected_paths: float
    outage_probability: float
    ci_halfwidth_duration: float | None
    n_trials: int


_Tally = tuple[int, int, int, int, int]  # (n, sum_T, sum_T^2, sum_detected, n_outage)


def _trial_rngs(seed: int, trial: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Counter-mode per-trial streams: one for the channel, one for scan noise."""
    children = np.random.SeedSequence(entropy=(seed, trial)).spawn(2)
    return np.random.default_rng(children[0]), np.random.default_rng(children[1])


def simulate_trial_outcome(config: ExperimentConfig, trial: int) -> tuple[GroundTruth, BAOutcome]:
    """Channel realization and full alignment outcome for one trial index."""
    rng_channel, rng_noise = _trial_rngs(config.seed, trial)
    codebook = build_codebook(config.n_intervals)
    truth = draw_channel(
        config.channel,
        config.m_paths,
        codebook,
        rng_channel,
        distinct_intervals=config.distinct_resolved,
    )
    oracle = make_oracle(config.oracle, truth, codebook, config.channel, rng_noise)
    outcome = run_algorithm(
        config.algorithm, config.n_intervals, config.m_paths, oracle, exact=config.exact_mode
    )
    return truth, outcome


def _tally_range(args: tuple[ExperimentConfig, int, int]) -> _Tally:
    config, start, stop = args
    n = sum_t = sum_t2 = sum_det = n_outage = 0
    for trial in range(start, stop):
        truth, outcome = simulate_trial_outcome(config, trial)
        declared = outcome.declared_intervals
        detected = sum(1 for idx in truth.interval_indices if idx in declared)
        duration = outcome.duration_slots
        n += 1
        sum_t += duration
        sum_t2 += duration * duration
        sum_det += detected
        n_outage += detected == 0
    return n, sum_t, sum_t2, sum_det, n_outage


def _summarize(tally: _Tally, m_paths: int) -> MetricsSummary:
    n, sum_t, sum_t2, sum_det, n_outage = tally
    mean_t = sum_t / n
    mean_det = sum_det / n
    outage = n_outage / n
    ci = None
    if n >= 100:
        variance = (sum_t2 - sum_t * sum_t / n) / (n - 1)
        ci = 1.96 * math.sqrt(max(variance, 0.0) / n)
    # a realization counts toward outage only when zero paths were detected,
    # so outage can never exceed the missing-path fraction
    assert outage <= 1.0 - mean_det / m_paths + 1e-9
    return MetricsSummary(
        mean_duration=mean_t,
        mean_detected_paths=mean_det,
        outage_probability=outage,
        ci_halfwidth_duration=ci,
        n_trials=n,
    )


def run_experiment(config: ExperimentConfig, workers: int = 1) -> MetricsSummary:
    """Run all trials of one experiment point and aggregate the metrics."""
    n = config.n_trials
    if workers <= 1 or n < 2 * workers:
        tally = _tally_range((config, 0, n))
    else:
        bounds = [round(i * n / workers) for i in range(workers + 1)]
        jobs = [(config, bounds[i], bounds[i + 1]) for i in range(workers)]
        with multiprocessing.Pool(processes=workers) as pool:
            parts = pool.map(_tally_range, jobs)
        tally = tuple(sum(part[k] for part in parts) for k in range(5))  # type: ignore[assignment]
    return _summarize(tally, config.m_paths)


def run_sweep(config: ExperimentConfig, workers: int = 1) -> list[tuple[float, MetricsSummary]]:
    """One run_experiment per sweep value; all points share the base seed."""
    if config.sweep is None:
        raise ValueError("config has no sweep")
    param, values = config.sweep
    if param == "threshold_db":
        return threshold_sweep(config, values, workers=workers)
    results = []
    for value in values:
        point = replace(config, n_intervals=int(value), sweep=None)
        results.append((float(value), run_experiment(point, workers=workers)))
    return results


def threshold_sweep(
    config: ExperimentConfig, thresholds_db: tuple[float, ...] | list[float], workers: int = 1
) -> list[tuple[float, MetricsSummary]]:
    """Energy-oracle sweep with channel realizations paired across thresholds."""
    if config.oracle.kind != "energy":
        raise ValueError("threshold sweep requires the energy oracle")
    results = []
    for threshold in thresholds_db:
        point = replace(
            config,
            oracle=replace(config.oracle, threshold_db=float(threshold)),
            sweep=None,
        )
        results.append((float(threshold), run_experiment(point, workers=workers)))
    return results


def _truth_at(codebook_n: int, placement: tuple[int, ...]) -> GroundTruth:
    codebook = build_codebook(codebook_n)
    aoas = tuple((i + 0.5) * codebook.beamwidth for i in placement)
    gains = (complex(1.0, 0.0),) * len(placement)
    return GroundTruth(aoas, gains, tuple(placement))


def iter_enumeration(n: int, m: int, algorithm: str):
    """Yield (placement, outcome) for every placement of m paths in n intervals.

    Noiseless oracle, exact mode: the deterministic ground truth for small
    instances. Placements are distinct-interval combinations.
    """
    if algorithm not in ALGORITHM_NAMES:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    if math.comb(n, m) > 1_000_000:
        raise ValueError(f"combinatorial budget exceeded: C({n},{m}) > 1e6")
    codebook = build_codebook(n)
    for placement in combinations(range(n), m):
        truth = _truth_at(n, placement)
        oracle = NoiselessOracle(truth, codebook)
        yield placement, run_algorithm(algorithm, n, m, oracle, exact=True)


def enumerate_exact(n: int, m: int, algorithm: str) -> float:
    """Exact mean noiseless duration over all C(n, m) distinct placements."""
    total = 0
    count = 0
    for _, outcome in iter_enumeration(n, m, algorithm):
        total += outcome.duration_slots
        count += 1
    return total / count


CSV_HEADER = (
    "algorithm,oracle,N,M,param,param_value,trials,"
    "mean_duration,ci_duration,mean_detected,outage,seed"
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return str(int(value)) if value.is_integer() and abs(value) < 1e15 else repr(value)
    return str(value)


def csv_row(
    algorithm: str,
    oracle: OracleSpec,
    n: int,
    m: int,
    param: str,
    param_value,
    summary: MetricsSummary,
    seed: int,
) -> str:
    """One results row in the stable experiment CSV schema."""
    fields = (
        algorithm,
        oracle.describe(),
        _fmt(n),
        _fmt(m),
        param,
        _fmt(param_value),
        _fmt(summary.n_trials),
        _fmt(summary.mean_duration),
        _fmt(summary.ci_halfwidth_duration),
        _fmt(summary.mean_detected_paths),
        _fmt(summary.outage_probability),
        _fmt(seed),
    )
    return ",".join(fields)
