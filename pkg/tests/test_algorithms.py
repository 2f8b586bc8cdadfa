from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtba import (
    ALGORITHM_NAMES,
    BernoulliOracle,
    IntervalSet,
    NoiselessOracle,
    Verdict,
    agtba,
    alpha,
    bisection_search,
    build_codebook,
    exhaustive,
    format_trace,
    hgtba1,
    hgtba2,
    hgtba3,
    magtba,
    run_algorithm,
)
from conftest import noiseless_oracle, truth_at, validate_outcome
from reference import ref_agtba, ref_bisection, ref_hgtba3, ref_magtba


class TestAlpha:
    @pytest.mark.parametrize(
        "n,m,expected",
        [
            (64, 2, 4),   # floor(log2(63/2)) = floor(4.977)
            (8, 1, 2),    # floor(log2(4))
            (6, 2, 1),    # floor(log2(2.5))
            (2, 1, 0),
            (128, 4, 4),  # floor(log2(125/4))
            (3, 2, 0),
        ],
    )
    def test_values(self, n, m, expected):
        assert alpha(n, m) == expected

    def test_clamped_nonnegative_and_within_pool(self):
        assert alpha(1, 1) == 0
        assert alpha(2, 3) == 0
        for n in range(1, 700):
            for m in range(1, n + 1):
                a = alpha(n, m)
                assert 0 <= a
                assert 2**a <= n

    @given(st.integers(2, 4096), st.integers(1, 64))
    def test_matches_float_log_formula(self, n, m):
        import math

        ratio = n / 2 if m == 1 else (n - m + 1) / m
        if ratio >= 1:
            assert alpha(n, m) == min(math.floor(math.log2(ratio)), math.floor(math.log2(n)))


class TestBisection:
    def test_path_in_upper_region(self):
        oracle = noiseless_oracle(8, (5,))
        res = bisection_search(IntervalSet(range(8)), oracle)
        assert res.found == 5
        assert res.nack_set.indices == (0, 1, 2, 3, 4)
        assert res.scans_used == 3

    def test_path_at_lowest_index_eliminates_nothing(self):
        oracle = noiseless_oracle(8, (0,))
        res = bisection_search(IntervalSet(range(8)), oracle)
        assert res.found == 0
        assert len(res.nack_set) == 0
        assert res.scans_used == 3

    def test_singleton_needs_no_scan(self):
        oracle = noiseless_oracle(8, (4,))
        res = bisection_search(IntervalSet([4]), oracle)
        assert res.found == 4
        assert res.scans_used == 0
        assert oracle.scan_count == 0

    def test_rejects_empty_group(self):
        with pytest.raises(ValueError):
            bisection_search(IntervalSet(), noiseless_oracle(4, (0,)))

    @given(st.integers(1, 64), st.data())
    def test_matches_reference_everywhere(self, size, data):
        n = 64
        start = data.draw(st.integers(0, n - size))
        path = data.draw(st.integers(start, start + size - 1))
        group = IntervalSet(range(start, start + size))
        oracle = noiseless_oracle(n, (path,))
        res = bisection_search(group, oracle)
        ref_found, ref_nacked, ref_scans = ref_bisection(range(start, start + size), {path})
        assert res.found == ref_found == path
        assert res.nack_set.members == ref_nacked
        assert res.scans_used == ref_scans


class TestMagtba:
    def test_empty_pool(self):
        res = magtba(IntervalSet(), 1, noiseless_oracle(8, (0,)))
        assert (res.found, res.p, res.scans_used) == (None, 0, 0)

    def test_zero_budget(self):
        res = magtba(IntervalSet([1, 2]), 0, noiseless_oracle(8, (1,)))
        assert (res.found, res.p, res.scans_used) == (None, 0, 0)

    def test_no_path_sweeps_everything(self):
        oracle = noiseless_oracle(16, (15,))
        res = magtba(IntervalSet(range(8)), 2, oracle)
        assert res.p == 0
        assert res.found is None
        assert res.nack_set == IntervalSet(range(8))

    def test_finds_single_path(self):
        oracle = noiseless_oracle(8, (2,))
        res = magtba(IntervalSet(range(8)), 1, oracle)
        assert (res.found, res.p) == (2, 1)
        assert res.nack_set.indices == (0, 1)
        assert res.scans_used == 3

    @given(st.integers(1, 24), st.integers(1, 3), st.data())
    def test_matches_reference(self, size, m, data):
        paths = data.draw(st.sets(st.integers(0, 31), min_size=1, max_size=3))
        pool = IntervalSet(range(size))
        oracle = noiseless_oracle(32, tuple(sorted(paths)))
        res = magtba(pool, m, oracle)
        ref_nacked, ref_found, ref_p, ref_scans = ref_magtba(range(size), m, paths)
        assert res.p == ref_p
        assert res.found == ref_found
        assert res.nack_set.members == ref_nacked
        assert res.scans_used == ref_scans


def enumerate_placements(n_values=range(4, 17), m_values=(1, 2, 3)):
    for n in n_values:
        for m in m_values:
            for placement in combinations(range(n), m):
                yield n, m, placement


class TestAgtba:
    def test_exhaustive_branch_for_dense_instances(self):
        # N=4, M=3 satisfies N <= 2M-2: every scan must be a singleton
        oracle = noiseless_oracle(4, (0, 1, 2))
        outcome = agtba(IntervalSet.full(4), 3, oracle, exact=True)
        assert sorted(outcome.declared_intervals) == [0, 1, 2]
        assert all(len(beam) == 1 for rec in outcome.trace for beam, _ in rec.scans)

    @pytest.mark.parametrize("n", [2, 4, 8, 16, 32, 64, 128, 256])
    def test_single_path_takes_log2_n_slots(self, n):
        import math

        for path in range(n):
            oracle = noiseless_oracle(n, (path,))
            outcome = agtba(IntervalSet.full(n), 1, oracle, exact=True)
            assert outcome.duration_slots == int(math.log2(n))
            assert outcome.declared_intervals.indices == (path,)

    def test_hand_traced_two_path_instance(self):
        # paths {0, 7} in N=8, slot by slot: {0,1} ACK, bisect {0} ACK, then
        # NACK groups {1,2}, {3,4}, {5}, {6}; the leftover {7} is pigeonholed
        oracle = noiseless_oracle(8, (0, 7))
        outcome = agtba(IntervalSet.full(8), 2, oracle, exact=True)
        assert sorted(outcome.declared_intervals) == [0, 7]
        assert outcome.duration_slots == 6

    def test_matches_reference_on_exhaustive_enumeration(self):
        for n, m, placement in enumerate_placements():
            oracle = noiseless_oracle(n, placement)
            outcome = agtba(IntervalSet.full(n), m, oracle, exact=True)
            ref_declared, ref_slots = ref_agtba(range(n), m, set(placement), exact=True)
            assert outcome.declared_intervals.members == ref_declared == set(placement)
            assert outcome.duration_slots == ref_slots
            validate_outcome(outcome, n, 1, m)

    def test_non_exact_mode_scans_the_last_interval(self):
        oracle = noiseless_oracle(2, (1,))
        outcome = agtba(IntervalSet.full(2), 1, oracle, exact=False)
        assert outcome.duration_slots == 2
        assert outcome.declared_intervals.indices == (1,)


class TestHgtba3:
    def test_hand_traced_split_verdict_instance(self):
        # paths {1, 6} in N=8: slot 1 scans {0,1} ACK / {2,3} NACK; then the
        # bisection of {0,1} (1 scan) runs beside magtba over {4..7} (2 scans)
        oracle = noiseless_oracle(8, (1, 6))
        outcome = hgtba3(IntervalSet.full(8), 2, oracle, exact=True)
        assert sorted(outcome.declared_intervals) == [1, 6]
        assert outcome.duration_slots == 3

    def test_both_nack_discards_both_groups(self):
        oracle = noiseless_oracle(16, (14, 15))
        outcome = hgtba3(IntervalSet.full(16), 2, oracle, exact=True)
        first = outcome.trace[0]
        assert len(first.scans) == 2
        assert all(v is Verdict.NACK for _, v in first.scans)
        assert sorted(outcome.declared_intervals) == [14, 15]

    def test_matches_reference_on_exhaustive_enumeration(self):
        for n, m, placement in enumerate_placements():
            oracle = noiseless_oracle(n, placement)
            outcome = hgtba3(IntervalSet.full(n), m, oracle, exact=True)
            ref_declared, ref_slots = ref_hgtba3(range(n), m, set(placement), exact=True)
            assert outcome.declared_intervals.members == ref_declared == set(placement)
            assert outcome.duration_slots == ref_slots
            validate_outcome(outcome, n, 2, m)


class TestHgtba1:
    def test_idle_second_chain_when_one_path_remains(self):
        # m=1 splits as (1, 0): round one never scans the upper half
        oracle = noiseless_oracle(8, (2,))
        outcome = hgtba1(IntervalSet.full(8), 1, oracle, exact=True)
        assert outcome.declared_intervals.indices == (2,)
        for record in outcome.trace:
            for beam, _ in record.scans:
                assert beam.indices[-1] <= 3

    def test_one_path_per_half_runs_single_round(self):
        oracle = noiseless_oracle(8, (1, 6))
        outcome = hgtba1(IntervalSet.full(8), 2, oracle, exact=True)
        assert sorted(outcome.declared_intervals) == [1, 6]
        # chain 1: {0,1} ACK then bisect {0} NACK; chain 2: {4,5} NACK then
        # {6} ACK with a zero-scan singleton bisection; one round of max(2, 2)
        assert outcome.duration_slots == 2

    def test_both_paths_in_lower_half_takes_two_rounds(self):
        oracle = noiseless_oracle(8, (0, 1))
        outcome = hgtba1(IntervalSet.full(8), 2, oracle, exact=True)
        assert sorted(outcome.declared_intervals) == [0, 1]
        assert outcome.duration_slots == 4


class TestHgtba2:
    def test_single_nack_keeps_acked_group_in_pool(self):
        # paths {0, 2} in N=6, m=2: alpha=1 gives G1={0,1} ACK, G2={2,3} ACK
        # -> both bisected; contrast with a one-ACK slot below
        oracle = noiseless_oracle(16, (0, 9))
        outcome = hgtba2(IntervalSet.full(16), 2, oracle, exact=True)
        assert sorted(outcome.declared_intervals) == [0, 9]
        # slot 1: G1={0..3} ACK, G2={4..7} NACK -> only the NACK group leaves
        first = outcome.trace[0]
        verdicts = [v for _, v in first.scans]
        assert verdicts == [Verdict.ACK, Verdict.NACK]
        second = outcome.trace[1]
        rescanned = second.scans[0][0]
        assert rescanned.indices == (0, 1, 2, 3)  # ACKed group re-enters unexploited

    def test_both_ack_declares_two(self):
        oracle = noiseless_oracle(16, (1, 6))
        outcome = hgtba2(IntervalSet.full(16), 2, oracle, exact=True)
        assert sorted(outcome.declared_intervals) == [1, 6]
        first = outcome.trace[0]
        assert all(v is Verdict.ACK for _, v in first.scans)


class TestExhaustive:
    def test_analog_sweep_scans_to_the_path(self):
        oracle = noiseless_oracle(4, (3,))
        outcome = exhaustive(IntervalSet.full(4), 1, oracle, n_rf=1)
        assert outcome.duration_slots == 4  # no deduction of the last interval
        assert outcome.declared_intervals.indices == (3,)

    def test_two_chain_pair_hit(self):
        oracle = noiseless_oracle(4, (0, 1))
        outcome = exhaustive(IntervalSet.full(4), 2, oracle, n_rf=2)
        assert outcome.duration_slots == 1
        assert sorted(outcome.declared_intervals) == [0, 1]

    def test_never_rescans_singletons(self):
        oracle = noiseless_oracle(9, (8,))
        outcome = exhaustive(IntervalSet.full(9), 1, oracle, n_rf=2)
        scanned = [beam.first() for rec in outcome.trace for beam, _ in rec.scans]
        assert len(scanned) == len(set(scanned))
        assert outcome.duration_slots == 5  # ceil(9/2)

    def test_declaration_capped_at_m(self):
        oracle = noiseless_oracle(4, (0, 1))
        outcome = exhaustive(IntervalSet.full(4), 1, oracle, n_rf=2)
        assert outcome.declared_intervals.indices == (0,)


class TestAllAlgorithmsNoiselessCorrectness:
    @pytest.mark.parametrize("name", ALGORITHM_NAMES)
    def test_small_enumeration_declares_truth(self, name):
        for n, m, placement in enumerate_placements(n_values=(4, 7, 9, 12), m_values=(1, 2, 3)):
            oracle = noiseless_oracle(n, placement)
            outcome = run_algorithm(name, n, m, oracle, exact=name not in ("es", "hes"))
            assert outcome.declared_intervals.members == set(placement), (name, n, placement)
            validate_outcome(outcome, n, 1 if name in ("agtba", "es") else 2, m)


class TestRobustnessUnderNoise:
    @settings(max_examples=60, deadline=None)
    @given(
        st.sampled_from(ALGORITHM_NAMES),
        st.integers(2, 24),
        st.integers(1, 4),
        st.floats(0.0, 1.0),
        st.floats(0.0, 1.0),
        st.integers(0, 2**32 - 1),
    )
    def test_terminates_legally_on_any_bernoulli_oracle(self, name, n, m, p_md, p_fa, seed):
        m = min(m, n)
        truth = truth_at(n, tuple(range(m)))
        oracle = BernoulliOracle(truth, build_codebook(n), p_md, p_fa, np.random.default_rng(seed))
        outcome = run_algorithm(name, n, m, oracle, exact=False)
        validate_outcome(outcome, n, 1 if name in ("agtba", "es") else 2, m)

    def test_adversarial_inverted_oracle(self):
        # every verdict flipped: searches chase phantoms but must still halt
        for name in ALGORITHM_NAMES:
            truth = truth_at(16, (3, 11))
            oracle = BernoulliOracle(truth, build_codebook(16), 1.0, 1.0, np.random.default_rng(0))
            outcome = run_algorithm(name, 16, 2, oracle, exact=False)
            validate_outcome(outcome, 16, 2, 2)


class TestTraceDeterminism:
    @pytest.mark.parametrize("name", ALGORITHM_NAMES)
    def test_identical_runs_identical_traces(self, name):
        truth = truth_at(32, (5, 17))
        cb = build_codebook(32)

        def run():
            oracle = BernoulliOracle(truth, cb, 0.2, 0.1, np.random.default_rng(99))
            return run_algorithm(name, 32, 2, oracle, exact=False)

        first, second = run(), run()
        assert first == second
        assert format_trace(first) == format_trace(second)

    def test_trace_dump_format(self):
        oracle = noiseless_oracle(8, (1, 6))
        outcome = hgtba3(IntervalSet.full(8), 2, oracle, exact=True)
        lines = format_trace(outcome).strip().splitlines()
        assert lines[0] == "0,0,0,0;1,ACK"
        assert lines[1] == "0,1,2,2;3,NACK"
        for line in lines:
            slot, chain, beam_lo, beam_list, result = line.split(",")
            assert int(slot) >= 0 and int(chain) in (0, 1)
            assert beam_list.split(";")[0] == beam_lo
            assert result in ("ACK", "NACK")

    def test_scan_count_matches_trace(self):
        oracle = noiseless_oracle(32, (5, 17))
        outcome = hgtba3(IntervalSet.full(32), 2, oracle, exact=True)
        assert oracle.scan_count == sum(len(rec.scans) for rec in outcome.trace)
