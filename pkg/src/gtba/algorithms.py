"""Interactive beam-alignment strategies over an ACK/NACK oracle.

Every strategy consumes a pool of interval indices plus an oracle and emits a
per-slot trace. Analog strategies issue one scan per time slot. Hybrid
strategies drive two logical RF chains in lockstep: each chain runs its own
sub-search and the round costs max(len_1, len_2) slots, the early finisher
idling. Chains are a scheduling fiction, not threads.

`exact=True` enables the pigeonhole shortcut for truthful oracles with
distinct path intervals: when the residual pool size equals the residual
number of paths, the rest is declared without scanning. It applies to the
group-testing strategies only; the plain exhaustive sweeps never deduce.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import zip_longest

from .codebook import IntervalSet, take_prefix
from .oracle import Oracle, Verdict

__all__ = [
    "ALGORITHM_NAMES",
    "Scan",
    "SlotRecord",
    "BAOutcome",
    "BisectionResult",
    "MagtbaResult",
    "DurationCapExceeded",
    "alpha",
    "bisection_search",
    "magtba",
    "agtba",
    "hgtba1",
    "hgtba2",
    "hgtba3",
    "exhaustive",
    "run_algorithm",
    "format_trace",
]

ALGORITHM_NAMES = ("agtba", "hgtba1", "hgtba2", "hgtba3", "es", "hes")

Scan = tuple[IntervalSet, Verdict]


class DurationCapExceeded(RuntimeError):
    """A run blew through the 2N-slot safety cap; indicates a scheduling bug."""


@dataclass(frozen=True)
class SlotRecord:
    """All scans issued in one time slot (1..n_rf, mutually disjoint beams)."""

    slot_index: int
    scans: tuple[Scan, ...]


@dataclass(frozen=True)
class BAOutcome:
    declared_intervals: IntervalSet
    duration_slots: int
    trace: tuple[SlotRecord, ...]


@dataclass(frozen=True)
class BisectionResult:
    found: int
    nack_set: IntervalSet
    scans: tuple[Scan, ...]

    @property
    def scans_used(self) -> int:
        return len(self.scans)


@dataclass(frozen=True)
class MagtbaResult:
    nack_set: IntervalSet
    found: int | None
    p: int
    scans: tuple[Scan, ...]

    @property
    def scans_used(self) -> int:
        return len(self.scans)


def alpha(n: int, m: int) -> int:
    """Group-size exponent: scanning groups hold 2**alpha intervals.

    floor(log2(n/2)) when one path remains, floor(log2((n-m+1)/m)) otherwise,
    clamped into [0, floor(log2 n)] so a group never exceeds the pool. Integer
    arithmetic throughout (floor(log2(a/b)) == floor(log2(a//b)) for a >= b).
    """
    if n < 1 or m < 1:
        raise ValueError("alpha requires n >= 1 and m >= 1")
    ratio = n // 2 if m == 1 else (n - m + 1) // m
    a = ratio.bit_length() - 1 if ratio >= 1 else 0
    return max(0, min(a, n.bit_length() - 1))


def _group_size(pool_size: int, m: int) -> int:
    return min(2 ** alpha(pool_size, m), pool_size)


def bisection_search(group: IntervalSet, oracle: Oracle) -> BisectionResult:
    """Locate one path inside a group already known (per the oracle) to hold one.

    Repeatedly scans the lowest-index ceil(k/2) elements, descending into the
    scanned half on ACK and into the complement on NACK, until a singleton
    remains. Returns the found interval, every NACK-scanned half, and the
    scans issued (ceil(log2 k) of them when k is a power of two).
    """
    if len(group) == 0:
        raise ValueError("bisection requires a nonempty group")
    scans: list[Scan] = []
    nacked: list[int] = []
    current = group
    while len(current) > 1:
        lower = take_prefix(current, (len(current) + 1) // 2)
        verdict = oracle.scan(lower)
        scans.append((lower, verdict))
        if verdict is Verdict.ACK:
            current = lower
        else:
            nacked.extend(lower)
            current = current.difference(lower)
    return BisectionResult(found=current.first(), nack_set=IntervalSet(nacked), scans=tuple(scans))


def magtba(pool: IntervalSet, m: int, oracle: Oracle) -> MagtbaResult:
    """One non-recursing analog pass: sweep groups until a single path is found.

    NACKed groups are discarded and the sweep continues; the first ACK triggers
    one bisection and the pass stops with p=1. Exhausting the pool yields p=0.
    `m` only sizes the groups; m < 1 or an empty pool returns immediately.
    """
    if m < 1 or len(pool) == 0:
        return MagtbaResult(IntervalSet(), None, 0, ())
    scans: list[Scan] = []
    nacked: list[int] = []
    current = pool
    while len(current) > 0:
        group = take_prefix(current, _group_size(len(current), m))
        verdict = oracle.scan(group)
        scans.append((group, verdict))
        if verdict is Verdict.ACK:
            hit = bisection_search(group, oracle)
            scans.extend(hit.scans)
            nacked.extend(hit.nack_set)
            return MagtbaResult(IntervalSet(nacked), hit.found, 1, tuple(scans))
        nacked.extend(group)
        current = current.difference(group)
    return MagtbaResult(IntervalSet(nacked), None, 0, tuple(scans))


@dataclass
class _ChainRun:
    """Outcome of one chain-local search: its scans, declarations, leftover pool."""

    scans: list[Scan]
    declared: list[int]
    pool: IntervalSet


def _sweep(
    pool: IntervalSet, m: int, oracle: Oracle, n_rf: int, exact: bool
) -> tuple[list[tuple[Scan, ...]], list[int], IntervalSet]:
    """Singleton sweep in ascending index order, n_rf scans per slot.

    Declares each ACKed interval (capped at m, in chain order within a slot)
    and stops once m are declared or the pool is exhausted.
    """
    slots: list[tuple[Scan, ...]] = []
    declared: list[int] = []
    remaining = list(pool)
    while remaining and len(declared) < m:
        if exact and len(remaining) == m - len(declared):
            declared.extend(remaining)
            remaining = []
            break
        batch, remaining = remaining[:n_rf], remaining[n_rf:]
        slot_scans = []
        for index in batch:
            beam = IntervalSet._from_sorted((index,))
            slot_scans.append((beam, oracle.scan(beam)))
        slots.append(tuple(slot_scans))
        for beam, verdict in slot_scans:
            if verdict is Verdict.ACK and len(declared) < m:
                declared.append(beam.first())
    return slots, declared, IntervalSet(remaining)


def _agtba_chain(pool: IntervalSet, m: int, oracle: Oracle, exact: bool) -> _ChainRun:
    """Analog group-testing search on one chain (one scan per step).

    Falls back to a singleton sweep once the pool is no larger than 2m-2;
    otherwise scans prefix groups of size 2**alpha, discarding on NACK and
    bisecting on ACK, with m decremented per declaration.
    """
    scans: list[Scan] = []
    declared: list[int] = []
    while m > 0 and len(pool) > 0:
        if exact and len(pool) == m:
            declared.extend(pool)
            pool = IntervalSet()
            break
        if len(pool) <= 2 * m - 2:
            sweep_slots, sweep_declared, pool = _sweep(pool, m, oracle, 1, exact)
            scans.extend(scan for slot in sweep_slots for scan in slot)
            declared.extend(sweep_declared)
            break
        group = take_prefix(pool, _group_size(len(pool), m))
        verdict = oracle.scan(group)
        scans.append((group, verdict))
        if verdict is Verdict.NACK:
            pool = pool.difference(group)
        else:
            hit = bisection_search(group, oracle)
            scans.extend(hit.scans)
            declared.append(hit.found)
            pool = pool.difference(hit.nack_set).without(hit.found)
            m -= 1
    return _ChainRun(scans, declared, pool)


def _zip_chains(scans_a: list[Scan] | tuple[Scan, ...], scans_b: list[Scan] | tuple[Scan, ...]) -> list[tuple[Scan, ...]]:
    """Pair two chains' scan sequences into lockstep slots (max-length rounds)."""
    slots = []
    for a, b in zip_longest(scans_a, scans_b):
        slot = tuple(scan for scan in (a, b) if scan is not None)
        if slot:
            slots.append(slot)
    return slots


def _slot_cap(pool: IntervalSet) -> int:
    return 2 * max(len(pool), 1)


def _assemble(declared: list[int], slots: list[tuple[Scan, ...]], cap: int) -> BAOutcome:
    if len(slots) > cap:
        raise DurationCapExceeded(f"{len(slots)} slots used, cap is {cap}")
    trace = tuple(SlotRecord(i, slot) for i, slot in enumerate(slots))
    return BAOutcome(IntervalSet(declared), len(trace), trace)


def agtba(pool: IntervalSet, m: int, oracle: Oracle, *, exact: bool = False) -> BAOutcome:
    """Analog (one RF chain) group-testing beam alignment."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if len(pool) == 0:
        raise ValueError("pool must be nonempty")
    cap = _slot_cap(pool)
    run = _agtba_chain(pool, m, oracle, exact)
    return _assemble(run.declared, [(scan,) for scan in run.scans], cap)


def hgtba1(pool: IntervalSet, m: int, oracle: Oracle, *, exact: bool = False) -> BAOutcome:
    """Hybrid strategy 1: halve the pool, run two analog searches in parallel.

    Each round splits the residual pool into lower ceil(k/2) / upper halves,
    assigns ceil(m/2) and floor(m/2) paths to chains 1 and 2, runs both
    analog searches to completion, removes everything they eliminated or
    declared, and repeats on the residue.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    cap = _slot_cap(pool)
    slots: list[tuple[Scan, ...]] = []
    declared: list[int] = []
    m_rem = m
    current = pool
    while m_rem > 0 and len(current) > 0:
        if exact and len(current) == m_rem:
            declared.extend(current)
            break
        lower = take_prefix(current, (len(current) + 1) // 2)
        upper = current.difference(lower)
        run1 = _agtba_chain(lower, (m_rem + 1) // 2, oracle, exact=False)
        run2 = _agtba_chain(upper, m_rem // 2, oracle, exact=False)
        slots.extend(_zip_chains(run1.scans, run2.scans))
        declared.extend(run1.declared)
        declared.extend(run2.declared)
        m_rem -= len(run1.declared) + len(run2.declared)
        current = run1.pool.union(run2.pool)
        if len(slots) > cap:
            raise DurationCapExceeded(f"{len(slots)} slots used, cap is {cap}")
    return _assemble(declared, slots, cap)


def _scan_two_groups(
    pool: IntervalSet, m: int, oracle: Oracle
) -> tuple[tuple[Scan, ...], list[IntervalSet], list[IntervalSet]]:
    """Form G1 and (when the remainder allows) G2, scan both in one slot.

    Returns the slot's scans plus the ACKed and NACKed groups. G2 takes
    whatever remains when fewer than 2**alpha intervals are left; if nothing
    remains the slot degrades to a single scan.
    """
    size = _group_size(len(pool), m)
    group1 = take_prefix(pool, size)
    rest = pool.difference(group1)
    slot: list[Scan] = [(group1, oracle.scan(group1))]
    if len(rest) > 0:
        group2 = take_prefix(rest, min(size, len(rest)))
        slot.append((group2, oracle.scan(group2)))
    acked = [g for g, v in slot if v is Verdict.ACK]
    nacked = [g for g, v in slot if v is Verdict.NACK]
    return tuple(slot), acked, nacked


def _parallel_bisections(
    groups: list[IntervalSet], m_rem: int, oracle: Oracle
) -> tuple[list[tuple[Scan, ...]], list[BisectionResult]]:
    """Bisect up to min(len(groups), m_rem) ACKed groups on parallel chains.

    Under false alarms both groups can ACK while only one declaration is
    still allowed; then only the first group is bisected.
    """
    results = [bisection_search(g, oracle) for g in groups[: min(len(groups), m_rem)]]
    second = results[1].scans if len(results) > 1 else ()
    return _zip_chains(results[0].scans, second), results


def hgtba2(pool: IntervalSet, m: int, oracle: Oracle, *, exact: bool = False) -> BAOutcome:
    """Hybrid strategy 2: jointly designed parallel group scans.

    Both groups ACK: bisect both in parallel and declare two paths. Any NACK:
    remove only the NACKed group(s) — an ACKed partner group returns to the
    pool unexploited, which is this strategy's documented inefficiency.
    Small pools (|pool| <= 2m-2) fall back to a two-chain singleton sweep.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    cap = _slot_cap(pool)
    slots: list[tuple[Scan, ...]] = []
    declared: list[int] = []
    m_rem = m
    current = pool
    while m_rem > 0 and len(current) > 0:
        if exact and len(current) == m_rem:
            declared.extend(current)
            break
        if len(current) <= 2 * m_rem - 2:
            sweep_slots, sweep_declared, current = _sweep(current, m_rem, oracle, 2, exact)
            slots.extend(sweep_slots)
            declared.extend(sweep_declared)
            break
        slot, acked, nacked = _scan_two_groups(current, m_rem, oracle)
        slots.append(slot)
        if nacked:
            current = current.difference(*nacked)
        else:
            bis_slots, results = _parallel_bisections(acked, m_rem, oracle)
            slots.extend(bis_slots)
            for res in results:
                declared.append(res.found)
                current = current.difference(res.nack_set).without(res.found)
                m_rem -= 1
        if len(slots) > cap:
            raise DurationCapExceeded(f"{len(slots)} slots used, cap is {cap}")
    return _assemble(declared, slots, cap)


def hgtba3(pool: IntervalSet, m: int, oracle: Oracle, *, exact: bool = False) -> BAOutcome:
    """Hybrid strategy 3: exploit every ACK.

    Like hgtba2 for both-ACK and both-NACK slots, but a split verdict puts
    one chain on a bisection of the ACKed group while the other runs a
    non-recursing analog pass (magtba) over the rest of the pool; the round
    costs the longer of the two and removes the NACKed group, everything
    either chain eliminated, and the one or two declared intervals.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    cap = _slot_cap(pool)
    slots: list[tuple[Scan, ...]] = []
    declared: list[int] = []
    m_rem = m
    current = pool
    while m_rem > 0 and len(current) > 0:
        if exact and len(current) == m_rem:
            declared.extend(current)
            break
        if len(current) <= 2 * m_rem - 2:
            sweep_slots, sweep_declared, current = _sweep(current, m_rem, oracle, 2, exact)
            slots.extend(sweep_slots)
            declared.extend(sweep_declared)
            break
        slot, acked, nacked = _scan_two_groups(current, m_rem, oracle)
        slots.append(slot)
        if not acked:
            current = current.difference(*nacked)
        elif not nacked:
            bis_slots, results = _parallel_bisections(acked, m_rem, oracle)
            slots.extend(bis_slots)
            for res in results:
                declared.append(res.found)
                current = current.difference(res.nack_set).without(res.found)
                m_rem -= 1
        else:
            ack_group, nack_group = acked[0], nacked[0]
            rest = current.difference(ack_group, nack_group)
            hit = bisection_search(ack_group, oracle)
            side = magtba(rest, m_rem - 1, oracle)
            slots.extend(_zip_chains(hit.scans, side.scans))
            declared.append(hit.found)
            current = (
                current.difference(hit.nack_set, nack_group, side.nack_set).without(hit.found)
            )
            m_rem -= 1
            if side.p == 1:
                declared.append(side.found)  # type: ignore[arg-type]
                current = current.without(side.found)  # type: ignore[arg-type]
                m_rem -= 1
        if len(slots) > cap:
            raise DurationCapExceeded(f"{len(slots)} slots used, cap is {cap}")
    return _assemble(declared, slots, cap)


def exhaustive(pool: IntervalSet, m: int, oracle: Oracle, n_rf: int = 1) -> BAOutcome:
    """Plain exhaustive sweep (ES with n_rf=1, HES with n_rf=2).

    Scans single intervals in ascending index order, n_rf per slot, declaring
    ACKs until m are declared or the pool is exhausted. Never deduces: the
    last interval is scanned even when its state would be implied.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if n_rf not in (1, 2):
        raise ValueError("n_rf must be 1 or 2")
    cap = _slot_cap(pool)
    slots, declared, _ = _sweep(pool, m, oracle, n_rf, exact=False)
    return _assemble(declared, slots, cap)


def run_algorithm(
    name: str, n_intervals: int, m: int, oracle: Oracle, *, exact: bool = False
) -> BAOutcome:
    """Run a strategy by name over the full codebook pool."""
    pool = IntervalSet.full(n_intervals)
    if name == "agtba":
        return agtba(pool, m, oracle, exact=exact)
    if name == "hgtba1":
        return hgtba1(pool, m, oracle, exact=exact)
    if name == "hgtba2":
        return hgtba2(pool, m, oracle, exact=exact)
    if name == "hgtba3":
        return hgtba3(pool, m, oracle, exact=exact)
    if name == "es":
        return exhaustive(pool, m, oracle, n_rf=1)
    if name == "hes":
        return exhaustive(pool, m, oracle, n_rf=2)
    raise ValueError(f"unknown algorithm {name!r}; expected one of {ALGORITHM_NAMES}")


def format_trace(outcome: BAOutcome) -> str:
    """Line-delimited trace dump: slot,chain,beam_lo,beam_hi_list,result."""
    lines = []
    for record in outcome.trace:
        for chain, (beam, verdict) in enumerate(record.scans):
            beam_list = ";".join(str(i) for i in beam.indices)
            lines.append(f"{record.slot_index},{chain},{beam.first()},{beam_list},{verdict.value}")
    return "\n".join(lines) + "\n" if lines else ""
