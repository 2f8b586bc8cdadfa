"""Independent reference implementations used to derive expected test values.

Deliberately separate from the library: recursive, float-log based, plain
tuples and frozensets. Tests compare library outputs against these on
exhaustive small-instance enumerations, so a bookkeeping bug would have to
appear identically in two structurally different implementations to slip
through.
"""

import math


def ref_group_size(n: int, m: int) -> int:
    """2**floor(log2(.)) group sizing with the same clamps as the library."""
    ratio = n / 2 if m == 1 else (n - m + 1) / m
    if ratio < 1:
        return 1
    return min(2 ** math.floor(math.log2(ratio)), n)


def ref_bisection(group, defectives):
    """-> (found, nacked frozenset, scans). Lower-half-first convention."""
    group = sorted(group)
    nacked = set()
    scans = 0
    while len(group) > 1:
        half = group[: (len(group) + 1) // 2]
        scans += 1
        if any(d in half for d in defectives):
            group = half
        else:
            nacked.update(half)
            group = group[len(half):]
    return group[0], frozenset(nacked), scans


def ref_sweep(pool, m, defectives, n_rf, exact):
    """Ascending singleton sweep. -> (declared frozenset, slots)."""
    declared = set()
    slots = 0
    remaining = list(pool)
    while remaining and len(declared) < m:
        if exact and len(remaining) == m - len(declared):
            declared.update(remaining)
            break
        batch, remaining = remaining[:n_rf], remaining[n_rf:]
        slots += 1
        for item in batch:
            if item in defectives and len(declared) < m:
                declared.add(item)
    return frozenset(declared), slots


def ref_agtba(pool, m, defectives, exact=True):
    """Recursive analog search. -> (declared frozenset, slots)."""
    pool = tuple(sorted(pool))
    if m <= 0 or not pool:
        return frozenset(), 0
    if exact and len(pool) == m:
        return frozenset(pool), 0
    if len(pool) <= 2 * m - 2:
        return ref_sweep(pool, m, defectives, 1, exact)
    group = pool[: ref_group_size(len(pool), m)]
    if any(d in group for d in defectives):
        found, nacked, scans = ref_bisection(group, defectives)
        rest = tuple(i for i in pool if i != found and i not in nacked)
        declared, slots = ref_agtba(rest, m - 1, defectives, exact)
        return declared | {found}, slots + 1 + scans
    declared, slots = ref_agtba(pool[len(group):], m, defectives, exact)
    return declared, slots + 1


def ref_magtba(pool, m, defectives):
    """-> (nacked frozenset, found-or-None, p, scans)."""
    pool = tuple(sorted(pool))
    if m < 1 or not pool:
        return frozenset(), None, 0, 0
    nacked = set()
    scans = 0
    while pool:
        group = pool[: ref_group_size(len(pool), m)]
        scans += 1
        if any(d in group for d in defectives):
            found, bis_nacked, bis_scans = ref_bisection(group, defectives)
            nacked.update(bis_nacked)
            return frozenset(nacked), found, 1, scans + bis_scans
        nacked.update(group)
        pool = pool[len(group):]
    return frozenset(nacked), None, 0, scans


def ref_hgtba3(pool, m, defectives, exact=True):
    """Recursive two-chain search. -> (declared frozenset, slots)."""
    pool = tuple(sorted(pool))
    if m <= 0 or not pool:
        return frozenset(), 0
    if exact and len(pool) == m:
        return frozenset(pool), 0
    if len(pool) <= 2 * m - 2:
        return ref_sweep(pool, m, defectives, 2, exact)
    size = ref_group_size(len(pool), m)
    group1 = pool[:size]
    group2 = pool[size : 2 * size]
    ack1 = any(d in group1 for d in defectives)
    if not group2:
        if ack1:
            found, nacked, scans = ref_bisection(group1, defectives)
            rest = tuple(i for i in pool if i != found and i not in nacked)
            declared, slots = ref_hgtba3(rest, m - 1, defectives, exact)
            return declared | {found}, slots + 1 + scans
        declared, slots = ref_hgtba3(pool[len(group1):], m, defectives, exact)
        return declared, slots + 1
    ack2 = any(d in group2 for d in defectives)
    if not ack1 and not ack2:
        declared, slots = ref_hgtba3(pool[len(group1) + len(group2):], m, defectives, exact)
        return declared, slots + 1
    if ack1 and ack2:
        if m == 1:
            found, nacked, scans = ref_bisection(group1, defectives)
            return frozenset({found}), 1 + scans
        f1, nk1, s1 = ref_bisection(group1, defectives)
        f2, nk2, s2 = ref_bisection(group2, defectives)
        removed = {f1, f2} | nk1 | nk2
        rest = tuple(i for i in pool if i not in removed)
        declared, slots = ref_hgtba3(rest, m - 2, defectives, exact)
        return declared | {f1, f2}, slots + 1 + max(s1, s2)
    acked_group, nacked_group = (group1, group2) if ack1 else (group2, group1)
    found, bis_nacked, bis_scans = ref_bisection(acked_group, defectives)
    side_pool = pool[len(group1) + len(group2):]
    side_nacked, side_found, p, side_scans = ref_magtba(side_pool, m - 1, defectives)
    removed = {found} | bis_nacked | set(nacked_group) | side_nacked
    if p:
        removed.add(side_found)
    rest = tuple(i for i in pool if i not in removed)
    declared, slots = ref_hgtba3(rest, m - 1 - p, defectives, exact)
    extra = {found} | ({side_found} if p else set())
    return declared | extra, slots + 1 + max(bis_scans, side_scans)


def ref_hes_duration_m2(n: int, placement) -> int:
    """Closed form for the two-chain sweep with two paths: slot of the later path."""
    later = max(placement)
    return later // 2 + 1
