"""Branch-free small-array sorting networks over lane packs.

Networks are built from the classic recursion: sort both halves, merge the
halves by comparing extremities toward the center (a crossing round), then
finish each half with linear rounds of halving distance.  Every comparator
places the minimum at the lower index, so a region padded at the end with
the greatest representable value sorts exactly like the unpadded data.

Schedules are generated once per (pack count, lane count), cached, and
validated by the zero-one tests; the hand-written single- and two-pack
networks from the reference tables serve as golden fixtures in the test
suite rather than as the implementation.
"""

from __future__ import annotations

from typing import NamedTuple

from .lanes import ElemKind, is_permutation, kind_of

__all__ = [
    "MAX_PACKS",
    "ExchangeStep",
    "IntraStep",
    "CrossPairStep",
    "AlignedPairStep",
    "NetworkSchedule",
    "get_schedule",
    "compare_and_exchange",
    "compare_and_exchange_2packs",
    "sort_packs",
    "sort_small_region",
    "max_small_length",
    "schedule_comparators",
    "check_zero_one",
    "binary_step_patterns",
    "all_binary_patterns",
]

MAX_PACKS = 16


class ExchangeStep(NamedTuple):
    """One intra-pack compare-and-exchange: a pair-swapping permutation plus
    the mask of lanes that receive the maximum."""

    perm: tuple[int, ...]
    dir_mask: tuple[bool, ...]


class IntraStep(NamedTuple):
    packs: tuple[int, ...]
    step: ExchangeStep


class CrossPairStep(NamedTuple):
    """Compare lane i of pack `low` against lane L-1-i of pack `high`."""

    low: int
    high: int


class AlignedPairStep(NamedTuple):
    """Lane-aligned compare between two packs; minima land in `low`."""

    low: int
    high: int


class NetworkSchedule(NamedTuple):
    packs: int
    lanes: int
    steps: tuple


def _next_pow2(n: int) -> int:
    p = 1
    while p < n:
        p <<= 1
    return p


def _depth(n: int) -> int:
    k = n.bit_length() - 1
    return k * (k + 1) // 2


def _comparator_rounds(n: int) -> list[list[tuple[int, int]]]:
    """Comparator pairs of the n-input network, grouped into parallel rounds.

    Every pair (i, j) has i < j and sends the minimum to i.
    """
    rounds: list[list[tuple[int, int]]] = [[] for _ in range(_depth(n))]

    def linear(lo: int, m: int, at: int) -> None:
        if m < 2:
            return
        half = m // 2
        for i in range(half):
            rounds[at].append((lo + i, lo + i + half))
        linear(lo, half, at + 1)
        linear(lo + half, half, at + 1)

    def build(lo: int, m: int, at: int) -> None:
        if m < 2:
            return
        half = m // 2
        build(lo, half, at)
        build(lo + half, half, at)
        merge_at = at + _depth(half)
        for i in range(half):
            rounds[merge_at].append((lo + i, lo + m - 1 - i))
        linear(lo, half, merge_at + 1)
        linear(lo + half, half, merge_at + 1)

    build(0, n, 0)
    return rounds


def _round_to_steps(pairs: list[tuple[int, int]], packs: int, lanes: int) -> list:
    """Convert one comparator round into pack-level steps, dropping pairs
    that touch virtual (padded) packs beyond `packs`."""
    intra: dict[int, list[tuple[int, int]]] = {}
    inter: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for i, j in pairs:
        pi, pj = i // lanes, j // lanes
        if pi >= packs or pj >= packs:
            continue
        if pi == pj:
            intra.setdefault(pi, []).append((i % lanes, j % lanes))
        else:
            inter.setdefault((pi, pj), []).append((i % lanes, j % lanes))

    steps: list = []
    if intra:
        pattern = None
        for pack in intra:
            lane_pairs = tuple(sorted(intra[pack]))
            if pattern is None:
                pattern = lane_pairs
            else:
                assert pattern == lane_pairs, "intra patterns diverge within a round"
        perm = list(range(lanes))
        dir_mask = [False] * lanes
        for a, b in pattern:
            perm[a], perm[b] = b, a
            dir_mask[b] = True
        step = ExchangeStep(tuple(perm), tuple(dir_mask))
        assert is_permutation(step.perm, lanes)
        assert all(step.perm[step.perm[i]] == i for i in range(lanes)), "perm not an involution"
        steps.append(IntraStep(tuple(sorted(intra)), step))

    for (pi, pj), lane_pairs in sorted(inter.items()):
        assert len(lane_pairs) == lanes, "inter-pack round must touch every lane"
        if all(b == lanes - 1 - a for a, b in lane_pairs):
            steps.append(CrossPairStep(pi, pj))
        else:
            assert all(a == b for a, b in lane_pairs), "inter-pack pairs must align or cross"
            steps.append(AlignedPairStep(pi, pj))
    return steps


_SCHEDULES: dict[tuple[int, int], NetworkSchedule] = {}


def get_schedule(packs: int, lanes: int) -> NetworkSchedule:
    """The sorting schedule for `packs` packs of `lanes` lanes (1..MAX_PACKS)."""
    assert 1 <= packs <= MAX_PACKS, f"unsupported pack count {packs}"
    key = (packs, lanes)
    sched = _SCHEDULES.get(key)
    if sched is None:
        total = _next_pow2(packs) * lanes
        steps: list = []
        for pairs in _comparator_rounds(total):
            steps.extend(_round_to_steps(pairs, packs, lanes))
        sched = NetworkSchedule(packs, lanes, tuple(steps))
        _SCHEDULES[key] = sched
    return sched


# -- execution over a lane backend --------------------------------------------


def compare_and_exchange(backend, v, step: ExchangeStep):
    """Permute, take lane minima and maxima, and keep the maximum in the
    lanes flagged by the step's direction mask."""
    return backend.compare_exchange(v, step.perm, step.dir_mask)


def compare_and_exchange_2packs(backend, a, b):
    """Merge step between two sorted packs: lane i of `a` meets lane L-1-i of
    `b`; minima stay in `a` and maxima return to `b` in its lane order."""
    return backend.cross_exchange(a, b)


def sort_packs(backend, packs: list) -> list:
    """Sort 1..16 packs so their concatenation (pack order, lane order) is
    ascending.  The lane multiset is preserved."""
    out = list(packs)
    schedule = get_schedule(len(out), backend.lanes)
    for st in schedule.steps:
        if type(st) is IntraStep:
            cx = backend.compare_exchange
            perm, dir_mask = st.step
            for p in st.packs:
                out[p] = cx(out[p], perm, dir_mask)
        elif type(st) is CrossPairStep:
            out[st.low], out[st.high] = backend.cross_exchange(out[st.low], out[st.high])
        else:
            out[st.low], out[st.high] = backend.minmax_exchange(out[st.low], out[st.high])
    return out


def max_small_length(kind: ElemKind) -> int:
    return MAX_PACKS * kind.lanes


def sort_small_region(region, backend=None) -> None:
    """Sort a region of length <= 16*L in place.

    The last pack is padded with the element type's greatest value; padding
    is tracked by count, so regions that genuinely contain that value sort
    correctly (exactly region.length elements are written back).
    """
    if backend is None:
        from .lanes import get_backend

        backend = get_backend("auto", kind_of(region))
    n = len(region)
    if n < 2:
        return
    L = backend.lanes
    assert n <= MAX_PACKS * L, "region exceeds small-sort capacity"

    if backend.uses_kernels:
        from . import _kernels

        _kernels.smallsort_region(region, 0, n, backend.kind.sentinel)
        return

    sentinel = backend.kind.sentinel
    full, rem = divmod(n, L)
    packs = [backend.load_full(region, i * L) for i in range(full)]
    if rem:
        packs.append(backend.load_trunc(region, full * L, rem, sentinel))
    packs = sort_packs(backend, packs)
    for i in range(full):
        backend.store_full(region, i * L, packs[i])
    if rem:
        backend.compress_store(
            region, full * L, backend.mask_trunc(backend.mask_all(), rem), packs[-1]
        )


# -- zero-one validation -------------------------------------------------------


def schedule_comparators(schedule: NetworkSchedule) -> list[tuple[int, int]]:
    """Flatten a schedule back into (low, high) index pairs over the
    concatenated lane space, in execution order."""
    L = schedule.lanes
    pairs: list[tuple[int, int]] = []
    for st in schedule.steps:
        if type(st) is IntraStep:
            perm, dir_mask = st.step
            for p in st.packs:
                base = p * L
                for i in range(L):
                    j = perm[i]
                    if j > i:
                        assert not dir_mask[i] and dir_mask[j]
                        pairs.append((base + i, base + j))
        elif type(st) is CrossPairStep:
            for i in range(L):
                pairs.append((st.low * L + i, st.high * L + (L - 1 - i)))
        else:
            for i in range(L):
                pairs.append((st.low * L + i, st.high * L + i))
    return pairs


def binary_step_patterns(n: int):
    """All rotations of every 0^k 1^(n-k) pattern, one pattern per row."""
    import numpy as np

    base = np.zeros((n + 1, n), dtype=bool)
    for k in range(n + 1):
        base[k, k:] = True
    rows = [np.roll(base, r, axis=1) for r in range(n)]
    pats = np.unique(np.concatenate(rows, axis=0), axis=0)
    return pats


def all_binary_patterns(n: int):
    """Every 0/1 assignment of n positions, one pattern per row."""
    import numpy as np

    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(bool)


def check_zero_one(schedule: NetworkSchedule, patterns) -> list[int]:
    """Run binary patterns (a (count, packs*lanes) bool matrix) through the
    schedule's comparators; return the row indexes that fail to sort.

    Patterns are evaluated 64 at a time as bit bundles: with 0/1 values a
    comparator reduces to AND (minimum) and OR (maximum), so one machine
    word carries 64 independent network executions per lane position.
    """
    import numpy as np

    pairs = schedule_comparators(schedule)
    total = schedule.packs * schedule.lanes
    patterns = np.asarray(patterns, dtype=bool)
    assert patterns.ndim == 2 and patterns.shape[1] == total
    shifts = np.arange(64, dtype=np.uint64)
    failures: list[int] = []
    for start in range(0, len(patterns), 64):
        chunk = patterns[start:start + 64]
        packed = (chunk.astype(np.uint64).T << shifts[: len(chunk)]).sum(
            axis=1, dtype=np.uint64)
        words = [int(w) for w in packed]
        for i, j in pairs:
            lo = words[i] & words[j]
            words[j] = words[i] | words[j]
            words[i] = lo
        bad = 0
        for pos in range(total - 1):
            bad |= words[pos] & ~words[pos + 1]
        if bad:
            for t in range(len(chunk)):
                if (bad >> t) & 1:
                    failures.append(start + t)
    return failures
