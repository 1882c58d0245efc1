"""Hybrid quicksort: vectorized partitioning down to a threshold, then the
branch-free small sort.

Each round swaps the chosen pivot to the top of the subrange, partitions
everything below it, and swaps the pivot into the boundary slot, where it
is final.  Recursion follows the smaller side while the loop continues on
the larger, which bounds stack depth to O(log n) even on adversarial input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lanes import kind_of
from .partition import partition_region
from .smallsort import MAX_PACKS, sort_small_region

__all__ = ["SortConfig", "sort", "sort_with_config", "select_pivot", "qs_core"]

_PIVOT_STRATEGIES = ("median3", "middle", "random")

# 64-bit LCG (MMIX constants) driving the optional random pivot strategy.
_LCG_MUL = 6364136223846793005
_LCG_ADD = 1442695040888963407
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class SortConfig:
    """Tuning knobs for the hybrid sort.

    sort_bound is the largest subrange handed to the small sort (defaults
    to the full 16-pack capacity of the element type).  The two partition
    flags select the optional store-skipping / buffer-swapping variants.
    """

    sort_bound: int | None = None
    pivot_strategy: str = "median3"
    skip_empty_stores: bool = False
    swap_buffered: bool = False
    backend: str = "auto"
    pivot_seed: int = 0

    def __post_init__(self):
        if self.pivot_strategy not in _PIVOT_STRATEGIES:
            raise ValueError(f"unknown pivot strategy {self.pivot_strategy!r}")


def _resolve_bound(config: SortConfig, lanes: int) -> int:
    bound = config.sort_bound if config.sort_bound is not None else MAX_PACKS * lanes
    assert 1 <= bound <= MAX_PACKS * lanes, "sort_bound exceeds small-sort capacity"
    return bound


def select_pivot(region, lo: int, hi: int, strategy: str = "median3",
                 lcg_state: int | None = None) -> int:
    """Index of the pivot for the inclusive subrange [lo, hi].

    median3 returns the index holding the median of region[lo],
    region[(lo+hi)//2] and region[hi]; middle returns the midpoint index.
    """
    assert lo <= hi
    if strategy == "middle":
        return (lo + hi) // 2
    if strategy == "random":
        state = (lcg_state if lcg_state is not None else 0) & _U64
        return lo + state % (hi - lo + 1)
    mid = (lo + hi) // 2
    a, b, c = region[lo], region[mid], region[hi]
    if b <= a <= c or c <= a <= b:
        return lo
    if a <= b <= c or c <= b <= a:
        return mid
    return hi


def qs_core(region, lo: int, hi: int, config: SortConfig, backend,
            _on_pivot_final=None) -> None:
    """Sort the inclusive subrange [lo, hi] of a region."""
    bound = _resolve_bound(config, backend.lanes)
    lcg = (config.pivot_seed * _LCG_MUL + _LCG_ADD) & _U64
    _qs_core(region, lo, hi, config, backend, bound, lcg, _on_pivot_final)


def _qs_core(region, lo, hi, config, backend, bound, lcg, on_pivot_final):
    while hi - lo + 1 > bound:
        if config.pivot_strategy == "random":
            lcg = (lcg * _LCG_MUL + _LCG_ADD) & _U64
        pidx = select_pivot(region, lo, hi, config.pivot_strategy, lcg)
        region[pidx], region[hi] = region[hi], region[pidx]
        pivot = region[hi]
        # Partition everything below the pivot slot, then swap the pivot
        # into the boundary: it is in final position from here on.
        b = lo + partition_region(
            region[lo:hi], pivot, backend,
            skip_empty_stores=config.skip_empty_stores,
            swap_buffered=config.swap_buffered,
        )
        region[b], region[hi] = region[hi], region[b]
        if on_pivot_final is not None:
            on_pivot_final(b, pivot)
        # Recurse into the smaller side, iterate on the larger.
        if b - lo < hi - b:
            if lo < b - 1:
                _qs_core(region, lo, b - 1, config, backend, bound, lcg, on_pivot_final)
            lo = b + 1
        else:
            if b + 1 < hi:
                _qs_core(region, b + 1, hi, config, backend, bound, lcg, on_pivot_final)
            hi = b - 1
    if hi - lo + 1 >= 2:
        sort_small_region(region[lo:hi + 1], backend)


def sort_with_config(region, config: SortConfig) -> None:
    """Sort a region ascending in place under an explicit configuration."""
    from .lanes import get_backend

    n = len(region)
    if n < 2:
        return
    kind = kind_of(region)
    backend = get_backend(config.backend, kind)
    if backend.uses_kernels:
        from . import _kernels

        bound = _resolve_bound(config, backend.lanes)
        _kernels.quicksort(
            region, backend.lanes, bound, kind.sentinel,
            _PIVOT_STRATEGIES.index(config.pivot_strategy),
            config.skip_empty_stores, config.swap_buffered, config.pivot_seed,
        )
        return
    qs_core(region, 0, n - 1, config, backend)


def sort(region, config: SortConfig | None = None) -> None:
    """Sort a region of 32-bit integers or 64-bit floats ascending, in place.

    NaN elements are unsupported (comparisons are ordered-quiet, so NaNs do
    not totally order under the compare-exchange networks).
    """
    sort_with_config(region, config or SortConfig())
